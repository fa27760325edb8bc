//! Dense linear algebra over a prime field `F_l`, `l < 2^31`.

#[derive(Debug, Clone, Copy)]
pub struct ModP {
    pub l: u64,
}

impl ModP {
    pub fn new(l: u64) -> ModP {
        ModP { l }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.l as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.l;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.l));
        self.pow(a, self.l - 2)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.l - a
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<u64>>, f: &ModP) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| m[i][c] != 0);
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, pivot);
        let inv = f.inv(m[r][c]);
        for j in c..cols {
            m[r][j] = f.mul(m[r][j], inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in c..cols {
                    let s = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Basis of the kernel of `m` (as row vectors of length `cols`).
pub fn kernel(mut m: Vec<Vec<u64>>, cols: usize, f: &ModP) -> Vec<Vec<u64>> {
    let pivots = rref(&mut m, f);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            // row r: x_pc + sum coeff * x_free = 0
            v[pc] = f.neg(m[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial via Hessenberg reduction, little-endian
/// coefficients, monic of degree `k`.
pub fn charpoly(a: &[Vec<u64>], f: &ModP) -> Vec<u64> {
    let k = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    // Reduce to upper Hessenberg by similarity transforms.
    for c in 0..k.saturating_sub(2) {
        // find pivot in column c below row c+1
        let pivot = (c + 1..k).find(|&r| h[r][c] != 0);
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        if pivot != c + 1 {
            h.swap(pivot, c + 1);
            for row in h.iter_mut() {
                row.swap(pivot, c + 1);
            }
        }
        let inv = f.inv(h[c + 1][c]);
        for r in c + 2..k {
            let factor = f.mul(h[r][c], inv);
            if factor == 0 {
                continue;
            }
            // row_r -= factor * row_{c+1}
            for j in 0..k {
                let s = f.mul(factor, h[c + 1][j]);
                h[r][j] = f.sub(h[r][j], s);
            }
            // col_{c+1} += factor * col_r (inverse transform)
            for i in 0..k {
                let s = f.mul(factor, h[i][r]);
                h[i][c + 1] = f.add(h[i][c + 1], s);
            }
        }
    }
    // charpoly of Hessenberg by the standard recurrence:
    // p_0 = 1; p_m = (x - h[m-1][m-1]) p_{m-1}
    //              - sum_{i=1..m-1} h[m-1-i][m-1] (prod beta) p_{m-1-i}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=k {
        let mut pm = poly_shift_mul(&polys[m - 1], h[m - 1][m - 1], f);
        let mut beta = 1u64;
        for i in 1..m {
            beta = f.mul(beta, h[m - i][m - i - 1]);
            if beta == 0 {
                break;
            }
            let coeff = f.mul(beta, h[m - 1 - i][m - 1]);
            if coeff == 0 {
                continue;
            }
            for (j, &c) in polys[m - 1 - i].iter().enumerate() {
                let s = f.mul(coeff, c);
                if pm.len() <= j {
                    pm.resize(j + 1, 0);
                }
                pm[j] = f.sub(pm[j], s);
            }
        }
        polys.push(pm);
    }
    let mut p = polys.pop().unwrap();
    p.resize(k + 1, 0);
    p
}

/// `(x - a) * p`.
fn poly_shift_mul(p: &[u64], a: u64, f: &ModP) -> Vec<u64> {
    let mut out = vec![0u64; p.len() + 1];
    for (j, &c) in p.iter().enumerate() {
        out[j + 1] = f.add(out[j + 1], c);
        out[j] = f.sub(out[j], f.mul(a, c));
    }
    out
}

/// All roots of `p` in `F_l`, by scanning (l is small).
pub fn roots(p: &[u64], f: &ModP) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 0..f.l {
        let mut acc = 0u64;
        for &c in p.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        if acc == 0 {
            out.push(x);
        }
    }
    out
}

/// Matrix-vector product.
pub fn matvec(a: &[Vec<u64>], v: &[u64], f: &ModP) -> Vec<u64> {
    a.iter()
        .map(|row| {
            let mut acc = 0u64;
            for (x, &y) in row.iter().zip(v.iter()) {
                acc = f.add(acc, f.mul(*x, y));
            }
            acc
        })
        .collect()
}
