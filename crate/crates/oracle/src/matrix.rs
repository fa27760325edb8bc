//! Dense square matrices over a [`FieldTable`], with compact `u128`
//! encodings used as hash keys for group element storage.

use crate::field::FieldTable;

pub const MAX_N: usize = 6;

/// A fixed-capacity `n x n` matrix of field element ids (row major).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat {
    pub n: u8,
    a: [u32; MAX_N * MAX_N],
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        debug_assert!(n <= MAX_N);
        Mat {
            n: n as u8,
            a: [0; MAX_N * MAX_N],
        }
    }

    pub fn identity(n: usize, f: &FieldTable) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.a[i * self.n as usize + j] = v;
    }

    pub fn mul(&self, other: &Mat, f: &FieldTable) -> Mat {
        let n = self.n as usize;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    let x = f.mul(self.get(i, k), other.get(k, j));
                    acc = f.add(acc, x);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n as usize;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Apply `x -> x^{p^k}` entrywise.
    pub fn frob(&self, f: &FieldTable, k: u32) -> Mat {
        let n = self.n as usize;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.frob(self.get(i, j), k));
            }
        }
        out
    }

    /// Apply `x -> x^s` entrywise for an arbitrary power map (used for the
    /// conjugation `x -> x^q` of a quadratic extension).
    pub fn entry_pow(&self, f: &FieldTable, s: u64) -> Mat {
        let n = self.n as usize;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.pow(self.get(i, j), s));
            }
        }
        out
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, f: &FieldTable) -> u32 {
        let n = self.n as usize;
        let mut m = *self;
        let mut det = f.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| m.get(r, col) != 0);
            let pivot = match pivot {
                Some(p) => p,
                None => return 0,
            };
            if pivot != col {
                for j in 0..n {
                    let t = m.get(col, j);
                    m.set(col, j, m.get(pivot, j));
                    m.set(pivot, j, t);
                }
                det = f.neg(det);
            }
            let pv = m.get(col, col);
            det = f.mul(det, pv);
            let pvi = f.inv(pv);
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), pvi);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f.mul(factor, m.get(col, j));
                    m.set(r, j, f.sub(m.get(r, j), sub));
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan; panics on singular input (group elements
    /// are always invertible).
    pub fn inverse(&self, f: &FieldTable) -> Mat {
        let n = self.n as usize;
        let mut m = *self;
        let mut inv = Mat::identity(n, f);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| m.get(r, col) != 0)
                .expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    let t = m.get(col, j);
                    m.set(col, j, m.get(pivot, j));
                    m.set(pivot, j, t);
                    let t = inv.get(col, j);
                    inv.set(col, j, inv.get(pivot, j));
                    inv.set(pivot, j, t);
                }
            }
            let pvi = f.inv(m.get(col, col));
            for j in 0..n {
                m.set(col, j, f.mul(m.get(col, j), pvi));
                inv.set(col, j, f.mul(inv.get(col, j), pvi));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let s = f.mul(factor, m.get(col, j));
                    m.set(r, j, f.sub(m.get(r, j), s));
                    let s = f.mul(factor, inv.get(col, j));
                    inv.set(r, j, f.sub(inv.get(r, j), s));
                }
            }
        }
        inv
    }

    pub fn encode(&self, bits: u32) -> u128 {
        let n = self.n as usize;
        let mut key = 0u128;
        for i in 0..n {
            for j in 0..n {
                key = (key << bits) | u128::from(self.get(i, j));
            }
        }
        key
    }

    pub fn decode(key: u128, n: usize, bits: u32) -> Mat {
        let mut m = Mat::zero(n);
        let mask = (1u128 << bits) - 1;
        let mut k = key;
        for i in (0..n).rev() {
            for j in (0..n).rev() {
                m.set(i, j, (k & mask) as u32);
                k >>= bits;
            }
        }
        m
    }

    /// Rank of `self - 1`, used to read off Jordan types of unipotent
    /// elements.
    pub fn rank_minus_one(&self, f: &FieldTable) -> usize {
        let n = self.n as usize;
        let mut m = *self;
        for i in 0..n {
            m.set(i, i, f.sub(m.get(i, i), f.one()));
        }
        m.rank(f)
    }

    pub fn rank(&self, f: &FieldTable) -> usize {
        let n = self.n as usize;
        let mut m = *self;
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..n {
            let pivot = (row..n).find(|&r| m.get(r, col) != 0);
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            if pivot != row {
                for j in 0..n {
                    let t = m.get(row, j);
                    m.set(row, j, m.get(pivot, j));
                    m.set(pivot, j, t);
                }
            }
            let pvi = f.inv(m.get(row, col));
            for r in row + 1..n {
                let factor = f.mul(m.get(r, col), pvi);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let s = f.mul(factor, m.get(row, j));
                    m.set(r, j, f.sub(m.get(r, j), s));
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }
}
