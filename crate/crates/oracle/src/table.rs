//! Exact character tables via the Dixon-Schur algorithm.
//!
//! The class-algebra matrices are simultaneously diagonalized over a prime
//! field `F_l` with `l = 1 (mod exponent(G))` and `l > 2 sqrt(|G|)`; each
//! common eigenvector determines one irreducible character mod `l`, whose
//! exact cyclotomic values are recovered by discrete Fourier inversion of
//! the eigenvalue multiplicities of the power maps.  All results are
//! verified by exact integer orthogonality.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::ClassData;
use crate::cyclo::{CycAcc, CycContext, MultVec};
use crate::error::{OracleError, OracleResult};
use crate::group::MatrixGroup;
use crate::modular::{charpoly, kernel, matvec, roots, ModP};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTable {
    pub degrees: Vec<u64>,
    /// `rows[r][c]`: value of character `r` at class `c`, level = order of
    /// the class representative.
    pub rows: Vec<Vec<MultVec>>,
    /// Group exponent `N`.
    pub exponent: u64,
    /// The Dixon prime `l`.
    pub prime: u64,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.degrees.len()
    }

    /// Flattened canonical key of a row (for permutation lookups).
    pub fn row_key(values: &[MultVec]) -> Vec<i64> {
        let mut key = Vec::new();
        for v in values {
            key.push(i64::from(v.level));
            key.extend_from_slice(&v.coeffs);
        }
        key
    }
}

/// Least prime `l = r*N + 1` with `l > 2 sqrt(|G|)` (checked exactly as
/// `l^2 > 4 |G|`).
fn dixon_prime(order: u64, exponent: u64) -> OracleResult<u64> {
    let mut r = 1u64;
    for _ in 0..1_000_000 {
        let l = r * exponent + 1;
        if l * l > 4 * order && is_prime(l) {
            return Ok(l);
        }
        r += 1;
    }
    Err(OracleError::Tripwire(format!(
        "no suitable Dixon prime below bound for order {order}, exponent {exponent}"
    )))
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest generator of `F_l^*`.
fn primitive_root(l: u64) -> u64 {
    let f = ModP::new(l);
    let phi = l - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'g: for g in 2..l {
        for &r in &factors {
            if f.pow(g, phi / r) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("prime fields have primitive roots")
}

struct Subspace {
    /// rref basis rows.
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn to_subspace(mut vecs: Vec<Vec<u64>>, f: &ModP) -> Subspace {
    let pivots = crate::modular::rref(&mut vecs, f);
    Subspace {
        basis: vecs,
        pivots,
    }
}

/// Class-algebra matrix `B_i[j][k] = #{x in C_i : x^{-1} rep_k in C_j}`.
fn class_matrix(
    group: &MatrixGroup,
    classes: &ClassData,
    elems_by_class: &[Vec<u32>],
    i: usize,
) -> Vec<Vec<u64>> {
    let k = classes.count();
    let mut b = vec![vec![0u64; k]; k];
    for &x in &elems_by_class[i] {
        let xinv = group.mat(x).inverse(&group.field);
        for (kk, &rep) in classes.reps.iter().enumerate() {
            let y = xinv.mul(&group.mat(rep), &group.field);
            let idx = group.lookup(&y).expect("closure");
            let j = classes.class_of[idx as usize] as usize;
            b[j][kk] += 1;
        }
    }
    b
}

pub fn character_table(group: &MatrixGroup, classes: &ClassData) -> OracleResult<CharacterTable> {
    let order = group.order();
    let k = classes.count();
    let n_exp = classes.exponent;
    let l = dixon_prime(order, n_exp)?;
    let f = ModP::new(l);
    let g = primitive_root(l);
    let z = f.pow(g, (l - 1) / n_exp); // primitive N-th root mod l

    let mut elems_by_class: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (e, &c) in classes.class_of.iter().enumerate() {
        elems_by_class[c as usize].push(e as u32);
    }

    // Simultaneous diagonalization.
    let full = to_subspace(
        (0..k)
            .map(|i| {
                let mut v = vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect(),
        &f,
    );
    let mut spaces = vec![full];
    for i in 1..k {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let b = class_matrix(group, classes, &elems_by_class, i);
        let bm: Vec<Vec<u64>> = b
            .iter()
            .map(|row| row.iter().map(|&x| x % l).collect())
            .collect();
        let mut next: Vec<Subspace> = Vec::with_capacity(spaces.len());
        for sp in spaces {
            if sp.dim() == 1 {
                next.push(sp);
                continue;
            }
            next.extend(split_space(sp, &bm, &f)?);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.dim() != 1) {
        return Err(OracleError::Tripwire(
            "eigenspace not 1-dimensional after all class matrices".into(),
        ));
    }
    if spaces.len() != k {
        return Err(OracleError::Tripwire(format!(
            "found {} common eigenvectors, expected {k}",
            spaces.len()
        )));
    }

    // Normalize, recover degrees and values mod l.
    let sizes_mod: Vec<u64> = classes.sizes.iter().map(|&h| h % l).collect();
    let order_mod = order % l;
    let mut rows_mod: Vec<(u64, Vec<u64>)> = Vec::with_capacity(k);
    for sp in &spaces {
        let v = &sp.basis[0];
        if v[0] == 0 {
            return Err(OracleError::Tripwire(
                "eigenvector vanishes at the identity class".into(),
            ));
        }
        let inv0 = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, inv0)).collect();
        // d^2 = |G| / sum_j omega_j omega_{j*} / h_j
        let mut s = 0u64;
        for j in 0..k {
            let o2 = f.mul(omega[j], omega[classes.inverse_class[j] as usize]);
            s = f.add(s, f.mul(o2, f.inv(sizes_mod[j])));
        }
        let d2 = f.mul(order_mod, f.inv(s));
        let mut degree = 0u64;
        let sqrt_bound = order.isqrt() + 1;
        for d in 1..=sqrt_bound {
            if f.mul(d % l, d % l) == d2 {
                degree = d;
                break;
            }
        }
        if degree == 0 {
            return Err(OracleError::Tripwire("no degree matches d^2 mod l".into()));
        }
        let values: Vec<u64> = (0..k)
            .map(|j| f.mul(degree % l, f.mul(omega[j], f.inv(sizes_mod[j]))))
            .collect();
        rows_mod.push((degree, values));
    }

    // Lift values to exact cyclotomic multiplicity vectors.
    let mut rows: Vec<(u64, Vec<MultVec>)> = rows_mod
        .par_iter()
        .map(|(degree, values)| {
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let o = u64::from(classes.orders[c]);
                let zo = f.pow(z, n_exp / o);
                let zo_inv = f.inv(zo);
                let oinv = f.inv(o % l);
                let mut mv = MultVec::zero(o as u32);
                let mut total = 0i64;
                for (t, slot) in mv.coeffs.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    let mut w = 1u64; // zo^{-s t}
                    let step = f.pow(zo_inv, t as u64);
                    for s in 0..o {
                        let val = values[classes.power_class[c][s as usize] as usize];
                        acc = f.add(acc, f.mul(val, w));
                        w = f.mul(w, step);
                    }
                    let m = f.mul(acc, oinv);
                    *slot = m as i64;
                    total += m as i64;
                }
                debug_assert!(
                    mv.coeffs.iter().all(|&m| m >= 0 && m as u64 <= *degree),
                    "multiplicities in [0, degree]"
                );
                if total != *degree as i64 {
                    // propagated as error after the parallel section
                    return Err(OracleError::Tripwire(format!(
                        "eigenvalue multiplicities at class {c} sum to {total}, degree {degree}"
                    )));
                }
                row.push(mv);
            }
            Ok((*degree, row))
        })
        .collect::<OracleResult<Vec<_>>>()?;

    // Canonical row order: by degree, then by the value vectors.
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            CharacterTable::row_key(&a.1).cmp(&CharacterTable::row_key(&b.1))
        })
    });

    let table = CharacterTable {
        degrees: rows.iter().map(|r| r.0).collect(),
        rows: rows.into_iter().map(|r| r.1).collect(),
        exponent: n_exp,
        prime: l,
    };
    verify_table(group, classes, &table)?;
    Ok(table)
}

fn split_space(sp: Subspace, b: &[Vec<u64>], f: &ModP) -> OracleResult<Vec<Subspace>> {
    let dim = sp.dim();
    let k = sp.basis[0].len();
    // Restrict b to the subspace: columns are coordinates of b * basis_r.
    let mut a = vec![vec![0u64; dim]; dim];
    for (c, bas) in sp.basis.iter().enumerate() {
        let img = matvec(b, bas, f);
        // rref basis: coordinates are read off at the pivot columns
        for (r, &pc) in sp.pivots.iter().enumerate() {
            a[r][c] = img[pc];
        }
        // invariance check: reconstruct
        let mut recon = vec![0u64; k];
        for (r, bas2) in sp.basis.iter().enumerate() {
            for (j, &x) in bas2.iter().enumerate() {
                recon[j] = f.add(recon[j], f.mul(a[r][c], x));
            }
        }
        if recon != img {
            return Err(OracleError::Tripwire(
                "class matrix does not preserve the common eigenspace".into(),
            ));
        }
    }
    let p = charpoly(&a, f);
    let eigs = roots(&p, f);
    let mut out = Vec::new();
    for theta in eigs {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = f.sub(row[i], theta);
        }
        let ker = kernel(shifted, dim, f);
        if ker.is_empty() {
            continue;
        }
        let vecs: Vec<Vec<u64>> = ker
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; k];
                for (r, bas) in sp.basis.iter().enumerate() {
                    for (j, &x) in bas.iter().enumerate() {
                        v[j] = f.add(v[j], f.mul(coords[r], x));
                    }
                }
                v
            })
            .collect();
        out.push(to_subspace(vecs, f));
    }
    let total: usize = out.iter().map(|s| s.dim()).sum();
    if total != dim {
        return Err(OracleError::Tripwire(
            "eigenspaces do not span the subspace".into(),
        ));
    }
    Ok(out)
}

/// Exact verification: degrees positive, first column = degrees,
/// `sum d^2 = |G|`, and full row orthogonality over the cyclotomic
/// integers.
fn verify_table(
    group: &MatrixGroup,
    classes: &ClassData,
    table: &CharacterTable,
) -> OracleResult<()> {
    let order = group.order();
    let k = table.class_count();
    let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
    if sum_sq != order {
        return Err(OracleError::Verification(format!(
            "sum of squared degrees {sum_sq} != group order {order}"
        )));
    }
    for (r, row) in table.rows.iter().enumerate() {
        let d = table.degrees[r];
        let v0 = &row[0];
        if v0.coeffs[0] != d as i64 || v0.coeffs.iter().skip(1).any(|&c| c != 0) {
            return Err(OracleError::Verification(format!(
                "row {r}: value at the identity is not the degree"
            )));
        }
    }
    let n_exp = table.exponent.to_u32().ok_or_else(|| {
        OracleError::Resource("group exponent too large for cyclotomic context".into())
    })?;
    let ctx = CycContext::new(n_exp);
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i..k).map(move |j| (i, j)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let mut acc = CycAcc::zero(n_exp);
            for c in 0..k {
                acc.add_prod(
                    &table.rows[i][c],
                    &table.rows[j][c],
                    true,
                    classes.sizes[c] as i128,
                );
            }
            let expected = if i == j { order as i128 } else { 0 };
            match ctx.as_integer(&acc) {
                Ok(v) if v == expected => None,
                Ok(v) => Some(format!("<{i},{j}> = {v}/|G|, expected {expected}")),
                Err(_) => Some(format!("<{i},{j}> is not a rational integer")),
            }
        })
        .collect();
    if !failures.is_empty() {
        return Err(OracleError::Verification(format!(
            "orthogonality failed: {}",
            failures.join("; ")
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupKind, MatrixGroup};
    use slchar_core::GroupParams;

    fn table_for(n: u32, q: u64, eps: i8, kind: GroupKind) -> (CharacterTable, ClassData) {
        let p = GroupParams::new(n, q, eps).unwrap();
        let g = MatrixGroup::build(&p, kind).unwrap();
        let c = ClassData::compute(&g).unwrap();
        let t = character_table(&g, &c).unwrap();
        (t, c)
    }

    #[test]
    fn sl2_3_degrees() {
        let (t, _) = table_for(2, 3, 1, GroupKind::Special);
        assert_eq!(t.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn sl2_5_degrees() {
        let (t, _) = table_for(2, 5, 1, GroupKind::Special);
        assert_eq!(t.degrees, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn gl2_3_degrees() {
        let (t, _) = table_for(2, 3, 1, GroupKind::Full);
        assert_eq!(t.degrees, vec![1, 1, 2, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn trivial_row_is_all_ones() {
        let (t, c) = table_for(2, 3, 1, GroupKind::Special);
        let all_ones = t.rows.iter().filter(|row| {
            row.iter()
                .enumerate()
                .all(|(cls, v)| v == &MultVec::integer(c.orders[cls], 1))
        });
        assert_eq!(all_ones.count(), 1, "exactly one trivial character");
    }
}

#[cfg(test)]
mod timing_probe {
    use super::*;
    use crate::group::{GroupKind, MatrixGroup};
    use slchar_core::GroupParams;

    #[test]
    #[ignore]
    fn big_group_timing() {
        for (n, q, eps, kind) in [
            (3u32, 4u64, 1i8, GroupKind::Special),
            (3, 4, 1, GroupKind::Full),
            (4, 2, -1, GroupKind::Special),
            (3, 3, -1, GroupKind::Full),
        ] {
            let p = GroupParams::new(n, q, eps).unwrap();
            let t0 = std::time::Instant::now();
            let g = MatrixGroup::build(&p, kind).unwrap();
            let t1 = std::time::Instant::now();
            let c = ClassData::compute(&g).unwrap();
            let t2 = std::time::Instant::now();
            let t = character_table(&g, &c).unwrap();
            let t3 = std::time::Instant::now();
            eprintln!(
                "{:?} {} order={} classes={} exponent={} prime={}: build {:?}, classes {:?}, table {:?}",
                kind, p.gl_name(), g.order(), c.count(), c.exponent, t.prime,
                t1 - t0, t2 - t1, t3 - t2
            );
        }
    }
}
