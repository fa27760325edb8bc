//! Labels for the irreducible characters of `GL_n^eps(q)`.
//!
//! A character label is a pair `(s~, lambda)`: a semisimple class label
//! (multiset of Frobenius orbits of eigenvalues, with multiplicities summing
//! to `n` in weighted degree) and a multipartition assigning a partition of
//! the multiplicity to each orbit.  The centralizer of `s~` is a product of
//! smaller general linear/unitary groups over extension fields, one factor
//! per orbit; unipotent characters of such a product are exactly the
//! multipartitions, and the exact character degree comes from the q-analogue
//! hook formula combined with the prime-to-p part of the centralizer index.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::params::GroupParams;
use crate::partition::{partitions_of, Partition};
use crate::torsion::{orbits_of_degree_dividing, FrobeniusOrbit, TorsionPoint};

/// Enumeration guard on the rank.
pub const N_LIMIT: u32 = 12;

/// Interned table of all Frobenius orbits of degree at most `dmax`, plus
/// the precomputed translation-by-`1/(q-eps)` permutation.  Labels refer to
/// orbits by index into this table, which keeps multiset comparisons cheap.
pub struct OrbitTable {
    pub params: GroupParams,
    pub dmax: u32,
    orbits: Vec<FrobeniusOrbit>,
    rep_index: HashMap<TorsionPoint, u32>,
    orbit_sums: Vec<TorsionPoint>,
    translate1: Vec<u32>,
}

impl OrbitTable {
    /// Build the table for ranks up to `dmax` (usually `params.n`).
    pub fn new(params: &GroupParams, dmax: u32) -> CoreResult<Self> {
        let orbits = orbits_of_degree_dividing(dmax, params)?;
        let mut rep_index = HashMap::new();
        for (i, o) in orbits.iter().enumerate() {
            for p in o.points() {
                rep_index.insert(p.clone(), i as u32);
            }
        }
        let orbit_sums = orbits.iter().map(|o| o.point_sum()).collect();
        let tgen = TorsionPoint::new(&BigInt::one(), &BigUint::from(params.q_minus_eps()))
            .expect("q - eps > 0");
        let mut translate1 = Vec::with_capacity(orbits.len());
        for o in &orbits {
            let moved = o.translate(&tgen);
            let id = rep_index.get(moved.rep()).copied().ok_or_else(|| {
                CoreError::Tripwire(format!(
                    "translate of orbit {o} left the table (missing {})",
                    moved.rep()
                ))
            })?;
            translate1.push(id);
        }
        Ok(OrbitTable {
            params: *params,
            dmax,
            orbits,
            rep_index,
            orbit_sums,
            translate1,
        })
    }

    /// Standard table for the group parameters: `dmax = n`.
    pub fn for_group(params: &GroupParams) -> CoreResult<Self> {
        if params.n > N_LIMIT {
            return Err(CoreError::ResourceGuard(format!(
                "n = {} exceeds the enumeration limit {N_LIMIT}",
                params.n
            )));
        }
        Self::new(params, params.n)
    }

    pub fn orbits(&self) -> &[FrobeniusOrbit] {
        &self.orbits
    }

    pub fn orbit(&self, id: u32) -> &FrobeniusOrbit {
        &self.orbits[id as usize]
    }

    pub fn degree(&self, id: u32) -> u32 {
        self.orbits[id as usize].degree()
    }

    pub fn orbit_sum(&self, id: u32) -> &TorsionPoint {
        &self.orbit_sums[id as usize]
    }

    /// Orbit id after translating by `1/(q-eps)`.
    pub fn translate1(&self, id: u32) -> u32 {
        self.translate1[id as usize]
    }

    /// Orbit id of the orbit containing `t`, if it is in the table.
    pub fn lookup(&self, t: &TorsionPoint) -> Option<u32> {
        self.rep_index.get(t).copied()
    }

    /// Permutation of orbit ids induced by point-wise multiplication with
    /// the integer `m` (coprime to all denominators).
    pub fn scale_perm(&self, m: &BigInt) -> CoreResult<Vec<u32>> {
        let mut perm = Vec::with_capacity(self.orbits.len());
        for o in &self.orbits {
            let moved = o.scale(m);
            let id = self.rep_index.get(moved.rep()).copied().ok_or_else(|| {
                CoreError::Tripwire(format!("scaled orbit {moved} missing from table"))
            })?;
            perm.push(id);
        }
        Ok(perm)
    }

    /// Permutation induced by multiplying points with the inverse of `m`.
    pub fn scale_inv_perm(&self, m: &BigInt) -> CoreResult<Vec<u32>> {
        let fwd = self.scale_perm(m)?;
        let mut inv = vec![0u32; fwd.len()];
        for (i, &j) in fwd.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Ok(inv)
    }
}

/// Semisimple class label: orbit multiplicities `m_O >= 1` with
/// `sum m_O * deg(O) = n`, keyed by orbit id in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemisimpleClassLabel {
    pub pairs: Vec<(u32, u32)>,
}

impl SemisimpleClassLabel {
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        SemisimpleClassLabel { pairs }
    }

    pub fn weighted_degree(&self, table: &OrbitTable) -> u32 {
        self.pairs
            .iter()
            .map(|&(o, m)| table.degree(o) * m)
            .sum()
    }

    /// Translate all eigenvalues by `k/(q-eps)`.
    pub fn translate(&self, table: &OrbitTable, k: u32) -> SemisimpleClassLabel {
        let mut pairs = self.pairs.clone();
        for _ in 0..k {
            for p in pairs.iter_mut() {
                p.0 = table.translate1(p.0);
            }
        }
        pairs.sort_unstable();
        SemisimpleClassLabel { pairs }
    }

    /// Sum of the eigenvalues (with multiplicity) mod 1.
    pub fn eigenvalue_sum(&self, table: &OrbitTable) -> TorsionPoint {
        let mut s = TorsionPoint::zero();
        for &(o, m) in &self.pairs {
            let os = table.orbit_sum(o);
            for _ in 0..m {
                s = s.add(os);
            }
        }
        s
    }
}

/// One centralizer factor `GL^{sign}_{mult}(q^{deg})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerFactor {
    pub deg: u32,
    pub mult: u32,
    pub sign: i8,
}

/// The rational centralizer of a semisimple label: one general
/// linear/unitary factor per orbit, of type `eps^deg` over `q^deg`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerShape {
    pub factors: Vec<CentralizerFactor>,
}

impl CentralizerShape {
    pub fn order(&self, params: &GroupParams) -> BigInt {
        let mut ord = BigInt::one();
        for f in &self.factors {
            let sub = GroupParams {
                n: f.mult,
                p: params.p,
                e: params.e * f.deg,
                q: params.q.pow(f.deg),
                epsilon: f.sign,
            };
            ord *= sub.gl_order();
        }
        ord
    }
}

/// Full character label `(s~, lambda)`; `lambda[i]` is a partition of
/// `pairs[i].1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlCharLabel {
    pub s: SemisimpleClassLabel,
    pub lambda: Vec<Partition>,
}

impl GlCharLabel {
    /// Translate the whole label by `1/(q-eps)`: eigenvalues move, the
    /// partitions follow their orbits.
    pub fn translate1(&self, table: &OrbitTable) -> GlCharLabel {
        let mut entries: Vec<((u32, u32), Partition)> = self
            .s
            .pairs
            .iter()
            .zip(self.lambda.iter())
            .map(|(&(o, m), l)| ((table.translate1(o), m), l.clone()))
            .collect();
        entries.sort_by_key(|a| a.0);
        GlCharLabel {
            s: SemisimpleClassLabel {
                pairs: entries.iter().map(|e| e.0).collect(),
            },
            lambda: entries.into_iter().map(|e| e.1).collect(),
        }
    }

    /// Apply an orbit permutation (e.g. from [`OrbitTable::scale_perm`]).
    pub fn permute_orbits(&self, perm: &[u32]) -> GlCharLabel {
        let mut entries: Vec<((u32, u32), Partition)> = self
            .s
            .pairs
            .iter()
            .zip(self.lambda.iter())
            .map(|(&(o, m), l)| ((perm[o as usize], m), l.clone()))
            .collect();
        entries.sort_by_key(|a| a.0);
        GlCharLabel {
            s: SemisimpleClassLabel {
                pairs: entries.iter().map(|e| e.0).collect(),
            },
            lambda: entries.into_iter().map(|e| e.1).collect(),
        }
    }

    /// Conjugate every partition (the label-level Alvis-Curtis flip).
    pub fn dual(&self) -> GlCharLabel {
        GlCharLabel {
            s: self.s.clone(),
            lambda: self.lambda.iter().map(|l| l.conjugate()).collect(),
        }
    }
}

/// Centralizer shape of a semisimple label: factor `GL^{eps^d}_m(q^d)` for
/// an orbit of degree `d` and multiplicity `m`.
pub fn centralizer_shape(s: &SemisimpleClassLabel, table: &OrbitTable) -> CentralizerShape {
    let eps = table.params.epsilon;
    CentralizerShape {
        factors: s
            .pairs
            .iter()
            .map(|&(o, m)| {
                let d = table.degree(o);
                CentralizerFactor {
                    deg: d,
                    mult: m,
                    sign: if d.is_multiple_of(2) { 1 } else { eps },
                }
            })
            .collect(),
    }
}

/// Degree of the unipotent character of `GL^{sign}_m(Q)` labelled by a
/// partition of `m`: the q-analogue hook formula evaluated at `sign * Q`,
/// in absolute value.  `(m)` is the trivial character, `(1^m)` Steinberg.
pub fn unipotent_degree(lambda: &Partition, q_big: &BigInt, sign: i8) -> BigInt {
    let x = if sign >= 0 {
        q_big.clone()
    } else {
        -q_big.clone()
    };
    let m = lambda.weight();
    let mut num = pow_big(&x, lambda.n_stat());
    for i in 1..=m {
        num *= x.pow(i) - BigInt::one();
    }
    let mut den = BigInt::one();
    for h in lambda.hooks() {
        den *= x.pow(h) - BigInt::one();
    }
    if den.is_zero() {
        // Only for the empty partition, where num is 1 and there are no
        // hooks: den stays 1; this branch is unreachable.
        return BigInt::one();
    }
    let (val, rem) = num_integer::div_rem(num, den);
    debug_assert!(rem.is_zero(), "hook formula must divide exactly");
    val.abs()
}

fn pow_big(x: &BigInt, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Exact degree of the character labelled `(s~, lambda)`: the prime-to-p
/// part of `|GL_n^eps(q)| / |C(s~)|` times the product of the factor
/// unipotent degrees.
pub fn gl_char_degree(label: &GlCharLabel, table: &OrbitTable) -> BigInt {
    let params = &table.params;
    let q = BigInt::from(params.q);
    // prime-to-p part of the ambient order: prod (q^i - eps^i)
    let mut num = BigInt::one();
    for i in 1..=params.n {
        num *= &q.pow(i) - BigInt::from(sign_pow(params.epsilon, i));
    }
    let mut den = BigInt::one();
    let mut unip = BigInt::one();
    for (&(o, m), lam) in label.s.pairs.iter().zip(label.lambda.iter()) {
        let d = table.degree(o);
        let qd = q.pow(d);
        let s = sign_pow(params.epsilon, d);
        for i in 1..=m {
            den *= qd.pow(i) - BigInt::from(sign_pow(s, i));
        }
        unip *= unipotent_degree(lam, &qd, s);
    }
    let (index, rem) = num_integer::div_rem(num, den);
    debug_assert!(rem.is_zero(), "centralizer index must divide exactly");
    index.abs() * unip
}

fn sign_pow(eps: i8, i: u32) -> i8 {
    if eps == 1 || i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Wave front partition: part-wise sum over orbits of `d_O * conjugate(lambda_O)`.
pub fn wave_front(label: &GlCharLabel, table: &OrbitTable) -> Partition {
    let mut acc = Partition::empty();
    for (&(o, _), lam) in label.s.pairs.iter().zip(label.lambda.iter()) {
        acc = acc.partwise_sum(&lam.conjugate().scale(table.degree(o)));
    }
    acc
}

/// Unipotent support partition: part-wise sum of `d_O * lambda_O`; equals
/// the wave front of the conjugated label.
pub fn unipotent_support(label: &GlCharLabel, table: &OrbitTable) -> Partition {
    let mut acc = Partition::empty();
    for (&(o, _), lam) in label.s.pairs.iter().zip(label.lambda.iter()) {
        acc = acc.partwise_sum(&lam.scale(table.degree(o)));
    }
    acc
}

/// Sum of the eigenvalues mod 1; the denominator always divides `q - eps`,
/// and constituents of the restriction share this value on the centre.
pub fn central_character_exponent(
    label: &GlCharLabel,
    table: &OrbitTable,
) -> CoreResult<TorsionPoint> {
    let s = label.s.eigenvalue_sum(table);
    let qm = BigUint::from(table.params.q_minus_eps());
    if (&qm % s.den()) != BigUint::zero() {
        return Err(CoreError::Tripwire(format!(
            "central character denominator {} does not divide q - eps = {qm}",
            s.den()
        )));
    }
    Ok(s)
}

/// Visit every semisimple class label of `GL_n^eps(q)` in a fixed order.
pub fn for_each_semisimple<F: FnMut(&SemisimpleClassLabel)>(
    table: &OrbitTable,
    mut f: F,
) -> CoreResult<()> {
    let n = table.params.n;
    if n > N_LIMIT {
        return Err(CoreError::ResourceGuard(format!(
            "n = {n} exceeds the enumeration limit {N_LIMIT}"
        )));
    }
    // Orbit ids grouped by degree.
    let mut by_degree: Vec<Vec<u32>> = vec![Vec::new(); (n + 1) as usize];
    for (i, o) in table.orbits().iter().enumerate() {
        let d = o.degree();
        if d <= n {
            by_degree[d as usize].push(i as u32);
        }
    }
    let mut chosen: Vec<(u32, u32)> = Vec::new();
    recurse_degrees(table, &by_degree, 1, n, &mut chosen, &mut f);
    Ok(())
}

fn recurse_degrees<F: FnMut(&SemisimpleClassLabel)>(
    table: &OrbitTable,
    by_degree: &[Vec<u32>],
    deg: u32,
    remaining: u32,
    chosen: &mut Vec<(u32, u32)>,
    f: &mut F,
) {
    let n = table.params.n;
    if remaining == 0 {
        f(&SemisimpleClassLabel::new(chosen.clone()));
        return;
    }
    if deg > n || deg as usize >= by_degree.len() {
        return;
    }
    // Total weight w = deg * k contributed by degree-`deg` orbits.
    let max_k = remaining / deg;
    for k in 0..=max_k {
        if k == 0 {
            recurse_degrees(table, by_degree, deg + 1, remaining, chosen, f);
            continue;
        }
        // Choose a multiset of size k from by_degree[deg].
        let ids = &by_degree[deg as usize];
        choose_multiset(table, by_degree, deg, remaining - deg * k, ids, 0, k, chosen, f);
    }
}

#[allow(clippy::too_many_arguments)]
fn choose_multiset<F: FnMut(&SemisimpleClassLabel)>(
    table: &OrbitTable,
    by_degree: &[Vec<u32>],
    deg: u32,
    rest_after: u32,
    ids: &[u32],
    start: usize,
    k: u32,
    chosen: &mut Vec<(u32, u32)>,
    f: &mut F,
) {
    if k == 0 {
        recurse_degrees(table, by_degree, deg + 1, rest_after, chosen, f);
        return;
    }
    if start >= ids.len() {
        return;
    }
    for idx in start..ids.len() {
        for mult in 1..=k {
            chosen.push((ids[idx], mult));
            choose_multiset(
                table,
                by_degree,
                deg,
                rest_after,
                ids,
                idx + 1,
                k - mult,
                chosen,
                f,
            );
            chosen.pop();
        }
    }
}

/// Visit every `(s~, lambda)` label in a fixed order.
pub fn for_each_gl_label<F: FnMut(&GlCharLabel)>(table: &OrbitTable, mut f: F) -> CoreResult<()> {
    for_each_semisimple(table, |s| {
        let part_lists: Vec<Vec<Partition>> = s
            .pairs
            .iter()
            .map(|&(_, m)| partitions_of(m))
            .collect();
        let mut lambda: Vec<Partition> = Vec::with_capacity(part_lists.len());
        cartesian(&part_lists, 0, &mut lambda, &mut |lam: &Vec<Partition>| {
            f(&GlCharLabel {
                s: s.clone(),
                lambda: lam.clone(),
            });
        });
    })
}

fn cartesian<F: FnMut(&Vec<Partition>)>(
    lists: &[Vec<Partition>],
    i: usize,
    cur: &mut Vec<Partition>,
    f: &mut F,
) {
    if i == lists.len() {
        f(cur);
        return;
    }
    for item in &lists[i] {
        cur.push(item.clone());
        cartesian(lists, i + 1, cur, f);
        cur.pop();
    }
}

/// Collect all semisimple labels.
pub fn enumerate_semisimple(table: &OrbitTable) -> CoreResult<Vec<SemisimpleClassLabel>> {
    let mut out = Vec::new();
    for_each_semisimple(table, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Collect all `(s~, lambda)` labels.
pub fn enumerate_gl_chars(table: &OrbitTable) -> CoreResult<Vec<GlCharLabel>> {
    let mut out = Vec::new();
    for_each_gl_label(table, |l| out.push(l.clone()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn table(n: u32, q: u64, eps: i8) -> OrbitTable {
        let p = GroupParams::new(n, q, eps).unwrap();
        OrbitTable::for_group(&p).unwrap()
    }

    #[test]
    fn semisimple_counts() {
        // GL_2(3): {0:2}, {1/2:2}, {0,1/2}, and one per degree-2 orbit.
        let t = table(2, 3, 1);
        let ss = enumerate_semisimple(&t).unwrap();
        assert_eq!(ss.len(), 6);
        for s in &ss {
            assert_eq!(s.weighted_degree(&t), 2);
        }
        // GL_1(q): q - eps labels.
        for (q, eps, want) in [(5u64, 1i8, 4usize), (7, 1, 6), (2, -1, 3), (3, -1, 4)] {
            let t = table(1, q, eps);
            assert_eq!(enumerate_semisimple(&t).unwrap().len(), want);
        }
        // GU_3(2): hand count 12 (10 multisets over mu_3 plus two Singer orbits).
        let t = table(3, 2, -1);
        assert_eq!(enumerate_semisimple(&t).unwrap().len(), 12);
    }

    #[test]
    fn gl_label_counts() {
        let t = table(2, 3, 1);
        assert_eq!(enumerate_gl_chars(&t).unwrap().len(), 8);
        let t = table(3, 2, 1);
        assert_eq!(enumerate_gl_chars(&t).unwrap().len(), 6);
        let t = table(3, 2, -1);
        assert_eq!(enumerate_gl_chars(&t).unwrap().len(), 24);
    }

    #[test]
    fn centralizer_shapes() {
        let t = table(2, 3, 1);
        // Central label {0:2} -> GL_2(3) itself.
        let s = enumerate_semisimple(&t)
            .unwrap()
            .into_iter()
            .find(|s| s.pairs.len() == 1 && s.pairs[0].1 == 2 && t.degree(s.pairs[0].0) == 1)
            .unwrap();
        let shape = centralizer_shape(&s, &t);
        assert_eq!(shape.order(&t.params), BigInt::from(48));

        // A degree-2 orbit -> torus GL_1(9) of order 8.
        let s = enumerate_semisimple(&t)
            .unwrap()
            .into_iter()
            .find(|s| s.pairs.len() == 1 && t.degree(s.pairs[0].0) == 2)
            .unwrap();
        let shape = centralizer_shape(&s, &t);
        assert_eq!(shape.order(&t.params), BigInt::from(8));

        // GU_3(2), three degree-1 orbits -> GU_1(2)^3 of order 27.
        let t = table(3, 2, -1);
        let s = enumerate_semisimple(&t)
            .unwrap()
            .into_iter()
            .find(|s| s.pairs.len() == 3)
            .unwrap();
        let shape = centralizer_shape(&s, &t);
        assert!(shape.factors.iter().all(|f| f.sign == -1 && f.deg == 1));
        assert_eq!(shape.order(&t.params), BigInt::from(27));
    }

    #[test]
    fn unipotent_degrees() {
        let q2 = BigInt::from(2);
        assert_eq!(unipotent_degree(&Partition::row(5), &q2, 1), BigInt::one());
        assert_eq!(
            unipotent_degree(&Partition::column(4), &q2, 1),
            BigInt::from(64) // 2^{4*3/2}
        );
        assert_eq!(
            unipotent_degree(&Partition::new(vec![2, 1]).unwrap(), &q2, 1),
            BigInt::from(6)
        );
        // Ennola: evaluate at -Q, take absolute value; always integral.
        for m in 1..=8u32 {
            for lam in partitions_of(m) {
                for q in [2u64, 3, 4, 5, 7, 8, 9] {
                    let d = unipotent_degree(&lam, &BigInt::from(q), -1);
                    assert!(d > BigInt::zero(), "lambda={lam}, q={q}");
                }
            }
        }
    }

    fn degree_of(t: &OrbitTable, label: &GlCharLabel) -> BigInt {
        gl_char_degree(label, t)
    }

    #[test]
    fn char_degree_examples() {
        let t = table(2, 3, 1);
        let labels = enumerate_gl_chars(&t).unwrap();
        // Split regular label {0:1, 1/2:1} with lambda ((1),(1)): degree q+1 = 4.
        let split = labels
            .iter()
            .find(|l| l.s.pairs.len() == 2)
            .unwrap();
        assert_eq!(degree_of(&t, split), BigInt::from(4));
        // Steinberg: {0:2} with (1,1): degree q = 3.
        let st = labels
            .iter()
            .find(|l| {
                l.s.pairs.len() == 1
                    && l.s.pairs[0].1 == 2
                    && t.orbit(l.s.pairs[0].0).rep().is_zero()
                    && l.lambda[0] == Partition::column(2)
            })
            .unwrap();
        assert_eq!(degree_of(&t, st), BigInt::from(3));

        // GL_3(4), s = {0, 1/3, 2/3}, all-(1): degree (q+1)(q^2+q+1) = 105.
        let t = table(3, 4, 1);
        let labels = enumerate_gl_chars(&t).unwrap();
        let l = labels
            .iter()
            .find(|l| {
                l.s.pairs.len() == 3
                    && l.s.pairs.iter().all(|&(o, m)| {
                        m == 1 && t.degree(o) == 1 && {
                            let r = t.orbit(o).rep();
                            r.is_zero() || r.den() == &BigUint::from(3u32)
                        }
                    })
            })
            .unwrap();
        assert_eq!(degree_of(&t, l), BigInt::from(105));
    }

    #[test]
    fn sum_of_squares_is_group_order() {
        for (n, q, eps) in [
            (2u32, 3u64, 1i8),
            (2, 5, 1),
            (3, 2, 1),
            (3, 2, -1),
            (3, 3, -1),
            (2, 4, -1),
            (4, 2, -1),
            (3, 4, 1),
        ] {
            let t = table(n, q, eps);
            let mut sum = BigInt::zero();
            let mut count = 0usize;
            for_each_gl_label(&t, |l| {
                let d = gl_char_degree(l, &t);
                sum += &d * &d;
                count += 1;
            })
            .unwrap();
            assert_eq!(
                sum,
                t.params.gl_order(),
                "sum of squares for GL_{n}^{eps}({q}), {count} labels"
            );
        }
    }

    #[test]
    fn wave_front_examples() {
        let t = table(4, 3, 1);
        let zero_orbit = t.lookup(&TorsionPoint::zero()).unwrap();
        // Trivial character: lambda = (n) -> wave front (1^n).
        let triv = GlCharLabel {
            s: SemisimpleClassLabel::new(vec![(zero_orbit, 4)]),
            lambda: vec![Partition::row(4)],
        };
        assert_eq!(wave_front(&triv, &t), Partition::column(4));
        assert_eq!(unipotent_support(&triv, &t), Partition::row(4));
        // Steinberg: lambda = (1^n) -> wave front (n).
        let st = GlCharLabel {
            s: SemisimpleClassLabel::new(vec![(zero_orbit, 4)]),
            lambda: vec![Partition::column(4)],
        };
        assert_eq!(wave_front(&st, &t), Partition::row(4));
        assert_eq!(unipotent_support(&st, &t), Partition::column(4));

        // Degree-2 cuspidal of GL_2(3): 2 * (1)' = (2).
        let t = table(2, 3, 1);
        let labels = enumerate_gl_chars(&t).unwrap();
        let cusp = labels
            .iter()
            .find(|l| l.s.pairs.len() == 1 && t.degree(l.s.pairs[0].0) == 2)
            .unwrap();
        assert_eq!(wave_front(cusp, &t), Partition::row(2));
    }

    #[test]
    fn wave_front_weight_and_duality() {
        for (n, q, eps) in [(3u32, 2u64, 1i8), (3, 2, -1), (4, 3, 1), (2, 5, 1)] {
            let t = table(n, q, eps);
            for_each_gl_label(&t, |l| {
                let wf = wave_front(l, &t);
                let us = unipotent_support(l, &t);
                assert_eq!(wf.weight(), n, "weight of wave front");
                assert_eq!(us.weight(), n, "weight of support");
                assert_eq!(wave_front(&l.dual(), &t), us, "duality flip");
            })
            .unwrap();
        }
    }

    #[test]
    fn central_character_examples() {
        let t = table(2, 3, 1);
        let labels = enumerate_gl_chars(&t).unwrap();
        for l in &labels {
            let c = central_character_exponent(l, &t).unwrap();
            if l.s.pairs.len() == 2 {
                // {0:1, 1/2:1} -> 1/2
                assert_eq!(c, TorsionPoint::from_u64(1, 2));
            }
            if l.s.pairs.len() == 1 && t.degree(l.s.pairs[0].0) == 2 {
                // {1/8,3/8} -> 1/2 and {1/4,3/4} -> 0, {5/8,7/8} -> 1/2
                let den = t.orbit(l.s.pairs[0].0).rep().den().to_u64().unwrap();
                if den == 8 {
                    assert_eq!(c, TorsionPoint::from_u64(1, 2));
                } else {
                    assert_eq!(c, TorsionPoint::zero());
                }
            }
        }
    }

    #[test]
    fn translation_by_full_cycle_is_identity() {
        let t = table(2, 3, 1);
        let labels = enumerate_gl_chars(&t).unwrap();
        let qm = t.params.q_minus_eps() as u32;
        for l in &labels {
            let mut cur = l.clone();
            for _ in 0..qm {
                cur = cur.translate1(&t);
            }
            assert_eq!(&cur, l);
        }
    }
}

#[cfg(test)]
mod regular_label_tests {
    use super::*;

    #[test]
    fn regular_labels_have_regular_wave_front() {
        // all lambda_O = (1^{m_O}) gives wave front (n); the support is the
        // part-wise sum of the scaled columns.
        for (n, q, eps) in [(4u32, 3u64, 1i8), (3, 2, -1), (5, 2, 1)] {
            let p = GroupParams::new(n, q, eps).unwrap();
            let t = OrbitTable::for_group(&p).unwrap();
            for_each_semisimple(&t, |s| {
                let label = GlCharLabel {
                    s: s.clone(),
                    lambda: s.pairs.iter().map(|&(_, m)| Partition::column(m)).collect(),
                };
                assert_eq!(wave_front(&label, &t), Partition::row(n));
                let mut support = Partition::empty();
                for &(o, m) in &s.pairs {
                    support =
                        support.partwise_sum(&Partition::column(m).scale(t.degree(o)));
                }
                assert_eq!(unipotent_support(&label, &t), support);
            })
            .unwrap();
        }
    }
}
