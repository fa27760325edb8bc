//! Triple labels `(s, lambda, xi)` for the irreducible characters of
//! `SL_n^eps(q)`.
//!
//! Restriction from the ambient group is constant on translation classes:
//! two labels `(s~, lambda)` that differ by adding a `(q-eps)`-torsion point
//! to every eigenvalue restrict identically.  A *family* is such a class,
//! canonically represented by its `(den,num)`-minimal translate.  The
//! translations fixing the eigenvalue multiset form the component group
//! `A(s)` (cyclic, of order dividing `d = gcd(n, q-eps)`), and the subgroup
//! also fixing `lambda` has order `a_lambda`; the restriction splits into
//! exactly `a_lambda` constituents indexed by `xi` in `Z/a_lambda`.
//!
//! The reduction maps `Z/d -> Z/a -> Z/a_lambda` and `Z/d -> Z/d_nu` govern
//! how diagonal automorphisms permute constituents and which generalized
//! Gelfand-Graev character contains which constituent; the outer action of
//! field and graph automorphisms multiplies eigenvalues (hence `xi`) by
//! `p^k * (-1)^b`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicElt;
use crate::error::{CoreError, CoreResult};
use crate::gl::{
    for_each_gl_label, gl_char_degree, wave_front, GlCharLabel, OrbitTable, SemisimpleClassLabel,
};
use crate::params::GroupParams;
use crate::partition::Partition;
use crate::torsion::TorsionPoint;

/// `d = |H^1(F, Z(G))| = gcd(n, q - eps)`.
pub fn h1_order(params: &GroupParams) -> u64 {
    params.d()
}

/// The component group `A(s)` of a semisimple label: the translations
/// fixing the eigenvalue multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGroupData {
    /// Order `a`; always divides `d`.
    pub order: u64,
    /// Generating translation, `ell/(q-eps)` in lowest terms where
    /// `ell = (q-eps)/a`.
    pub generator: TorsionPoint,
}

/// Cycle length of `s` under translation by `1/(q-eps)`.
fn s_cycle_len(s: &SemisimpleClassLabel, table: &OrbitTable) -> u64 {
    let mut cur = s.translate(table, 1);
    let mut len = 1u64;
    while &cur != s {
        cur = cur.translate(table, 1);
        len += 1;
    }
    len
}

pub fn component_group(s: &SemisimpleClassLabel, table: &OrbitTable) -> ComponentGroupData {
    let qm = table.params.q_minus_eps();
    let len = s_cycle_len(s, table);
    debug_assert_eq!(qm % len, 0);
    let order = qm / len;
    let generator = TorsionPoint::new(&BigInt::from(len), &BigUint::from(qm)).expect("qm > 0");
    ComponentGroupData { order, generator }
}

/// A translation family: the canonical representative of a class of
/// ambient labels with a common restriction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    /// Canonical (minimal-translate) semisimple label.
    pub s: SemisimpleClassLabel,
    /// Canonical multipartition within its `A(s)`-orbit.
    pub lambda: Vec<Partition>,
    /// `|A(s)|`.
    pub a: u64,
    /// `|A(s)_lambda|`: the number of restriction constituents.
    pub a_lambda: u64,
}

impl Family {
    pub fn gl_label(&self) -> GlCharLabel {
        GlCharLabel {
            s: self.s.clone(),
            lambda: self.lambda.clone(),
        }
    }

    /// Degree of any ambient character in the family.
    pub fn gl_degree(&self, table: &OrbitTable) -> BigInt {
        gl_char_degree(&self.gl_label(), table)
    }

    /// Degree of each of the `a_lambda` constituents.
    pub fn constituent_degree(&self, table: &OrbitTable) -> BigInt {
        let d = self.gl_degree(table);
        let (q, r) = num_integer::div_rem(d, BigInt::from(self.a_lambda));
        debug_assert!(r.is_zero(), "constituent degree must divide exactly");
        q
    }

    /// Wave front partition of the family (constant on the family).
    pub fn wave_front(&self, table: &OrbitTable) -> Partition {
        wave_front(&self.gl_label(), table)
    }

    /// `d_nu` of the wave front: the modulus of the Gelfand-Graev labels
    /// that govern this family.
    pub fn d_nu(&self, table: &OrbitTable) -> u64 {
        d_nu(&self.wave_front(table), &table.params)
    }
}

/// Compute the family of an arbitrary ambient label, together with the
/// component-group data.  Also reports whether `label` is itself the
/// canonical representative (used to deduplicate enumeration).
pub fn family_of(label: &GlCharLabel, table: &OrbitTable) -> (Family, bool) {
    let qm = table.params.q_minus_eps();
    let mut best = label.clone();
    let mut cur = label.translate1(table);
    let mut pair_len = 1u64;
    while &cur != label {
        if cur < best {
            best = cur.clone();
        }
        cur = cur.translate1(table);
        pair_len += 1;
    }
    debug_assert_eq!(qm % pair_len, 0);
    let a_lambda = qm / pair_len;
    // Canonical lambda: minimal among the orbit members sharing the
    // canonical s.  `best` is minimal in lexicographic (s, lambda) order,
    // and the s-component of any member is >= its own minimum, so best.s
    // is the canonical s and best.lambda the canonical multipartition.
    let len_s = s_cycle_len(&best.s, table);
    let a = qm / len_s;
    let is_canonical = &best == label;
    (
        Family {
            s: best.s,
            lambda: best.lambda,
            a,
            a_lambda,
        },
        is_canonical,
    )
}

/// Visit every family exactly once, in the order induced by the ambient
/// label enumeration.
pub fn for_each_family<F: FnMut(&Family)>(table: &OrbitTable, mut f: F) -> CoreResult<()> {
    for_each_gl_label(table, |label| {
        let (fam, canonical) = family_of(label, table);
        if canonical {
            f(&fam);
        }
    })
}

pub fn enumerate_families(table: &OrbitTable) -> CoreResult<Vec<Family>> {
    let mut out = Vec::new();
    for_each_family(table, |fam| out.push(fam.clone()))?;
    Ok(out)
}

/// A semisimple class of the adjoint quotient: the canonical
/// (minimal-translate) representative of a translation class of ambient
/// semisimple labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PglClassLabel {
    pub rep: SemisimpleClassLabel,
}

/// The constituents of the restriction of an ambient character: the
/// canonical class label, the transported multipartition, and the number
/// `a_lambda` of irreducible constituents (each of degree
/// `deg / a_lambda`), indexed by `xi` in `Z/a_lambda`.
pub fn restriction_constituents(
    chi: &GlCharLabel,
    table: &OrbitTable,
) -> (PglClassLabel, Vec<Partition>, u64) {
    let (fam, _) = family_of(chi, table);
    (
        PglClassLabel { rep: fam.s.clone() },
        fam.lambda,
        fam.a_lambda,
    )
}

/// Triple label of an irreducible character of `SL_n^eps(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlCharLabel {
    pub s: SemisimpleClassLabel,
    pub lambda: Vec<Partition>,
    pub xi: CyclicElt,
}

/// All triple labels, in family order then `xi` order.  The count is the
/// class number of `SL_n^eps(q)`.
pub fn enumerate_sl_chars(table: &OrbitTable) -> CoreResult<Vec<SlCharLabel>> {
    let mut out = Vec::new();
    for_each_family(table, |fam| {
        for xi in 0..fam.a_lambda {
            out.push(SlCharLabel {
                s: fam.s.clone(),
                lambda: fam.lambda.clone(),
                xi: CyclicElt {
                    value: xi,
                    modulus: fam.a_lambda,
                },
            });
        }
    })?;
    Ok(out)
}

/// Number of triple labels (= predicted class number of the special group).
pub fn sl_class_count(table: &OrbitTable) -> CoreResult<u64> {
    let mut count = 0u64;
    for_each_family(table, |fam| count += fam.a_lambda)?;
    Ok(count)
}

/// `omega^0_s`: reduction `Z/d -> Z/a` in the fixed coordinates.
pub fn omega0(s: &SemisimpleClassLabel, table: &OrbitTable, z: &CyclicElt) -> CoreResult<CyclicElt> {
    let d = table.params.d();
    if z.modulus != d {
        return Err(CoreError::ModulusMismatch {
            expected: d,
            found: z.modulus,
        });
    }
    let a = component_group(s, table).order;
    z.reduce(a)
}

/// `omega^0_{s,lambda}`: reduction `Z/d -> Z/a_lambda`.
pub fn omega0_lambda(fam: &Family, table: &OrbitTable, z: &CyclicElt) -> CoreResult<CyclicElt> {
    let d = table.params.d();
    if z.modulus != d {
        return Err(CoreError::ModulusMismatch {
            expected: d,
            found: z.modulus,
        });
    }
    z.reduce(fam.a_lambda)
}

/// `d_nu = gcd(gcd of parts, q - eps)`: the number of rational classes in
/// the geometric unipotent class `nu`, and the modulus of its
/// Gelfand-Graev labels.
pub fn d_nu(nu: &Partition, params: &GroupParams) -> u64 {
    num_integer::gcd(u64::from(nu.parts_gcd()), params.q_minus_eps())
}

/// `phi_u`: reduction `Z/d -> Z/d_nu`.
pub fn phi_u(nu: &Partition, z: &CyclicElt, params: &GroupParams) -> CoreResult<CyclicElt> {
    let d = params.d();
    if z.modulus != d {
        return Err(CoreError::ModulusMismatch {
            expected: d,
            found: z.modulus,
        });
    }
    z.reduce(d_nu(nu, params))
}

/// A generalized Gelfand-Graev label: a unipotent class `nu` of weight `n`
/// together with a rational-class index in `Z/d_nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentSlClass {
    pub nu: Partition,
    pub a: CyclicElt,
}

impl UnipotentSlClass {
    pub fn new(nu: Partition, a: u64, params: &GroupParams) -> CoreResult<Self> {
        if nu.weight() != params.n {
            return Err(CoreError::MalformedLabel(format!(
                "unipotent class {nu} does not have weight {}",
                params.n
            )));
        }
        let m = d_nu(&nu, params);
        Ok(UnipotentSlClass {
            nu,
            a: CyclicElt::new(a, m)?,
        })
    }
}

/// Outcome of a Gelfand-Graev incidence query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GgcIncidence {
    /// The class is the wave front of the label's family; membership is
    /// decided by the `xi = a mod a_lambda` rule.
    Governed(bool),
    /// The class is not the wave front of the family, so the rule does not
    /// apply (the multiplicity may still be nonzero deeper in the closure
    /// order, but it is not decided here).
    NotGoverned,
}

/// Does the generalized Gelfand-Graev character labelled `gamma` contain
/// the constituent `chi`?
pub fn gggc_contains(
    chi: &SlCharLabel,
    gamma: &UnipotentSlClass,
    table: &OrbitTable,
) -> CoreResult<GgcIncidence> {
    let (fam, _) = family_of(
        &GlCharLabel {
            s: chi.s.clone(),
            lambda: chi.lambda.clone(),
        },
        table,
    );
    gggc_contains_in_family(&fam, &chi.xi, gamma, table)
}

/// Incidence with the family data already at hand.
pub fn gggc_contains_in_family(
    fam: &Family,
    xi: &CyclicElt,
    gamma: &UnipotentSlClass,
    table: &OrbitTable,
) -> CoreResult<GgcIncidence> {
    let nu_star = fam.wave_front(table);
    if gamma.nu != nu_star {
        return Ok(GgcIncidence::NotGoverned);
    }
    let m = d_nu(&nu_star, &table.params);
    if m != gamma.a.modulus {
        return Err(CoreError::ModulusMismatch {
            expected: m,
            found: gamma.a.modulus,
        });
    }
    if !m.is_multiple_of(fam.a_lambda) {
        return Err(CoreError::Tripwire(format!(
            "a_lambda = {} does not divide d_nu = {m}; the wave-front and \
             component-group rules are inconsistent for this label",
            fam.a_lambda
        )));
    }
    Ok(GgcIncidence::Governed(
        xi.value == gamma.a.value % fam.a_lambda,
    ))
}

/// A field/graph outer automorphism: acts on eigenvalues by
/// `t -> p^k * (-1)^b * t`.  For the unitary forms the graph automorphism
/// coincides with `F_p^e` modulo inner automorphisms, so `b` is folded into
/// `k` and the field exponent runs mod `2e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OuterAut {
    pub field_exp: u32,
    pub graph_bit: u8,
}

impl OuterAut {
    pub fn new(field_exp: u32, graph_bit: u8, params: &GroupParams) -> Self {
        let order = params.field_auto_order();
        if params.epsilon == -1 {
            let k = (field_exp + u32::from(graph_bit % 2) * params.e) % order;
            OuterAut {
                field_exp: k,
                graph_bit: 0,
            }
        } else {
            OuterAut {
                field_exp: field_exp % order,
                graph_bit: graph_bit % 2,
            }
        }
    }

    pub fn identity(params: &GroupParams) -> Self {
        Self::new(0, 0, params)
    }

    pub fn compose(&self, other: &OuterAut, params: &GroupParams) -> OuterAut {
        OuterAut::new(
            self.field_exp + other.field_exp,
            self.graph_bit ^ other.graph_bit,
            params,
        )
    }

    /// All elements of `<F_p, gamma>` in a fixed order.
    pub fn all(params: &GroupParams) -> Vec<OuterAut> {
        let mut out = Vec::new();
        let graph_range = if params.epsilon == 1 { 2 } else { 1 };
        for b in 0..graph_range {
            for k in 0..params.field_auto_order() {
                out.push(OuterAut::new(k, b as u8, params));
            }
        }
        out.sort_by_key(|s| (s.graph_bit, s.field_exp));
        out.dedup();
        out
    }

    /// The torsion multiplier `p^k * (-1)^b`.
    pub fn torsion_multiplier(&self, params: &GroupParams) -> BigInt {
        let m = BigInt::from(params.p).pow(self.field_exp);
        if self.graph_bit % 2 == 1 {
            -m
        } else {
            m
        }
    }

    /// The same multiplier mod `m` (for the `xi` coordinate).
    pub fn multiplier_mod(&self, modulus: u64, params: &GroupParams) -> u64 {
        if modulus == 1 {
            return 0;
        }
        let mut x = 1u64;
        for _ in 0..self.field_exp {
            x = (x as u128 * (params.p % modulus) as u128 % modulus as u128) as u64;
        }
        if self.graph_bit % 2 == 1 {
            (modulus - x % modulus) % modulus
        } else {
            x % modulus
        }
    }
}

/// Cache of orbit permutations for the outer-automorphism action.
#[derive(Default)]
pub struct ActionCache {
    perms: HashMap<(u32, u8), Vec<u32>>,
}

impl ActionCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn perm(&mut self, sigma: &OuterAut, table: &OrbitTable) -> CoreResult<&Vec<u32>> {
        let key = (sigma.field_exp, sigma.graph_bit);
        if let std::collections::hash_map::Entry::Vacant(e) = self.perms.entry(key) {
            // sigma^{*-1} multiplies eigenvalues by the inverse multiplier.
            let m = sigma.torsion_multiplier(&table.params);
            let perm = table.scale_inv_perm(&m)?;
            e.insert(perm);
        }
        Ok(self.perms.get(&key).unwrap())
    }
}

/// The action of a field/graph automorphism on a triple label:
/// eigenvalues move by the inverse multiplier, the multipartition is
/// transported along, and `xi` is multiplied by `p^k * (-1)^b`.
pub fn act(
    sigma: &OuterAut,
    chi: &SlCharLabel,
    table: &OrbitTable,
    cache: &mut ActionCache,
) -> CoreResult<SlCharLabel> {
    let perm = cache.perm(sigma, table)?.clone();
    let moved = GlCharLabel {
        s: chi.s.clone(),
        lambda: chi.lambda.clone(),
    }
    .permute_orbits(&perm);
    let (fam, _) = family_of(&moved, table);
    if fam.a_lambda != chi.xi.modulus {
        return Err(CoreError::Tripwire(format!(
            "automorphism changed a_lambda: {} -> {}",
            chi.xi.modulus, fam.a_lambda
        )));
    }
    let m = sigma.multiplier_mod(fam.a_lambda, &table.params);
    let xi = CyclicElt::new(
        (chi.xi.value as u128 * m as u128 % fam.a_lambda as u128) as u64,
        fam.a_lambda,
    )?;
    Ok(SlCharLabel {
        s: fam.s,
        lambda: fam.lambda,
        xi,
    })
}

/// The diagonal action indexed by `z` in `Z/d`: `xi -> xi + z mod a_lambda`.
pub fn diag_act(z: &CyclicElt, chi: &SlCharLabel, table: &OrbitTable) -> CoreResult<SlCharLabel> {
    let d = table.params.d();
    if z.modulus != d {
        return Err(CoreError::ModulusMismatch {
            expected: d,
            found: z.modulus,
        });
    }
    let shift = z.reduce(chi.xi.modulus)?;
    Ok(SlCharLabel {
        s: chi.s.clone(),
        lambda: chi.lambda.clone(),
        xi: chi.xi.add(&shift)?,
    })
}

/// Report of the stabilizer-factorization check for the base constituent
/// `chi_0 = (s, lambda, 0)` of a family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilizerReport {
    /// `|{z : omega(z) = 0}| = d / a_lambda`.
    pub diag_stab_order: u64,
    /// Elements of `<F_p, gamma>` fixing `chi_0`.
    pub auto_stab: Vec<OuterAut>,
    /// Order of the full stabilizer in the direct product.
    pub full_stab_order: u64,
    /// Whether the full stabilizer is the product of the two partial ones.
    pub factorizes: bool,
}

/// Check that the stabilizer of `chi_0` in `(diagonal) x <F_p, gamma>`
/// factorizes as the product of the partial stabilizers.
pub fn stabilizer_condition(
    fam: &Family,
    table: &OrbitTable,
    cache: &mut ActionCache,
) -> CoreResult<StabilizerReport> {
    let params = &table.params;
    let d = params.d();
    let chi0 = SlCharLabel {
        s: fam.s.clone(),
        lambda: fam.lambda.clone(),
        xi: CyclicElt::zero(fam.a_lambda),
    };
    let diag_stab_order = d / fam.a_lambda;
    let sigmas = OuterAut::all(params);
    let mut auto_stab = Vec::new();
    let mut full = 0u64;
    for sigma in &sigmas {
        let moved = act(sigma, &chi0, table, cache)?;
        if moved == chi0 {
            auto_stab.push(*sigma);
        }
        // Count the pairs (z, sigma) fixing chi_0.
        for z in 0..d {
            let zz = CyclicElt::new(z, d)?;
            let both = diag_act(&zz, &moved, table)?;
            if both == chi0 {
                full += 1;
            }
        }
    }
    let product = diag_stab_order * auto_stab.len() as u64;
    Ok(StabilizerReport {
        diag_stab_order,
        auto_stab: auto_stab.clone(),
        full_stab_order: full,
        factorizes: full == product,
    })
}

/// Multiset of irreducible character degrees of `SL_n^eps(q)`, as sorted
/// `(degree, multiplicity)` pairs.
pub fn cd_multiset(table: &OrbitTable) -> CoreResult<Vec<(BigInt, u64)>> {
    let mut counts: Vec<(BigInt, u64)> = Vec::new();
    for_each_family(table, |fam| {
        let deg = fam.constituent_degree(table);
        match counts.binary_search_by(|(d, _)| d.cmp(&deg)) {
            Ok(i) => counts[i].1 += fam.a_lambda,
            Err(i) => counts.insert(i, (deg, fam.a_lambda)),
        }
    })?;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::enumerate_gl_chars;
    use num_traits::ToPrimitive;

    fn table(n: u32, q: u64, eps: i8) -> OrbitTable {
        let p = GroupParams::new(n, q, eps).unwrap();
        OrbitTable::for_group(&p).unwrap()
    }

    fn degree_multiset(t: &OrbitTable) -> Vec<u64> {
        let mut out = Vec::new();
        for (d, c) in cd_multiset(t).unwrap() {
            for _ in 0..c {
                out.push(d.to_u64().unwrap());
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn sl2_3_labels_and_degrees() {
        let t = table(2, 3, 1);
        let labels = enumerate_sl_chars(&t).unwrap();
        assert_eq!(labels.len(), 7);
        assert_eq!(degree_multiset(&t), vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn sl2_5_degrees() {
        let t = table(2, 5, 1);
        assert_eq!(degree_multiset(&t), vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn sl3_2_labels() {
        let t = table(3, 2, 1);
        let labels = enumerate_sl_chars(&t).unwrap();
        assert_eq!(labels.len(), 6);
        assert_eq!(degree_multiset(&t), vec![1, 3, 3, 6, 7, 8]);
    }

    #[test]
    fn su3_2_labels() {
        // Hand count: 3 central families, 4 split families, the mu_3 family
        // splitting in 3, and two Singer families splitting in 3 each.
        let t = table(3, 2, -1);
        let labels = enumerate_sl_chars(&t).unwrap();
        assert_eq!(labels.len(), 16);
        assert_eq!(
            degree_multiset(&t),
            vec![1, 1, 1, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 6, 6, 8]
        );
    }

    #[test]
    fn sum_identities() {
        for (n, q, eps) in [
            (2u32, 3u64, 1i8),
            (2, 5, 1),
            (2, 7, 1),
            (3, 2, 1),
            (3, 3, 1),
            (3, 4, 1),
            (3, 2, -1),
            (3, 3, -1),
            (4, 2, -1),
        ] {
            let t = table(n, q, eps);
            let mut sum = BigInt::zero();
            for_each_family(&t, |fam| {
                let c = fam.constituent_degree(&t);
                sum += BigInt::from(fam.a_lambda) * &c * &c;
            })
            .unwrap();
            assert_eq!(sum, t.params.sl_order(), "degree identity for {}", t.params.sl_name());
        }
    }

    #[test]
    fn component_group_examples() {
        let t = table(2, 3, 1);
        let gl = enumerate_gl_chars(&t).unwrap();
        // {0:1, 1/2:1}: swapping translation fixes the multiset.
        let split = gl.iter().find(|l| l.s.pairs.len() == 2).unwrap();
        let cg = component_group(&split.s, &t);
        assert_eq!(cg.order, 2);
        assert_eq!(cg.generator, TorsionPoint::from_u64(1, 2));
        // {0:2}: no nonzero translation fixes it.
        let central = gl
            .iter()
            .find(|l| l.s.pairs.len() == 1 && t.degree(l.s.pairs[0].0) == 1)
            .unwrap();
        assert_eq!(component_group(&central.s, &t).order, 1);

        // SL_3(4), s = {0, 1/3, 2/3}: full translation symmetry.
        let t = table(3, 4, 1);
        let gl = enumerate_gl_chars(&t).unwrap();
        let l = gl
            .iter()
            .find(|l| {
                l.s.pairs.len() == 3 && l.s.pairs.iter().all(|&(o, _)| t.degree(o) == 1)
                    && l.s
                        .pairs
                        .iter()
                        .any(|&(o, _)| !t.orbit(o).rep().is_zero())
            })
            .unwrap();
        let cg = component_group(&l.s, &t);
        assert_eq!(cg.order, 3);
        assert_eq!(cg.generator, TorsionPoint::from_u64(1, 3));
    }

    #[test]
    fn restriction_constituent_counts() {
        let t = table(2, 3, 1);
        let gl = enumerate_gl_chars(&t).unwrap();
        for l in &gl {
            let (pgl, _lam, a_lambda) = restriction_constituents(l, &t);
            let dens: Vec<u64> = l
                .s
                .pairs
                .iter()
                .map(|&(o, _)| t.orbit(o).rep().den().to_u64().unwrap())
                .collect();
            if l.s.pairs.len() == 2 {
                assert_eq!(a_lambda, 2, "split series splits in two");
                let d = gl_char_degree(l, &t);
                assert_eq!(d / BigInt::from(a_lambda), BigInt::from(2));
            } else if dens == [8] {
                assert_eq!(a_lambda, 1, "eighth-orbit cuspidal restricts irreducibly");
                // translation by 1/2 moves {1/8,3/8} to {5/8,7/8}: the
                // canonical representative has denominator 8 either way.
                assert_eq!(
                    pgl.rep.pairs.len(),
                    1,
                    "single cuspidal orbit in the class label"
                );
            } else if dens == [4] {
                assert_eq!(a_lambda, 2, "quarter-orbit cuspidal splits into two linears");
            }
        }
    }

    #[test]
    fn omega_and_phi_are_reductions() {
        let t = table(2, 3, 1);
        let gl = enumerate_gl_chars(&t).unwrap();
        let split = gl.iter().find(|l| l.s.pairs.len() == 2).unwrap();
        let z1 = CyclicElt::new(1, 2).unwrap();
        assert_eq!(omega0(&split.s, &t, &z1).unwrap(), CyclicElt::new(1, 2).unwrap());
        let z0 = CyclicElt::new(0, 2).unwrap();
        assert!(omega0(&split.s, &t, &z0).unwrap().is_zero());
        // Modulus mismatch is rejected.
        assert!(omega0(&split.s, &t, &CyclicElt::new(0, 3).unwrap()).is_err());

        let p = t.params;
        assert_eq!(d_nu(&Partition::row(2), &p), 2);
        assert_eq!(d_nu(&Partition::column(2), &p), 1);
        let z = CyclicElt::new(1, 2).unwrap();
        assert_eq!(phi_u(&Partition::row(2), &z, &p).unwrap().value, 1);
        assert_eq!(phi_u(&Partition::column(2), &z, &p).unwrap().modulus, 1);
    }

    #[test]
    fn gggc_incidence_sl2_3() {
        let t = table(2, 3, 1);
        let labels = enumerate_sl_chars(&t).unwrap();
        let p = t.params;
        let reg0 = UnipotentSlClass::new(Partition::row(2), 0, &p).unwrap();
        let reg1 = UnipotentSlClass::new(Partition::row(2), 1, &p).unwrap();
        // Split-series constituents: xi = 0 in Gamma_0 only.
        let split: Vec<&SlCharLabel> =
            labels.iter().filter(|l| l.s.pairs.len() == 2).collect();
        assert_eq!(split.len(), 2);
        for l in &split {
            let in0 = gggc_contains(l, &reg0, &t).unwrap();
            let in1 = gggc_contains(l, &reg1, &t).unwrap();
            if l.xi.value == 0 {
                assert_eq!(in0, GgcIncidence::Governed(true));
                assert_eq!(in1, GgcIncidence::Governed(false));
            } else {
                assert_eq!(in0, GgcIncidence::Governed(false));
                assert_eq!(in1, GgcIncidence::Governed(true));
            }
        }
        // Steinberg: a_lambda = 1, contained in both.
        let st = labels
            .iter()
            .find(|l| {
                l.s.pairs.len() == 1
                    && t.degree(l.s.pairs[0].0) == 1
                    && l.lambda[0] == Partition::column(2)
            })
            .unwrap();
        assert_eq!(gggc_contains(st, &reg0, &t).unwrap(), GgcIncidence::Governed(true));
        assert_eq!(gggc_contains(st, &reg1, &t).unwrap(), GgcIncidence::Governed(true));
        // Trivial character: wave front (1,1), not governed by the regular class.
        let triv = labels
            .iter()
            .find(|l| {
                l.s.pairs.len() == 1
                    && t.degree(l.s.pairs[0].0) == 1
                    && l.lambda[0] == Partition::row(2)
            })
            .unwrap();
        assert_eq!(gggc_contains(triv, &reg0, &t).unwrap(), GgcIncidence::NotGoverned);
    }

    #[test]
    fn act_examples() {
        // SL_3(4), chi = ({0,1/3,2/3}, all-(1), xi): F_2 sends xi -> 2 xi.
        let t = table(3, 4, 1);
        let mut cache = ActionCache::new();
        let fams = enumerate_families(&t).unwrap();
        let fam = fams
            .iter()
            .find(|f| {
                f.a_lambda == 3
                    && f.s.pairs.len() == 3
                    && f.s.pairs.iter().all(|&(o, _)| t.degree(o) == 1)
            })
            .unwrap();
        let chi = SlCharLabel {
            s: fam.s.clone(),
            lambda: fam.lambda.clone(),
            xi: CyclicElt::new(1, 3).unwrap(),
        };
        let id = OuterAut::identity(&t.params);
        assert_eq!(act(&id, &chi, &t, &mut cache).unwrap(), chi);

        let f2 = OuterAut::new(1, 0, &t.params);
        let img = act(&f2, &chi, &t, &mut cache).unwrap();
        assert_eq!(img.s, chi.s);
        assert_eq!(img.xi.value, 2);

        let gamma = OuterAut::new(0, 1, &t.params);
        let chi0 = SlCharLabel {
            xi: CyclicElt::zero(3),
            ..chi.clone()
        };
        let img = act(&gamma, &chi0, &t, &mut cache).unwrap();
        assert_eq!(img, chi0, "xi = 0 is gamma-fixed in this family");
    }

    #[test]
    fn act_is_a_group_action() {
        for (n, q, eps) in [(2u32, 9u64, 1i8), (3, 4, 1), (3, 2, -1)] {
            let t = table(n, q, eps);
            let mut cache = ActionCache::new();
            let labels = enumerate_sl_chars(&t).unwrap();
            let sigmas = OuterAut::all(&t.params);
            for chi in labels.iter().take(12) {
                for s1 in &sigmas {
                    for s2 in &sigmas {
                        let lhs =
                            act(&s1.compose(s2, &t.params), chi, &t, &mut cache).unwrap();
                        let rhs = act(s1, &act(s2, chi, &t, &mut cache).unwrap(), &t, &mut cache)
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn act_commutes_with_diagonal_up_to_twist() {
        let t = table(3, 4, 1);
        let mut cache = ActionCache::new();
        let d = t.params.d();
        let labels = enumerate_sl_chars(&t).unwrap();
        let sigmas = OuterAut::all(&t.params);
        for chi in labels.iter().take(20) {
            for sigma in &sigmas {
                for z in 0..d {
                    let zz = CyclicElt::new(z, d).unwrap();
                    // sigma . (z . chi) == sigma(z) . (sigma . chi)
                    let lhs =
                        act(sigma, &diag_act(&zz, chi, &t).unwrap(), &t, &mut cache).unwrap();
                    let sz = zz.scale(sigma.multiplier_mod(d, &t.params) as i64);
                    let rhs =
                        diag_act(&sz, &act(sigma, chi, &t, &mut cache).unwrap(), &t).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn stabilizer_factorization_small() {
        for (n, q, eps) in [(2u32, 3u64, 1i8), (3, 4, 1), (3, 2, 1), (3, 2, -1)] {
            let t = table(n, q, eps);
            let mut cache = ActionCache::new();
            for fam in enumerate_families(&t).unwrap() {
                let rep = stabilizer_condition(&fam, &t, &mut cache).unwrap();
                assert!(rep.factorizes, "family {:?} of {}", fam, t.params.sl_name());
            }
        }
    }

    #[test]
    fn fiber_structure() {
        // a_lambda | d_nu and each xi arises for exactly d_nu/a_lambda
        // values of the Gelfand-Graev index.
        for (n, q, eps) in [(2u32, 3u64, 1i8), (2, 5, 1), (3, 4, 1), (3, 2, -1), (4, 3, 1)] {
            let t = table(n, q, eps);
            for_each_family(&t, |fam| {
                let nu = fam.wave_front(&t);
                let m = d_nu(&nu, &t.params);
                assert_eq!(m % fam.a_lambda, 0, "a_lambda | d_nu");
                for xi in 0..fam.a_lambda {
                    let chi = SlCharLabel {
                        s: fam.s.clone(),
                        lambda: fam.lambda.clone(),
                        xi: CyclicElt::new(xi, fam.a_lambda).unwrap(),
                    };
                    let mut hits = 0;
                    for a in 0..m {
                        let g = UnipotentSlClass::new(nu.clone(), a, &t.params).unwrap();
                        if gggc_contains(&chi, &g, &t).unwrap() == GgcIncidence::Governed(true) {
                            hits += 1;
                        }
                    }
                    assert_eq!(hits, m / fam.a_lambda);
                }
            })
            .unwrap();
        }
    }
}


#[cfg(test)]
mod h1_tests {
    use super::*;

    /// Brute-force F-twisted classes of mu_n: z ~ z * w^{1 - eps*q} for
    /// w in mu_n, computed additively in Z/n.
    fn twisted_class_count(n: u64, q: u64, eps: i8) -> u64 {
        let shift = if eps == 1 {
            // 1 - q mod n
            ((1i128 - q as i128).rem_euclid(n as i128)) as u64
        } else {
            ((1i128 + q as i128).rem_euclid(n as i128)) as u64
        };
        // subgroup generated by shift in Z/n
        let sub = num_integer::gcd(shift, n);
        let sub_order = if shift == 0 { 1 } else { n / sub };
        n / sub_order
    }

    #[test]
    fn h1_matches_twisted_class_enumeration() {
        for (n, q, eps) in [
            (2u32, 3u64, 1i8),
            (3, 4, 1),
            (3, 2, -1),
            (4, 2, -1),
            (6, 7, 1),
            (5, 4, -1),
        ] {
            let p = GroupParams::new(n, q, eps).unwrap();
            assert_eq!(
                h1_order(&p),
                twisted_class_count(u64::from(n), q, eps),
                "H^1 for {}",
                p.sl_name()
            );
        }
        assert_eq!(h1_order(&GroupParams::new(2, 3, 1).unwrap()), 2);
        assert_eq!(h1_order(&GroupParams::new(3, 4, 1).unwrap()), 3);
        assert_eq!(h1_order(&GroupParams::new(3, 2, -1).unwrap()), 3);
    }
}
