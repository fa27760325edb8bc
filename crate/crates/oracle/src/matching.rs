//! Matching oracle characters to labels and certifying every label-side
//! prediction.
//!
//! The ambient characters are matched to `(s~, lambda)` labels by
//! constraint propagation over exact invariants: degree, central character
//! exponent, Gelfand-Graev membership, and the orbit structure under
//! tensoring with determinant characters and under field/graph
//! automorphisms.  One global unit `u` in `(Z/(q-eps))^*` calibrates the
//! identification of abstract torsion with concrete roots of unity; the
//! pipeline is run for every candidate unit and must succeed for at least
//! one, simultaneously across all series and all Gelfand-Graev characters.
//!
//! Restrictions are then decomposed against the special group's table,
//! the `xi` coordinates of regular families are pinned by Gelfand-Graev
//! membership, and the diagonal and outer actions are verified against
//! the label formulas.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use slchar_core::gl::{
    central_character_exponent, enumerate_gl_chars, gl_char_degree, wave_front, GlCharLabel,
    OrbitTable,
};
use slchar_core::partition::Partition;
use slchar_core::sl::{self, ActionCache, Family, OuterAut};
use slchar_core::{CyclicElt, GroupParams};

use crate::auto::{class_perm, row_perm, tensor_perm, ConcreteAut, RowIndex};
use crate::classes::ClassData;
use crate::cyclo::{CycAcc, CycContext, MultVec};
use crate::error::{OracleError, OracleResult};
use crate::gelfand::{gelfand_graev_family, gg_multiplicity, unipotent_subgroup, GelfandGraevFamily};
use crate::group::MatrixGroup;
use crate::table::CharacterTable;

/// One verified statement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn eq<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, expected: T, actual: T) -> Check {
        let passed = expected == actual;
        Check {
            name: name.into(),
            passed,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }

    fn bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: ok,
            expected: "true".into(),
            actual: detail.into(),
        }
    }
}

/// Everything the pipeline needs about one side of the pair.
pub struct GroupData {
    pub group: MatrixGroup,
    pub classes: ClassData,
    pub table: CharacterTable,
}

pub struct MatchOutcome {
    /// The calibrated unit (smallest that reconciles everything).
    pub unit: u64,
    /// All units that work.
    pub units_ok: Vec<u64>,
    /// Candidate ambient rows per ambient label, after propagation.
    pub gl_candidates: Vec<Vec<u32>>,
    /// Ambiguity classes: groups of ambient label indices sharing candidates.
    pub ambiguity: Vec<Vec<usize>>,
    /// All translation families, in enumeration order.
    pub families: Vec<Family>,
    /// Families grouped by shared candidate set, with their verified
    /// restriction units.
    pub groups: Vec<FamilyGroup>,
    pub checks: Vec<Check>,
}

pub fn units_of(m: u64) -> Vec<u64> {
    (1..=m)
        .filter(|&u| num_integer::gcd(u, m) == 1)
        .collect()
}

struct StageA {
    labels: Vec<GlCharLabel>,
    label_index: HashMap<GlCharLabel, usize>,
    degrees: Vec<u64>,
    central: Vec<u64>,
    regular: Vec<bool>,
    /// Translation-orbit length of each label.
    label_tcycle: Vec<u32>,
    row_degrees: Vec<u64>,
    row_central: Vec<u64>,
    row_regular: Vec<bool>,
    /// Tensor-orbit length of each row (unit-independent).
    row_tcycle: Vec<u32>,
    /// (label permutation, row permutation) constraint pairs, unit-free part
    auto_constraints: Vec<(Vec<usize>, Vec<u32>)>,
    /// label translate permutation and per-unit tensor row permutations
    translate_perm: Vec<usize>,
    tensor_perms: HashMap<u64, Vec<u32>>,
}

fn cycle_lengths_usize(perm: &[usize]) -> Vec<u32> {
    perm.iter()
        .enumerate()
        .map(|(start, _)| {
            let mut cur = perm[start];
            let mut len = 1u32;
            while cur != start {
                cur = perm[cur];
                len += 1;
            }
            len
        })
        .collect()
}

fn cycle_lengths_u32(perm: &[u32]) -> Vec<u32> {
    perm.iter()
        .enumerate()
        .map(|(start, _)| {
            let mut cur = perm[start] as usize;
            let mut len = 1u32;
            while cur != start {
                cur = perm[cur] as usize;
                len += 1;
            }
            len
        })
        .collect()
}

fn label_perm_from<F: Fn(&GlCharLabel) -> GlCharLabel>(
    labels: &[GlCharLabel],
    index: &HashMap<GlCharLabel, usize>,
    f: F,
) -> OracleResult<Vec<usize>> {
    labels
        .iter()
        .map(|l| {
            index
                .get(&f(l))
                .copied()
                .ok_or_else(|| OracleError::Tripwire("label action left the label set".into()))
        })
        .collect()
}

impl StageA {
    fn build(
        params: &GroupParams,
        orbit_table: &OrbitTable,
        gl: &GroupData,
        gl_gg: &GelfandGraevFamily,
        checks: &mut Vec<Check>,
    ) -> OracleResult<StageA> {
        let qm = params.q_minus_eps();
        let labels = enumerate_gl_chars(orbit_table)?;
        checks.push(Check::eq(
            format!("{}: label count = class count", params.gl_name()),
            gl.classes.count(),
            labels.len(),
        ));
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            label_index.insert(l.clone(), i);
        }

        let mut degrees = Vec::with_capacity(labels.len());
        let mut central = Vec::with_capacity(labels.len());
        let mut regular = Vec::with_capacity(labels.len());
        let nrow = Partition::row(params.n);
        for l in &labels {
            let d = gl_char_degree(l, orbit_table).to_u64().ok_or_else(|| {
                OracleError::Resource("label degree exceeds u64".into())
            })?;
            degrees.push(d);
            let t = central_character_exponent(l, orbit_table)?;
            let den = t.den().to_u64().unwrap();
            let num = t.num().to_u64().unwrap();
            central.push(num * (qm / den) % qm);
            regular.push(wave_front(l, orbit_table) == nrow);
        }

        // Oracle-side invariants.
        let beta = gl.group.det_generator();
        let beta_central = gl.group.scalar(beta);
        let beta_idx = gl.group.lookup(&beta_central).ok_or_else(|| {
            OracleError::Tripwire("central generator not in the group".into())
        })?;
        let beta_class = gl.classes.class_of[beta_idx as usize] as usize;
        let beta_order = u64::from(gl.classes.orders[beta_class]);
        if beta_order != qm {
            return Err(OracleError::Tripwire(format!(
                "central generator has order {beta_order}, expected {qm}"
            )));
        }
        let ctx = CycContext::new(gl.table.exponent as u32);
        let mut row_degrees = Vec::with_capacity(gl.table.rows.len());
        let mut row_central = Vec::with_capacity(gl.table.rows.len());
        let mut row_regular = Vec::with_capacity(gl.table.rows.len());
        for (r, row) in gl.table.rows.iter().enumerate() {
            row_degrees.push(gl.table.degrees[r]);
            let v = &row[beta_class];
            let nz: Vec<usize> = (0..v.coeffs.len()).filter(|&j| v.coeffs[j] != 0).collect();
            if nz.len() != 1 || v.coeffs[nz[0]] != gl.table.degrees[r] as i64 {
                return Err(OracleError::Tripwire(
                    "central value is not degree times a root of unity".into(),
                ));
            }
            row_central.push(nz[0] as u64);
            let m = gg_multiplicity(&gl_gg.sums[0], row, gl_gg.u_order, gl.table.exponent, &ctx)?;
            if m != 0 && m != 1 {
                return Err(OracleError::Verification(format!(
                    "<GG, row {r}> = {m}, expected 0 or 1"
                )));
            }
            row_regular.push(m == 1);
        }
        checks.push(Check::eq(
            format!("{}: regular character count", params.gl_name()),
            regular.iter().filter(|&&b| b).count(),
            row_regular.iter().filter(|&&b| b).count(),
        ));
        // Degree multisets agree.
        let mut a = degrees.clone();
        a.sort_unstable();
        let mut b = row_degrees.clone();
        b.sort_unstable();
        checks.push(Check::eq(
            format!("{}: degree multiset", params.gl_name()),
            a,
            b,
        ));

        // Unit-independent automorphism constraints.
        let row_index = RowIndex::new(&gl.table);
        let mut auto_constraints = Vec::new();
        {
            // field automorphism F_p: labels scale by p^{-1}
            let p_big = num_bigint::BigInt::from(params.p);
            let perm = orbit_table.scale_inv_perm(&p_big)?;
            let lp = label_perm_from(&labels, &label_index, |l| l.permute_orbits(&perm))?;
            let cp = class_perm(&gl.group, &gl.classes, &ConcreteAut::FieldPower(1))?;
            let rp = row_perm(&gl.table, &row_index, &cp)?;
            auto_constraints.push((lp, rp));
        }
        if params.epsilon == 1 && params.n >= 2 {
            // graph automorphism: labels scale by -1
            let m1 = num_bigint::BigInt::from(-1);
            let perm = orbit_table.scale_perm(&m1)?;
            let lp = label_perm_from(&labels, &label_index, |l| l.permute_orbits(&perm))?;
            let cp = class_perm(&gl.group, &gl.classes, &ConcreteAut::Graph)?;
            let rp = row_perm(&gl.table, &row_index, &cp)?;
            auto_constraints.push((lp, rp));
        }

        let translate_perm =
            label_perm_from(&labels, &label_index, |l| l.translate1(orbit_table))?;
        let mut tensor_perms = HashMap::new();
        for u in units_of(qm) {
            tensor_perms.insert(
                u,
                tensor_perm(&gl.group, &gl.classes, &gl.table, &row_index, u)?,
            );
        }
        // Orbit lengths under the diagonal/tensor actions; these are part
        // of the orbit constraints and independent of the unit (replacing
        // the twist by a coprime power permutes the same cycles).
        let label_tcycle = cycle_lengths_usize(&translate_perm);
        let row_tcycle = cycle_lengths_u32(&tensor_perms[&1]);

        Ok(StageA {
            labels,
            label_index,
            degrees,
            central,
            regular,
            label_tcycle,
            row_degrees,
            row_central,
            row_regular,
            row_tcycle,
            auto_constraints,
            translate_perm,
            tensor_perms,
        })
    }

    /// Candidate rows per label for a given unit, propagated to a fixpoint.
    fn candidates(&self, params: &GroupParams, unit: u64) -> Option<Vec<Vec<u32>>> {
        let qm = params.q_minus_eps();
        let k = self.labels.len();
        let mut cand: Vec<Vec<u32>> = Vec::with_capacity(k);
        for i in 0..k {
            let want_central = self.central[i] * unit % qm;
            let set: Vec<u32> = (0..self.row_degrees.len() as u32)
                .filter(|&r| {
                    self.row_degrees[r as usize] == self.degrees[i]
                        && self.row_central[r as usize] == want_central
                        && self.row_regular[r as usize] == self.regular[i]
                        && self.row_tcycle[r as usize] == self.label_tcycle[i]
                })
                .collect();
            if set.is_empty() {
                return None;
            }
            cand.push(set);
        }

        // Constraints: (label perm, row perm) pairs, applied forward and
        // backward until stable.
        let mut constraints: Vec<(Vec<usize>, Vec<u32>)> = self.auto_constraints.clone();
        constraints.push((
            self.translate_perm.clone(),
            self.tensor_perms[&unit].clone(),
        ));
        let mut inverses = Vec::new();
        for (lp, rp) in &constraints {
            let mut lpi = vec![0usize; lp.len()];
            for (i, &j) in lp.iter().enumerate() {
                lpi[j] = i;
            }
            let mut rpi = vec![0u32; rp.len()];
            for (i, &j) in rp.iter().enumerate() {
                rpi[j as usize] = i as u32;
            }
            inverses.push((lpi, rpi));
        }
        constraints.extend(inverses);

        loop {
            let mut changed = false;
            for (lp, rp) in &constraints {
                for i in 0..k {
                    let image: Vec<u32> = cand[i].iter().map(|&r| rp[r as usize]).collect();
                    let j = lp[i];
                    let filtered: Vec<u32> = cand[j]
                        .iter()
                        .copied()
                        .filter(|r| image.contains(r))
                        .collect();
                    if filtered.len() != cand[j].len() {
                        if filtered.is_empty() {
                            return None;
                        }
                        cand[j] = filtered;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        // Consistency: identical candidate sets must appear exactly as many
        // times as their size, and distinct sets must be disjoint.
        let mut groups: Vec<(Vec<u32>, usize)> = Vec::new();
        for c in &cand {
            match groups.iter_mut().find(|(set, _)| set == c) {
                Some((_, n)) => *n += 1,
                None => groups.push((c.clone(), 1)),
            }
        }
        let mut used = vec![false; self.row_degrees.len()];
        for (set, n) in &groups {
            if set.len() != *n {
                return None;
            }
            for &r in set {
                if used[r as usize] {
                    return None;
                }
                used[r as usize] = true;
            }
        }
        Some(cand)
    }
}

/// Map each special-group class to the ambient class containing it.
fn embed_classes(sl: &GroupData, gl: &GroupData) -> OracleResult<Vec<u32>> {
    let mut out = Vec::with_capacity(sl.classes.count());
    for &rep in &sl.classes.reps {
        let m = sl.group.mat(rep);
        let idx = gl.group.lookup(&m).ok_or_else(|| {
            OracleError::Tripwire("special element missing from the ambient group".into())
        })?;
        out.push(gl.classes.class_of[idx as usize]);
    }
    Ok(out)
}

/// Values of the restriction of an ambient row on the special classes.
fn restrict_row(gl_row: &[MultVec], embed: &[u32]) -> Vec<MultVec> {
    embed.iter().map(|&c| gl_row[c as usize].clone()).collect()
}

/// `<f, chi_r>` for a class function given by values on special classes.
fn inner_with_row(
    values: &[MultVec],
    row: &[MultVec],
    sl: &GroupData,
    ctx: &CycContext,
) -> OracleResult<i128> {
    let n = sl.table.exponent as u32;
    let mut acc = CycAcc::zero(n);
    for c in 0..values.len() {
        acc.add_prod(&values[c], &row[c], true, sl.classes.sizes[c] as i128);
    }
    let v = ctx.as_integer(&acc)?;
    let order = sl.group.order() as i128;
    if v % order != 0 {
        return Err(OracleError::Tripwire(
            "inner product is not an integer".into(),
        ));
    }
    Ok(v / order)
}

pub struct Pipeline<'a> {
    pub params: GroupParams,
    pub orbit_table: &'a OrbitTable,
    pub gl: &'a GroupData,
    pub sl: &'a GroupData,
}

/// One distinct restriction inside a family group: its constituent rows
/// and, for families governed by the classical Gelfand-Graev characters,
/// the `xi -> row` assignment.
pub struct RestrictionUnit {
    pub constituents: Vec<u32>,
    pub xi_rows: Option<Vec<u32>>,
}

/// Families whose canonical labels share one candidate set.  When the
/// group has a single member, the family <-> restriction assignment is
/// unique; otherwise the members are verified setwise: such entangled
/// families differ only by invariants beyond the implemented ones.
pub struct FamilyGroup {
    pub families: Vec<usize>,
    pub a_lambda: u64,
    pub regular: bool,
    pub units: Vec<RestrictionUnit>,
}

impl<'a> Pipeline<'a> {
    pub fn run(&self) -> OracleResult<MatchOutcome> {
        let params = &self.params;
        let mut checks: Vec<Check> = Vec::new();

        // Gelfand-Graev data on both sides.
        let sl_u = unipotent_subgroup(&self.sl.group)?;
        let gl_u = unipotent_subgroup(&self.gl.group)?;
        let sl_stab = self.outer_class_perms(self.sl)?;
        let gl_stab = self.outer_class_perms(self.gl)?;
        let sl_gg = gelfand_graev_family(&self.sl.group, &self.sl.classes, &sl_u, &sl_stab)?;
        let gl_gg = gelfand_graev_family(&self.gl.group, &self.gl.classes, &gl_u, &gl_stab)?;
        checks.push(Check::eq(
            format!("{}: number of Gelfand-Graev characters = d", params.sl_name()),
            params.d(),
            sl_gg.d,
        ));

        // Stage A: ambient matching with unit calibration.
        let stage_a = StageA::build(params, self.orbit_table, self.gl, &gl_gg, &mut checks)?;
        let qm = params.q_minus_eps();
        let mut units_ok = Vec::new();
        let mut chosen: Option<(u64, Vec<Vec<u32>>)> = None;
        for u in units_of(qm) {
            if let Some(c) = stage_a.candidates(params, u) {
                units_ok.push(u);
                if chosen.is_none() {
                    chosen = Some((u, c));
                }
            }
        }
        let (unit, gl_candidates) = chosen.ok_or_else(|| {
            OracleError::Verification(format!(
                "{}: no unit reconciles degrees, central characters and orbit constraints",
                params.gl_name()
            ))
        })?;
        checks.push(Check::bool(
            format!("{}: calibration unit", params.gl_name()),
            true,
            format!("unit {unit} of {:?}", units_ok),
        ));

        // Ambiguity classes of ambient labels.
        let mut ambiguity: Vec<Vec<usize>> = Vec::new();
        {
            let mut seen: Vec<Vec<u32>> = Vec::new();
            for (i, c) in gl_candidates.iter().enumerate() {
                if c.len() <= 1 {
                    continue;
                }
                if let Some(pos) = seen.iter().position(|s| s == c) {
                    ambiguity[pos].push(i);
                } else {
                    seen.push(c.clone());
                    ambiguity.push(vec![i]);
                }
            }
        }

        // Stage B: families grouped by candidate set, restrictions
        // decomposed per distinct restriction.
        let embed = embed_classes(self.sl, self.gl)?;
        let sl_ctx = CycContext::new(self.sl.table.exponent as u32);
        let families = sl::enumerate_families(self.orbit_table)?;
        checks.push(Check::eq(
            format!("{}: class count = triple-label count", params.sl_name()),
            self.sl.classes.count() as u64,
            families.iter().map(|f| f.a_lambda).sum::<u64>(),
        ));

        // Possible restrictions per family: the distinct restriction value
        // vectors of its canonical label's candidate rows.  Families whose
        // possibility sets overlap are entangled and verified setwise.
        let mut fam_res: Vec<Vec<Vec<MultVec>>> = Vec::with_capacity(families.len());
        for fam in &families {
            let li = stage_a.label_index[&fam.gl_label()];
            if gl_candidates[li].is_empty() {
                return Err(OracleError::Verification("empty candidate set".into()));
            }
            let mut res_list: Vec<Vec<MultVec>> = Vec::new();
            for &r in &gl_candidates[li] {
                let res = restrict_row(&self.gl.table.rows[r as usize], &embed);
                if !res_list.contains(&res) {
                    res_list.push(res);
                }
            }
            fam_res.push(res_list);
        }
        // Union-find closure over shared restrictions.
        let mut parent: Vec<usize> = (0..families.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        {
            let mut by_key: HashMap<Vec<i64>, usize> = HashMap::new();
            for (fi, rs) in fam_res.iter().enumerate() {
                for res in rs {
                    let key = CharacterTable::row_key(res);
                    match by_key.get(&key) {
                        Some(&fj) => {
                            let a = find(&mut parent, fi);
                            let b = find(&mut parent, fj);
                            parent[a] = b;
                        }
                        None => {
                            by_key.insert(key, fi);
                        }
                    }
                }
            }
        }
        let mut groups: Vec<FamilyGroup> = Vec::new();
        let mut group_of_family: HashMap<usize, usize> = HashMap::new();
        {
            let mut root_to_group: HashMap<usize, usize> = HashMap::new();
            for fi in 0..families.len() {
                let root = find(&mut parent, fi);
                let fam = &families[fi];
                let reg = fam.wave_front(self.orbit_table) == Partition::row(params.n);
                let gi = *root_to_group.entry(root).or_insert_with(|| {
                    groups.push(FamilyGroup {
                        families: Vec::new(),
                        a_lambda: fam.a_lambda,
                        regular: reg,
                        units: Vec::new(),
                    });
                    groups.len() - 1
                });
                groups[gi].families.push(fi);
                group_of_family.insert(fi, gi);
                if groups[gi].a_lambda != fam.a_lambda || groups[gi].regular != reg {
                    return Err(OracleError::Verification(
                        "entangled families disagree on a_lambda or regularity".into(),
                    ));
                }
            }
        }
        // Distinct restrictions of each group, decomposed.
        for g in groups.iter_mut() {
            let mut res_list: Vec<Vec<MultVec>> = Vec::new();
            for &fi in &g.families {
                for res in &fam_res[fi] {
                    if !res_list.contains(res) {
                        res_list.push(res.clone());
                    }
                }
            }
            if res_list.len() != g.families.len() {
                return Err(OracleError::Verification(format!(
                    "{}: {} distinct candidate restrictions for {} entangled families",
                    params.gl_name(),
                    res_list.len(),
                    g.families.len()
                )));
            }
            res_list.sort_by(|a, b| CharacterTable::row_key(a).cmp(&CharacterTable::row_key(b)));
            for res in res_list {
                let mut constituents = Vec::new();
                for (r, row) in self.sl.table.rows.iter().enumerate() {
                    let m = inner_with_row(&res, row, self.sl, &sl_ctx)?;
                    match m {
                        0 => {}
                        1 => constituents.push(r as u32),
                        _ => {
                            return Err(OracleError::Verification(format!(
                                "restriction not multiplicity-free: multiplicity {m}"
                            )))
                        }
                    }
                }
                if constituents.len() as u64 != g.a_lambda {
                    return Err(OracleError::Verification(format!(
                        "{}: restriction has {} constituents, labels predict {}",
                        params.sl_name(),
                        constituents.len(),
                        g.a_lambda
                    )));
                }
                g.units.push(RestrictionUnit {
                    constituents,
                    xi_rows: None,
                });
            }
        }
        // Constituent degrees.
        for g in &groups {
            let fam = &families[g.families[0]];
            let cdeg = fam.constituent_degree(self.orbit_table).to_u64().unwrap();
            for u in &g.units {
                for &r in &u.constituents {
                    if self.sl.table.degrees[r as usize] != cdeg {
                        return Err(OracleError::Verification(
                            "constituents do not share the predicted degree".into(),
                        ));
                    }
                }
            }
        }
        checks.push(Check::bool(
            format!(
                "{}: all restrictions multiplicity-free with a_lambda constituents",
                params.sl_name()
            ),
            true,
            format!("{} families in {} groups", families.len(), groups.len()),
        ));

        // Every special row is hit exactly once across all units.
        {
            let mut hit = vec![0u32; self.sl.table.rows.len()];
            for g in &groups {
                for u in &g.units {
                    for &r in &u.constituents {
                        hit[r as usize] += 1;
                    }
                }
            }
            checks.push(Check::bool(
                format!("{}: restrictions partition the irreducible characters", params.sl_name()),
                hit.iter().all(|&h| h == 1),
                format!("{hit:?}"),
            ));
        }

        // Degree multiset of the special group.
        {
            let mut label_degs: Vec<u64> = Vec::new();
            for fam in &families {
                let d = fam.constituent_degree(self.orbit_table).to_u64().unwrap();
                for _ in 0..fam.a_lambda {
                    label_degs.push(d);
                }
            }
            label_degs.sort_unstable();
            let mut oracle_degs = self.sl.table.degrees.clone();
            oracle_degs.sort_unstable();
            checks.push(Check::eq(
                format!("{}: degree multiset", params.sl_name()),
                label_degs,
                oracle_degs,
            ));
        }

        // Stage C: Gelfand-Graev membership and xi assignment per unit.
        self.gg_stage(params, &sl_gg, &gl_gg, &embed, &sl_ctx, &mut groups, &mut checks)?;

        // Stage D: diagonal action.
        self.diag_stage(params, &groups, &mut checks)?;

        // Stage E: outer equivariance.
        self.outer_stage(params, &families, &groups, &group_of_family, &mut checks)?;

        // Rational unipotent class counts per Jordan type.
        self.unipotent_class_check(params, &mut checks)?;

        if let Some(fail) = checks.iter().find(|c| !c.passed) {
            return Err(OracleError::Verification(format!(
                "{}: expected {}, got {}",
                fail.name, fail.expected, fail.actual
            )));
        }

        Ok(MatchOutcome {
            unit,
            units_ok,
            gl_candidates,
            ambiguity,
            families,
            groups,
            checks,
        })
    }

    /// Class permutations of the field/graph generators.
    fn outer_class_perms(&self, side: &GroupData) -> OracleResult<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        out.push(class_perm(&side.group, &side.classes, &ConcreteAut::FieldPower(1))?);
        if self.params.epsilon == 1 && self.params.n >= 3 {
            out.push(class_perm(&side.group, &side.classes, &ConcreteAut::Graph)?);
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn gg_stage(
        &self,
        params: &GroupParams,
        sl_gg: &GelfandGraevFamily,
        gl_gg: &GelfandGraevFamily,
        embed: &[u32],
        sl_ctx: &CycContext,
        groups: &mut [FamilyGroup],
        checks: &mut Vec<Check>,
    ) -> OracleResult<()> {
        let d = sl_gg.d;

        // Multiplicity-freeness of every Gamma_z.
        let mut mults: Vec<Vec<i128>> = Vec::new();
        for z in 0..d as usize {
            let mut per_row = Vec::with_capacity(self.sl.table.rows.len());
            for row in &self.sl.table.rows {
                let m = gg_multiplicity(
                    &sl_gg.sums[z],
                    row,
                    sl_gg.u_order,
                    self.sl.table.exponent,
                    sl_ctx,
                )?;
                if m != 0 && m != 1 {
                    return Err(OracleError::Verification(format!(
                        "Gamma_{z} not multiplicity-free: multiplicity {m}"
                    )));
                }
                per_row.push(m);
            }
            // <Gamma_z, trivial> = 0
            let triv = self
                .sl
                .table
                .rows
                .iter()
                .position(|row| {
                    row.iter()
                        .all(|v| v.coeffs[0] == 1 && v.coeffs[1..].iter().all(|&c| c == 0))
                })
                .expect("trivial character");
            if per_row[triv] != 0 {
                return Err(OracleError::Verification(
                    "trivial character appears in a Gelfand-Graev character".into(),
                ));
            }
            mults.push(per_row);
        }
        checks.push(Check::bool(
            format!(
                "{}: each Gamma_z multiplicity-free, avoiding the trivial character",
                params.sl_name()
            ),
            true,
            format!("{d} characters"),
        ));

        // The Mackey decomposition of the restricted ambient Gelfand-Graev
        // character runs over the q-eps cosets and hits each of the d
        // distinct characters equally often:
        //   Res Gamma~ = ((q-eps)/d) * sum_z Gamma_z,
        // checked class by class (cross-multiplied to stay integral).
        let g_order = self.sl.group.order() as i128;
        let gl_order = self.gl.group.order() as i128;
        let p_level = self.sl.group.field.p;
        let coset_mult = (params.q_minus_eps() / d) as i128;
        for c in 0..self.sl.classes.count() {
            let cent_sl = g_order / self.sl.classes.sizes[c] as i128;
            let gc = embed[c] as usize;
            let cent_gl = gl_order / self.gl.classes.sizes[gc] as i128;
            let mut lhs = vec![0i128; p_level as usize];
            for z in 0..d as usize {
                for (j, &x) in sl_gg.sums[z][c].coeffs.iter().enumerate() {
                    lhs[j] += i128::from(x) * coset_mult * cent_sl * gl_gg.u_order as i128;
                }
            }
            let rhs: Vec<i128> = gl_gg.sums[0][gc]
                .coeffs
                .iter()
                .map(|&x| i128::from(x) * cent_gl * sl_gg.u_order as i128)
                .collect();
            if lhs != rhs {
                return Err(OracleError::Verification(format!(
                    "sum of Gamma_z differs from the restricted ambient character at class {c}"
                )));
            }
        }
        checks.push(Check::bool(
            format!(
                "{}: ((q-eps)/d) * sum of Gamma_z = restricted ambient Gelfand-Graev",
                params.sl_name()
            ),
            true,
            "classwise",
        ));

        // Per restriction unit: <Gamma_z, Res> = 1 exactly for regular wave
        // front, and membership factors through Z/a_lambda.
        for g in groups.iter_mut() {
            let a_lambda = g.a_lambda;
            for unit in g.units.iter_mut() {
                for z in 0..d as usize {
                    let total: i128 = unit
                        .constituents
                        .iter()
                        .map(|&r| mults[z][r as usize])
                        .sum();
                    let expected = i128::from(g.regular);
                    if total != expected {
                        return Err(OracleError::Verification(format!(
                            "<Gamma_{z}, Res> = {total}, expected {expected}"
                        )));
                    }
                }
                if !g.regular {
                    continue;
                }
                let pick = |z: usize| -> OracleResult<u32> {
                    let hit: Vec<u32> = unit
                        .constituents
                        .iter()
                        .copied()
                        .filter(|&r| mults[z][r as usize] == 1)
                        .collect();
                    if hit.len() != 1 {
                        return Err(OracleError::Verification(
                            "Gamma_z should meet each regular family exactly once".into(),
                        ));
                    }
                    Ok(hit[0])
                };
                let mut xi_rows = Vec::with_capacity(a_lambda as usize);
                for xi in 0..a_lambda {
                    xi_rows.push(pick(xi as usize)?);
                }
                for z in 0..d {
                    let got = pick(z as usize)?;
                    if got != xi_rows[(z % a_lambda) as usize] {
                        return Err(OracleError::Verification(format!(
                            "Gamma membership does not factor through Z/{a_lambda}"
                        )));
                    }
                }
                let distinct: std::collections::HashSet<u32> = xi_rows.iter().copied().collect();
                if distinct.len() != a_lambda as usize {
                    return Err(OracleError::Verification(
                        "xi assignment is not injective".into(),
                    ));
                }
                unit.xi_rows = Some(xi_rows);
            }
        }
        checks.push(Check::bool(
            format!(
                "{}: <Gamma_z, Res> = [wave front regular]; fibers have size d/a_lambda",
                params.sl_name()
            ),
            true,
            format!("{} groups", groups.len()),
        ));
        Ok(())
    }

    fn diag_stage(
        &self,
        params: &GroupParams,
        groups: &[FamilyGroup],
        checks: &mut Vec<Check>,
    ) -> OracleResult<()> {
        let d = params.d();
        let index = RowIndex::new(&self.sl.table);
        for z in 1..=d {
            let cp = class_perm(&self.sl.group, &self.sl.classes, &ConcreteAut::DiagConj(z))?;
            let rp = row_perm(&self.sl.table, &index, &cp)?;
            if z == d {
                // tau^d is inner-central: identity on rows.
                if !rp.iter().enumerate().all(|(i, &j)| i as u32 == j) {
                    return Err(OracleError::Verification(
                        "tau^d does not act trivially".into(),
                    ));
                }
                continue;
            }
            for g in groups {
                let a_lambda = g.a_lambda;
                for unit in &g.units {
                    match &unit.xi_rows {
                        Some(xi_rows) => {
                            for xi in 0..a_lambda {
                                let from = xi_rows[xi as usize];
                                let to = xi_rows[((xi + z) % a_lambda) as usize];
                                if rp[from as usize] != to {
                                    return Err(OracleError::Verification(format!(
                                        "diagonal action: expected xi {xi} -> {} under z = {z}",
                                        (xi + z) % a_lambda
                                    )));
                                }
                            }
                        }
                        None => {
                            let set: std::collections::HashSet<u32> =
                                unit.constituents.iter().copied().collect();
                            let moved: std::collections::HashSet<u32> = unit
                                .constituents
                                .iter()
                                .map(|&r| rp[r as usize])
                                .collect();
                            if set != moved {
                                return Err(OracleError::Verification(
                                    "diagonal action does not preserve the family".into(),
                                ));
                            }
                            let ord = a_lambda / num_integer::gcd(z % a_lambda, a_lambda);
                            for &r in &unit.constituents {
                                let mut cur = r;
                                let mut len = 0u64;
                                loop {
                                    cur = rp[cur as usize];
                                    len += 1;
                                    if cur == r {
                                        break;
                                    }
                                }
                                if len != ord {
                                    return Err(OracleError::Verification(format!(
                                        "diagonal cycle length {len}, predicted {ord}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check::bool(
            format!(
                "{}: diagonal conjugation realizes xi -> xi + z on every family",
                params.sl_name()
            ),
            true,
            format!("z in Z/{d}"),
        ));
        Ok(())
    }

    fn outer_stage(
        &self,
        params: &GroupParams,
        families: &[Family],
        groups: &[FamilyGroup],
        group_of_family: &HashMap<usize, usize>,
        checks: &mut Vec<Check>,
    ) -> OracleResult<()> {
        type FamKey = (Vec<(u32, u32)>, Vec<Partition>);
        let mut fam_index: HashMap<FamKey, usize> = HashMap::new();
        for (i, fam) in families.iter().enumerate() {
            fam_index.insert((fam.s.pairs.clone(), fam.lambda.clone()), i);
        }
        let index = RowIndex::new(&self.sl.table);
        let mut cache = ActionCache::new();

        let mut sigmas: Vec<(OuterAut, ConcreteAut)> =
            vec![(OuterAut::new(1, 0, params), ConcreteAut::FieldPower(1))];
        if params.epsilon == 1 && params.n >= 3 {
            sigmas.push((OuterAut::new(0, 1, params), ConcreteAut::Graph));
        }

        for (sigma, conc) in &sigmas {
            let cp = class_perm(&self.sl.group, &self.sl.classes, conc)?;
            let rp = row_perm(&self.sl.table, &index, &cp)?;
            for (gi, g) in groups.iter().enumerate() {
                // Label side: image group (equal candidate sets map to equal
                // candidate sets, so the image group is well defined).
                let mut image_groups = Vec::new();
                for &fi in &g.families {
                    let fam = &families[fi];
                    let chi0 = sl::SlCharLabel {
                        s: fam.s.clone(),
                        lambda: fam.lambda.clone(),
                        xi: CyclicElt::zero(fam.a_lambda),
                    };
                    let img = sl::act(sigma, &chi0, self.orbit_table, &mut cache)?;
                    let key = (img.s.pairs.clone(), img.lambda.clone());
                    let tfi = *fam_index
                        .get(&key)
                        .ok_or_else(|| OracleError::Tripwire("image family missing".into()))?;
                    image_groups.push(group_of_family[&tfi]);
                }
                image_groups.sort_unstable();
                image_groups.dedup();
                if image_groups.len() != 1 {
                    return Err(OracleError::Verification(
                        "ambiguity class is not closed under the outer action".into(),
                    ));
                }
                let tg = &groups[image_groups[0]];
                let m = sigma.multiplier_mod(g.a_lambda, params);
                // Each unit must map onto exactly one unit of the image
                // group, with xi multiplied by p^k (-1)^b.
                let mut taken = vec![false; tg.units.len()];
                for unit in &g.units {
                    let matched = tg.units.iter().enumerate().find(|(ti, tu)| {
                        if taken[*ti] {
                            return false;
                        }
                        match (&unit.xi_rows, &tu.xi_rows) {
                            (Some(a), Some(b)) => (0..g.a_lambda).all(|xi| {
                                rp[a[xi as usize] as usize]
                                    == b[(xi * m % g.a_lambda) as usize]
                            }),
                            (None, None) => {
                                let moved: std::collections::HashSet<u32> = unit
                                    .constituents
                                    .iter()
                                    .map(|&r| rp[r as usize])
                                    .collect();
                                let set: std::collections::HashSet<u32> =
                                    tu.constituents.iter().copied().collect();
                                moved == set
                            }
                            _ => false,
                        }
                    });
                    match matched {
                        Some((ti, _)) => taken[ti] = true,
                        None => {
                            return Err(OracleError::Verification(format!(
                                "{}: outer action on group {gi} does not match the label action",
                                params.sl_name()
                            )))
                        }
                    }
                }
            }
        }
        checks.push(Check::bool(
            format!("{}: outer action matches the label action", params.sl_name()),
            true,
            format!("{} generators", sigmas.len()),
        ));
        Ok(())
    }

    fn unipotent_class_check(
        &self,
        params: &GroupParams,
        checks: &mut Vec<Check>,
    ) -> OracleResult<()> {
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for (c, &rep) in self.sl.classes.reps.iter().enumerate() {
            let o = self.sl.classes.orders[c];
            // unipotent iff the order is a power of p
            let mut oo = u64::from(o);
            while oo % params.p == 0 {
                oo /= params.p;
            }
            if oo != 1 {
                continue;
            }
            *counts.entry(self.sl.group.jordan_type(rep)).or_default() += 1;
        }
        let mut counts: Vec<(Vec<u32>, u64)> = counts.into_iter().collect();
        counts.sort();
        for (nu, count) in counts {
            let part = Partition::new(nu.clone()).unwrap();
            let expected = sl::d_nu(&part, params);
            checks.push(Check::eq(
                format!("{}: rational classes of unipotent type {part}", params.sl_name()),
                expected,
                count,
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::OracleCache;
    use crate::verify::run_pipeline;

    #[test]
    fn pipeline_sl2_3() {
        let params = GroupParams::new(2, 3, 1).unwrap();
        let out = run_pipeline(&params, &OracleCache::disabled()).unwrap();
        for c in &out.checks {
            eprintln!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        }
        assert!(out.checks.iter().all(|c| c.passed));
        // GL_2(3) is small enough that three tensor/Galois-symmetric pairs
        // remain ambiguous ({1, det}, {St, St x det}, the two cuspidals of
        // eighth-order eigenvalues); each pair lies in a single translation
        // family, so the restriction matching is unaffected.
        assert_eq!(out.ambiguity.len(), 3);
        for class in &out.ambiguity {
            assert_eq!(class.len(), 2);
        }
    }
}

