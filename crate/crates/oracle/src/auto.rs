//! Concrete automorphisms of the matrix groups and the permutations they
//! induce on conjugacy classes and character-table rows.

use std::collections::HashMap;

use crate::classes::ClassData;
use crate::error::{OracleError, OracleResult};
use crate::group::MatrixGroup;
use crate::matrix::Mat;
use crate::table::CharacterTable;

/// A realized automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcreteAut {
    /// Entrywise `x -> x^{p^k}`.
    FieldPower(u32),
    /// `g -> J (g^T)^{-1} J^{-1}` with the alternating antidiagonal `J`,
    /// which preserves the standard pinning (linear forms only).
    Graph,
    /// Conjugation by `tau^z` for the diagonal representative `tau`.
    DiagConj(u64),
    /// Conjugation by an arbitrary element of the full group.
    ConjBy(Mat),
}

/// The alternating antidiagonal matrix `J_{i, n+1-i} = (-1)^{i-1}`.
pub fn graph_twist_matrix(g: &MatrixGroup) -> Mat {
    let n = g.params.n as usize;
    let f = &g.field;
    let mut j = Mat::zero(n);
    for i in 0..n {
        let v = if i % 2 == 0 { f.one() } else { f.neg(f.one()) };
        j.set(i, n - 1 - i, v);
    }
    j
}

impl ConcreteAut {
    pub fn apply(&self, g: &MatrixGroup, m: &Mat) -> Mat {
        let f = &g.field;
        match self {
            ConcreteAut::FieldPower(k) => m.frob(f, *k),
            ConcreteAut::Graph => {
                let j = graph_twist_matrix(g);
                let jinv = j.inverse(f);
                j.mul(&m.inverse(f).transpose(), f).mul(&jinv, f)
            }
            ConcreteAut::DiagConj(z) => {
                let tau = g.diag_rep();
                let mut tz = Mat::identity(g.params.n as usize, f);
                for _ in 0..*z {
                    tz = tz.mul(&tau, f);
                }
                tz.mul(m, f).mul(&tz.inverse(f), f)
            }
            ConcreteAut::ConjBy(t) => t.mul(m, f).mul(&t.inverse(f), f),
        }
    }

    pub fn inverse(&self, g: &MatrixGroup) -> ConcreteAut {
        match self {
            ConcreteAut::FieldPower(k) => {
                let e = g.field.e;
                ConcreteAut::FieldPower((e - k % e) % e)
            }
            ConcreteAut::Graph => ConcreteAut::Graph,
            ConcreteAut::DiagConj(z) => ConcreteAut::ConjBy({
                let f = &g.field;
                let tau = g.diag_rep();
                let mut tz = Mat::identity(g.params.n as usize, f);
                for _ in 0..*z {
                    tz = tz.mul(&tau, f);
                }
                tz.inverse(f)
            }),
            ConcreteAut::ConjBy(t) => ConcreteAut::ConjBy(t.inverse(&g.field)),
        }
    }
}

/// `cperm[c]` = class of `sigma^{-1}(rep_c)`; the permuted character row
/// is `row'[c] = row[cperm[c]]`.
pub fn class_perm(
    g: &MatrixGroup,
    classes: &ClassData,
    sigma: &ConcreteAut,
) -> OracleResult<Vec<u32>> {
    let sigma_inv = sigma.inverse(g);
    let mut perm = Vec::with_capacity(classes.count());
    for &rep in &classes.reps {
        let img = sigma_inv.apply(g, &g.mat(rep));
        let idx = g.lookup(&img).ok_or_else(|| {
            OracleError::Tripwire("automorphism image left the group".into())
        })?;
        perm.push(classes.class_of[idx as usize]);
    }
    // sanity: must be a bijection
    let mut seen = vec![false; perm.len()];
    for &c in &perm {
        if seen[c as usize] {
            return Err(OracleError::Tripwire("class map not a bijection".into()));
        }
        seen[c as usize] = true;
    }
    Ok(perm)
}

/// Lookup structure from row values to row index.
pub struct RowIndex {
    map: HashMap<Vec<i64>, u32>,
}

impl RowIndex {
    pub fn new(table: &CharacterTable) -> RowIndex {
        let mut map = HashMap::new();
        for (r, row) in table.rows.iter().enumerate() {
            map.insert(CharacterTable::row_key(row), r as u32);
        }
        RowIndex { map }
    }

    pub fn find(&self, values: &[crate::cyclo::MultVec]) -> Option<u32> {
        self.map.get(&CharacterTable::row_key(values)).copied()
    }
}

/// Permutation of table rows induced by an automorphism:
/// `rperm[r]` is the row of the composed character `chi_r o sigma^{-1}`.
pub fn row_perm(
    table: &CharacterTable,
    index: &RowIndex,
    cperm: &[u32],
) -> OracleResult<Vec<u32>> {
    let mut out = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let moved: Vec<crate::cyclo::MultVec> =
            cperm.iter().map(|&c| row[c as usize].clone()).collect();
        let r = index.find(&moved).ok_or_else(|| {
            OracleError::Tripwire("permuted row is not a character row".into())
        })?;
        out.push(r);
    }
    Ok(out)
}

/// Permutation of rows induced by tensoring with the determinant character
/// `theta_j(g) = zeta_{q-eps}^{j * dlog det g}`.
pub fn tensor_perm(
    g: &MatrixGroup,
    classes: &ClassData,
    table: &CharacterTable,
    index: &RowIndex,
    j: u64,
) -> OracleResult<Vec<u32>> {
    let qm = g.det_group_order();
    // per-class rotation amounts
    let mut rot = Vec::with_capacity(classes.count());
    for (c, &rep) in classes.reps.iter().enumerate() {
        let r = (j % qm) * g.det_dlog(rep) % qm;
        let o = u64::from(classes.orders[c]);
        if !(r * o).is_multiple_of(qm) {
            return Err(OracleError::Tripwire(
                "determinant character order does not divide the element order".into(),
            ));
        }
        rot.push(((r * o / qm) % o) as u32);
    }
    let mut out = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let moved: Vec<crate::cyclo::MultVec> = row
            .iter()
            .zip(rot.iter())
            .map(|(v, &s)| v.rotate(s))
            .collect();
        let r = index.find(&moved).ok_or_else(|| {
            OracleError::Tripwire("tensored row is not a character row".into())
        })?;
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassData;
    use crate::group::GroupKind;
    use crate::table::character_table;
    use slchar_core::GroupParams;

    #[test]
    fn inner_conjugation_is_identity() {
        let p = GroupParams::new(2, 3, 1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let classes = ClassData::compute(&g).unwrap();
        let table = character_table(&g, &classes).unwrap();
        let index = RowIndex::new(&table);
        // conjugation by an element of G itself
        let t = g.mat(5);
        let cperm = class_perm(&g, &classes, &ConcreteAut::ConjBy(t)).unwrap();
        let rperm = row_perm(&table, &index, &cperm).unwrap();
        assert!(rperm.iter().enumerate().all(|(i, &j)| i as u32 == j));
    }

    #[test]
    fn graph_twist_preserves_pinning() {
        // gamma(x_{i,i+1}(t)) = x_{n-i-1,n-i}(t): the superdiagonal root
        // subgroups are permuted with coefficient +t.
        let p = GroupParams::new(3, 4, 1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let f = &g.field;
        for i in 0..2usize {
            for t in 1..f.size {
                let mut x = Mat::identity(3, f);
                x.set(i, i + 1, t);
                let img = ConcreteAut::Graph.apply(&g, &x);
                let mut want = Mat::identity(3, f);
                want.set(1 - i, 2 - i, t);
                assert_eq!(img, want, "i={i}, t={t}");
            }
        }
    }

    #[test]
    fn field_power_permutes_su_classes() {
        let p = GroupParams::new(3, 2, -1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let classes = ClassData::compute(&g).unwrap();
        let table = character_table(&g, &classes).unwrap();
        let index = RowIndex::new(&table);
        let cperm = class_perm(&g, &classes, &ConcreteAut::FieldPower(1)).unwrap();
        let rperm = row_perm(&table, &index, &cperm).unwrap();
        // F_2 is an involution modulo inner automorphisms on SU_3(2).
        for (i, &j) in rperm.iter().enumerate() {
            assert_eq!(rperm[j as usize], i as u32);
        }
    }

    #[test]
    fn tensor_by_det_character_permutes_gl_rows() {
        let p = GroupParams::new(2, 3, 1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Full).unwrap();
        let classes = ClassData::compute(&g).unwrap();
        let table = character_table(&g, &classes).unwrap();
        let index = RowIndex::new(&table);
        let t1 = tensor_perm(&g, &classes, &table, &index, 1).unwrap();
        // twisting twice by the generator = twisting by j = 2
        let t2 = tensor_perm(&g, &classes, &table, &index, 2).unwrap();
        let composed: Vec<u32> = (0..t1.len()).map(|r| t1[t1[r] as usize]).collect();
        assert_eq!(composed, t2);
        // twisting q-1 times is the identity
        let mut acc: Vec<u32> = (0..t1.len() as u32).collect();
        for _ in 0..g.det_group_order() {
            acc = acc.iter().map(|&r| t1[r as usize]).collect();
        }
        assert!(acc.iter().enumerate().all(|(i, &j)| i as u32 == j));
    }
}
