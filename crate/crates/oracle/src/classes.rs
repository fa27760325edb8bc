//! Conjugacy classes by full orbit computation.
//!
//! Classes are discovered in element order: the class of the first
//! unvisited element is closed under conjugation by the group generators,
//! breadth first.  Class 0 is the identity.  Power maps and element orders
//! feed the Dixon lifting.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{OracleError, OracleResult};
use crate::group::MatrixGroup;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassData {
    /// Class index of every element.
    pub class_of: Vec<u32>,
    /// Element index of the canonical representative of each class.
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Class of the inverse of each representative.
    pub inverse_class: Vec<u32>,
    /// Order of each class representative.
    pub orders: Vec<u32>,
    /// `power_class[c][s]` = class of `rep_c^s`, for `s` in `[0, orders[c])`.
    pub power_class: Vec<Vec<u32>>,
    /// lcm of the element orders.
    pub exponent: u64,
}

impl ClassData {
    pub fn compute(group: &MatrixGroup) -> OracleResult<ClassData> {
        let n = group.order() as usize;
        let mut class_of = vec![u32::MAX; n];
        let mut reps: Vec<u32> = Vec::new();
        let mut sizes: Vec<u64> = Vec::new();

        // Precompute generator matrices and inverses.
        let gens: Vec<(crate::matrix::Mat, crate::matrix::Mat)> = group
            .gens
            .iter()
            .map(|&g| {
                let m = group.mat(g);
                (m, m.inverse(&group.field))
            })
            .collect();

        for start in 0..n as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(start);
            let mut size = 0u64;
            let mut queue = VecDeque::new();
            class_of[start as usize] = c;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                size += 1;
                let xm = group.mat(x);
                for (g, ginv) in &gens {
                    let conj = ginv.mul(&xm, &group.field).mul(g, &group.field);
                    let idx = group
                        .lookup(&conj)
                        .ok_or_else(|| OracleError::Tripwire("conjugate left the group".into()))?;
                    if class_of[idx as usize] == u32::MAX {
                        class_of[idx as usize] = c;
                        queue.push_back(idx);
                    }
                }
            }
            sizes.push(size);
        }

        let total: u64 = sizes.iter().sum();
        if total != group.order() {
            return Err(OracleError::Tripwire(format!(
                "class sizes sum to {total}, group order is {}",
                group.order()
            )));
        }

        let k = reps.len();
        let mut inverse_class = vec![0u32; k];
        let mut orders = vec![0u32; k];
        let mut power_class = Vec::with_capacity(k);
        let mut exponent = 1u64;
        for c in 0..k {
            let r = reps[c];
            inverse_class[c] = class_of[group.inv_idx(r) as usize];
            let ord = group.order_of(r);
            orders[c] = ord;
            exponent = num_integer::lcm(exponent, u64::from(ord));
            let mut pows = Vec::with_capacity(ord as usize);
            let mut cur = 0u32; // identity index
            pows.push(class_of[cur as usize]);
            for _ in 1..ord {
                cur = group.mul_idx(cur, r);
                pows.push(class_of[cur as usize]);
            }
            power_class.push(pows);
        }

        Ok(ClassData {
            class_of,
            reps,
            sizes,
            inverse_class,
            orders,
            power_class,
            exponent,
        })
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;
    use slchar_core::GroupParams;

    fn classes(n: u32, q: u64, eps: i8, kind: GroupKind) -> ClassData {
        let p = GroupParams::new(n, q, eps).unwrap();
        let g = MatrixGroup::build(&p, kind).unwrap();
        ClassData::compute(&g).unwrap()
    }

    #[test]
    fn known_class_counts() {
        assert_eq!(classes(2, 3, 1, GroupKind::Special).count(), 7);
        assert_eq!(classes(2, 3, 1, GroupKind::Full).count(), 8);
        assert_eq!(classes(3, 2, 1, GroupKind::Full).count(), 6);
        assert_eq!(classes(2, 5, 1, GroupKind::Special).count(), 9);
        assert_eq!(classes(3, 2, -1, GroupKind::Special).count(), 16);
        assert_eq!(classes(3, 2, -1, GroupKind::Full).count(), 24);
    }

    #[test]
    fn exponents() {
        // exponent(SL_2(3)) = lcm(1,2,3,4,6) = 12
        let c = classes(2, 3, 1, GroupKind::Special);
        assert_eq!(c.exponent, 12);
    }
}

#[cfg(test)]
mod label_crosscheck {
    use super::*;
    use crate::group::{GroupKind, MatrixGroup};
    use slchar_core::{sl, GroupParams, OrbitTable};

    #[test]
    fn label_count_matches_class_count_small() {
        for (n, q, eps) in [(2u32, 3u64, 1i8), (2, 5, 1), (3, 2, 1), (3, 2, -1)] {
            let p = GroupParams::new(n, q, eps).unwrap();
            let t = OrbitTable::for_group(&p).unwrap();
            let labels = sl::sl_class_count(&t).unwrap();
            let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
            let classes = ClassData::compute(&g).unwrap();
            assert_eq!(labels, classes.count() as u64, "{}", p.sl_name());
        }
    }

    #[test]
    #[ignore]
    fn label_count_matches_class_count_large() {
        for (n, q, eps) in [(2u32, 7u64, 1i8), (3, 3, 1), (3, 4, 1), (3, 3, -1), (4, 2, -1)] {
            let p = GroupParams::new(n, q, eps).unwrap();
            let t = OrbitTable::for_group(&p).unwrap();
            let labels = sl::sl_class_count(&t).unwrap();
            let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
            let classes = ClassData::compute(&g).unwrap();
            assert_eq!(labels, classes.count() as u64, "{}", p.sl_name());
            eprintln!("{}: {} classes == labels", p.sl_name(), labels);
        }
    }
}
