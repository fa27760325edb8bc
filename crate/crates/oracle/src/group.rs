//! Explicit construction of the small matrix groups
//! `GL_n(q), SL_n(q), GU_n(q), SU_n(q)`.
//!
//! Unitary groups are the isometries of the Hermitian form with the
//! antidiagonal Gram matrix `J` over `GF(q^2)`, which makes the upper
//! unitriangular elements a Sylow p-subgroup in all four cases.  Groups
//! are generated by closing the full upper/lower unitriangular subgroups
//! and the diagonal torus under multiplication, breadth first, giving a
//! canonical element order.  Elements are stored as packed `u128` keys.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slchar_core::GroupParams;

use crate::error::{OracleError, OracleResult};
use crate::field::FieldTable;
use crate::matrix::Mat;

/// Enumeration bound on the ambient group order.
pub const ORDER_BOUND: u64 = 200_000;

/// Which member of the pair to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `GL_n^eps(q)`: all invertible (unitary) matrices.
    Full,
    /// `SL_n^eps(q)`: the determinant-one subgroup.
    Special,
}

/// Multiply-fold hasher for packed matrix keys.
#[derive(Default)]
pub struct KeyHasher {
    state: u64,
}

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.state
    }

    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut v = [0u8; 8];
            v[..chunk.len()].copy_from_slice(chunk);
            self.state = (self.state ^ u64::from_le_bytes(v)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            self.state ^= self.state >> 29;
        }
    }
}

pub type KeyMap<V> = HashMap<u128, V, BuildHasherDefault<KeyHasher>>;

pub struct MatrixGroup {
    pub params: GroupParams,
    pub kind: GroupKind,
    pub field: Arc<FieldTable>,
    /// Bits per entry in the packed key.
    pub bits: u32,
    /// Antidiagonal Hermitian Gram matrix (unitary case only).
    pub form: Option<Mat>,
    /// Canonical element list in BFS discovery order; index 0 is the identity.
    pub elems: Vec<u128>,
    pub index: KeyMap<u32>,
    /// Indices of the generators inside `elems`.
    pub gens: Vec<u32>,
}

impl MatrixGroup {
    /// Build the group by breadth-first closure.  Errors if the ambient
    /// order exceeds [`ORDER_BOUND`].
    pub fn build(params: &GroupParams, kind: GroupKind) -> OracleResult<MatrixGroup> {
        let order = match kind {
            GroupKind::Full => params.gl_order(),
            GroupKind::Special => params.sl_order(),
        };
        let gl_order = params.gl_order();
        if gl_order.to_u64().is_none_or(|o| o > ORDER_BOUND) && order.to_u64().is_none_or(|o| o > ORDER_BOUND) {
            return Err(OracleError::Resource(format!(
                "|{}| = {gl_order} exceeds the enumeration bound {ORDER_BOUND}",
                params.gl_name()
            )));
        }
        let order = order.to_u64().ok_or_else(|| {
            OracleError::Resource(format!("group order {order} too large"))
        })?;
        if order > ORDER_BOUND {
            return Err(OracleError::Resource(format!(
                "group order {order} exceeds the enumeration bound {ORDER_BOUND}"
            )));
        }

        let e_table = if params.epsilon == 1 {
            params.e
        } else {
            2 * params.e
        };
        let field = Arc::new(FieldTable::new(params.p, e_table)?);
        let n = params.n as usize;
        let bits = 32 - (field.size - 1).leading_zeros();
        if (n * n) as u32 * bits > 128 {
            return Err(OracleError::Resource(format!(
                "cannot pack {n}x{n} matrices over GF({}) into 128 bits",
                field.size
            )));
        }

        let form = if params.epsilon == -1 {
            let mut j = Mat::zero(n);
            for i in 0..n {
                j.set(i, n - 1 - i, field.one());
            }
            Some(j)
        } else {
            None
        };

        let mut group = MatrixGroup {
            params: *params,
            kind,
            field,
            bits,
            form,
            elems: Vec::with_capacity(order as usize),
            index: KeyMap::default(),
            gens: Vec::new(),
        };

        let gens = group.generator_matrices();
        group.close_under(&gens, order)?;
        group.spot_check()?;
        Ok(group)
    }

    fn is_member(&self, m: &Mat) -> bool {
        let f = &self.field;
        let det = m.det(f);
        if det == 0 {
            return false;
        }
        if let Some(j) = &self.form {
            // g J (g^q)^T == J
            let conj_t = m.entry_pow(f, self.params.q).transpose();
            if m.mul(j, f).mul(&conj_t, f) != *j {
                return false;
            }
        }
        match self.kind {
            GroupKind::Full => true,
            GroupKind::Special => det == self.field.one(),
        }
    }

    /// Upper and lower unitriangular members plus the diagonal torus, each
    /// enumerated in odometer order over entry ids.
    fn generator_matrices(&self) -> Vec<Mat> {
        let n = self.params.n as usize;
        let f = &self.field;
        let mut gens = Vec::new();

        let scan_triangular = |upper: bool, gens: &mut Vec<Mat>| {
            let coords: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| if upper { j > i } else { j < i })
                .collect();
            let k = coords.len();
            let mut digits = vec![0u32; k];
            loop {
                let mut m = Mat::identity(n, f);
                for (idx, &(i, j)) in coords.iter().enumerate() {
                    m.set(i, j, digits[idx]);
                }
                if self.is_member(&m) {
                    gens.push(m);
                }
                // odometer
                let mut pos = 0;
                loop {
                    if pos == k {
                        return;
                    }
                    digits[pos] += 1;
                    if digits[pos] < f.size {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
            }
        };
        scan_triangular(true, &mut gens);
        scan_triangular(false, &mut gens);

        // Diagonal torus.
        let mut digits = vec![1u32; n];
        'torus: loop {
            let mut m = Mat::zero(n);
            for (i, &d) in digits.iter().enumerate() {
                m.set(i, i, d);
            }
            if self.is_member(&m) {
                gens.push(m);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'torus;
                }
                digits[pos] += 1;
                if digits[pos] < f.size {
                    break;
                }
                digits[pos] = 1;
                pos += 1;
            }
        }
        gens
    }

    fn close_under(&mut self, gens: &[Mat], expected_order: u64) -> OracleResult<()> {
        let n = self.params.n as usize;
        let id = Mat::identity(n, &self.field);
        let id_key = id.encode(self.bits);
        self.elems.push(id_key);
        self.index.insert(id_key, 0);

        let mut gen_keys: Vec<u128> = Vec::new();
        for g in gens {
            let k = g.encode(self.bits);
            if !self.index.contains_key(&k) {
                let idx = self.elems.len() as u32;
                self.elems.push(k);
                self.index.insert(k, idx);
            }
            gen_keys.push(k);
        }
        self.gens = gen_keys
            .iter()
            .map(|k| self.index[k])
            .collect::<Vec<u32>>();
        self.gens.sort_unstable();
        self.gens.dedup();

        let mut queue: VecDeque<u32> = (0..self.elems.len() as u32).collect();
        while let Some(i) = queue.pop_front() {
            let m = self.mat(i);
            for g in gens {
                let prod = m.mul(g, &self.field);
                let key = prod.encode(self.bits);
                if !self.index.contains_key(&key) {
                    let idx = self.elems.len() as u32;
                    if idx as u64 >= expected_order {
                        return Err(OracleError::Tripwire(format!(
                            "closure exceeded the expected order {expected_order}"
                        )));
                    }
                    self.elems.push(key);
                    self.index.insert(key, idx);
                    queue.push_back(idx);
                }
            }
        }
        if self.elems.len() as u64 != expected_order {
            return Err(OracleError::Tripwire(format!(
                "closure produced {} elements, expected {expected_order}",
                self.elems.len()
            )));
        }
        Ok(())
    }

    /// Probabilistic sanity check with a fixed seed: closure and
    /// associativity on random triples.
    fn spot_check(&self) -> OracleResult<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let n = self.elems.len() as u32;
        for _ in 0..1000 {
            let a = self.mat(rng.gen_range(0..n));
            let b = self.mat(rng.gen_range(0..n));
            let c = self.mat(rng.gen_range(0..n));
            let ab = a.mul(&b, &self.field);
            if !self.index.contains_key(&ab.encode(self.bits)) {
                return Err(OracleError::Tripwire("closure violated".into()));
            }
            if ab.mul(&c, &self.field) != a.mul(&b.mul(&c, &self.field), &self.field) {
                return Err(OracleError::Tripwire("associativity violated".into()));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    #[inline]
    pub fn mat(&self, i: u32) -> Mat {
        Mat::decode(self.elems[i as usize], self.params.n as usize, self.bits)
    }

    #[inline]
    pub fn lookup(&self, m: &Mat) -> Option<u32> {
        self.index.get(&m.encode(self.bits)).copied()
    }

    pub fn mul_idx(&self, i: u32, j: u32) -> u32 {
        let prod = self.mat(i).mul(&self.mat(j), &self.field);
        self.index[&prod.encode(self.bits)]
    }

    pub fn inv_idx(&self, i: u32) -> u32 {
        let inv = self.mat(i).inverse(&self.field);
        self.index[&inv.encode(self.bits)]
    }

    pub fn order_of(&self, i: u32) -> u32 {
        let m = self.mat(i);
        let id = Mat::identity(self.params.n as usize, &self.field);
        let mut cur = m;
        let mut ord = 1;
        while cur != id {
            cur = cur.mul(&m, &self.field);
            ord += 1;
        }
        ord
    }

    /// Order of the determinant group: `q - eps`.
    pub fn det_group_order(&self) -> u64 {
        self.params.q_minus_eps()
    }

    /// Canonical generator of the determinant target group: `alpha` for
    /// the linear case, the norm-one generator `beta = alpha^{(q^2-1)/(q+1)}`
    /// of `mu_{q+1}` for the unitary case.
    pub fn det_generator(&self) -> u32 {
        let f = &self.field;
        if self.params.epsilon == 1 {
            f.alpha()
        } else {
            let m = u64::from(f.size - 1) / (self.params.q + 1);
            f.exp(m)
        }
    }

    /// Discrete log of `det(g)` with respect to the canonical generator,
    /// in `Z/(q - eps)`.
    pub fn det_dlog(&self, i: u32) -> u64 {
        let f = &self.field;
        let det = self.mat(i).det(f);
        let qm = self.det_group_order();
        let l = u64::from(f.log(det));
        let step = u64::from(f.size - 1) / qm;
        debug_assert_eq!(l % step, 0, "determinant outside mu_(q-eps)");
        (l / step) % qm
    }

    /// The scalar matrix `z * I` for a field element `z`.
    pub fn scalar(&self, z: u32) -> Mat {
        let n = self.params.n as usize;
        let f = &self.field;
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.set(i, i, z);
        }
        debug_assert_eq!(f.mul(z, f.inv(z)), 1);
        m
    }

    /// Generator of the scalar subgroup of the full group:
    /// `beta * I` with `beta` of order `q - eps`.
    pub fn central_generator(&self) -> Mat {
        self.scalar(self.det_generator())
    }

    /// The diagonal-conjugation representative `tau = diag(beta, 1, ..., 1)`
    /// (linear) or `diag(beta, 1, ..., 1, beta^{-q})` (unitary), an element
    /// of the full group whose determinant generates the target group.
    pub fn diag_rep(&self) -> Mat {
        let n = self.params.n as usize;
        let f = &self.field;
        let mut m = Mat::identity(n, f);
        if self.params.epsilon == 1 {
            m.set(0, 0, f.alpha());
        } else {
            // diag(a^-1, 1, .., 1, a^q) is unitary for the antidiagonal form
            // and has determinant a^{q-1} = det_generator().
            let a = f.alpha();
            m.set(0, 0, f.inv(a));
            m.set(n - 1, n - 1, f.pow(a, self.params.q));
        }
        m
    }

    /// Jordan type of a unipotent element, as the partition of `n` sorted
    /// decreasing.
    pub fn jordan_type(&self, i: u32) -> Vec<u32> {
        let n = self.params.n as usize;
        let f = &self.field;
        let m = self.mat(i);
        let id = Mat::identity(n, f);
        // N = m - 1; ranks of N^k determine the block sizes.
        let mut nm = m;
        for r in 0..n {
            nm.set(r, r, f.sub(nm.get(r, r), f.one()));
        }
        let mut ranks = vec![n];
        let mut pw = id;
        for _ in 1..=n {
            pw = pw.mul(&nm, f);
            ranks.push(pw.rank(f));
        }
        // number of blocks of size >= k is rank(N^{k-1}) - rank(N^k)
        let mut parts = Vec::new();
        for k in 1..=n {
            let ge_k = ranks[k - 1] - ranks[k];
            parts.push(ge_k as u32);
        }
        // parts[k-1] = #blocks of size >= k; convert to partition
        let mut out = Vec::new();
        for k in (1..=n).rev() {
            let exactly = parts[k - 1] - if k < n { parts[k] } else { 0 };
            for _ in 0..exactly {
                out.push(k as u32);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, q: u64, eps: i8) -> GroupParams {
        GroupParams::new(n, q, eps).unwrap()
    }

    #[test]
    fn sl2_3_has_24_elements() {
        let g = MatrixGroup::build(&params(2, 3, 1), GroupKind::Special).unwrap();
        assert_eq!(g.order(), 24);
        let gl = MatrixGroup::build(&params(2, 3, 1), GroupKind::Full).unwrap();
        assert_eq!(gl.order(), 48);
    }

    #[test]
    fn su3_2_has_216_elements() {
        let g = MatrixGroup::build(&params(3, 2, -1), GroupKind::Special).unwrap();
        assert_eq!(g.order(), 216);
        let gu = MatrixGroup::build(&params(3, 2, -1), GroupKind::Full).unwrap();
        assert_eq!(gu.order(), 648);
    }

    #[test]
    fn resource_bound() {
        assert!(matches!(
            MatrixGroup::build(&params(4, 3, 1), GroupKind::Special),
            Err(OracleError::Resource(_))
        ));
    }

    #[test]
    fn det_dlog_is_a_homomorphism() {
        let g = MatrixGroup::build(&params(2, 5, 1), GroupKind::Full).unwrap();
        let qm = g.det_group_order();
        for i in (0..g.order() as u32).step_by(37) {
            for j in (0..g.order() as u32).step_by(41) {
                let k = g.mul_idx(i, j);
                assert_eq!((g.det_dlog(i) + g.det_dlog(j)) % qm, g.det_dlog(k));
            }
        }
    }

    #[test]
    fn diag_rep_is_in_full_group_with_generating_det() {
        for (n, q, eps) in [(2u32, 3u64, 1i8), (3, 2, -1)] {
            let g = MatrixGroup::build(&params(n, q, eps), GroupKind::Full).unwrap();
            let tau = g.diag_rep();
            let idx = g.lookup(&tau).expect("tau must lie in the full group");
            assert_eq!(g.det_dlog(idx), 1, "tau generates the determinant group");
        }
    }

    #[test]
    fn jordan_types_partition_unipotents() {
        // SL_2(3): the 8 elements of order 3 are regular unipotent.
        let g = MatrixGroup::build(&params(2, 3, 1), GroupKind::Special).unwrap();
        let mut regular = 0;
        for i in 0..g.order() as u32 {
            if g.order_of(i) == 3 {
                assert_eq!(g.jordan_type(i), vec![2]);
                regular += 1;
            }
        }
        assert_eq!(regular, 8);
        assert_eq!(g.jordan_type(0), vec![1, 1]);
    }
}
