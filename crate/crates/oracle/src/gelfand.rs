//! Classical Gelfand-Graev characters, built from regular linear
//! characters of the unitriangular Sylow p-subgroup.
//!
//! The antidiagonal Hermitian form makes the upper unitriangular elements
//! of the unitary groups a Sylow p-subgroup, so the construction is
//! uniform: a linear character of `U` factors through the superdiagonal
//! projection `pi(u) = (u_{i,i+1})_i`, an `F_p`-linear map onto a direct
//! sum of blocks indexed by the simple-root orbits; `psi` is *regular*
//! when it is nontrivial on every block.  The `d = gcd(n, q-eps)` distinct
//! induced characters are indexed by conjugating a fixed base character
//! with powers of the diagonal representative `tau`, after re-basing so
//! that index 0 is the field/graph-stable member of the family.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::classes::ClassData;
use crate::cyclo::{CycAcc, CycContext, MultVec};
use crate::error::{OracleError, OracleResult};
use crate::group::MatrixGroup;
use crate::matrix::Mat;

pub struct UnipotentSubgroup {
    /// Group element indices of the members of `U`, in scan order.
    pub elems: Vec<u32>,
    /// Position within `elems` by group element index.
    pub pos: HashMap<u32, u32>,
    /// `F_p` coordinates of the superdiagonal projection, per member.
    pub coords: Vec<Vec<u8>>,
    pub v_dim: usize,
    /// Spanning coordinate vectors of each simple-root block subspace.
    pub blocks: Vec<Vec<Vec<u8>>>,
    pub p: u32,
}

/// Digits of a field element id in base p (the additive coordinates).
fn digits(mut id: u32, p: u32, e: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push((id % p) as u8);
        id /= p;
    }
    out
}

pub fn unipotent_subgroup(g: &MatrixGroup) -> OracleResult<UnipotentSubgroup> {
    let n = g.params.n as usize;
    let f = &g.field;
    let p = f.p;
    let e = f.e;

    // Members of U: upper unitriangular elements of the group.
    let mut elems = Vec::new();
    let mut raw: Vec<Vec<u8>> = Vec::new();
    for i in 0..g.order() as u32 {
        let m = g.mat(i);
        let mut unitri = true;
        for r in 0..n {
            for c in 0..=r {
                let want = if r == c { f.one() } else { 0 };
                if m.get(r, c) != want {
                    unitri = false;
                    break;
                }
            }
        }
        if !unitri {
            continue;
        }
        elems.push(i);
        let mut v = Vec::with_capacity((n - 1) * e as usize);
        for j in 0..n - 1 {
            v.extend(digits(m.get(j, j + 1), p, e));
        }
        raw.push(v);
    }

    let expected = (g.params.q as u128).pow(g.params.n * (g.params.n - 1) / 2);
    if elems.len() as u128 != expected {
        return Err(OracleError::Tripwire(format!(
            "|U| = {}, expected q^(n(n-1)/2) = {expected}",
            elems.len()
        )));
    }

    // F_p row-reduced basis of V = pi(U).
    let dim_amb = (n - 1) * e as usize;
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for v in &raw {
        let mut w = v.clone();
        reduce_vec(&mut w, &basis, &pivots, p);
        if let Some(piv) = w.iter().position(|&x| x != 0) {
            // normalize pivot to 1
            let inv = mod_inv(w[piv] as u32, p);
            for x in w.iter_mut() {
                *x = ((*x as u32 * inv) % p) as u8;
            }
            // back-substitute into existing rows
            for b in basis.iter_mut() {
                let c = b[piv] as u32;
                if c != 0 {
                    for idx in 0..dim_amb {
                        b[idx] =
                            ((b[idx] as u32 + (p - c) * w[idx] as u32 % p) % p) as u8;
                    }
                }
            }
            let at = pivots.iter().position(|&x| x > piv).unwrap_or(pivots.len());
            basis.insert(at, w);
            pivots.insert(at, piv);
        }
    }
    let v_dim = basis.len();

    // Coordinates of every member.
    let mut coords = Vec::with_capacity(raw.len());
    for v in &raw {
        let mut c = vec![0u8; v_dim];
        let mut w = v.clone();
        for (r, &piv) in pivots.iter().enumerate() {
            let coeff = w[piv] as u32;
            if coeff != 0 {
                c[r] = coeff as u8;
                for idx in 0..dim_amb {
                    w[idx] = ((w[idx] as u32 + (p - coeff) * basis[r][idx] as u32 % p) % p) as u8;
                }
            }
        }
        if w.iter().any(|&x| x != 0) {
            return Err(OracleError::Tripwire("pi(u) outside the computed span".into()));
        }
        coords.push(c);
    }

    // Simple-root blocks of superdiagonal positions.
    let n_pos = n - 1;
    let block_of = |j: usize| -> usize {
        if g.params.epsilon == 1 {
            j
        } else {
            j.min(n_pos - 1 - j)
        }
    };
    let n_blocks = (0..n_pos).map(block_of).max().unwrap_or(0) + 1;
    let mut blocks: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n_blocks];
    for (v, c) in raw.iter().zip(coords.iter()) {
        // support in superdiagonal positions
        let mut support_blocks = [false; 8];
        let mut any = false;
        for j in 0..n_pos {
            if v[j * e as usize..(j + 1) * e as usize].iter().any(|&x| x != 0) {
                support_blocks[block_of(j)] = true;
                any = true;
            }
        }
        if !any {
            continue;
        }
        let in_blocks: Vec<usize> = (0..n_blocks).filter(|&b| support_blocks[b]).collect();
        if in_blocks.len() == 1 {
            blocks[in_blocks[0]].push(c.clone());
        }
    }

    // The blocks must span everything: dim V = sum of block dims.
    let mut block_dim_sum = 0;
    for b in &blocks {
        let mut bb: Vec<Vec<u8>> = Vec::new();
        let mut bp: Vec<usize> = Vec::new();
        for v in b {
            let mut w = v.clone();
            reduce_vec(&mut w, &bb, &bp, p);
            if let Some(piv) = w.iter().position(|&x| x != 0) {
                let inv = mod_inv(w[piv] as u32, p);
                for x in w.iter_mut() {
                    *x = ((*x as u32 * inv) % p) as u8;
                }
                let at = bp.iter().position(|&x| x > piv).unwrap_or(bp.len());
                bb.insert(at, w);
                bp.insert(at, piv);
            }
        }
        block_dim_sum += bb.len();
    }
    if block_dim_sum != v_dim {
        return Err(OracleError::Tripwire(format!(
            "simple-root blocks span dimension {block_dim_sum}, expected {v_dim}"
        )));
    }

    let mut pos = HashMap::new();
    for (i, &el) in elems.iter().enumerate() {
        pos.insert(el, i as u32);
    }
    Ok(UnipotentSubgroup {
        elems,
        pos,
        coords,
        v_dim,
        blocks,
        p,
    })
}

fn reduce_vec(w: &mut [u8], basis: &[Vec<u8>], pivots: &[usize], p: u32) {
    for (b, &piv) in basis.iter().zip(pivots.iter()) {
        let c = w[piv] as u32;
        if c != 0 {
            for idx in 0..w.len() {
                w[idx] = ((w[idx] as u32 + (p - c) * b[idx] as u32 % p) % p) as u8;
            }
        }
    }
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut x = 1u32;
    for _ in 0..p.saturating_sub(2) {
        x = x * a % p;
    }
    x
}

impl UnipotentSubgroup {
    /// All regular linear functionals, as coordinate tuples in
    /// lexicographic order.
    pub fn regular_functionals(&self) -> Vec<Vec<u8>> {
        let p = self.p;
        let mut out = Vec::new();
        let mut phi = vec![0u8; self.v_dim];
        loop {
            if self.is_regular(&phi) {
                out.push(phi.clone());
            }
            // odometer
            let mut i = 0;
            loop {
                if i == self.v_dim {
                    let expected: usize = self
                        .blocks
                        .iter()
                        .map(|b| {
                            let dim = block_dim(b, p);
                            (p as usize).pow(dim as u32) - 1
                        })
                        .product();
                    assert_eq!(out.len(), expected, "regular functional count");
                    return out;
                }
                phi[i] += 1;
                if (phi[i] as u32) < p {
                    break;
                }
                phi[i] = 0;
                i += 1;
            }
        }
    }

    fn is_regular(&self, phi: &[u8]) -> bool {
        self.blocks.iter().all(|b| {
            b.iter().any(|v| self.pair(phi, v) != 0)
        })
    }

    #[inline]
    fn pair(&self, phi: &[u8], coords: &[u8]) -> u8 {
        let mut acc = 0u32;
        for (a, b) in phi.iter().zip(coords.iter()) {
            acc += *a as u32 * *b as u32;
        }
        (acc % self.p) as u8
    }

    /// Exponent of `psi_phi` at the member with position `i`.
    #[inline]
    pub fn exponent(&self, phi: &[u8], i: u32) -> u8 {
        self.pair(phi, &self.coords[i as usize])
    }
}

fn block_dim(b: &[Vec<u8>], p: u32) -> usize {
    let mut bb: Vec<Vec<u8>> = Vec::new();
    let mut bp: Vec<usize> = Vec::new();
    for v in b {
        let mut w = v.clone();
        reduce_vec(&mut w, &bb, &bp, p);
        if let Some(piv) = w.iter().position(|&x| x != 0) {
            let inv = mod_inv(w[piv] as u32, p);
            for x in w.iter_mut() {
                *x = ((*x as u32 * inv) % p) as u8;
            }
            bb.push(w);
            bp.push(piv);
        }
    }
    bb.len()
}

/// The family of Gelfand-Graev characters of a special group, indexed by
/// `Z/d` via `Gamma_z = tau^z`-conjugation of a stable base character.
pub struct GelfandGraevFamily {
    pub d: u64,
    /// `sums[z][c]`: the class sum `S_c = sum_{u in U, class c} zeta_p^{psi_z(u)}`.
    pub sums: Vec<Vec<MultVec>>,
    pub u_order: u64,
    /// Index shift applied to make `Gamma_0` the stable member.
    pub base_shift: u64,
}

/// Class sums of `Ind_U^G psi` for the functional obtained by transporting
/// `phi0` with `tau^z`-conjugation.
fn gamma_sums(
    g: &MatrixGroup,
    classes: &ClassData,
    u: &UnipotentSubgroup,
    phi0: &[u8],
    tau: &Mat,
    z: u64,
    p_level: u32,
) -> OracleResult<Vec<MultVec>> {
    let f = &g.field;
    let mut tz = Mat::identity(g.params.n as usize, f);
    for _ in 0..z {
        tz = tz.mul(tau, f);
    }
    let tz_inv = tz.inverse(f);
    let mut sums = vec![MultVec::zero(p_level); classes.count()];
    for &el in &u.elems {
        let um = g.mat(el);
        let conj = tz_inv.mul(&um, f).mul(&tz, f);
        let cidx = g
            .lookup(&conj)
            .ok_or_else(|| OracleError::Tripwire("tau-conjugate left the group".into()))?;
        let upos = *u
            .pos
            .get(&cidx)
            .ok_or_else(|| OracleError::Tripwire("tau-conjugate left U".into()))?;
        let e = u.exponent(phi0, upos);
        let c = classes.class_of[el as usize] as usize;
        sums[c].coeffs[e as usize] += 1;
    }
    Ok(sums)
}

/// Build the `d` distinct Gelfand-Graev characters.  `stabilizers` are the
/// class permutations of the generators of `<F_p, gamma>`; the base index
/// is shifted so that `Gamma_0` is fixed by all of them.
pub fn gelfand_graev_family(
    g: &MatrixGroup,
    classes: &ClassData,
    u: &UnipotentSubgroup,
    stabilizers: &[Vec<u32>],
) -> OracleResult<GelfandGraevFamily> {
    // The full group has connected centre: all regular characters of U are
    // conjugate and there is a single Gelfand-Graev character.
    let d = match g.kind {
        crate::group::GroupKind::Full => 1,
        crate::group::GroupKind::Special => g.params.d(),
    };
    let p_level = g.field.p;
    let regs = u.regular_functionals();
    let phi0 = regs
        .first()
        .ok_or_else(|| OracleError::Tripwire("no regular functional".into()))?;
    let tau = g.diag_rep();

    let mut sums: Vec<Vec<MultVec>> = Vec::with_capacity(d as usize);
    for z in 0..d {
        sums.push(gamma_sums(g, classes, u, phi0, &tau, z, p_level)?);
    }
    // tau^d acts by an inner-central element: the family closes up.
    let wrap = gamma_sums(g, classes, u, phi0, &tau, d, p_level)?;
    if wrap != sums[0] {
        return Err(OracleError::Tripwire(
            "Gamma_{z+d} != Gamma_z: diagonal indexing is broken".into(),
        ));
    }
    for i in 0..sums.len() {
        for j in i + 1..sums.len() {
            if sums[i] == sums[j] {
                return Err(OracleError::Tripwire(format!(
                    "Gamma_{i} == Gamma_{j}: expected {d} distinct characters"
                )));
            }
        }
    }

    // Re-base: Gamma_0 must be stable under every given automorphism,
    // i.e. its class-sum vector is fixed by the class permutation.
    let mut base_shift = None;
    'zloop: for z in 0..d as usize {
        for perm in stabilizers {
            // ^sigma Gamma has value at class c equal to Gamma at perm[c].
            let moved: Vec<MultVec> = (0..classes.count())
                .map(|c| sums[z][perm[c] as usize].clone())
                .collect();
            if moved != sums[z] {
                continue 'zloop;
            }
        }
        base_shift = Some(z as u64);
        break;
    }
    let base_shift = base_shift.ok_or_else(|| {
        OracleError::Verification(
            "no Gelfand-Graev character is stable under the field/graph generators".into(),
        )
    })?;
    sums.rotate_left(base_shift as usize);

    Ok(GelfandGraevFamily {
        d,
        sums,
        u_order: u.elems.len() as u64,
        base_shift,
    })
}

/// Exact multiplicity `<Gamma, chi>` from the class sums:
/// `(1/|U|) sum_c S_c * conj(chi(c))`.
pub fn gg_multiplicity(
    sums: &[MultVec],
    row: &[MultVec],
    u_order: u64,
    exponent: u64,
    ctx: &CycContext,
) -> OracleResult<i128> {
    let n = exponent.to_u32().unwrap();
    let mut acc = CycAcc::zero(n);
    for (s, v) in sums.iter().zip(row.iter()) {
        acc.add_prod(s, v, true, 1);
    }
    let val = ctx.as_integer(&acc)?;
    if val % u_order as i128 != 0 {
        return Err(OracleError::Tripwire(format!(
            "<Gamma, chi> = {val}/{u_order} is not an integer"
        )));
    }
    Ok(val / u_order as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupKind;
    use crate::table::character_table;
    use slchar_core::GroupParams;

    #[test]
    fn u_subgroup_sizes() {
        for (n, q, eps, want) in [
            (2u32, 3u64, 1i8, 3usize),
            (3, 2, -1, 8),
            (2, 5, 1, 5),
            (3, 2, 1, 8),
        ] {
            let p = GroupParams::new(n, q, eps).unwrap();
            let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
            let u = unipotent_subgroup(&g).unwrap();
            assert_eq!(u.elems.len(), want);
        }
    }

    #[test]
    fn regular_functional_counts() {
        // SL_2(3): q-1 = 2 regular; SU_3(2): q^2-1 = 3 regular.
        let p = GroupParams::new(2, 3, 1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let u = unipotent_subgroup(&g).unwrap();
        assert_eq!(u.regular_functionals().len(), 2);

        let p = GroupParams::new(3, 2, -1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let u = unipotent_subgroup(&g).unwrap();
        assert_eq!(u.regular_functionals().len(), 3);
    }

    #[test]
    fn sl2_3_gamma_decomposition() {
        let p = GroupParams::new(2, 3, 1).unwrap();
        let g = MatrixGroup::build(&p, GroupKind::Special).unwrap();
        let classes = ClassData::compute(&g).unwrap();
        let table = character_table(&g, &classes).unwrap();
        let u = unipotent_subgroup(&g).unwrap();
        let fam = gelfand_graev_family(&g, &classes, &u, &[]).unwrap();
        assert_eq!(fam.d, 2);
        let ctx = CycContext::new(table.exponent as u32);
        for z in 0..2 {
            let mut degs = Vec::new();
            for (r, row) in table.rows.iter().enumerate() {
                let m =
                    gg_multiplicity(&fam.sums[z], row, fam.u_order, table.exponent, &ctx).unwrap();
                assert!(m == 0 || m == 1, "multiplicity-free");
                if m == 1 {
                    degs.push(table.degrees[r]);
                }
            }
            degs.sort_unstable();
            assert_eq!(degs, vec![1, 2, 2, 3], "Gamma_{z} constituent degrees");
        }
        // the two Gamma share exactly the Steinberg-like constituents:
        // total over z covers degree sum 2 * (1+2+2+3) = degree of Res(GG of GL).
    }
}
