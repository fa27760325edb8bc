//! Exact cyclotomic integer arithmetic for character values.
//!
//! A character value at a class whose representative has order `o` is
//! stored as its eigenvalue-multiplicity vector: `sum_j m_j zeta_o^j` with
//! integer `m_j` (a [`MultVec`] of level `o`).  This representation is
//! canonical for table rows, so rows compare entry-wise.  Inner products
//! accumulate in `Z[x]/(x^N - 1)` at the group exponent `N` and are
//! reduced modulo the cyclotomic polynomial `Phi_N` at the end, which is
//! the canonical reduced encoding: equality of reduced vectors is equality
//! of cyclotomic integers.

use serde::{Deserialize, Serialize};

use crate::error::{OracleError, OracleResult};

/// A cyclotomic integer at a fixed level: `sum coeffs[j] * zeta_level^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultVec {
    pub level: u32,
    pub coeffs: Vec<i64>,
}

impl MultVec {
    pub fn zero(level: u32) -> MultVec {
        MultVec {
            level,
            coeffs: vec![0; level as usize],
        }
    }

    pub fn integer(level: u32, value: i64) -> MultVec {
        let mut v = MultVec::zero(level);
        v.coeffs[0] = value;
        v
    }

    /// Complex conjugation: `zeta^j -> zeta^{-j}`.
    pub fn conj(&self) -> MultVec {
        let n = self.level as usize;
        let mut out = MultVec::zero(self.level);
        for j in 0..n {
            out.coeffs[(n - j) % n] = self.coeffs[j];
        }
        out
    }

    /// Multiply by `zeta_level^shift`.
    pub fn rotate(&self, shift: u32) -> MultVec {
        let n = self.level as usize;
        let s = (shift as usize) % n;
        let mut out = MultVec::zero(self.level);
        for j in 0..n {
            out.coeffs[(j + s) % n] = self.coeffs[j];
        }
        out
    }

    /// Galois twist `zeta^j -> zeta^{k j}` (`k` coprime to the level).
    pub fn galois(&self, k: u64) -> MultVec {
        let n = self.level as usize;
        let mut out = MultVec::zero(self.level);
        for j in 0..n {
            out.coeffs[(j * (k as usize % n)) % n] += self.coeffs[j];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Accumulator in `Z[x]/(x^N - 1)`.
#[derive(Debug, Clone)]
pub struct CycAcc {
    pub n: u32,
    pub coeffs: Vec<i128>,
}

impl CycAcc {
    pub fn zero(n: u32) -> CycAcc {
        CycAcc {
            n,
            coeffs: vec![0; n as usize],
        }
    }

    /// Add `weight * a * (b or conj(b))`, where `a` and `b` are values
    /// whose levels divide `N`.
    pub fn add_prod(&mut self, a: &MultVec, b: &MultVec, conj_b: bool, weight: i128) {
        let n = self.n as usize;
        let sa = (self.n / a.level) as usize;
        let sb = (self.n / b.level) as usize;
        debug_assert_eq!(self.n % a.level, 0);
        debug_assert_eq!(self.n % b.level, 0);
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ca = i128::from(ca) * weight;
            let base = i * sa;
            for (j, &cb) in b.coeffs.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let idx = if conj_b {
                    (base + n - j * sb % n) % n
                } else {
                    (base + j * sb) % n
                };
                self.coeffs[idx] += ca * i128::from(cb);
            }
        }
    }

    pub fn add_value(&mut self, a: &MultVec, weight: i128) {
        let sa = (self.n / a.level) as usize;
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca != 0 {
                self.coeffs[i * sa] += i128::from(ca) * weight;
            }
        }
    }
}

/// Reduction context: the cyclotomic polynomial `Phi_N`.
pub struct CycContext {
    pub n: u32,
    /// Monic `Phi_N`, little-endian coefficients.
    phi: Vec<i128>,
}

impl CycContext {
    pub fn new(n: u32) -> CycContext {
        CycContext {
            n,
            phi: cyclotomic_poly(n),
        }
    }

    /// Canonical form: remainder of the accumulator mod `Phi_N`, length
    /// `deg Phi_N = phi(N)`.
    pub fn reduce(&self, acc: &CycAcc) -> Vec<i128> {
        debug_assert_eq!(acc.n, self.n);
        let deg = self.phi.len() - 1;
        let mut a = acc.coeffs.clone();
        for i in (deg..a.len()).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            a[i] = 0;
            let base = i - deg;
            for (j, &pj) in self.phi.iter().enumerate().take(deg) {
                a[base + j] -= c * pj;
            }
        }
        a.truncate(deg.max(1));
        a
    }

    /// If the accumulator is a rational integer, return it.
    pub fn as_integer(&self, acc: &CycAcc) -> OracleResult<i128> {
        let r = self.reduce(acc);
        if r[1..].iter().any(|&c| c != 0) {
            return Err(OracleError::Tripwire(
                "cyclotomic value expected to be a rational integer".into(),
            ));
        }
        Ok(r[0])
    }
}

/// `Phi_n` by iterated exact division of `x^d - 1` by the cyclotomic
/// polynomials of proper divisors.
fn cyclotomic_poly(n: u32) -> Vec<i128> {
    let mut cache: Vec<(u32, Vec<i128>)> = Vec::new();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        // x^d - 1
        let mut num = vec![0i128; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (dd, phi) in &cache {
            if d % dd == 0 {
                num = poly_div_exact(&num, phi);
            }
        }
        cache.push((d, num));
    }
    cache.pop().unwrap().1
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut num = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1, "monic divisor");
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i128; qd + 1];
    for i in (0..=qd).rev() {
        let c = num[i + dd];
        q[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &dj) in den.iter().enumerate() {
            num[i + j] -= c * dj;
        }
    }
    debug_assert!(num.iter().all(|&c| c == 0), "exact division");
    q
}
