//! Group parameters `(n, q = p^e, epsilon)` and the order formulas.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};

/// Parameters of the group pair `(SL_n^eps(q), GL_n^eps(q))`.
///
/// `epsilon = +1` selects the split (linear) form, `epsilon = -1` the
/// unitary form `SU_n(q) <= GU_n(q)`, whose Frobenius twists the standard
/// one by the graph automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    pub n: u32,
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub epsilon: i8,
}

fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupParams {
    /// Build and validate parameters from `(n, q, epsilon)`.
    ///
    /// `q` is factored as `p^e` by trial division; `epsilon` must be `+1`
    /// or `-1` and `n >= 1`.
    pub fn new(n: u32, q: u64, epsilon: i8) -> CoreResult<Self> {
        if n == 0 {
            return Err(CoreError::InvalidParams("n must be at least 1".into()));
        }
        if epsilon != 1 && epsilon != -1 {
            return Err(CoreError::InvalidParams(format!(
                "epsilon must be +1 or -1, got {epsilon}"
            )));
        }
        if q < 2 {
            return Err(CoreError::InvalidParams(format!(
                "q must be a prime power >= 2, got {q}"
            )));
        }
        // Smallest prime factor of q must generate all of it.
        let mut p = 2u64;
        while !q.is_multiple_of(p) {
            p += 1;
        }
        if !is_prime_u64(p) {
            return Err(CoreError::InvalidParams(format!("{p} is not prime")));
        }
        let mut e = 0u32;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(CoreError::InvalidParams(format!(
                "q = {q} is not a prime power"
            )));
        }
        Ok(GroupParams { n, p, e, q, epsilon })
    }

    /// `q - epsilon`, the order of the scalar/translation group.
    pub fn q_minus_eps(&self) -> u64 {
        if self.epsilon == 1 {
            self.q - 1
        } else {
            self.q + 1
        }
    }

    /// `d = gcd(n, q - eps)`, the order of `H^1(F, Z(G))`.
    pub fn d(&self) -> u64 {
        num_integer::gcd(u64::from(self.n), self.q_minus_eps())
    }

    /// `|(eps*q)^d - 1|`: the order of the degree-`d` twisted torus, hence
    /// the universal denominator bound for torsion points of degree `d`.
    pub fn torus_order(&self, d: u32) -> BigInt {
        let q = BigInt::from(self.q);
        let qe = q.pow(d);
        if self.epsilon == 1 || d.is_multiple_of(2) {
            qe - BigInt::one()
        } else {
            qe + BigInt::one()
        }
    }

    /// `|GL_n^eps(q)| = q^{n(n-1)/2} * prod_{i=1..n} (q^i - eps^i)`.
    pub fn gl_order(&self) -> BigInt {
        let q = BigInt::from(self.q);
        let mut ord = q.pow(self.n * (self.n - 1) / 2);
        for i in 1..=self.n {
            let sign = if self.epsilon == -1 && i % 2 == 1 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            ord *= q.pow(i) - sign;
        }
        ord
    }

    /// `|SL_n^eps(q)| = |GL_n^eps(q)| / (q - eps)`.
    pub fn sl_order(&self) -> BigInt {
        self.gl_order() / BigInt::from(self.q_minus_eps())
    }

    /// Short human-readable name, e.g. `SL3(4)` or `SU3(2)`.
    pub fn sl_name(&self) -> String {
        if self.epsilon == 1 {
            format!("SL{}({})", self.n, self.q)
        } else {
            format!("SU{}({})", self.n, self.q)
        }
    }

    /// Ambient group name, e.g. `GL3(4)` or `GU3(2)`.
    pub fn gl_name(&self) -> String {
        if self.epsilon == 1 {
            format!("GL{}({})", self.n, self.q)
        } else {
            format!("GU{}({})", self.n, self.q)
        }
    }

    /// Number of field automorphisms of the finite group: `e` for the
    /// linear forms and `2e` for the unitary forms (where the graph
    /// automorphism coincides with `F_p^e` modulo inner automorphisms).
    pub fn field_auto_order(&self) -> u32 {
        if self.epsilon == 1 {
            self.e
        } else {
            2 * self.e
        }
    }
}
