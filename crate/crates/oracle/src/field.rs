//! Small finite fields with exp/log tables and Zech-logarithm addition.
//!
//! Elements are encoded as integers in `[0, Q)`: the base-p digits are the
//! coefficients of the polynomial representative, so `0` is zero, `1` is
//! one and `p` is the generator `x`.  The defining polynomial is the
//! lexicographically least monic polynomial for which `x` has
//! multiplicative order `Q - 1`; such a polynomial is automatically
//! irreducible and primitive, and the choice is canonical across runs.

use crate::error::{OracleError, OracleResult};

pub const ZECH_ZERO: u32 = u32::MAX;

#[derive(Debug)]
pub struct FieldTable {
    pub p: u32,
    /// Extension degree of the table field over the prime field.
    pub e: u32,
    /// Field size `Q = p^e`.
    pub size: u32,
    /// `exp[k]` = element id of `alpha^k`, for `k` in `[0, Q-1)`.
    exp: Vec<u32>,
    /// `log[id]` for nonzero ids; `log[0]` is a sentinel.
    log: Vec<u32>,
    /// `zech[k]` with `1 + alpha^k = alpha^{zech[k]}`, or [`ZECH_ZERO`].
    zech: Vec<u32>,
}

impl FieldTable {
    pub fn new(p: u64, e: u32) -> OracleResult<FieldTable> {
        let size = p
            .checked_pow(e)
            .filter(|&s| s <= 1 << 20)
            .ok_or_else(|| OracleError::Resource(format!("field GF({p}^{e}) too large")))?;
        let p = p as u32;
        let size = size as u32;

        let (exp, log) = if e == 1 {
            prime_field_tables(p)?
        } else {
            extension_field_tables(p, e, size)?
        };

        // Zech table: 1 + alpha^k as a logarithm.
        let mut zech = vec![ZECH_ZERO; (size - 1) as usize];
        for k in 0..(size - 1) as usize {
            let s = add_digits(1, exp[k], p, size);
            zech[k] = if s == 0 { ZECH_ZERO } else { log[s as usize] };
        }
        Ok(FieldTable {
            p,
            e,
            size,
            exp,
            log,
            zech,
        })
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// The fixed primitive element (the identity for GF(2), whose unit
    /// group is trivial).
    pub fn alpha(&self) -> u32 {
        self.exp[1 % (self.size - 1) as usize]
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % u64::from(self.size - 1)) as usize]
    }

    /// Addition through the Zech table.
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let (lo, hi) = if la <= lb { (la, lb) } else { (lb, la) };
        let z = self.zech[(hi - lo) as usize];
        if z == ZECH_ZERO {
            0
        } else {
            self.exp[((lo + z) % (self.size - 1)) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 || self.p == 2 {
            return a;
        }
        let half = (self.size - 1) / 2;
        self.exp[((self.log[a as usize] + half) % (self.size - 1)) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = u64::from(self.log[a as usize]) + u64::from(self.log[b as usize]);
        self.exp[(l % u64::from(self.size - 1)) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let l = self.log[a as usize];
        self.exp[((self.size - 1 - l) % (self.size - 1)) as usize]
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        k %= u64::from(self.size - 1);
        self.exp[(u64::from(self.log[a as usize]) * k % u64::from(self.size - 1)) as usize]
    }

    /// Frobenius `x -> x^{p^k}`.
    #[inline]
    pub fn frob(&self, a: u32, k: u32) -> u32 {
        let mut pk = 1u64;
        for _ in 0..(k % self.e) {
            pk *= u64::from(self.p);
        }
        self.pow(a, pk)
    }

    /// Iterate all element ids.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size
    }
}

fn prime_field_tables(p: u32) -> OracleResult<(Vec<u32>, Vec<u32>)> {
    if p == 2 {
        return Ok((vec![1], vec![0, 0]));
    }
    // Smallest primitive root.
    let mut g = 1u32;
    'outer: loop {
        g += 1;
        if g >= p {
            return Err(OracleError::Tripwire(format!("no primitive root mod {p}")));
        }
        let mut x = 1u64;
        for k in 1..p {
            x = x * u64::from(g) % u64::from(p);
            if x == 1 {
                if k == p - 1 {
                    break 'outer;
                }
                continue 'outer;
            }
        }
    }
    let mut exp = vec![0u32; (p - 1) as usize];
    let mut log = vec![0u32; p as usize];
    let mut x = 1u64;
    for k in 0..(p - 1) as usize {
        exp[k] = x as u32;
        log[x as usize] = k as u32;
        x = x * u64::from(g) % u64::from(p);
    }
    Ok((exp, log))
}

/// Walk powers of `x` modulo candidate polynomials until one gives `x`
/// full order `Q - 1`; that certifies irreducibility and primitivity at
/// once (the unit group of a non-field quotient is strictly smaller).
fn extension_field_tables(p: u32, e: u32, size: u32) -> OracleResult<(Vec<u32>, Vec<u32>)> {
    let pe = u64::from(p).pow(e) as u32;
    debug_assert_eq!(pe, size);
    let n_candidates = u64::from(p).pow(e);
    for c in 0..n_candidates {
        // Candidate modulus: x^e + sum c_i x^i with digits of c.
        let mut modulus = vec![0u32; (e + 1) as usize];
        let mut cc = c;
        for digit in modulus.iter_mut().take(e as usize) {
            *digit = (cc % u64::from(p)) as u32;
            cc /= u64::from(p);
        }
        modulus[e as usize] = 1;

        if let Some((exp, log)) = try_modulus(p, e, size, &modulus) {
            return Ok((exp, log));
        }
    }
    Err(OracleError::Tripwire(format!(
        "no primitive polynomial found for GF({p}^{e})"
    )))
}

fn try_modulus(p: u32, e: u32, size: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let order = (size - 1) as usize;
    let mut exp = vec![0u32; order];
    let mut log = vec![u32::MAX; size as usize];
    // poly holds the current power of x, little-endian degree < e.
    let mut poly = vec![0u32; e as usize];
    poly[0] = 1;
    for k in 0..order {
        let id = encode(&poly, p);
        if id == 1 && k > 0 {
            return None; // order of x is k < size-1
        }
        exp[k] = id;
        log[id as usize] = k as u32;
        mul_by_x(&mut poly, modulus, p);
    }
    // After size-1 steps we must be back at 1.
    if encode(&poly, p) != 1 {
        return None;
    }
    Some((exp, log))
}

fn encode(poly: &[u32], p: u32) -> u32 {
    let mut id = 0u64;
    for &c in poly.iter().rev() {
        id = id * u64::from(p) + u64::from(c);
    }
    id as u32
}

fn mul_by_x(poly: &mut [u32], modulus: &[u32], p: u32) {
    let e = poly.len();
    let top = poly[e - 1];
    for i in (1..e).rev() {
        poly[i] = poly[i - 1];
    }
    poly[0] = 0;
    if top != 0 {
        // subtract top * modulus (monic, degree e)
        for i in 0..e {
            let sub = (u64::from(top) * u64::from(modulus[i])) % u64::from(p);
            poly[i] = ((u64::from(poly[i]) + u64::from(p) - sub) % u64::from(p)) as u32;
        }
    }
}

/// Digit-wise base-p addition of encoded ids (construction only; runtime
/// addition goes through the Zech table).
fn add_digits(a: u32, b: u32, p: u32, _size: u32) -> u32 {
    let mut out = 0u64;
    let mut mult = 1u64;
    let (mut a, mut b) = (u64::from(a), u64::from(b));
    while a > 0 || b > 0 {
        let s = (a % u64::from(p) + b % u64::from(p)) % u64::from(p);
        out += s * mult;
        mult *= u64::from(p);
        a /= u64::from(p);
        b /= u64::from(p);
    }
    out as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(f: &FieldTable) {
        let n = f.size;
        // multiplicative order of alpha
        let mut x = f.alpha();
        let mut ord = 1;
        while x != 1 {
            x = f.mul(x, f.alpha());
            ord += 1;
        }
        assert_eq!(ord, n - 1, "alpha has full order");
        // distributivity spot check on all triples for small fields
        if n <= 16 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity at ({a},{b},{c})"
                        );
                    }
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
        // Frobenius respects the tables.
        for a in 0..n.min(64) {
            for b in 0..n.min(64) {
                assert_eq!(f.frob(f.mul(a, b), 1), f.mul(f.frob(a, 1), f.frob(b, 1)));
                assert_eq!(f.frob(f.add(a, b), 1), f.add(f.frob(a, 1), f.frob(b, 1)));
            }
        }
    }

    #[test]
    fn gf4_gf8_gf9() {
        for (p, e) in [(2u64, 2u32), (2, 3), (3, 2), (5, 1), (7, 1), (2, 6), (3, 1)] {
            let f = FieldTable::new(p, e).unwrap();
            check_field_axioms(&f);
        }
    }

    #[test]
    fn gf4_structure() {
        let f = FieldTable::new(2, 2).unwrap();
        // alpha = x = id 2; alpha^2 = x+1 = id 3 for the canonical modulus
        // x^2 + x + 1 (the least with primitive x).
        assert_eq!(f.alpha(), 2);
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn frobenius_is_conjugation_of_order_two_over_base(){
        // In GF(q^2), x -> x^q is an involution fixing GF(q).
        let f = FieldTable::new(3, 2).unwrap();
        let q = 3u64;
        for a in f.elements() {
            let c = f.pow(a, q);
            assert_eq!(f.pow(c, q), a);
        }
        let fixed = f.elements().filter(|&a| f.pow(a, q) == a).count();
        assert_eq!(fixed, 3);
    }
}
