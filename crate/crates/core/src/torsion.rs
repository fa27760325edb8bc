//! Prime-to-p torsion points of Q/Z with the twisted Frobenius action.
//!
//! Eigenvalues of semisimple elements are represented intrinsically as
//! reduced rationals mod 1 rather than as elements of concrete extension
//! fields, so the Frobenius `F` acts by multiplication: `tau(t) = eps*q*t`.
//! A [`FrobeniusOrbit`] is a `tau`-closed set of points; semisimple class
//! labels are multisets of orbits.  The total order `(den, num)` on points
//! fixes canonical representatives and makes every enumeration reproducible
//! byte for byte.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CoreError, CoreResult};
use crate::params::GroupParams;

/// Hard ceiling on the degree of enumerated orbits.
pub const DMAX_LIMIT: u32 = 12;

/// Safety cap on the total number of torsion points touched by one
/// enumeration call.
const POINT_BUDGET: u64 = 1 << 23;

/// A reduced rational `num/den` taken mod 1, with `0 <= num < den` and
/// `gcd(num, den) = 1`.  Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionPoint {
    num: BigUint,
    den: BigUint,
}

impl TorsionPoint {
    /// The zero point `0/1`.
    pub fn zero() -> Self {
        TorsionPoint {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    /// Reduce `num/den` mod 1.  `den` must be positive.
    pub fn new(num: &BigInt, den: &BigUint) -> CoreResult<Self> {
        if den.is_zero() {
            return Err(CoreError::InvalidParams("torsion denominator 0".into()));
        }
        let d = BigInt::from(den.clone());
        let n = num.mod_floor(&d).magnitude().clone();
        let g = n.gcd(den);
        Ok(TorsionPoint {
            num: &n / &g,
            den: den / &g,
        })
    }

    pub fn from_u64(num: u64, den: u64) -> Self {
        Self::new(&BigInt::from(num), &BigUint::from(den)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `self + other` mod 1.
    pub fn add(&self, other: &TorsionPoint) -> TorsionPoint {
        let den = self.den.lcm(&other.den);
        let a = &self.num * (&den / &self.den);
        let b = &other.num * (&den / &other.den);
        let sum = (a + b) % &den;
        let g = sum.gcd(&den);
        TorsionPoint {
            num: &sum / &g,
            den: &den / &g,
        }
    }

    /// `-self` mod 1.
    pub fn neg(&self) -> TorsionPoint {
        if self.num.is_zero() {
            return self.clone();
        }
        TorsionPoint {
            num: &self.den - &self.num,
            den: self.den.clone(),
        }
    }

    /// `m * self` mod 1 for a (possibly negative) integer multiplier.
    /// The denominator can only shrink.
    pub fn scale(&self, m: &BigInt) -> TorsionPoint {
        let prod = BigInt::from(self.num.clone()) * m;
        Self::new(&prod, &self.den).expect("den > 0")
    }

    /// Multiply by the inverse of `m` mod the denominator.  `m` must be
    /// coprime to the denominator (e.g. a power of `p` acting on
    /// prime-to-p torsion).
    pub fn scale_inv(&self, m: &BigInt) -> CoreResult<TorsionPoint> {
        if self.den.is_one() {
            return Ok(self.clone());
        }
        let den = BigInt::from(self.den.clone());
        let mm = m.mod_floor(&den);
        let inv = mod_inverse(&mm, &den).ok_or_else(|| {
            CoreError::InvalidParams(format!(
                "multiplier {m} not invertible mod {}",
                self.den
            ))
        })?;
        Ok(self.scale(&inv))
    }

    /// Twisted Frobenius `t -> (eps*q) * t` mod 1.  Preserves the
    /// denominator exactly (q is coprime to it).
    pub fn tau(&self, params: &GroupParams) -> TorsionPoint {
        let m = BigInt::from(params.q) * BigInt::from(params.epsilon);
        self.scale(&m)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = extended_gcd(a, m);
    if g != BigInt::one() {
        return None;
    }
    Some(x.mod_floor(m))
}

fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        (a.clone(), BigInt::one(), BigInt::zero())
    } else {
        let (g, x, y) = extended_gcd(b, &a.mod_floor(b));
        let q = a.div_floor(b);
        (g, y.clone(), x - q * y)
    }
}

impl Ord for TorsionPoint {
    /// Canonical total order: by denominator, then numerator.
    fn cmp(&self, other: &Self) -> Ordering {
        self.den
            .cmp(&other.den)
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for TorsionPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for TorsionPoint {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| CoreError::MalformedLabel(format!("torsion point `{s}`")))?;
        let num = BigInt::from_str(n.trim())
            .map_err(|_| CoreError::MalformedLabel(format!("torsion numerator `{n}`")))?;
        let den = BigUint::from_str(d.trim())
            .map_err(|_| CoreError::MalformedLabel(format!("torsion denominator `{d}`")))?;
        TorsionPoint::new(&num, &den)
    }
}

/// A `tau`-closed set of torsion points, stored ascending in the canonical
/// `(den, num)` order.  All members share one denominator, so the first
/// entry is the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrobeniusOrbit {
    points: Vec<TorsionPoint>,
}

impl FrobeniusOrbit {
    /// The `tau`-closure of `t`.
    pub fn of(t: &TorsionPoint, params: &GroupParams) -> FrobeniusOrbit {
        let mut points = vec![t.clone()];
        let mut cur = t.tau(params);
        while cur != *t {
            points.push(cur.clone());
            cur = cur.tau(params);
        }
        points.sort();
        FrobeniusOrbit { points }
    }

    pub fn degree(&self) -> u32 {
        self.points.len() as u32
    }

    pub fn points(&self) -> &[TorsionPoint] {
        &self.points
    }

    /// Canonical representative: minimal under `(den, num)`.
    pub fn rep(&self) -> &TorsionPoint {
        &self.points[0]
    }

    /// Sum of the members mod 1.
    pub fn point_sum(&self) -> TorsionPoint {
        let mut s = TorsionPoint::zero();
        for p in &self.points {
            s = s.add(p);
        }
        s
    }

    /// Translate every member by `t`.  Valid (yields another orbit) when
    /// `t` is `tau`-fixed, i.e. `den(t) | q - eps`.
    pub fn translate(&self, t: &TorsionPoint) -> FrobeniusOrbit {
        let mut points: Vec<TorsionPoint> = self.points.iter().map(|x| x.add(t)).collect();
        points.sort();
        FrobeniusOrbit { points }
    }

    /// Multiply every member by the integer `m` (coprime to the
    /// denominator); the image is again an orbit since scaling commutes
    /// with `tau`.
    pub fn scale(&self, m: &BigInt) -> FrobeniusOrbit {
        let mut points: Vec<TorsionPoint> = self.points.iter().map(|x| x.scale(m)).collect();
        points.sort();
        FrobeniusOrbit { points }
    }
}

impl fmt::Display for FrobeniusOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// All `tau`-orbits of degree at most `dmax` (equivalently: denominator
/// dividing some `|(eps*q)^d - 1|` with `d <= dmax`), enumerated by
/// denominator, never by scanning all torsion.  Output is sorted by the
/// canonical representative.
pub fn orbits_of_degree_dividing(
    dmax: u32,
    params: &GroupParams,
) -> CoreResult<Vec<FrobeniusOrbit>> {
    if dmax == 0 {
        return Err(CoreError::InvalidParams("dmax must be >= 1".into()));
    }
    if dmax > DMAX_LIMIT {
        return Err(CoreError::ResourceGuard(format!(
            "dmax = {dmax} exceeds the desk-scale limit {DMAX_LIMIT}"
        )));
    }

    // Candidate denominators: divisors of |(eps q)^d - 1| for d <= dmax.
    let mut dens: Vec<u64> = Vec::new();
    for d in 1..=dmax {
        let nd = params.torus_order(d);
        let nd: u64 = nd.to_u64().ok_or_else(|| {
            CoreError::ResourceGuard(format!(
                "torus order {nd} too large for desk-scale enumeration"
            ))
        })?;
        for m in divisors(nd) {
            if !dens.contains(&m) {
                dens.push(m);
            }
        }
    }
    dens.sort_unstable();

    let mut budget = 0u64;
    let mut orbits: Vec<FrobeniusOrbit> = Vec::new();
    for &m in &dens {
        // Degree shared by every point with exact denominator m; skip
        // denominators whose order exceeds dmax.
        let deg = match order_of_eps_q_mod(m, params, dmax) {
            Some(k) => k,
            None => continue,
        };
        budget += m;
        if budget > POINT_BUDGET {
            return Err(CoreError::ResourceGuard(format!(
                "orbit enumeration would touch more than {POINT_BUDGET} points"
            )));
        }
        orbits.extend(orbits_with_denominator(m, deg, params));
    }
    orbits.sort_by(|a, b| a.rep().cmp(b.rep()));
    Ok(orbits)
}

/// Multiplicative order of `eps*q` mod `m`, or `None` if it exceeds `cap`.
fn order_of_eps_q_mod(m: u64, params: &GroupParams, cap: u32) -> Option<u32> {
    if m == 1 {
        return Some(1);
    }
    let base = eps_q_mod(m, params);
    let mut x = base % m;
    for k in 1..=cap {
        if x == 1 {
            return Some(k);
        }
        x = mulmod(x, base, m);
    }
    None
}

fn eps_q_mod(m: u64, params: &GroupParams) -> u64 {
    let q = params.q % m;
    if params.epsilon == 1 {
        q
    } else {
        (m - q) % m
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// The orbits consisting of points with exact denominator `m` (all of which
/// have the same degree `deg`).
fn orbits_with_denominator(m: u64, deg: u32, params: &GroupParams) -> Vec<FrobeniusOrbit> {
    if m == 1 {
        return vec![FrobeniusOrbit {
            points: vec![TorsionPoint::zero()],
        }];
    }
    let step = eps_q_mod(m, params);
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for j in 1..m {
        if seen[j as usize] || num_integer::gcd(j, m) != 1 {
            continue;
        }
        let mut members = Vec::with_capacity(deg as usize);
        let mut cur = j;
        loop {
            seen[cur as usize] = true;
            members.push(cur);
            cur = mulmod(cur, step, m);
            if cur == j {
                break;
            }
        }
        debug_assert_eq!(members.len(), deg as usize);
        members.sort_unstable();
        out.push(FrobeniusOrbit {
            points: members
                .into_iter()
                .map(|x| TorsionPoint::from_u64(x, m))
                .collect(),
        });
    }
    out
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
