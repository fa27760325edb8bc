//! Integer partitions and the part-wise operations used for unipotent
//! class combinatorics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};

/// A partition: weakly decreasing positive parts.  The empty partition is
/// the unique partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> CoreResult<Self> {
        if parts.contains(&0) {
            return Err(CoreError::MalformedLabel("partition with zero part".into()));
        }
        let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
        if !sorted {
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Single row `(m)`; the empty partition when `m = 0`.
    pub fn row(m: u32) -> Self {
        if m == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![m] }
        }
    }

    /// Single column `(1^m)`.
    pub fn column(m: u32) -> Self {
        Partition {
            parts: vec![1; m as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// gcd of the parts (0 for the empty partition).
    pub fn parts_gcd(&self) -> u32 {
        self.parts.iter().fold(0, |g, &p| num_integer::gcd(g, p))
    }

    /// Conjugate (transpose) partition; an involution.
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Self::empty();
        }
        let cols = self.parts[0] as usize;
        let mut out = Vec::with_capacity(cols);
        for j in 1..=cols as u32 {
            out.push(self.parts.iter().filter(|&&p| p >= j).count() as u32);
        }
        Partition { parts: out }
    }

    /// Multiply every part by `d > 0`.
    pub fn scale(&self, d: u32) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| p * d).collect(),
        }
    }

    /// Part-wise sum after descending sort with zero padding.
    pub fn partwise_sum(&self, other: &Partition) -> Partition {
        let len = self.parts.len().max(other.parts.len());
        let mut parts = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.parts.get(i).copied().unwrap_or(0);
            let b = other.parts.get(i).copied().unwrap_or(0);
            parts.push(a + b);
        }
        Partition { parts }
    }

    /// Hook lengths of all cells, row by row.
    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::new();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - 1 - j as u32;
                let leg = conj.parts[j] - 1 - i as u32;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// `n(lambda) = sum (i-1) * lambda_i`.
    pub fn n_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * u64::from(p))
            .sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `m`, in a fixed (reverse-lexicographic, `(m)` first)
/// order.
pub fn partitions_of(m: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_partitions(m, m, &mut cur, &mut out);
    out
}

fn gen_partitions(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    let hi = rem.min(max);
    for part in (1..=hi).rev() {
        cur.push(part);
        gen_partitions(rem - part, part, cur, out);
        cur.pop();
    }
}
