//! Points of the integer lattice `Z^d`.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point of `Z^d`. Ordering is lexicographic on the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVec(Vec<i64>);

impl IntVec {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, s: i64) -> IntVec {
        IntVec(self.0.iter().map(|&x| x * s).collect())
    }

    /// Componentwise residue in `{0, 1}`.
    pub fn parity(&self) -> IntVec {
        IntVec(self.0.iter().map(|&x| x.rem_euclid(2)).collect())
    }

    pub fn dot(&self, xi: &[f64]) -> f64 {
        self.0.iter().zip(xi).map(|(&k, &x)| k as f64 * x).sum()
    }

    fn check_dim(&self, other: &IntVec) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "lattice arithmetic between vectors of different dimension"
        );
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec(v)
    }
}

impl<const N: usize> From<[i64; N]> for IntVec {
    fn from(v: [i64; N]) -> Self {
        IntVec(v.to_vec())
    }
}

impl Index<usize> for IntVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add<&IntVec> for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        self.check_dim(rhs);
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&IntVec> for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        self.check_dim(rhs);
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Vertices of the unit cube `{0,1}^d` in lexicographic order.
pub fn cube_vertices(dim: usize) -> impl Iterator<Item = IntVec> {
    (0u64..(1u64 << dim)).map(move |m| {
        IntVec(
            (0..dim)
                .map(|i| ((m >> (dim - 1 - i)) & 1) as i64)
                .collect(),
        )
    })
}

/// Every point of the box `lo..=hi` (componentwise), lexicographic.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<IntVec> {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(IntVec(cur.clone()));
        let mut axis = d;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                break;
            }
            cur[axis] = lo[axis];
        }
    }
}
