//! Integer direction matrices and the projection of filters from `Z^n` to
//! `Z^d`, `[P f](j) = sum over P k = j of f(k)`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::coeff::RadCoeff;
use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::lattice::{cube_vertices, IntVec};

/// Cap on the number of columns for vertex enumeration over `{0,1}^n`.
pub const MAX_ENUM_COLS: usize = 20;

/// A `d x n` integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl DirectionMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Parse("direction matrix is empty".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Parse(format!(
                "ragged matrix: row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(DirectionMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_rows(rows).expect("nonempty identity")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// `P k` for `k` in `Z^n`.
    pub fn apply(&self, k: &IntVec) -> IntVec {
        assert_eq!(k.dim(), self.cols);
        IntVec::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * k[j]).sum())
                .collect(),
        )
    }

    /// `P^T xi` for real `xi` in `R^d`.
    pub fn transpose_apply(&self, xi: &[f64]) -> Vec<f64> {
        assert_eq!(xi.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) as f64 * xi[i]).sum())
            .collect()
    }

    /// Rank over the rationals.
    pub fn rational_rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from_integer(self.get(i, j).into()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for r in (rank + 1)..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pivot;
                for c in col..self.cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Rank of `P mod 2` over GF(2).
    pub fn gf2_rank(&self) -> usize {
        let mut rows: Vec<Vec<u8>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).rem_euclid(2) as u8)
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][col] == 1 {
                    for c in col..self.cols {
                        rows[r][c] ^= rows[rank][c];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// First `w` in `{0,1}^d \ {0}` (lexicographic) with `P^T w` even.
    pub fn odd_condition_witness(&self) -> Option<IntVec> {
        cube_vertices(self.rows).skip(1).find(|w| {
            (0..self.cols).all(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j) * w[i])
                    .sum::<i64>()
                    .rem_euclid(2)
                    == 0
            })
        })
    }

    /// Valid iff the rational rank is `d` and `P^T w` is never even for a
    /// nonzero `w` in `{0,1}^d`; the latter is the GF(2) independence of the
    /// rows.
    pub fn validate(&self) -> Result<()> {
        let rank = self.rational_rank();
        if rank != self.rows {
            return Err(Error::InvalidRank {
                rank,
                rows: self.rows,
            });
        }
        if self.gf2_rank() != self.rows {
            let witness = self
                .odd_condition_witness()
                .expect("GF(2)-dependent rows admit a witness");
            return Err(Error::FailsOddCondition { witness });
        }
        Ok(())
    }

    /// Parses one row per line of whitespace-separated integers. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad matrix entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    fn check_enum_cap(&self) -> Result<()> {
        if self.cols > MAX_ENUM_COLS {
            return Err(Error::TooManyColumns {
                cols: self.cols,
                max: MAX_ENUM_COLS,
            });
        }
        Ok(())
    }
}

impl FromStr for DirectionMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for DirectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Pushes every tap `k` of `f` to `P k`, summing taps that land together.
/// Requires only integrality of `P`.
pub fn project_filter(p: &DirectionMatrix, f: &Filter) -> Result<Filter> {
    if f.dim() != p.cols() {
        return Err(Error::DimensionMismatch {
            expected: p.cols(),
            found: f.dim(),
        });
    }
    Filter::accumulate(p.rows(), f.taps().map(|(k, c)| (p.apply(k), c.clone())))
}

/// `{k in {0,1}^n : P k = gamma}`, lexicographic.
pub fn preimage_vertices(p: &DirectionMatrix, gamma: &IntVec) -> Result<Vec<IntVec>> {
    if gamma.dim() != p.rows() {
        return Err(Error::DimensionMismatch {
            expected: p.rows(),
            found: gamma.dim(),
        });
    }
    p.check_enum_cap()?;
    Ok(cube_vertices(p.cols())
        .filter(|k| p.apply(k) == *gamma)
        .collect())
}

/// The box-spline refinement mask `P a^H`, with `a^H` the `n`-dimensional
/// Haar low-pass filter.
pub fn boxspline_mask(p: &DirectionMatrix) -> Result<Filter> {
    p.validate()?;
    p.check_enum_cap()?;
    project_filter(p, &Filter::haar_lowpass(p.cols()))
}

/// `sum_k f(g + 2k) = 2^-d` for every parity class `g` in `{0,1}^d`.
pub fn sum_rules_order_one(f: &Filter) -> Result<bool> {
    let d = f.dim();
    let target = RadCoeff::pow2_inv(d as u32);
    for gamma in cube_vertices(d) {
        let mut acc = RadCoeff::zero();
        for (k, c) in f.taps().filter(|(k, _)| k.parity() == gamma) {
            acc = acc
                .checked_add(c)
                .ok_or_else(|| Error::IncommensurableTaps { offset: k.clone() })?;
        }
        if acc != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fiber sizes `#P^-1 gamma` over the mask support, lexicographic in `gamma`.
pub fn fiber_sizes(p: &DirectionMatrix) -> Result<Vec<(IntVec, usize)>> {
    p.check_enum_cap()?;
    let mut counts = std::collections::BTreeMap::new();
    for k in cube_vertices(p.cols()) {
        *counts.entry(p.apply(&k)).or_insert(0usize) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// True when `a(2k) = 2^-d delta(k)`.
pub fn is_interpolatory(f: &Filter) -> bool {
    let d = f.dim();
    let zero = IntVec::zeros(d);
    let even: Vec<_> = f.taps().filter(|(k, _)| k.parity() == zero).collect();
    even.len() == 1 && *even[0].0 == zero && *even[0].1 == RadCoeff::pow2_inv(d as u32)
}
