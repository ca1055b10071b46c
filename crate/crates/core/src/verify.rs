//! Exact verification of the tight framelet filter bank identities
//!
//! ```text
//! sum_k a(g+2k) a(n+g+2k) + sum_l sum_k b_l(g+2k) b_l(n+g+2k) = 2^-d delta(n)
//! ```
//!
//! for every parity class `g` in `{0,1}^d` and every `n` in `Z^d`, plus a
//! sampled frequency-domain cross-check. Only finitely many `n` matter: when
//! `n` lies outside `S - S` (with `S` the union of all supports) every
//! summand vanishes.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::coeff::RadCoeff;
use crate::error::Result;
use crate::filter::{Filter, FilterBank};
use crate::lattice::{box_points, cube_vertices, IntVec};

/// Gram sums keyed by `(g, n)`; absent keys are zero.
pub type GramTable = BTreeMap<(IntVec, IntVec), BigRational>;

/// Accumulates `sum_k f(g+2k) f(n+g+2k)` over the given filters.
pub fn gram_sums<'a, I>(filters: I) -> Result<GramTable>
where
    I: IntoIterator<Item = &'a Filter>,
{
    let mut table = GramTable::new();
    for f in filters {
        let taps: Vec<_> = f.taps().collect();
        for (x, cx) in &taps {
            let g = x.parity();
            for (y, cy) in &taps {
                let v = cx.mul_rational(cy)?;
                let key = (g.clone(), *y - *x);
                *table.entry(key).or_insert_with(BigRational::zero) += v;
            }
        }
    }
    table.retain(|_, v| !v.is_zero());
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub gamma: Vec<i64>,
    pub n: Vec<i64>,
    /// Left-hand side, as a decimal fraction string.
    pub sum: String,
    pub expected: String,
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checked: usize,
    /// First failing cell in lexicographic `(g, n)` order.
    pub witness: Option<Cell>,
    /// Every cell with a nonzero defect.
    pub failures: Vec<Cell>,
}

/// The finite `n` range `S - S` (which contains 0 when `S` is nonempty),
/// with 0 added for the empty bank. Sorted.
pub fn difference_range(bank: &FilterBank) -> Vec<IntVec> {
    let support: BTreeSet<&IntVec> = bank.filters().flat_map(Filter::support).collect();
    let mut out: BTreeSet<IntVec> = BTreeSet::new();
    out.insert(IntVec::zeros(bank.dim()));
    for x in &support {
        for y in &support {
            out.insert(*x - *y);
        }
    }
    out.into_iter().collect()
}

pub fn verify_tight_bank(bank: &FilterBank) -> Result<VerifyReport> {
    verify_over(bank, &difference_range(bank))
}

/// Same check over the `n` box widened by `margin` in every direction.
pub fn verify_tight_bank_widened(bank: &FilterBank, margin: i64) -> Result<VerifyReport> {
    let range = difference_range(bank);
    let d = bank.dim();
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for n in &range {
        for i in 0..d {
            lo[i] = lo[i].min(n[i]);
            hi[i] = hi[i].max(n[i]);
        }
    }
    let lo: Vec<i64> = lo.iter().map(|x| x - margin).collect();
    let hi: Vec<i64> = hi.iter().map(|x| x + margin).collect();
    verify_over(bank, &box_points(&lo, &hi))
}

fn verify_over(bank: &FilterBank, range: &[IntVec]) -> Result<VerifyReport> {
    let d = bank.dim();
    let table = gram_sums(bank.filters())?;
    let target = RadCoeff::pow2_inv(d as u32)
        .as_rational()
        .expect("2^-d is rational");
    let zero = BigRational::zero();
    let mut failures = Vec::new();
    let mut checked = 0;
    for gamma in cube_vertices(d) {
        for n in range {
            checked += 1;
            let key = (gamma.clone(), n.clone());
            let sum = table.get(&key).unwrap_or(&zero);
            let expected = if n.is_zero() { &target } else { &zero };
            if sum != expected {
                failures.push(Cell {
                    gamma: gamma.entries().to_vec(),
                    n: n.entries().to_vec(),
                    sum: sum.to_string(),
                    expected: expected.to_string(),
                    defect: (sum - expected).to_string(),
                });
            }
        }
    }
    Ok(VerifyReport {
        pass: failures.is_empty(),
        checked,
        witness: failures.first().cloned(),
        failures,
    })
}

/// Max over a uniform grid of `[0, 2pi)^d` and all `w` in `{0,1}^d` of
/// `|a(xi) conj(a(xi + pi w)) + sum_l b_l(xi) conj(b_l(xi + pi w)) - delta(w)|`.
pub fn verify_frequency(bank: &FilterBank, grid_points_per_axis: usize) -> Result<f64> {
    let d = bank.dim();
    let g = grid_points_per_axis.max(2);
    let step = 2.0 * PI / g as f64;
    let shifts: Vec<IntVec> = cube_vertices(d).collect();
    let filters: Vec<&Filter> = bank.filters().collect();
    let mut worst = 0.0f64;
    for idx in box_points(&vec![0; d], &vec![g as i64 - 1; d]) {
        let xi: Vec<f64> = idx.entries().iter().map(|&i| i as f64 * step).collect();
        // values[f][w] = f^(xi + pi w)
        let values: Vec<Vec<Complex64>> = filters
            .iter()
            .map(|f| {
                shifts
                    .iter()
                    .map(|w| {
                        let x: Vec<f64> = xi
                            .iter()
                            .zip(w.entries())
                            .map(|(&x, &wi)| x + PI * wi as f64)
                            .collect();
                        f.fourier_eval(&x)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (wi, w) in shifts.iter().enumerate() {
            let s: Complex64 = values.iter().map(|v| v[0] * v[wi].conj()).sum();
            let target = if w.is_zero() { 1.0 } else { 0.0 };
            worst = worst.max((s - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}
