//! Dyadic samples of refinable functions and framelets by subdivision, and
//! the closed-form Fourier transform of box splines.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coeff::RadCoeff;
use crate::error::{Error, Result};
use crate::filter::{Filter, FilterBank};
use crate::format::fmt_f64;
use crate::lattice::box_points;
use crate::projector::DirectionMatrix;

pub const MAX_ITERS: u32 = 12;

/// Values on the grid `2^-resolution Z^d` over an index box `lo..=hi`
/// (inclusive, in grid units). Points outside the box are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGrid {
    pub resolution: u32,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub values: Vec<f64>,
}

impl SampledGrid {
    fn zeros(resolution: u32, lo: Vec<i64>, hi: Vec<i64>) -> Self {
        let n = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a + 1).max(0) as usize)
            .product();
        SampledGrid {
            resolution,
            lo,
            hi,
            values: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1).max(0) as usize)
            .collect()
    }

    fn offset(&self, index: &[i64]) -> Option<usize> {
        let mut lin = 0usize;
        for i in 0..self.lo.len() {
            if index[i] < self.lo[i] || index[i] > self.hi[i] {
                return None;
            }
            lin = lin * (self.hi[i] - self.lo[i] + 1) as usize + (index[i] - self.lo[i]) as usize;
        }
        Some(lin)
    }

    /// Value at grid index `index`, i.e. at the point `index / 2^resolution`.
    pub fn at(&self, index: &[i64]) -> f64 {
        self.offset(index).map_or(0.0, |o| self.values[o])
    }

    /// Grid indices in row-major order, paired with values.
    pub fn points(&self) -> impl Iterator<Item = (Vec<i64>, f64)> + '_ {
        box_points(&self.lo, &self.hi)
            .into_iter()
            .zip(self.values.iter().copied())
            .map(|(k, v)| (k.into_entries(), v))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `x1,...,xd,value` with coordinates `index / 2^resolution`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        let _ = writeln!(out, "{},value", header.join(","));
        let scale = (1u64 << self.resolution) as f64;
        for (k, v) in self.points() {
            for x in &k {
                out.push_str(&fmt_f64(*x as f64 / scale));
                out.push(',');
            }
            out.push_str(&fmt_f64(v));
            out.push('\n');
        }
        out
    }
}

/// Runs `v_{j+1}(k) = 2^d sum_m a(k - 2m) v_j(m)` from `v_0 = delta` for
/// `iters` steps. The result approximates `phi(2^-iters k)` over the support
/// box of the limit function, which is the bounding box of the mask support.
pub fn cascade_phi(mask: &Filter, iters: u32) -> Result<SampledGrid> {
    if iters > MAX_ITERS {
        return Err(Error::TooManyIterations {
            iters,
            max: MAX_ITERS,
        });
    }
    match mask.tap_sum() {
        Ok(s) if s == RadCoeff::one() => {}
        _ => return Err(Error::MaskNotNormalized),
    }
    let d = mask.dim();
    let (mlo, mhi) = mask.bounding_box().ok_or(Error::MaskNotNormalized)?;
    let gain = (1u64 << d) as f64;
    let taps: Vec<(Vec<i64>, f64)> = mask
        .taps()
        .map(|(k, c)| (k.entries().to_vec(), gain * c.to_f64()))
        .collect();

    // v_j lives on (2^j - 1) * [mlo, mhi]
    let mut v = SampledGrid::zeros(0, vec![0; d], vec![0; d]);
    v.values[0] = 1.0;
    for j in 1..=iters {
        let f = (1i64 << j) - 1;
        let lo: Vec<i64> = mlo.iter().map(|x| x * f).collect();
        let hi: Vec<i64> = mhi.iter().map(|x| x * f).collect();
        let mut next = SampledGrid::zeros(j, lo, hi);
        let mut k = vec![0i64; d];
        for (m, val) in v.points() {
            if val == 0.0 {
                continue;
            }
            for (t, c) in &taps {
                for i in 0..d {
                    k[i] = 2 * m[i] + t[i];
                }
                let o = next.offset(&k).expect("subdivision stays in its box");
                next.values[o] += c * val;
            }
        }
        v = next;
    }

    let scale = 1i64 << iters;
    let mut out = SampledGrid::zeros(
        iters,
        mlo.iter().map(|x| x * scale).collect(),
        mhi.iter().map(|x| x * scale).collect(),
    );
    for (k, val) in v.points() {
        let o = out.offset(&k).expect("inner box");
        out.values[o] = val;
    }
    Ok(out)
}

/// `psi_l(x) = 2^d sum_k b_l(k) phi(2x - k)` on the `2^-iters` grid, from
/// `phi` sampled on the `2^-(iters+1)` grid.
pub fn sample_psi(bank: &FilterBank, phi: &SampledGrid, iters: u32) -> Result<Vec<SampledGrid>> {
    if phi.resolution != iters + 1 {
        return Err(Error::GridMismatch {
            expected: iters + 1,
            found: phi.resolution,
        });
    }
    let d = bank.dim();
    if phi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: phi.dim(),
        });
    }
    let gain = (1u64 << d) as f64;
    let step = 1i64 << (iters + 1);
    bank.highpass()
        .iter()
        .map(|b| {
            let (blo, bhi) = b
                .bounding_box()
                .ok_or_else(|| Error::ShapeMismatch("empty high-pass filter".into()))?;
            // phi index of 2x - k for x = p / 2^iters is 4p - 2^(iters+1) k
            let lo: Vec<i64> = (0..d)
                .map(|i| div_ceil(phi.lo[i] + step * blo[i], 4))
                .collect();
            let hi: Vec<i64> = (0..d)
                .map(|i| (phi.hi[i] + step * bhi[i]).div_euclid(4))
                .collect();
            let mut out = SampledGrid::zeros(iters, lo, hi);
            let taps: Vec<(Vec<i64>, f64)> = b
                .taps()
                .map(|(k, c)| (k.entries().to_vec(), gain * c.to_f64()))
                .collect();
            let points: Vec<Vec<i64>> = out.points().map(|(p, _)| p).collect();
            let mut idx = vec![0i64; d];
            for (o, p) in points.iter().enumerate() {
                let mut acc = 0.0;
                for (k, c) in &taps {
                    for i in 0..d {
                        idx[i] = 4 * p[i] - step * k[i];
                    }
                    acc += c * phi.at(&idx);
                }
                out.values[o] = acc;
            }
            Ok(out)
        })
        .collect()
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `prod over columns k of P of (1 - exp(-i k.xi)) / (i k.xi)`, each factor
/// evaluated as `exp(-i t/2) sinc(t/2)` so that small `k.xi` stay accurate.
pub fn boxspline_fourier_eval(p: &DirectionMatrix, xi: &[f64]) -> Result<Complex64> {
    if xi.len() != p.rows() {
        return Err(Error::DimensionMismatch {
            expected: p.rows(),
            found: xi.len(),
        });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..p.cols() {
        let t = p.column(j).dot(xi);
        let h = 0.5 * t;
        let sinc = if h == 0.0 { 1.0 } else { h.sin() / h };
        acc *= Complex64::from_polar(sinc, -h);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::boxspline::{build_boxspline_bank, BankMode};
    use crate::haar::build_haar_bank;
    use crate::lattice::IntVec;
    use crate::projector::boxspline_mask;

    fn ex1() -> DirectionMatrix {
        DirectionMatrix::from_rows(vec![vec![1, 0, -1], vec![0, 1, -1]]).unwrap()
    }

    fn ex2() -> DirectionMatrix {
        DirectionMatrix::from_rows(vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]]).unwrap()
    }

    #[test]
    fn haar_phi_is_indicator() {
        let g = cascade_phi(&Filter::haar_lowpass(1), 3).unwrap();
        assert_eq!(g.lo, vec![0]);
        assert_eq!(g.hi, vec![8]);
        for (k, v) in g.points() {
            let want = if k[0] < 8 { 1.0 } else { 0.0 };
            assert_eq!(v, want, "k={k:?}");
        }
    }

    #[test]
    fn zero_iterations_is_dirac() {
        let g = cascade_phi(&boxspline_mask(&ex1()).unwrap(), 0).unwrap();
        for (k, v) in g.points() {
            assert_eq!(v, if k == vec![0, 0] { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn unnormalized_mask_rejected() {
        assert!(matches!(
            cascade_phi(&Filter::zero(1), 2),
            Err(Error::MaskNotNormalized)
        ));
        let half = Filter::haar_lowpass(1).scaled(&RadCoeff::sqrt_of(1, 1, 4));
        assert!(matches!(
            cascade_phi(&half, 2),
            Err(Error::MaskNotNormalized)
        ));
        assert!(matches!(
            cascade_phi(&Filter::haar_lowpass(1), 13),
            Err(Error::TooManyIterations { .. })
        ));
    }

    #[test]
    fn haar_psi() {
        let bank = build_haar_bank(1).unwrap();
        let phi = cascade_phi(bank.lowpass(), 4).unwrap();
        let psi = sample_psi(&bank, &phi, 3).unwrap();
        assert_eq!(psi.len(), 1);
        for (p, v) in psi[0].points() {
            let want = match p[0] {
                0..=3 => 1.0,
                4..=7 => -1.0,
                _ => 0.0,
            };
            assert_eq!(v, want, "p={p:?}");
        }
    }

    #[test]
    fn psi_needs_finer_phi() {
        let bank = build_haar_bank(1).unwrap();
        let phi = cascade_phi(bank.lowpass(), 3).unwrap();
        assert!(matches!(
            sample_psi(&bank, &phi, 3),
            Err(Error::GridMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn fourier_at_origin() {
        for p in [ex1(), ex2(), DirectionMatrix::identity(3)] {
            let v = boxspline_fourier_eval(&p, &vec![0.0; p.rows()]).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn fourier_tensor_closed_form() {
        let v = boxspline_fourier_eval(&ex2(), &[PI, PI]).unwrap();
        let s = (PI / 2.0).sin() / (PI / 2.0);
        let want = (s * s).powi(2);
        assert!((v.norm() - want).abs() < 1e-14);
    }

    #[test]
    fn example_two_is_nonnegative() {
        let g = cascade_phi(&boxspline_mask(&ex2()).unwrap(), 5).unwrap();
        assert!(g.min_value() >= -1e-12);
    }

    fn hat(x: f64, y: f64) -> f64 {
        (1.0 - x.abs().max(y.abs()).max((x - y).abs())).max(0.0)
    }

    #[test]
    fn example_one_is_interpolatory_at_every_level() {
        let mask = boxspline_mask(&ex1()).unwrap();
        for j in 0..=5 {
            let g = cascade_phi(&mask, j).unwrap();
            let step = 1i64 << j;
            for (k, v) in g.points() {
                if k.iter().all(|x| x % step == 0) {
                    assert_eq!(v, if k == vec![0, 0] { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn example_one_phi_is_the_hat() {
        let g = cascade_phi(&boxspline_mask(&ex1()).unwrap(), 4).unwrap();
        for (k, v) in g.points() {
            let want = hat(k[0] as f64 / 16.0, k[1] as f64 / 16.0);
            assert!((v - want).abs() < 1e-12, "{k:?}");
        }
    }

    #[test]
    fn example_one_psi_matches_hat_oracle() {
        let bank = build_boxspline_bank(&ex1(), BankMode::Combined).unwrap();
        let target = Filter::two_tap(
            IntVec::from([1, 0]),
            IntVec::from([0, 0]),
            RadCoeff::sqrt_of(1, 1, 32),
        )
        .unwrap();
        let l = bank
            .highpass()
            .iter()
            .position(|b| *b == target || *b == target.scaled(&RadCoeff::sqrt_of(-1, 1, 1)))
            .unwrap();
        let sign = bank.highpass()[l]
            .get(&IntVec::from([1, 0]))
            .unwrap()
            .sign() as f64;
        let phi = cascade_phi(bank.lowpass(), 4).unwrap();
        let psi = sample_psi(&bank, &phi, 3).unwrap();
        let w = 2f64.sqrt() / 8.0;
        let mut seen = 0;
        for (p, v) in psi[l].points() {
            let (x, y) = (p[0] as f64 / 8.0, p[1] as f64 / 8.0);
            let want = sign * 4.0 * w * (hat(2.0 * x - 1.0, 2.0 * y) - hat(2.0 * x, 2.0 * y));
            assert!((v - want).abs() < 1e-12, "{p:?}: {v} vs {want}");
            seen += usize::from(want != 0.0);
        }
        assert!(seen > 0);
    }

    #[test]
    fn psi_has_zero_sum() {
        for p in [ex1(), ex2()] {
            let bank = build_boxspline_bank(&p, BankMode::Combined).unwrap();
            let phi = cascade_phi(bank.lowpass(), 5).unwrap();
            for psi in sample_psi(&bank, &phi, 4).unwrap() {
                let s: f64 = psi.values.iter().sum();
                assert!(s.abs() < 1e-9, "{s}");
            }
        }
    }

    #[test]
    fn refinement_identity() {
        let mask = boxspline_mask(&ex1()).unwrap();
        for (a, b) in [(0.3, -1.2), (2.5, 0.7), (-3.1, 3.0), (1e-9, 2e-9)] {
            let lhs = boxspline_fourier_eval(&ex1(), &[2.0 * a, 2.0 * b]).unwrap();
            let rhs = mask.fourier_eval(&[a, b]).unwrap()
                * boxspline_fourier_eval(&ex1(), &[a, b]).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let g = cascade_phi(&Filter::haar_lowpass(1), 1).unwrap();
        let csv = g.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "x1,value");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("5.0000000000000000e-1,1.0"));
    }
}
