//! Fast framelet analysis and synthesis on periodic `d`-dimensional data.
//!
//! One level maps `u` on the torus `Z_N1 x ... x Z_Nd` to one band per
//! filter `h` of the bank, on the half-size torus:
//!
//! ```text
//! (T_h u)(n) = 2^(d/2) sum_k u(k) h(k - 2n)
//! ```
//!
//! Synthesis is the adjoint, `u(k) = 2^(d/2) sum_h sum_n v_h(n) h(k - 2n)`.
//! For a tight bank the analysis is an isometry and synthesis inverts it.
//! Further levels recurse on the low-pass band.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{Filter, FilterBank};
use crate::format::fmt_f64;

/// A real array on a finite torus, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    dims: Vec<usize>,
    values: Vec<f64>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadDims(format!("{dims:?}")));
        }
        let n: usize = dims.iter().product();
        if values.len() != n {
            return Err(Error::BadDims(format!(
                "{} values for dims {dims:?} (need {n})",
                values.len()
            )));
        }
        Ok(Tensor { dims, values })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        Tensor {
            dims,
            values: vec![0.0; n],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `dims: N1 ... Nd` header, then values row-major, one line per
    /// innermost row.
    pub fn to_text(&self) -> String {
        let mut out = String::from("dims:");
        for n in &self.dims {
            out.push(' ');
            out.push_str(&n.to_string());
        }
        out.push('\n');
        let row = *self.dims.last().expect("nonempty dims");
        for chunk in self.values.chunks(row) {
            let line: Vec<String> = chunk.iter().map(|&x| fmt_f64(x)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().skip_while(|l| l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tensor file".into()))?;
        let rest = header
            .trim()
            .strip_prefix("dims:")
            .ok_or_else(|| Error::Parse("tensor header must start with 'dims:'".into()))?;
        let dims = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad dimension {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let values = lines
            .flat_map(str::split_whitespace)
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad value {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Tensor::new(dims, values)
    }
}

/// Detail bands per level (finest first) and the final low-pass band.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientPyramid {
    pub input_dims: Vec<usize>,
    /// `levels[j][l]` is the band of high-pass filter `l` at level `j + 1`.
    pub levels: Vec<Vec<Tensor>>,
    pub lowpass: Tensor,
}

impl CoefficientPyramid {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn zeros(bank: &FilterBank, input_dims: &[usize], levels: usize) -> Result<Self> {
        check_dims(bank, input_dims, levels)?;
        let mut dims = input_dims.to_vec();
        let mut out = Vec::with_capacity(levels);
        for _ in 0..levels {
            dims.iter_mut().for_each(|n| *n /= 2);
            out.push(vec![Tensor::zeros(dims.clone()); bank.highpass().len()]);
        }
        Ok(CoefficientPyramid {
            input_dims: input_dims.to_vec(),
            levels: out,
            lowpass: Tensor::zeros(dims),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PyramidDoc::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PyramidDoc = serde_json::from_str(s)?;
        doc.try_into()
    }
}

/// Sum of squares of every coefficient, final low-pass band included.
pub fn pyramid_energy(p: &CoefficientPyramid) -> f64 {
    p.levels.iter().flatten().map(Tensor::energy).sum::<f64>() + p.lowpass.energy()
}

fn check_dims(bank: &FilterBank, dims: &[usize], levels: usize) -> Result<()> {
    if dims.len() != bank.dim() {
        return Err(Error::DimensionMismatch {
            expected: bank.dim(),
            found: dims.len(),
        });
    }
    let block = 1usize
        .checked_shl(levels as u32)
        .ok_or_else(|| Error::BadDims(format!("{levels} levels")))?;
    for &n in dims {
        if n == 0 || n % block != 0 {
            return Err(Error::BadDims(format!(
                "axis length {n} is not a positive multiple of 2^{levels}"
            )));
        }
    }
    Ok(())
}

/// Row-major strides and per-filter tap tables.
struct Plan {
    dims: Vec<usize>,
    half: Vec<usize>,
    taps: Vec<Vec<(Vec<i64>, f64)>>,
}

impl Plan {
    fn new(bank: &FilterBank, dims: &[usize]) -> Self {
        let d = bank.dim();
        let norm = 2f64.powf(d as f64 / 2.0);
        let taps = bank
            .filters()
            .map(|f| {
                f.taps()
                    .map(|(k, c)| (k.entries().to_vec(), norm * c.to_f64()))
                    .collect()
            })
            .collect();
        Plan {
            dims: dims.to_vec(),
            half: dims.iter().map(|n| n / 2).collect(),
            taps,
        }
    }

    /// Linear index of `(2 n + t) mod N` for coarse linear index `coarse`.
    fn fine_index(&self, coarse_multi: &[usize], t: &[i64]) -> usize {
        let mut idx = 0usize;
        for i in 0..self.dims.len() {
            let n = self.dims[i] as i64;
            let k = (2 * coarse_multi[i] as i64 + t[i]).rem_euclid(n) as usize;
            idx = idx * self.dims[i] + k;
        }
        idx
    }

    fn coarse_multi(&self, mut lin: usize, out: &mut [usize]) {
        for i in (0..self.half.len()).rev() {
            out[i] = lin % self.half[i];
            lin /= self.half[i];
        }
    }

    fn coarse_len(&self) -> usize {
        self.half.iter().product()
    }
}

/// One analysis level: returns the low-pass band followed by one band per
/// high-pass filter.
pub fn analyze_level(bank: &FilterBank, u: &Tensor) -> Result<Vec<Tensor>> {
    check_dims(bank, u.dims(), 1)?;
    let plan = Plan::new(bank, u.dims());
    let m = plan.coarse_len();
    let mut multi = vec![0usize; plan.dims.len()];
    let mut bands: Vec<Tensor> = plan
        .taps
        .iter()
        .map(|_| Tensor::zeros(plan.half.clone()))
        .collect();
    for lin in 0..m {
        plan.coarse_multi(lin, &mut multi);
        for (band, taps) in bands.iter_mut().zip(&plan.taps) {
            let mut acc = 0.0;
            for (t, c) in taps {
                acc += u.values[plan.fine_index(&multi, t)] * c;
            }
            band.values[lin] = acc;
        }
    }
    Ok(bands)
}

/// One synthesis level, inverse of [`analyze_level`] for tight banks.
pub fn synthesize_level(bank: &FilterBank, bands: &[Tensor]) -> Result<Tensor> {
    let expected = bank.highpass().len() + 1;
    if bands.len() != expected {
        return Err(Error::ShapeMismatch(format!(
            "{} bands for a bank of {expected} filters",
            bands.len()
        )));
    }
    let half = bands[0].dims().to_vec();
    if bands.iter().any(|b| b.dims() != half.as_slice()) {
        return Err(Error::ShapeMismatch(
            "bands of one level differ in shape".into(),
        ));
    }
    let dims: Vec<usize> = half.iter().map(|n| 2 * n).collect();
    check_dims(bank, &dims, 1)?;
    let plan = Plan::new(bank, &dims);
    let mut out = Tensor::zeros(dims);
    let mut multi = vec![0usize; plan.dims.len()];
    for (band, taps) in bands.iter().zip(&plan.taps) {
        for lin in 0..plan.coarse_len() {
            let v = band.values[lin];
            if v == 0.0 {
                continue;
            }
            plan.coarse_multi(lin, &mut multi);
            for (t, c) in taps {
                out.values[plan.fine_index(&multi, t)] += v * c;
            }
        }
    }
    Ok(out)
}

pub fn analyze(bank: &FilterBank, u: &Tensor, levels: usize) -> Result<CoefficientPyramid> {
    check_dims(bank, u.dims(), levels)?;
    let mut current = u.clone();
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let mut bands = analyze_level(bank, &current)?;
        current = bands.remove(0);
        out.push(bands);
    }
    Ok(CoefficientPyramid {
        input_dims: u.dims().to_vec(),
        levels: out,
        lowpass: current,
    })
}

pub fn synthesize(bank: &FilterBank, p: &CoefficientPyramid) -> Result<Tensor> {
    check_dims(bank, &p.input_dims, p.depth())?;
    let mut dims = p.input_dims.clone();
    for (j, level) in p.levels.iter().enumerate() {
        dims.iter_mut().for_each(|n| *n /= 2);
        if level.len() != bank.highpass().len() {
            return Err(Error::ShapeMismatch(format!(
                "level {} has {} detail bands, bank has {} high-pass filters",
                j + 1,
                level.len(),
                bank.highpass().len()
            )));
        }
        if level.iter().any(|t| t.dims() != dims.as_slice()) {
            return Err(Error::ShapeMismatch(format!("level {} band shape", j + 1)));
        }
    }
    if p.lowpass.dims() != dims.as_slice() {
        return Err(Error::ShapeMismatch("final low-pass band shape".into()));
    }
    let mut current = p.lowpass.clone();
    for level in p.levels.iter().rev() {
        let mut bands = Vec::with_capacity(level.len() + 1);
        bands.push(current);
        bands.extend(level.iter().cloned());
        current = synthesize_level(bank, &bands)?;
    }
    Ok(current)
}

/// Relative reconstruction and energy defects of one analysis/synthesis
/// round trip: `(max|rec - u| / max|u|, |E - |u|^2| / |u|^2)`.
pub fn roundtrip_defects(bank: &FilterBank, u: &Tensor, levels: usize) -> Result<(f64, f64)> {
    let p = analyze(bank, u, levels)?;
    let rec = synthesize(bank, &p)?;
    let scale = u.max_abs();
    let energy = u.energy();
    let pr = if scale > 0.0 {
        rec.max_abs_diff(u) / scale
    } else {
        rec.max_abs()
    };
    let parseval = if energy > 0.0 {
        (pyramid_energy(&p) - energy).abs() / energy
    } else {
        pyramid_energy(&p)
    };
    Ok((pr, parseval))
}

// Exact mode

/// A rational array on a finite torus, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTensor {
    pub dims: Vec<usize>,
    pub values: Vec<BigRational>,
}

impl ExactTensor {
    pub fn new(dims: Vec<usize>, values: Vec<BigRational>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.is_empty() || values.len() != n {
            return Err(Error::BadDims(format!(
                "{} values for dims {dims:?}",
                values.len()
            )));
        }
        Ok(ExactTensor { dims, values })
    }

    pub fn from_integers(dims: Vec<usize>, values: &[i64]) -> Result<Self> {
        Self::new(
            dims,
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn energy(&self) -> BigRational {
        self.values
            .iter()
            .fold(BigRational::zero(), |acc, v| acc + v * v)
    }

    pub fn to_f64(&self) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            values: self
                .values
                .iter()
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

/// A band whose true values are `sqrt(radical) * values`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBand {
    pub radical: BigRational,
    pub values: ExactTensor,
}

/// One exact analysis level: low-pass band first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLevel {
    pub bands: Vec<ExactBand>,
}

impl ExactLevel {
    pub fn energy(&self) -> BigRational {
        self.bands.iter().fold(BigRational::zero(), |acc, b| {
            acc + &b.radical * b.values.energy()
        })
    }
}

/// `(rho, [(offset, q)])` per filter: taps `sqrt(rho) * q`.
type RadicalTable = (BigRational, Vec<(Vec<i64>, BigRational)>);

fn radical_tables(bank: &FilterBank) -> Result<Vec<RadicalTable>> {
    let norm = BigRational::from_integer(BigInt::from(1) << bank.dim());
    bank.filters()
        .map(|f: &Filter| {
            let (rho, taps) = f.radical_form(&norm)?;
            Ok((
                rho,
                taps.into_iter()
                    .map(|(k, q)| (k.into_entries(), q))
                    .collect(),
            ))
        })
        .collect()
}

/// Single-level analysis in exact arithmetic. Each filter's taps, scaled by
/// `2^(d/2)`, must share one radical.
pub fn analyze_exact_level(bank: &FilterBank, u: &ExactTensor) -> Result<ExactLevel> {
    check_dims(bank, &u.dims, 1)?;
    let tables = radical_tables(bank)?;
    let plan = Plan {
        dims: u.dims.clone(),
        half: u.dims.iter().map(|n| n / 2).collect(),
        taps: Vec::new(),
    };
    let m = plan.coarse_len();
    let mut multi = vec![0usize; u.dims.len()];
    let mut bands = Vec::with_capacity(tables.len());
    for (rho, taps) in &tables {
        let mut values = Vec::with_capacity(m);
        for lin in 0..m {
            plan.coarse_multi(lin, &mut multi);
            let mut acc = BigRational::zero();
            for (t, q) in taps {
                acc += &u.values[plan.fine_index(&multi, t)] * q;
            }
            values.push(acc);
        }
        bands.push(ExactBand {
            radical: rho.clone(),
            values: ExactTensor {
                dims: plan.half.clone(),
                values,
            },
        });
    }
    Ok(ExactLevel { bands })
}

/// Exact single-level synthesis; the result is rational because each band
/// meets its own filter's radical.
pub fn synthesize_exact_level(bank: &FilterBank, level: &ExactLevel) -> Result<ExactTensor> {
    let tables = radical_tables(bank)?;
    if level.bands.len() != tables.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} bands for a bank of {} filters",
            level.bands.len(),
            tables.len()
        )));
    }
    let half = level.bands[0].values.dims.clone();
    let dims: Vec<usize> = half.iter().map(|n| 2 * n).collect();
    check_dims(bank, &dims, 1)?;
    let plan = Plan {
        dims: dims.clone(),
        half,
        taps: Vec::new(),
    };
    let mut out = vec![BigRational::zero(); dims.iter().product()];
    let mut multi = vec![0usize; dims.len()];
    for (band, (rho, taps)) in level.bands.iter().zip(&tables) {
        if band.radical != *rho && !band.values.values.iter().all(Zero::is_zero) {
            return Err(Error::ShapeMismatch(
                "band radical does not match its filter".into(),
            ));
        }
        for lin in 0..plan.coarse_len() {
            let v = &band.values.values[lin];
            if v.is_zero() {
                continue;
            }
            plan.coarse_multi(lin, &mut multi);
            for (t, q) in taps {
                out[plan.fine_index(&multi, t)] += rho * v * q;
            }
        }
    }
    ExactTensor::new(dims, out)
}

// Pyramid wire format

#[derive(Serialize, Deserialize)]
struct BandDoc {
    filter: usize,
    dims: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct LevelDoc {
    level: usize,
    details: Vec<BandDoc>,
}

#[derive(Serialize, Deserialize)]
struct LowpassDoc {
    dims: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PyramidDoc {
    input_dims: Vec<usize>,
    levels: Vec<LevelDoc>,
    lowpass: LowpassDoc,
}

impl From<&CoefficientPyramid> for PyramidDoc {
    fn from(p: &CoefficientPyramid) -> Self {
        PyramidDoc {
            input_dims: p.input_dims.clone(),
            levels: p
                .levels
                .iter()
                .enumerate()
                .map(|(j, bands)| LevelDoc {
                    level: j + 1,
                    details: bands
                        .iter()
                        .enumerate()
                        .map(|(l, t)| BandDoc {
                            filter: l + 1,
                            dims: t.dims.clone(),
                            values: t.values.clone(),
                        })
                        .collect(),
                })
                .collect(),
            lowpass: LowpassDoc {
                dims: p.lowpass.dims.clone(),
                values: p.lowpass.values.clone(),
            },
        }
    }
}

impl TryFrom<PyramidDoc> for CoefficientPyramid {
    type Error = Error;
    fn try_from(doc: PyramidDoc) -> Result<Self> {
        let mut levels = Vec::with_capacity(doc.levels.len());
        for (j, level) in doc.levels.into_iter().enumerate() {
            if level.level != j + 1 {
                return Err(Error::Parse(format!(
                    "levels out of order: found {} at position {}",
                    level.level,
                    j + 1
                )));
            }
            let mut bands = Vec::with_capacity(level.details.len());
            for (l, band) in level.details.into_iter().enumerate() {
                if band.filter != l + 1 {
                    return Err(Error::Parse(format!(
                        "level {}: filter {} at position {}",
                        j + 1,
                        band.filter,
                        l + 1
                    )));
                }
                bands.push(Tensor::new(band.dims, band.values)?);
            }
            levels.push(bands);
        }
        Ok(CoefficientPyramid {
            input_dims: doc.input_dims,
            levels,
            lowpass: Tensor::new(doc.lowpass.dims, doc.lowpass.values)?,
        })
    }
}
