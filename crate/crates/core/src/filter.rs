//! Finitely supported filters on `Z^d` and filter banks, with their JSON
//! interchange format.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{parse_rational, RadCoeff};
use crate::error::{Error, Result};
use crate::lattice::{cube_vertices, IntVec};

/// A finitely supported filter `Z^d -> R` with exact coefficients.
/// Zero taps are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    dim: usize,
    taps: BTreeMap<IntVec, RadCoeff>,
}

/// A high-pass filter of the form `w * (delta_pos - delta_neg)` with `w > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTap {
    pub pos: IntVec,
    pub neg: IntVec,
    pub weight: RadCoeff,
}

impl TwoTap {
    /// Endpoints ordered lexicographically: `(min, max)`.
    pub fn endpoints(&self) -> (&IntVec, &IntVec) {
        if self.pos <= self.neg {
            (&self.pos, &self.neg)
        } else {
            (&self.neg, &self.pos)
        }
    }
}

impl Filter {
    /// Builds a filter from taps. Zero coefficients are dropped; repeated
    /// offsets are rejected.
    pub fn from_taps<I>(dim: usize, taps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IntVec, RadCoeff)>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut map = BTreeMap::new();
        for (k, c) in taps {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.dim(),
                });
            }
            if map.contains_key(&k) {
                return Err(Error::DuplicateOffset(k));
            }
            map.insert(k, c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Filter { dim, taps: map })
    }

    /// Builds a filter, summing coefficients that share an offset.
    pub fn accumulate<I>(dim: usize, taps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IntVec, RadCoeff)>,
    {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut map: BTreeMap<IntVec, RadCoeff> = BTreeMap::new();
        for (k, c) in taps {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.dim(),
                });
            }
            match map.get_mut(&k) {
                Some(acc) => {
                    *acc = acc
                        .checked_add(&c)
                        .ok_or_else(|| Error::IncommensurableTaps { offset: k.clone() })?;
                }
                None => {
                    map.insert(k, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Filter { dim, taps: map })
    }

    pub fn zero(dim: usize) -> Self {
        Filter {
            dim,
            taps: BTreeMap::new(),
        }
    }

    /// The Dirac sequence `delta`.
    pub fn dirac(dim: usize) -> Self {
        Self::dirac_at(IntVec::zeros(dim))
    }

    /// `delta_gamma = delta(. - gamma)`.
    pub fn dirac_at(gamma: IntVec) -> Self {
        let dim = gamma.dim();
        Filter {
            dim,
            taps: BTreeMap::from([(gamma, RadCoeff::one())]),
        }
    }

    /// `w * (delta_pos - delta_neg)`.
    pub fn two_tap(pos: IntVec, neg: IntVec, weight: RadCoeff) -> Result<Self> {
        let dim = pos.dim();
        Self::from_taps(dim, [(pos, weight.clone()), (neg, -&weight)])
    }

    /// The Haar low-pass filter: `2^-d` on `{0,1}^d`.
    pub fn haar_lowpass(dim: usize) -> Self {
        let c = RadCoeff::pow2_inv(dim as u32);
        Filter {
            dim,
            taps: cube_vertices(dim).map(|v| (v, c.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn taps(&self) -> impl Iterator<Item = (&IntVec, &RadCoeff)> {
        self.taps.iter()
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn get(&self, k: &IntVec) -> Option<&RadCoeff> {
        self.taps.get(k)
    }

    pub fn support(&self) -> impl Iterator<Item = &IntVec> {
        self.taps.keys()
    }

    /// Componentwise bounding box of the support, `None` for the zero filter.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.taps.keys();
        let first = it.next()?;
        let mut lo = first.entries().to_vec();
        let mut hi = lo.clone();
        for k in it {
            for (i, &x) in k.entries().iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        Some((lo, hi))
    }

    /// `sum_k f(k) exp(-i k.xi)`.
    pub fn fourier_eval(&self, xi: &[f64]) -> Result<Complex64> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: xi.len(),
            });
        }
        Ok(self
            .taps
            .iter()
            .map(|(k, c)| Complex64::from_polar(c.to_f64(), -k.dot(xi)))
            .sum())
    }

    /// Translates the support by `k`.
    pub fn shift(&self, k: &IntVec) -> Result<Filter> {
        if k.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: k.dim(),
            });
        }
        Ok(Filter {
            dim: self.dim,
            taps: self.taps.iter().map(|(p, c)| (p + k, c.clone())).collect(),
        })
    }

    /// Multiplies every tap by `c`.
    pub fn scaled(&self, c: &RadCoeff) -> Filter {
        Filter {
            dim: self.dim,
            taps: self
                .taps
                .iter()
                .map(|(k, t)| (k.clone(), t.mul(c)))
                .filter(|(_, t)| !t.is_zero())
                .collect(),
        }
    }

    /// Exact sum of all taps.
    pub fn tap_sum(&self) -> Result<RadCoeff> {
        let mut acc = RadCoeff::zero();
        for (k, c) in &self.taps {
            acc = acc
                .checked_add(c)
                .ok_or_else(|| Error::IncommensurableTaps { offset: k.clone() })?;
        }
        Ok(acc)
    }

    /// Recognizes `w (delta_p - delta_q)` with `w > 0`.
    pub fn as_two_tap(&self) -> Option<TwoTap> {
        if self.taps.len() != 2 {
            return None;
        }
        let mut it = self.taps.iter();
        let (k1, c1) = it.next()?;
        let (k2, c2) = it.next()?;
        if c1.sign() * c2.sign() != -1 || c1.radicand() != c2.radicand() {
            return None;
        }
        let (pos, neg) = if c1.sign() > 0 { (k1, k2) } else { (k2, k1) };
        Some(TwoTap {
            pos: pos.clone(),
            neg: neg.clone(),
            weight: c1.abs(),
        })
    }

    /// Writes every tap as `q * sqrt(rho)` for a single `rho`, after scaling
    /// all taps by `sqrt(scale)`. Returns `(rho, taps)`; fails when the taps
    /// do not share a common radical.
    pub fn radical_form(
        &self,
        scale: &BigRational,
    ) -> Result<(BigRational, Vec<(IntVec, BigRational)>)> {
        let mut rho: Option<BigRational> = None;
        let mut out = Vec::with_capacity(self.taps.len());
        for (k, c) in &self.taps {
            let r = c.radicand() * scale;
            let base = rho.get_or_insert_with(|| r.clone());
            let q = crate::coeff::rational_sqrt(&(&r / &*base))
                .ok_or_else(|| Error::IncommensurableTaps { offset: k.clone() })?;
            out.push((k.clone(), if c.sign() < 0 { -q } else { q }));
        }
        Ok((rho.unwrap_or_else(BigRational::zero), out))
    }
}

/// `{lowpass; highpass_1, ..., highpass_s}`, all of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterBank {
    dim: usize,
    lowpass: Filter,
    highpass: Vec<Filter>,
}

impl FilterBank {
    pub fn new(lowpass: Filter, highpass: Vec<Filter>) -> Result<Self> {
        let dim = lowpass.dim();
        for f in &highpass {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        Ok(FilterBank {
            dim,
            lowpass,
            highpass,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lowpass(&self) -> &Filter {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[Filter] {
        &self.highpass
    }

    /// Low-pass followed by the high-pass filters.
    pub fn filters(&self) -> impl Iterator<Item = &Filter> {
        std::iter::once(&self.lowpass).chain(self.highpass.iter())
    }

    /// Returns a copy with the high-pass list replaced.
    pub fn with_highpass(&self, highpass: Vec<Filter>) -> Result<Self> {
        Self::new(self.lowpass.clone(), highpass)
    }

    /// All high-pass filters as two-tap differences.
    pub fn two_taps(&self) -> Result<Vec<TwoTap>> {
        self.highpass
            .iter()
            .enumerate()
            .map(|(index, f)| f.as_two_tap().ok_or(Error::NotTwoTap { index }))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&BankDoc::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: BankDoc = serde_json::from_str(s)?;
        doc.try_into()
    }
}

impl Filter {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FilterDoc::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: FilterDoc = serde_json::from_str(s)?;
        doc.try_into()
    }
}

// Wire format

#[derive(Serialize, Deserialize)]
struct RationalDoc {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct CoeffDoc {
    sign: i8,
    radicand: RationalDoc,
}

#[derive(Serialize, Deserialize)]
struct TapDoc {
    offset: Vec<i64>,
    coeff: CoeffDoc,
}

#[derive(Serialize, Deserialize)]
struct FilterDoc {
    dim: usize,
    taps: Vec<TapDoc>,
}

#[derive(Serialize, Deserialize)]
struct BankDoc {
    dim: usize,
    lowpass: FilterDoc,
    highpass: Vec<FilterDoc>,
}

impl From<&RadCoeff> for CoeffDoc {
    fn from(c: &RadCoeff) -> Self {
        CoeffDoc {
            sign: c.sign(),
            radicand: RationalDoc {
                num: c.radicand().numer().to_string(),
                den: c.radicand().denom().to_string(),
            },
        }
    }
}

impl TryFrom<CoeffDoc> for RadCoeff {
    type Error = Error;
    fn try_from(doc: CoeffDoc) -> Result<Self> {
        let r = parse_rational(&doc.radicand.num, &doc.radicand.den)?;
        if r.is_negative() {
            return Err(Error::InvalidCoefficient("negative radicand".into()));
        }
        if r.is_zero() != (doc.sign == 0) {
            return Err(Error::InvalidCoefficient(
                "sign is zero exactly when the radicand is zero".into(),
            ));
        }
        RadCoeff::new(doc.sign, r)
    }
}

impl From<&Filter> for FilterDoc {
    fn from(f: &Filter) -> Self {
        FilterDoc {
            dim: f.dim,
            taps: f
                .taps
                .iter()
                .map(|(k, c)| TapDoc {
                    offset: k.entries().to_vec(),
                    coeff: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FilterDoc> for Filter {
    type Error = Error;
    fn try_from(doc: FilterDoc) -> Result<Self> {
        let taps = doc
            .taps
            .into_iter()
            .map(|t| Ok((IntVec::new(t.offset), RadCoeff::try_from(t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Filter::from_taps(doc.dim, taps)
    }
}

impl From<&FilterBank> for BankDoc {
    fn from(b: &FilterBank) -> Self {
        BankDoc {
            dim: b.dim,
            lowpass: (&b.lowpass).into(),
            highpass: b.highpass.iter().map(Into::into).collect(),
        }
    }
}

impl TryFrom<BankDoc> for FilterBank {
    type Error = Error;
    fn try_from(doc: BankDoc) -> Result<Self> {
        let lowpass = Filter::try_from(doc.lowpass)?;
        if lowpass.dim() != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                found: lowpass.dim(),
            });
        }
        let highpass = doc
            .highpass
            .into_iter()
            .map(Filter::try_from)
            .collect::<Result<Vec<_>>>()?;
        FilterBank::new(lowpass, highpass)
    }
}
