//! Direction census of two-tap high-pass filters.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::filter::FilterBank;
use crate::lattice::IntVec;

/// A nonzero lattice direction reduced by the gcd of its entries, with the
/// first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectionVector(IntVec);

impl DirectionVector {
    /// `None` for the zero vector.
    pub fn canonical(v: &IntVec) -> Option<Self> {
        let g = v.entries().iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return None;
        }
        let lead = *v.entries().iter().find(|&&x| x != 0)?;
        let s = if lead < 0 { -g } else { g };
        Some(DirectionVector(IntVec::new(
            v.entries().iter().map(|&x| x / s).collect(),
        )))
    }

    pub fn vector(&self) -> &IntVec {
        &self.0
    }

    /// Slope angle in degrees within `[0, 180)`, for planar directions.
    pub fn angle_degrees(&self) -> Option<f64> {
        if self.0.dim() != 2 {
            return None;
        }
        let deg = (self.0[1] as f64).atan2(self.0[0] as f64).to_degrees();
        Some(if deg < 0.0 { deg + 180.0 } else { deg })
    }
}

impl fmt::Display for DirectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub counts: BTreeMap<DirectionVector, usize>,
}

impl Census {
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Entries ordered by slope angle for planar banks, lexicographically
    /// otherwise.
    pub fn ordered(&self) -> Vec<(&DirectionVector, usize)> {
        let mut v: Vec<_> = self.counts.iter().map(|(k, &c)| (k, c)).collect();
        if v.iter().all(|(k, _)| k.angle_degrees().is_some()) {
            v.sort_by(|a, b| {
                a.0.angle_degrees()
                    .unwrap()
                    .total_cmp(&b.0.angle_degrees().unwrap())
            });
        }
        v
    }
}

/// Counts high-pass filters per direction. Every high-pass filter must be a
/// signed two-tap difference.
pub fn direction_census(bank: &FilterBank) -> Result<Census> {
    let mut census = Census::default();
    for (index, f) in bank.highpass().iter().enumerate() {
        let t = f.as_two_tap().ok_or(Error::NotTwoTap { index })?;
        let dir =
            DirectionVector::canonical(&(&t.pos - &t.neg)).ok_or(Error::NotTwoTap { index })?;
        *census.counts.entry(dir).or_default() += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{build_haar_bank, haar_direction_count};

    #[test]
    fn canonical_form() {
        let d = DirectionVector::canonical(&IntVec::from([-2, 4])).unwrap();
        assert_eq!(d.vector(), &IntVec::from([1, -2]));
        let d = DirectionVector::canonical(&IntVec::from([0, -3, 6])).unwrap();
        assert_eq!(d.vector(), &IntVec::from([0, 1, -2]));
        assert!(DirectionVector::canonical(&IntVec::from([0, 0])).is_none());
        assert_eq!(
            DirectionVector::canonical(&IntVec::from([2, 0])),
            DirectionVector::canonical(&IntVec::from([1, 0]))
        );
    }

    #[test]
    fn angles() {
        let a = |v: [i64; 2]| {
            DirectionVector::canonical(&IntVec::from(v))
                .unwrap()
                .angle_degrees()
                .unwrap()
        };
        assert_eq!(a([1, 0]), 0.0);
        assert_eq!(a([0, -1]), 90.0);
        assert!((a([1, -1]) - 135.0).abs() < 1e-12);
        assert!((a([2, 1]) - 0.5f64.atan().to_degrees()).abs() < 1e-12);
    }

    #[test]
    fn haar_census() {
        assert_eq!(
            direction_census(&build_haar_bank(2).unwrap())
                .unwrap()
                .distinct(),
            4
        );
        assert_eq!(
            direction_census(&build_haar_bank(3).unwrap())
                .unwrap()
                .distinct(),
            13
        );
        for d in 1..=5 {
            let c = direction_census(&build_haar_bank(d).unwrap()).unwrap();
            assert_eq!(c.distinct(), haar_direction_count(d));
        }
    }

    #[test]
    fn rejects_non_two_tap() {
        let b = build_haar_bank(1).unwrap();
        let bad = b.with_highpass(vec![b.lowpass().clone()]).unwrap();
        assert!(matches!(
            direction_census(&bad),
            Err(Error::NotTwoTap { index: 0 })
        ));
    }
}
