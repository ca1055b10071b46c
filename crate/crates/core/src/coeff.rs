//! Exact filter coefficients of the form `sign * sqrt(radicand)`.
//!
//! Every coefficient produced by the constructions in this crate (`2^-d`,
//! `sqrt(2)/8`, `2^-n sqrt(m1 m2)`, ...) has this shape, and every product
//! needed by the tight-frame identities is rational, which keeps the verifier
//! exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `sign * sqrt(radicand)` with `sign` in `{-1, 0, 1}` and `radicand >= 0`
/// in lowest terms. Zero is represented only as `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadCoeff {
    sign: i8,
    radicand: BigRational,
}

impl RadCoeff {
    pub fn zero() -> Self {
        RadCoeff {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        RadCoeff {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// Builds `sign * sqrt(radicand)`. A zero radicand forces sign 0.
    pub fn new(sign: i8, radicand: BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::InvalidCoefficient("negative radicand".into()));
        }
        if !(-1..=1).contains(&sign) {
            return Err(Error::InvalidCoefficient(format!("sign {sign}")));
        }
        match (sign == 0, radicand.is_zero()) {
            (true, true) => Ok(Self::zero()),
            (false, false) => Ok(RadCoeff { sign, radicand }),
            _ => Err(Error::InvalidCoefficient(
                "sign is zero exactly when the radicand is zero".into(),
            )),
        }
    }

    /// `sign * sqrt(num/den)`; panics on a zero denominator.
    pub fn sqrt_of(sign: i8, num: i64, den: i64) -> Self {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        if r.is_zero() || sign == 0 {
            Self::zero()
        } else {
            Self::new(sign.signum(), r).expect("valid coefficient")
        }
    }

    /// Exact rational value `q`, stored as `sign(q) * sqrt(q^2)`.
    pub fn from_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadCoeff {
            sign: if q.is_negative() { -1 } else { 1 },
            radicand: q * q,
        }
    }

    /// `2^-k` as a coefficient.
    pub fn pow2_inv(k: u32) -> Self {
        let den = BigInt::one() << (2 * k as usize);
        RadCoeff {
            sign: 1,
            radicand: BigRational::new(BigInt::one(), den),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the coefficient, which is its radicand.
    pub fn square(&self) -> &BigRational {
        &self.radicand
    }

    pub fn abs(&self) -> Self {
        RadCoeff {
            sign: self.sign.abs(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Exact rational value when the radicand is a perfect square.
    pub fn as_rational(&self) -> Option<BigRational> {
        rational_sqrt(&self.radicand).map(|r| if self.sign < 0 { -r } else { r })
    }

    /// Product of two coefficients, always of the same form.
    pub fn mul(&self, other: &RadCoeff) -> RadCoeff {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        RadCoeff {
            sign: self.sign * other.sign,
            radicand: &self.radicand * &other.radicand,
        }
    }

    /// Product as an exact rational; fails unless the product of radicands is
    /// a rational square.
    pub fn mul_rational(&self, other: &RadCoeff) -> Result<BigRational> {
        if self.is_zero() || other.is_zero() {
            return Ok(BigRational::zero());
        }
        let root = if self.radicand == other.radicand {
            self.radicand.clone()
        } else {
            rational_sqrt(&(&self.radicand * &other.radicand)).ok_or(Error::NonSquareProduct)?
        };
        Ok(if self.sign * other.sign < 0 {
            -root
        } else {
            root
        })
    }

    /// Exact sum, defined when the radicands differ by a rational square
    /// factor. Returns `None` otherwise.
    pub fn checked_add(&self, other: &RadCoeff) -> Option<RadCoeff> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        // other = s2 * q * sqrt(r1) with q = sqrt(r2 / r1)
        let q = if self.radicand == other.radicand {
            BigRational::one()
        } else {
            rational_sqrt(&(&other.radicand / &self.radicand))?
        };
        let t = BigRational::from_integer(self.sign.into())
            + q * BigRational::from_integer(other.sign.into());
        if t.is_zero() {
            return Some(Self::zero());
        }
        Some(RadCoeff {
            sign: if t.is_negative() { -1 } else { 1 },
            radicand: &t * &t * &self.radicand,
        })
    }
}

impl std::ops::Neg for &RadCoeff {
    type Output = RadCoeff;
    fn neg(self) -> RadCoeff {
        RadCoeff {
            sign: -self.sign,
            radicand: self.radicand.clone(),
        }
    }
}

impl PartialOrd for RadCoeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by value: signs first, then magnitudes.
impl Ord for RadCoeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {
                let mag = self.radicand.cmp(&other.radicand);
                if self.sign < 0 {
                    mag.reverse()
                } else {
                    mag
                }
            }
            o => o,
        }
    }
}

impl fmt::Display for RadCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let prefix = if s < 0 { "-" } else { "" };
                match self.as_rational() {
                    Some(q) => write!(f, "{prefix}{}", q.abs()),
                    None => write!(f, "{prefix}sqrt({})", self.radicand),
                }
            }
        }
    }
}

fn biguint_sqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let num = biguint_sqrt_exact(q.numer().magnitude())?;
    let den = biguint_sqrt_exact(q.denom().magnitude())?;
    Some(BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    ))
}

/// Parses a rational from decimal numerator and denominator strings.
pub fn parse_rational(num: &str, den: &str) -> Result<BigRational> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::InvalidCoefficient(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::InvalidCoefficient(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::InvalidCoefficient("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_rational_examples() {
        let a = RadCoeff::sqrt_of(1, 1, 16);
        let b = RadCoeff::sqrt_of(-1, 1, 16);
        assert_eq!(a.mul_rational(&b).unwrap(), rat(-1, 16));

        let w = RadCoeff::sqrt_of(1, 1, 32);
        assert_eq!(w.mul_rational(&w).unwrap(), rat(1, 32));

        let z = RadCoeff::zero();
        assert_eq!(
            z.mul_rational(&RadCoeff::sqrt_of(1, 1, 4)).unwrap(),
            rat(0, 1)
        );
    }

    #[test]
    fn mul_rational_rejects_non_square() {
        let a = RadCoeff::sqrt_of(1, 1, 32);
        let b = RadCoeff::sqrt_of(1, 1, 16);
        assert!(matches!(a.mul_rational(&b), Err(Error::NonSquareProduct)));
    }

    #[test]
    fn representations_from_the_constructions() {
        // 2^-d with d = 3
        let c = RadCoeff::pow2_inv(3);
        assert_eq!(c.radicand(), &rat(1, 64));
        assert_eq!(c.as_rational().unwrap(), rat(1, 8));
        // sqrt(2)/8
        let w = RadCoeff::sqrt_of(1, 2, 64);
        assert_eq!(w.radicand(), &rat(1, 32));
        assert!((w.to_f64() - 2f64.sqrt() / 8.0).abs() < 1e-15);
        assert!(w.as_rational().is_none());
    }

    #[test]
    fn invariants_enforced() {
        assert!(RadCoeff::new(0, rat(1, 2)).is_err());
        assert!(RadCoeff::new(1, rat(0, 1)).is_err());
        assert!(RadCoeff::new(1, rat(-1, 2)).is_err());
        assert!(RadCoeff::new(2, rat(1, 2)).is_err());
        assert_eq!(RadCoeff::new(0, rat(0, 5)).unwrap(), RadCoeff::zero());
        // lowest terms make equality structural
        assert_eq!(RadCoeff::sqrt_of(1, 2, 4), RadCoeff::sqrt_of(1, 1, 2));
    }

    #[test]
    fn checked_add_commensurable() {
        let eighth = RadCoeff::sqrt_of(1, 1, 64);
        let s = eighth.checked_add(&eighth).unwrap();
        assert_eq!(s, RadCoeff::sqrt_of(1, 1, 16));
        assert!(eighth.checked_add(&-&eighth).unwrap().is_zero());
        // 1/8 - 1/4 = -1/8
        let quarter = RadCoeff::sqrt_of(1, 1, 16);
        assert_eq!(
            eighth.checked_add(&-&quarter).unwrap(),
            RadCoeff::sqrt_of(-1, 1, 64)
        );
        // sqrt(2)/8 + sqrt(2)/8 = sqrt(2)/4
        let w = RadCoeff::sqrt_of(1, 1, 32);
        assert_eq!(w.checked_add(&w).unwrap(), RadCoeff::sqrt_of(1, 1, 8));
    }

    #[test]
    fn checked_add_incommensurable() {
        let a = RadCoeff::sqrt_of(1, 1, 32);
        let b = RadCoeff::sqrt_of(1, 1, 16);
        assert!(a.checked_add(&b).is_none());
    }

    #[test]
    fn ordering_by_value() {
        let mut v = [
            RadCoeff::sqrt_of(1, 1, 4),
            RadCoeff::sqrt_of(-1, 1, 4),
            RadCoeff::zero(),
            RadCoeff::sqrt_of(-1, 1, 16),
            RadCoeff::sqrt_of(1, 1, 16),
        ];
        v.sort();
        let f: Vec<f64> = v.iter().map(RadCoeff::to_f64).collect();
        assert_eq!(f, vec![-0.5, -0.25, 0.0, 0.25, 0.5]);
    }
}
