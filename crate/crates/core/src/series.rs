//! Truncated power series with exact rational coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `c_0 + c_1 z + ... + c_N z^N`, arithmetic exact modulo `z^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPowerSeries {
    coeffs: Vec<BigRational>,
}

impl FormalPowerSeries {
    pub fn zero(n: usize) -> Self {
        FormalPowerSeries {
            coeffs: vec![BigRational::zero(); n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Truncates or zero-pads `coeffs` to degree `n`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, n: usize) -> Self {
        coeffs.resize(n + 1, BigRational::zero());
        FormalPowerSeries { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I, n: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let v = coeffs
            .into_iter()
            .take(n + 1)
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        Self::from_coeffs(v, n)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch(
                self.truncation(),
                other.truncation(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FormalPowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FormalPowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.truncation();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidParams(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let n = self.truncation();
        let mut out = Self::zero(n);
        out.coeffs[0] = c0.recip();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -acc / c0;
        }
        Ok(out)
    }

    /// `exp` of a series with zero constant term, via `k f_k = Σ j g_j f_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidParams(
                "exp of a series with nonzero constant term".into(),
            ));
        }
        let n = self.truncation();
        let mut out = Self::zero(n);
        out.coeffs[0] = BigRational::one();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc +=
                        &self.coeffs[j] * BigRational::from_integer(j.into()) * &out.coeffs[k - j];
                }
            }
            out.coeffs[k] = acc / BigRational::from_integer(k.into());
        }
        Ok(out)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, or an error naming the first fractional degree.
    pub fn integer_coefficients(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Internal(format!(
                        "series coefficient at z^{k} is {c}, not an integer"
                    )))
                }
            })
            .collect()
    }
}

/// `exp(Σ_{n≥1} counts[n-1] zⁿ/n)` truncated at degree `n_max`; the
/// coefficients of a zeta function are integers, so anything else is a bug.
pub fn zeta_series(counts: &[BigUint], n_max: usize) -> Result<FormalPowerSeries> {
    if counts.len() < n_max {
        return Err(Error::Horizon {
            have: counts.len(),
            need: n_max,
        });
    }
    let mut log = FormalPowerSeries::zero(n_max);
    for n in 1..=n_max {
        log.coeffs[n] = BigRational::new(BigInt::from(counts[n - 1].clone()), BigInt::from(n));
    }
    let z = log.exp()?;
    z.integer_coefficients()?;
    Ok(z)
}

impl fmt::Display for FormalPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            match k {
                0 => {}
                1 => f.write_str(" z")?,
                _ => write!(f, " z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &FormalPowerSeries) -> Vec<i64> {
        s.integer_coefficients()
            .unwrap()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn zeta_of_nothing_is_one() {
        let z = zeta_series(&vec![BigUint::zero(); 6], 6).unwrap();
        assert_eq!(z, FormalPowerSeries::one(6));
    }

    #[test]
    fn one_fixed_point_gives_geometric_series() {
        let z = zeta_series(&vec![BigUint::one(); 8], 8).unwrap();
        assert_eq!(ints(&z), vec![1; 9]);
    }

    #[test]
    fn full_two_shift() {
        let counts: Vec<BigUint> = (1..=7).map(|n| BigUint::from(1u32 << n)).collect();
        let z = zeta_series(&counts, 7).unwrap();
        assert_eq!(ints(&z), (0..=7).map(|k| 1i64 << k).collect::<Vec<_>>());
    }

    #[test]
    fn fractional_counts_are_reported() {
        // a single point of period 2 without its partner
        let counts = vec![BigUint::zero(), BigUint::one()];
        assert!(matches!(zeta_series(&counts, 2), Err(Error::Internal(_))));
    }

    #[test]
    fn reciprocal_and_product() {
        let s = FormalPowerSeries::from_integers([1, -1], 5);
        let r = s.reciprocal().unwrap();
        assert_eq!(ints(&r), vec![1; 6]);
        assert_eq!(s.mul(&r).unwrap(), FormalPowerSeries::one(5));
        assert!(FormalPowerSeries::zero(3).reciprocal().is_err());
    }

    #[test]
    fn exp_log_round_trip() {
        let g = FormalPowerSeries::from_integers([0, 2, 0, 1], 6);
        let e = g.exp().unwrap();
        let e2 = g.add(&g).unwrap().exp().unwrap();
        assert_eq!(e.mul(&e).unwrap(), e2);
    }

    #[test]
    fn truncation_mismatch() {
        let a = FormalPowerSeries::one(3);
        let b = FormalPowerSeries::one(4);
        assert!(matches!(a.add(&b), Err(Error::TruncationMismatch(3, 4))));
    }

    #[test]
    fn display_prints_every_term() {
        let s = FormalPowerSeries::from_coeffs(
            vec![
                BigRational::one(),
                BigRational::zero(),
                BigRational::new((-3).into(), 2.into()),
            ],
            3,
        );
        assert_eq!(s.to_string(), "1 + 0 z - 3/2 z^2 + 0 z^3");
    }
}
