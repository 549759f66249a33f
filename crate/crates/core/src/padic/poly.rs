use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{rat, valuation, PAdicContext};
use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients, ascending degree.
///
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

/// Valuations `v_p(u)` of the reciprocal roots `u` of a zeta factor, with
/// multiplicity, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygonResult {
    pub slopes: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_ints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> RatPolynomial {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `P(c t)`.
    pub fn scale_variable(&self, c: &BigRational) -> RatPolynomial {
        let mut power = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        Self::new(out)
    }

    /// `t^deg P(1/t)`.
    pub fn reversed(&self) -> RatPolynomial {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `P(1 + y)` as a polynomial in `y`.
    pub fn taylor_shift_one(&self) -> RatPolynomial {
        let mut c = self.coeffs.clone();
        let d = c.len();
        // Repeated synthetic division by (y - 1) in place.
        for i in 0..d {
            for j in (i..d.saturating_sub(1)).rev() {
                let next = c[j + 1].clone();
                c[j] += next;
            }
        }
        Self::new(c)
    }

    /// Divides by `(1 - c t)` if it is a factor.
    pub fn divide_linear(&self, c: &BigRational) -> Option<RatPolynomial> {
        if self.is_zero() {
            return None;
        }
        let d = self.degree();
        if d == 0 {
            return None;
        }
        // a_k = q_k - c q_{k-1}
        let mut q = Vec::with_capacity(d);
        let mut prev = BigRational::zero();
        for k in 0..d {
            let qk = &self.coeffs[k] + c * &prev;
            q.push(qk.clone());
            prev = qk;
        }
        if (&self.coeffs[d] + c * prev).is_zero() {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Multiplicity of `(1 - c t)` as a factor, together with the cofactor.
    pub fn split_linear_factor(&self, c: &BigRational) -> (usize, RatPolynomial) {
        let mut m = 0;
        let mut rest = self.clone();
        while let Some(next) = rest.divide_linear(c) {
            rest = next;
            m += 1;
        }
        (m, rest)
    }

    /// Number of leading zero coefficients, and the quotient by that power of `t`.
    pub fn strip_t_power(&self) -> (usize, RatPolynomial) {
        let z = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (z, Self::new(self.coeffs[z.min(self.coeffs.len())..].to_vec()))
    }

    /// Lower convex hull slopes of `{(k, v_p(a_k))}` with multiplicity.
    ///
    /// For a polynomial with nonzero constant term the roots have valuations
    /// equal to the negated slopes; reciprocal roots have valuations equal to
    /// the slopes themselves.
    pub fn hull_slopes(&self, ctx: &PAdicContext) -> Vec<BigRational> {
        let points: Vec<(i64, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, valuation(c, ctx).expect("nonzero")))
            .collect();
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for pt in points {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // Drop the middle point unless it lies strictly below the chord.
                let cross = (x2 - x1) as i128 * (pt.1 - y1) as i128
                    - (y2 - y1) as i128 * (pt.0 - x1) as i128;
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let mut slopes = Vec::new();
        for w in hull.windows(2) {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            let s = BigRational::new(BigInt::from(y2 - y1), BigInt::from(x2 - x1));
            for _ in 0..(x2 - x1) {
                slopes.push(s.clone());
            }
        }
        slopes
    }

    /// Valuations of the reciprocal roots of a zeta factor `P` with `P(0) = 1`.
    pub fn newton_slopes(&self, ctx: &PAdicContext) -> Result<NewtonPolygonResult> {
        if self.constant_term() != BigRational::one() {
            return Err(Error::NotZetaFactor);
        }
        Ok(NewtonPolygonResult {
            slopes: self.hull_slopes(ctx),
        })
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}
