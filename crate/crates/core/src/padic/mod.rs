//! Exact arithmetic over the rationals with p-adic bookkeeping.
//!
//! Nothing here truncates: a p-adic integer is modelled by a rational
//! number whose denominator is prime to p, and every length or valuation
//! is an exact integer.

mod matrix;
mod module;
mod poly;
mod snf;

pub use matrix::Matrix;
pub use module::{FpModule, Kernel, ModuleMap, Presentation};
pub use poly::{NewtonPolygonResult, RatPolynomial};
pub use snf::{p_local_snf, Lattice, PLocalSnf};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The arithmetic frame: the residue characteristic `p` and the degree `n`
/// of the base field `F_q`, `q = p^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct PAdicContext {
    p: u64,
    n: u32,
    p_big: BigInt,
    q: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    p: u64,
    n: u32,
}

impl TryFrom<RawContext> for PAdicContext {
    type Error = Error;

    fn try_from(raw: RawContext) -> Result<Self> {
        PAdicContext::new(raw.p, raw.n)
    }
}

impl From<PAdicContext> for RawContext {
    fn from(ctx: PAdicContext) -> Self {
        RawContext { p: ctx.p, n: ctx.n }
    }
}

impl PAdicContext {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let p_big = BigInt::from(p);
        let q = Pow::pow(&p_big, n);
        Ok(PAdicContext { p, n, p_big, q })
    }

    /// Context for the prime field `F_p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p_big(&self) -> &BigInt {
        &self.p_big
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `p^e` as an exact rational; `e` may be negative.
    pub fn p_pow(&self, e: i64) -> BigRational {
        rational_pow(&self.p_big, e)
    }

    /// `q^e` as an exact rational; `e` may be negative.
    pub fn q_pow(&self, e: i64) -> BigRational {
        rational_pow(&self.q, e)
    }

    pub fn valuation(&self, x: &BigRational) -> Result<i64> {
        valuation(x, self)
    }

    pub fn is_p_integral(&self, x: &BigRational) -> bool {
        x.is_zero() || int_valuation(x.denom(), &self.p_big) == 0
    }

    pub fn is_unit(&self, x: &BigRational) -> bool {
        !x.is_zero() && valuation(x, self).map(|v| v == 0).unwrap_or(false)
    }

    /// Splits a nonzero rational as `p^v * u` with `u` a p-adic unit.
    pub fn split_unit(&self, x: &BigRational) -> Result<(i64, BigRational)> {
        let v = valuation(x, self)?;
        Ok((v, x * self.p_pow(-v)))
    }
}

impl fmt::Display for PAdicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}, n={}, q={}", self.p, self.n, self.q)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn rational_pow(base: &BigInt, e: i64) -> BigRational {
    let mag: BigInt = Pow::pow(base, e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!x.is_zero());
    let mut v = 0;
    let mut m = x.abs();
    loop {
        let (quot, rem) = m.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        v += 1;
        m = quot;
    }
}

/// `v_p(x)` for a nonzero rational.
pub fn valuation(x: &BigRational, ctx: &PAdicContext) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(int_valuation(x.numer(), ctx.p_big()) - int_valuation(x.denom(), ctx.p_big()))
}

/// `|x|_p` represented by its exponent: `|x|_p = p^{norm_exponent}`.
pub fn norm_exponent(x: &BigRational, ctx: &PAdicContext) -> Result<i64> {
    valuation(x, ctx).map(|v| -v)
}

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats a power of `p` the way reports print norms, e.g. `5^-1`.
pub fn format_p_power(p: u64, e: i64) -> String {
    format!("{p}^{e}")
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact integer value of a rational known to be integral.
pub(crate) fn to_i64(x: &BigRational) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}
