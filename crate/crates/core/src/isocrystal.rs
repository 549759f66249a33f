//! Isocrystals over `F_q`, stored through `det(1 - t F^n)`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{rat, Matrix, PAdicContext, RatPolynomial};

/// An isocrystal known through the characteristic polynomial of its
/// linearized Frobenius `F^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsocrystalCharPoly {
    ctx: PAdicContext,
    poly: RatPolynomial,
}

/// One isotypic part: `multiplicity` is its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeDatum {
    pub slope: BigRational,
    pub multiplicity: usize,
}

impl SlopeDatum {
    pub fn new(slope: BigRational, multiplicity: usize) -> Self {
        SlopeDatum {
            slope,
            multiplicity,
        }
    }
}

impl fmt::Display for SlopeDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.slope, self.multiplicity)
    }
}

impl IsocrystalCharPoly {
    pub fn new(poly: RatPolynomial, ctx: &PAdicContext) -> Result<Self> {
        if poly.constant_term() != rat(1) {
            return Err(Error::NotZetaFactor);
        }
        Ok(IsocrystalCharPoly {
            ctx: ctx.clone(),
            poly,
        })
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn poly(&self) -> &RatPolynomial {
        &self.poly
    }

    pub fn dimension(&self) -> usize {
        self.poly.degree()
    }

    /// Slopes `v_q(u)` of the reciprocal roots, with multiplicity, ascending.
    pub fn slopes(&self) -> Vec<BigRational> {
        let n = rat(self.ctx.n() as i64);
        self.poly
            .newton_slopes(&self.ctx)
            .expect("constant term checked at construction")
            .slopes
            .into_iter()
            .map(|s| s / &n)
            .collect()
    }

    pub fn direct_sum(&self, other: &IsocrystalCharPoly) -> Result<IsocrystalCharPoly> {
        if self.ctx != other.ctx {
            return Err(Error::Dimension("isocrystals over different fields".into()));
        }
        Ok(IsocrystalCharPoly {
            ctx: self.ctx.clone(),
            poly: self.poly.mul(&other.poly),
        })
    }

    /// Multiplicity of `q^m` as a reciprocal root, by exact division.
    pub fn eigenvalue_multiplicity(&self, m: i64) -> usize {
        self.poly.split_linear_factor(&self.ctx.q_pow(m)).0
    }
}

/// `E_{s/r}`: `det(1 - t F^n)` of the simple isocrystal of slope `s/r`.
///
/// For `n = 1` this is `1 - p^s t^r`. For general `n` the linear map `F^n`
/// splits into `g = gcd(n, r)` cycles, giving `(1 - p^{ns/g} t^{r/g})^g`.
pub fn simple_charpoly(s: i64, r: i64, ctx: &PAdicContext) -> Result<IsocrystalCharPoly> {
    if r <= 0 || s.gcd(&r) != 1 {
        return Err(Error::NotCoprime { s, r });
    }
    let n = ctx.n() as i64;
    let g = n.gcd(&r);
    let mut coeffs = vec![BigRational::zero(); (r / g) as usize + 1];
    coeffs[0] = rat(1);
    coeffs[(r / g) as usize] = -ctx.p_pow(n * s / g);
    let poly = RatPolynomial::new(coeffs).pow(g as usize);
    IsocrystalCharPoly::new(poly, ctx)
}

/// Slopes aggregated with multiplicities, ascending.
pub fn slope_decomposition(ic: &IsocrystalCharPoly) -> Vec<SlopeDatum> {
    aggregate(ic.slopes())
}

pub(crate) fn aggregate(slopes: Vec<BigRational>) -> Vec<SlopeDatum> {
    let mut counts: BTreeMap<BigRational, usize> = BTreeMap::new();
    for s in slopes {
        *counts.entry(s).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(slope, multiplicity)| SlopeDatum {
            slope,
            multiplicity,
        })
        .collect()
}

/// Breuil–Kisin twist `M{i}`: `P(t) ↦ P(q^{-i} t)`.
pub fn bk_twist(ic: &IsocrystalCharPoly, i: i64) -> IsocrystalCharPoly {
    IsocrystalCharPoly {
        ctx: ic.ctx.clone(),
        poly: ic.poly.scale_variable(&ic.ctx.q_pow(-i)),
    }
}

pub fn is_effective(ic: &IsocrystalCharPoly) -> bool {
    ic.slopes().iter().all(|s| !s.is_negative())
}

/// Matrix of a Frobenius on a lattice over `Z_p` (`n = 1`).
///
/// Column `j` holds `F(f_j)` in the basis `f_1, ..., f_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneMatrix {
    ctx: PAdicContext,
    a: Matrix,
}

impl DieudonneMatrix {
    /// Requires `A` p-integral, invertible, and `p A^{-1}` p-integral.
    pub fn new(a: Matrix, ctx: &PAdicContext) -> Result<Self> {
        if ctx.n() != 1 {
            return Err(Error::RequiresPrimeField("a Frobenius matrix"));
        }
        if !a.is_square() {
            return Err(Error::Dimension("Frobenius matrix must be square".into()));
        }
        if !a.is_p_integral(ctx) {
            return Err(Error::NotPIntegral("Frobenius matrix".into()));
        }
        let inv = a
            .inverse()
            .ok_or_else(|| Error::InvalidGauge("Frobenius matrix is singular".into()))?;
        if !inv.scale(&ctx.p_pow(1)).is_p_integral(ctx) {
            return Err(Error::InvalidGauge("p F^{-1} is not p-integral".into()));
        }
        Ok(DieudonneMatrix {
            ctx: ctx.clone(),
            a,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn charpoly(&self) -> IsocrystalCharPoly {
        IsocrystalCharPoly {
            ctx: self.ctx.clone(),
            poly: self.a.det_one_minus_t(),
        }
    }
}

/// A Dieudonné lattice in `E_{s/r}` for `0 ≤ s ≤ r`.
///
/// Basis `f_1, ..., f_r` with `F(f_j) = p f_{j-1}` for `2 ≤ j ≤ s`,
/// `F(f_j) = f_{j-1}` for `j > s`, and `F(f_1) = p^{min(s,1)} f_r`; exactly
/// `s` columns carry a `p`, so `F^r = p^s`.
pub fn dm_lattice(s: i64, r: i64, ctx: &PAdicContext) -> Result<DieudonneMatrix> {
    if r <= 0 || s.gcd(&r) != 1 {
        return Err(Error::NotCoprime { s, r });
    }
    if s < 0 || s > r {
        return Err(Error::SlopeOutOfRange { s, r });
    }
    let h = r as usize;
    let s = s as usize;
    let p = ctx.p_pow(1);
    let mut a = Matrix::zeros(h, h);
    a.set(h - 1, 0, if s >= 1 { p.clone() } else { rat(1) });
    for j in 1..h {
        a.set(j - 1, j, if j < s { p.clone() } else { rat(1) });
    }
    DieudonneMatrix::new(a, ctx)
}
