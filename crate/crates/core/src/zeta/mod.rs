//! Zeta functions of gauges and the p-adic size of their special values.
//!
//! Route A evaluates the normalized limit exactly. Route B reaches `μ_syn`
//! from Newton polygons alone: `σ_j` from the slopes of `P_j`, `e_j` from the
//! polygon of `P_j` recentred at `q^r`, never factoring anything.

mod surface;
mod verify;

pub use surface::{artin_tate_check, surface_beta, surface_beta_exponent, ArtinTateReport, SurfaceData};
pub use verify::{
    shift_law, twist_shift_laws, verify_theorem, DegreeDiagnostics, LawReport, SpecialValueReport, Verdict,
};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gauge::GaugeSpec;
use crate::padic::{to_i64, valuation, PAdicContext, RatPolynomial};

/// `Z(M, t) = Π_j P_j(t)^{(-1)^{j+1}}`, with trivial factors dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFunction {
    ctx: PAdicContext,
    factors: BTreeMap<i64, RatPolynomial>,
}

impl ZetaFunction {
    pub fn new(factors: BTreeMap<i64, RatPolynomial>, ctx: &PAdicContext) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (j, p) in factors {
            if p.constant_term() != BigRational::one() {
                return Err(Error::NotZetaFactor);
            }
            if p.degree() > 0 {
                kept.insert(j, p);
            }
        }
        Ok(ZetaFunction {
            ctx: ctx.clone(),
            factors: kept,
        })
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn factors(&self) -> &BTreeMap<i64, RatPolynomial> {
        &self.factors
    }

    /// `P_j`, which is `1` outside the support.
    pub fn factor(&self, j: i64) -> RatPolynomial {
        self.factors.get(&j).cloned().unwrap_or_else(RatPolynomial::one)
    }

    /// The zeta function of `M{i}`: `t ↦ q^{-i} t` in every factor.
    pub fn twist(&self, i: i64) -> ZetaFunction {
        let c = self.ctx.q_pow(-i);
        ZetaFunction {
            ctx: self.ctx.clone(),
            factors: self.factors.iter().map(|(&j, p)| (j, p.scale_variable(&c))).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> ZetaFunction {
        ZetaFunction {
            ctx: self.ctx.clone(),
            factors: self.factors.iter().map(|(&j, p)| (j + k, p.clone())).collect(),
        }
    }

    /// `Z(M, t)`, or `None` at a pole.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for (&j, p) in &self.factors {
            let v = p.eval(t);
            if j.rem_euclid(2) == 1 {
                num *= v;
            } else {
                den *= v;
            }
        }
        (!den.is_zero()).then(|| num / den)
    }

    /// `ζ(M, s) = Z(M, q^{-s})` at an integer `s`.
    pub fn zeta_at(&self, s: i64) -> Option<BigRational> {
        self.eval(&self.ctx.q_pow(-s))
    }
}

/// Collects `det(1 - t F^n)` of the vector-bundle summands degree by degree.
pub fn zeta_from_gauge(g: &GaugeSpec) -> ZetaFunction {
    let mut factors: BTreeMap<i64, RatPolynomial> = BTreeMap::new();
    for s in g.summands() {
        if let Some(p) = s.zeta_factor() {
            let slot = factors.entry(s.degree()).or_insert_with(RatPolynomial::one);
            *slot = slot.mul(&p);
        }
    }
    ZetaFunction::new(factors, g.ctx()).expect("summand factors have constant term 1")
}

fn sign(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `m_j` and `P_j^*` with `P_j = (1 - q^r t)^{m_j} P_j^*`.
pub fn split_at(p: &RatPolynomial, r: i64, ctx: &PAdicContext) -> (usize, RatPolynomial) {
    p.split_linear_factor(&ctx.q_pow(r))
}

/// Order of the zero of `ζ(M, s)` at `s = r`; negative for a pole.
pub fn ord_at(z: &ZetaFunction, r: i64) -> i64 {
    z.factors
        .iter()
        .map(|(&j, p)| -sign(j) * split_at(p, r, &z.ctx).0 as i64)
        .sum()
}

/// `ν_j = v_p(P_j^*(q^{-r}))`.
pub fn nu(p: &RatPolynomial, r: i64, ctx: &PAdicContext) -> i64 {
    let (_, rest) = split_at(p, r, ctx);
    valuation(&rest.eval(&ctx.q_pow(-r)), ctx).expect("all zeros at q^{-r} removed")
}

/// `lim_{s→r} ζ(M, s) / (1 - q^{r-s})^ρ`, exactly.
pub fn special_value_limit(z: &ZetaFunction, r: i64) -> BigRational {
    let t = z.ctx.q_pow(-r);
    let mut out = BigRational::one();
    for (&j, p) in &z.factors {
        let v = split_at(p, r, &z.ctx).1.eval(&t);
        if sign(j) < 0 {
            out *= v;
        } else {
            out /= v;
        }
    }
    out
}

/// `a` with `|lim ζ(M, s)/(1 - q^{r-s})^ρ|_p = p^a`, i.e. `Σ_j (-1)^j ν_j`.
pub fn special_value_norm(z: &ZetaFunction, r: i64) -> i64 {
    z.factors.iter().map(|(&j, p)| sign(j) * nu(p, r, &z.ctx)).sum()
}

/// `σ = Σ_{v_p(u) < nr} (nr - v_p(u))` over reciprocal roots `u` of `P`.
pub fn slope_defect(p: &RatPolynomial, r: i64, ctx: &PAdicContext) -> i64 {
    let nr = BigRational::from_integer((ctx.n() as i64 * r).into());
    let total: BigRational = p
        .hull_slopes(ctx)
        .into_iter()
        .filter(|s| s < &nr)
        .map(|s| &nr - s)
        .sum();
    to_i64(&total).expect("polygon vertices are lattice points")
}

/// `e = Σ_{v_p(u) = nr, u ≠ q^r} v_p(1 - q^r/u)`.
///
/// The monic polynomial with roots `u q^{-r}` is recentred at `1`; after
/// removing the roots equal to `1`, the positive root valuations are exactly
/// the `v_p(u q^{-r} - 1)` for `v_p(u) = nr` (the others are `≤ 0`).
pub fn unit_root_defect(p: &RatPolynomial, r: i64, ctx: &PAdicContext) -> i64 {
    let d = p.degree();
    if d == 0 {
        return 0;
    }
    let coeffs: Vec<BigRational> = (0..=d)
        .map(|i| p.coeff(d - i) * ctx.q_pow(-r * (d - i) as i64))
        .collect();
    let (_, shifted) = RatPolynomial::new(coeffs).taylor_shift_one().strip_t_power();
    let total: BigRational = shifted
        .hull_slopes(ctx)
        .into_iter()
        .filter(|s| s.is_negative())
        .map(|s| -s)
        .sum();
    to_i64(&total).expect("polygon vertices are lattice points")
}

/// Route B exponents per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteB {
    /// `degree ↦ (σ_j, e_j)`.
    pub per_degree: BTreeMap<i64, (i64, i64)>,
    /// `b` with `μ_syn = p^b` for the vector-bundle part.
    pub exponent: i64,
}

/// `μ_syn = Π_j (p^{-e_j})^{(-1)^j}` for the vector-bundle part.
pub fn mu_route_b(z: &ZetaFunction, r: i64) -> RouteB {
    let per_degree: BTreeMap<i64, (i64, i64)> = z
        .factors
        .iter()
        .map(|(&j, p)| (j, (slope_defect(p, r, &z.ctx), unit_root_defect(p, r, &z.ctx))))
        .collect();
    let exponent = per_degree.iter().map(|(&j, &(_, e))| -sign(j) * e).sum();
    RouteB { per_degree, exponent }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::prime_field(p).unwrap()
    }

    fn elliptic(a: i64) -> ZetaFunction {
        let f = [(0, vec![1, -1]), (1, vec![1, -a, 5]), (2, vec![1, -5])];
        ZetaFunction::new(
            f.iter().map(|(j, c)| (*j, RatPolynomial::from_i64(c))).collect(),
            &ctx(5),
        )
        .unwrap()
    }

    #[test]
    fn ordinary_elliptic_at_one() {
        let z = elliptic(1);
        assert_eq!(ord_at(&z, 1), -1);
        assert_eq!(special_value_norm(&z, 1), -1);
        assert_eq!(special_value_limit(&z, 1), BigRational::new(5.into(), 4.into()));
        let b = mu_route_b(&z, 1);
        assert_eq!(b.exponent, 1);
        assert_eq!(b.per_degree[&1], (1, 1));
    }

    #[test]
    fn supersingular_elliptic_at_one() {
        let z = elliptic(0);
        assert_eq!(special_value_norm(&z, 1), 0);
        assert_eq!(mu_route_b(&z, 1).exponent, 0);
    }

    #[test]
    fn projective_plane() {
        let c = ctx(3);
        let z = ZetaFunction::new(
            [(0, vec![1, -1]), (2, vec![1, -3]), (4, vec![1, -9])]
                .iter()
                .map(|(j, v)| (*j, RatPolynomial::from_i64(v)))
                .collect(),
            &c,
        )
        .unwrap();
        assert_eq!(ord_at(&z, 1), -1);
        assert_eq!(special_value_norm(&z, 1), -1);
        assert_eq!(mu_route_b(&z, 1).exponent, 0);
    }

    #[test]
    fn route_decomposition_matches_evaluation() {
        let c = ctx(5);
        for a in -4..=4 {
            let p = RatPolynomial::from_i64(&[1, -a, 5]);
            for r in -3..=5 {
                assert_eq!(
                    nu(&p, r, &c),
                    unit_root_defect(&p, r, &c) - slope_defect(&p, r, &c),
                    "a={a} r={r}"
                );
            }
        }
    }

    #[test]
    fn twist_substitutes_variable() {
        let z = elliptic(2);
        for s in -2..=3 {
            assert_eq!(z.twist(1).zeta_at(s), z.zeta_at(s + 1));
        }
        assert!(elliptic(1).zeta_at(1).is_none());
    }
}
