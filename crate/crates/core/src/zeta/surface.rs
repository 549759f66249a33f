use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{nu, split_at, verify_theorem, zeta_from_gauge, Verdict};
use crate::error::{Error, Result};
use crate::gauge::GaugeSpec;
use crate::padic::{valuation, Matrix, PAdicContext};

/// Néron–Severi and Hodge data of a surface beyond its gauge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    /// Intersection matrix `D_i · D_j` of a basis of `NS(X)` mod torsion.
    pub gram: Matrix,
    pub ns_torsion_order: u64,
    pub pic_dim: i64,
    pub chi_o: i64,
}

fn gram_det_valuation(gram: &Matrix, ctx: &PAdicContext) -> Result<i64> {
    if !gram.is_square() {
        return Err(Error::Dimension("intersection matrix must be square".into()));
    }
    let det = gram.det();
    if det.is_zero() {
        return Err(Error::SingularGram);
    }
    valuation(&det, ctx)
}

fn torsion_valuation(order: u64, ctx: &PAdicContext) -> Result<i64> {
    if order == 0 {
        return Err(Error::NotRealizable("torsion order must be positive".into()));
    }
    valuation(&BigRational::from_integer(BigInt::from(order)), ctx)
}

/// `e` with `βr(X)_p = p^e`, from `μ_syn(X, 1) = p^b`.
pub fn surface_beta_exponent(b: i64, gram: &Matrix, ns_torsion_order: u64, ctx: &PAdicContext) -> Result<i64> {
    Ok(b - 2 * torsion_valuation(ns_torsion_order, ctx)? + gram_det_valuation(gram, ctx)?)
}

/// `βr(X)_p = μ_syn(X, 1) |[NS_tors]^2|_p / |det(D_i · D_j)|_p`.
pub fn surface_beta(b: i64, gram: &Matrix, ns_torsion_order: u64, ctx: &PAdicContext) -> Result<BigRational> {
    Ok(ctx.p_pow(surface_beta_exponent(b, gram, ns_torsion_order, ctx)?))
}

/// `|Br(X)|_p` two ways: from `βr(X)_p` and from the Artin–Tate formula.
///
/// Equating them also needs `|P_1(1)|_p = 1` and `|P_1(q^{-1})|_p = q^g`,
/// which fail when `H^1` has unit roots congruent to `1` mod `p`; the
/// resulting gap is `h1_correction_exponent = e_1 + e_3` at weight 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinTateReport {
    /// Multiplicity of `q^{-1}` as a root of `P_2`.
    pub rho_x: usize,
    pub gram_rank: usize,
    pub mu_exponent: i64,
    pub chi: i64,
    pub alpha: i64,
    /// `βr(X)_p = p^{beta_exponent}`.
    pub beta_exponent: i64,
    /// `|Br(X)|_p = p^{brauer_exponent}` by the Artin–Tate formula.
    pub brauer_exponent: i64,
    pub h1_correction_exponent: i64,
    /// `βr(X)_p = |Br(X)|_p` with no correction.
    pub uncorrected_agreement: bool,
    pub brauer_parity_even: bool,
    pub beta_parity_even: bool,
    pub theorem_verdict: Verdict,
    pub problems: Vec<String>,
    pub consistent: bool,
}

pub fn artin_tate_check(g: &GaugeSpec, data: &SurfaceData) -> Result<ArtinTateReport> {
    let ctx = g.ctx();
    let n = ctx.n() as i64;
    let v_det = gram_det_valuation(&data.gram, ctx)?;
    let v_tors = torsion_valuation(data.ns_torsion_order, ctx)?;
    let z = zeta_from_gauge(g);
    let p2 = z.factor(2);
    let rho_x = split_at(&p2, 1, ctx).0;
    let alpha = data.chi_o - 1 + data.pic_dim;
    let v_br = nu(&p2, 1, ctx) - v_det + n * alpha + 2 * v_tors;

    let rep = verify_theorem(g, 1);
    let beta_exponent = rep.mu_exponent - 2 * v_tors + v_det;
    let h1: i64 = rep
        .degrees
        .iter()
        .filter(|d| d.degree == 1 || d.degree == 3)
        .map(|d| d.e)
        .sum();

    let mut problems = Vec::new();
    if rep.verdict != Verdict::Verified {
        problems.push(format!("special-value check at weight 1: {:?}", rep.problems));
    }
    if rho_x != data.gram.rows() {
        problems.push(format!("P_2 has a zero of order {rho_x} at q^-1 but NS has rank {}", data.gram.rows()));
    }
    if rep.chi != data.chi_o {
        problems.push(format!("chi(X, 1) = {} from Hodge numbers but chi(O_X) = {}", rep.chi, data.chi_o));
    }
    if v_br < 0 {
        problems.push(format!("Artin-Tate gives v_p|Br| = {v_br} < 0"));
    }
    if beta_exponent - h1 != -v_br {
        problems.push(format!(
            "beta gives |Br|_p = p^{}, Artin-Tate gives p^{}",
            beta_exponent - h1,
            -v_br
        ));
    }

    Ok(ArtinTateReport {
        rho_x,
        gram_rank: data.gram.rows(),
        mu_exponent: rep.mu_exponent,
        chi: rep.chi,
        alpha,
        beta_exponent,
        brauer_exponent: -v_br,
        h1_correction_exponent: h1,
        uncorrected_agreement: beta_exponent == -v_br,
        brauer_parity_even: v_br.rem_euclid(2) == 0,
        beta_parity_even: beta_exponent.rem_euclid(2) == 0,
        theorem_verdict: rep.verdict,
        consistent: problems.is_empty(),
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{CharPolySummand, Summand};
    use crate::isocrystal::IsocrystalCharPoly;
    use crate::padic::RatPolynomial;

    fn family(c: &PAdicContext, factors: &[(i64, RatPolynomial)]) -> GaugeSpec {
        factors.iter().fold(GaugeSpec::new(c), |g, (j, p)| {
            g.with(Summand::CharPoly(CharPolySummand {
                poly: IsocrystalCharPoly::new(p.clone(), c).unwrap(),
                hodge: None,
                degree: *j,
            }))
        })
    }

    fn plane(c: &PAdicContext) -> GaugeSpec {
        let q = c.q().clone();
        let lin = |a: BigInt| RatPolynomial::from_ints(vec![1.into(), -a]);
        family(c, &[(0, lin(1.into())), (2, lin(q.clone())), (4, lin(&q * &q))])
    }

    #[test]
    fn beta_definition() {
        let c = PAdicContext::prime_field(3).unwrap();
        let one = Matrix::from_i64(&[vec![1]]);
        assert_eq!(surface_beta_exponent(0, &one, 1, &c), Ok(0));
        assert_eq!(surface_beta_exponent(0, &one, 3, &c), Ok(-2));
        assert_eq!(surface_beta_exponent(0, &Matrix::from_i64(&[vec![3]]), 1, &c), Ok(1));
        assert_eq!(surface_beta(0, &Matrix::from_i64(&[vec![1, 1], vec![1, 1]]), 1, &c), Err(Error::SingularGram));
    }

    #[test]
    fn projective_plane() {
        for (p, n) in [(2, 1), (3, 1), (5, 2)] {
            let c = PAdicContext::new(p, n).unwrap();
            let data = SurfaceData {
                gram: Matrix::from_i64(&[vec![1]]),
                ns_torsion_order: 1,
                pic_dim: 0,
                chi_o: 1,
            };
            let rep = artin_tate_check(&plane(&c), &data).unwrap();
            assert!(rep.consistent, "{:?}", rep.problems);
            assert_eq!((rep.beta_exponent, rep.brauer_exponent), (0, 0));
            assert!(rep.uncorrected_agreement && rep.brauer_parity_even);
        }
    }

    #[test]
    fn curve_times_line_needs_h1_correction() {
        // E x P^1 with E ordinary, a = 1 over F_5: the unit root is 1 mod 5.
        let c = PAdicContext::prime_field(5).unwrap();
        let p = |v: &[i64]| RatPolynomial::from_i64(v);
        let g = family(
            &c,
            &[
                (0, p(&[1, -1])),
                (1, p(&[1, -1, 5])),
                (2, p(&[1, -5]).pow(2)),
                (3, p(&[1, -5, 125])),
                (4, p(&[1, -25])),
            ],
        );
        let data = SurfaceData {
            gram: Matrix::from_i64(&[vec![0, 1], vec![1, 0]]),
            ns_torsion_order: 1,
            pic_dim: 1,
            chi_o: 0,
        };
        let rep = artin_tate_check(&g, &data).unwrap();
        assert!(rep.consistent, "{:?}", rep.problems);
        assert_eq!(rep.brauer_exponent, 0);
        assert_eq!(rep.beta_exponent, 2);
        assert_eq!(rep.h1_correction_exponent, 2);
        assert!(!rep.uncorrected_agreement);
    }

    #[test]
    fn corrupted_data() {
        let c = PAdicContext::prime_field(3).unwrap();
        let mut data = SurfaceData {
            gram: Matrix::from_i64(&[vec![3]]),
            ns_torsion_order: 1,
            pic_dim: 0,
            chi_o: 1,
        };
        assert!(!artin_tate_check(&plane(&c), &data).unwrap().consistent);
        data.gram = Matrix::from_i64(&[vec![1, 0], vec![0, 1]]);
        assert!(!artin_tate_check(&plane(&c), &data).unwrap().consistent);
        // The torsion order enters both sides identically.
        data.gram = Matrix::from_i64(&[vec![1]]);
        data.ns_torsion_order = 3;
        let rep = artin_tate_check(&plane(&c), &data).unwrap();
        assert_eq!((rep.beta_exponent, rep.brauer_exponent), (-2, -2));
    }
}
