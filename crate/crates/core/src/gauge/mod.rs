//! Desk model of dualizable F-gauges over `F_q`.
//!
//! A gauge is a direct sum of summands, each placed in a cohomological
//! degree. Vector-bundle summands come in three tiers of detail (a bare
//! characteristic polynomial, pure slope data, or a Dieudonné lattice with
//! its Nygaard splitting); torsion summands are reductions of Dieudonné
//! lattices modulo `p^m`. Shifts and twists are pushed into the summands.

mod dieudonne;
mod hodge;

pub use dieudonne::{
    check_niceob, check_niceob_against, descent_rank_checks, nygaard_characteristic,
    order_of_vanishing_syn, syntomic_cohomology, DescentReport, DieudonneGauge, FiltrationGauge,
    SyntomicCohomology, TorsionGauge,
};
pub use hodge::{
    hodge_from_pdiv, hodge_from_slopes, pdiv_invariants, weighted_hodge_euler, HodgeTable,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::isocrystal::{bk_twist, simple_charpoly, slope_decomposition, IsocrystalCharPoly, SlopeDatum};
use crate::padic::{PAdicContext, RatPolynomial};

/// A bare isocrystal in one degree, with optionally declared Hodge numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolySummand {
    pub poly: IsocrystalCharPoly,
    pub hodge: Option<HodgeTable>,
    pub degree: i64,
}

/// An isocrystal known only through its slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSummand {
    ctx: PAdicContext,
    slopes: Vec<SlopeDatum>,
    degree: i64,
}

impl SlopeSummand {
    /// Each multiplicity must be a multiple of the slope's denominator.
    pub fn new(slopes: Vec<SlopeDatum>, degree: i64, ctx: &PAdicContext) -> Result<Self> {
        for d in &slopes {
            if d.multiplicity == 0 {
                return Err(Error::NotRealizable("zero multiplicity".into()));
            }
            hodge::check_slope_multiplicity(d)?;
        }
        Ok(SlopeSummand {
            ctx: ctx.clone(),
            slopes,
            degree,
        })
    }

    pub fn slopes(&self) -> &[SlopeDatum] {
        &self.slopes
    }

    /// `Π det(1 - t F^n | E_{s/r})^{mult/r}`.
    pub fn charpoly(&self) -> IsocrystalCharPoly {
        let mut poly = RatPolynomial::one();
        for d in &self.slopes {
            let s = d.slope.numer().to_i64().expect("desk-scale slope");
            let r = d.slope.denom().to_i64().expect("desk-scale slope");
            let simple = simple_charpoly(s, r, &self.ctx).expect("reduced fraction");
            poly = poly.mul(&simple.poly().pow(d.multiplicity / r as usize));
        }
        IsocrystalCharPoly::new(poly, &self.ctx).expect("product of zeta factors")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summand {
    CharPoly(CharPolySummand),
    Slope(SlopeSummand),
    Dieudonne(DieudonneGauge),
    Torsion(TorsionGauge),
}

impl Summand {
    pub fn tier(&self) -> &'static str {
        match self {
            Summand::CharPoly(_) => "charpoly",
            Summand::Slope(_) => "slope",
            Summand::Dieudonne(_) => "dieudonne",
            Summand::Torsion(_) => "torsion",
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Summand::CharPoly(s) => s.degree,
            Summand::Slope(s) => s.degree,
            Summand::Dieudonne(g) => g.degree(),
            Summand::Torsion(t) => t.degree(),
        }
    }

    pub fn is_torsion(&self) -> bool {
        matches!(self, Summand::Torsion(_))
    }

    pub fn shifted(&self, k: i64) -> Summand {
        match self {
            Summand::CharPoly(s) => Summand::CharPoly(CharPolySummand {
                poly: s.poly.clone(),
                hodge: s.hodge.as_ref().map(|h| h.shift(k)),
                degree: s.degree + k,
            }),
            Summand::Slope(s) => Summand::Slope(SlopeSummand {
                degree: s.degree + k,
                ..s.clone()
            }),
            Summand::Dieudonne(g) => {
                let d = g.degree();
                Summand::Dieudonne(g.clone().placed(d + k))
            }
            Summand::Torsion(t) => {
                let d = t.degree();
                Summand::Torsion(t.clone().placed(d + k))
            }
        }
    }

    pub fn twisted(&self, i: i64) -> Summand {
        match self {
            Summand::CharPoly(s) => Summand::CharPoly(CharPolySummand {
                poly: bk_twist(&s.poly, i),
                hodge: s.hodge.as_ref().map(|h| h.twist(i)),
                degree: s.degree,
            }),
            Summand::Slope(s) => Summand::Slope(SlopeSummand {
                slopes: s
                    .slopes
                    .iter()
                    .map(|d| SlopeDatum::new(&d.slope - BigRational::from_integer(BigInt::from(i)), d.multiplicity))
                    .collect(),
                ..s.clone()
            }),
            Summand::Dieudonne(g) => Summand::Dieudonne(g.clone().twisted(i)),
            Summand::Torsion(t) => Summand::Torsion(t.clone().twisted(i)),
        }
    }

    /// `det(1 - t F^n | H(M_K))` of this summand; torsion has none.
    pub fn zeta_factor(&self) -> Option<RatPolynomial> {
        match self {
            Summand::CharPoly(s) => Some(s.poly.poly().clone()),
            Summand::Slope(s) => Some(s.charpoly().poly().clone()),
            Summand::Dieudonne(g) => Some(g.zeta_factor()),
            Summand::Torsion(_) => None,
        }
    }

    pub fn declared_hodge(&self) -> Option<&HodgeTable> {
        match self {
            Summand::CharPoly(s) => s.hodge.as_ref(),
            _ => None,
        }
    }

    /// Hodge numbers determined by the summand's own data: by the Nygaard
    /// splitting when present, otherwise by the slopes.
    pub fn derived_hodge(&self) -> Result<HodgeTable> {
        match self {
            Summand::CharPoly(s) => Ok(hodge_from_slopes(&slope_decomposition(&s.poly))?.shift(s.degree)),
            Summand::Slope(s) => Ok(hodge_from_slopes(&s.slopes)?.shift(s.degree)),
            Summand::Dieudonne(g) => Ok(g.hodge_table()),
            Summand::Torsion(t) => Ok(t.hodge_table()),
        }
    }

    /// The declared table if any, else the derived one.
    pub fn hodge_table(&self) -> Result<HodgeTable> {
        match self.declared_hodge() {
            Some(h) => Ok(h.clone()),
            None => self.derived_hodge(),
        }
    }

    /// Slopes of the underlying isocrystal, aggregated.
    pub fn slopes(&self) -> Vec<SlopeDatum> {
        match self {
            Summand::CharPoly(s) => slope_decomposition(&s.poly),
            Summand::Slope(s) => s.slopes.clone(),
            Summand::Dieudonne(g) => {
                slope_decomposition(&IsocrystalCharPoly::new(g.zeta_factor(), g.ctx()).expect("det(1 - tF)"))
            }
            Summand::Torsion(_) => Vec::new(),
        }
    }
}

/// A dualizable gauge as a direct sum of placed, twisted summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeSpec {
    ctx: PAdicContext,
    summands: Vec<Summand>,
}

impl GaugeSpec {
    pub fn new(ctx: &PAdicContext) -> Self {
        GaugeSpec {
            ctx: ctx.clone(),
            summands: Vec::new(),
        }
    }

    pub fn with(mut self, s: Summand) -> Self {
        self.summands.push(s);
        self
    }

    pub fn push(&mut self, s: Summand) {
        self.summands.push(s);
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// `M[-k]`: every summand moves `k` cohomological degrees up.
    pub fn shift(&self, k: i64) -> GaugeSpec {
        GaugeSpec {
            ctx: self.ctx.clone(),
            summands: self.summands.iter().map(|s| s.shifted(k)).collect(),
        }
    }

    /// Breuil–Kisin twist `M{i}`.
    pub fn twist(&self, i: i64) -> GaugeSpec {
        GaugeSpec {
            ctx: self.ctx.clone(),
            summands: self.summands.iter().map(|s| s.twisted(i)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &GaugeSpec) -> Result<GaugeSpec> {
        if self.ctx != other.ctx {
            return Err(Error::Dimension("gauges over different fields".into()));
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(GaugeSpec {
            ctx: self.ctx.clone(),
            summands,
        })
    }

    /// Combined table of the vector-bundle summands.
    pub fn vector_bundle_hodge(&self) -> Result<HodgeTable> {
        self.summands
            .iter()
            .filter(|s| !s.is_torsion())
            .try_fold(HodgeTable::new(), |acc, s| Ok(acc.direct_sum(&s.hodge_table()?)))
    }

    pub fn torsion_hodge(&self) -> HodgeTable {
        self.summands
            .iter()
            .filter_map(|s| match s {
                Summand::Torsion(t) => Some(t.hodge_table()),
                _ => None,
            })
            .fold(HodgeTable::new(), |acc, h| acc.direct_sum(&h))
    }

    pub fn hodge_table(&self) -> Result<HodgeTable> {
        Ok(self.vector_bundle_hodge()?.direct_sum(&self.torsion_hodge()))
    }

    /// Declared tables that disagree with the summand's own data: entries
    /// off the summand's degree, dimension mismatches, and (informational)
    /// differences from the slope-derived table.
    pub fn hodge_diagnostics(&self) -> Vec<HodgeDiagnostic> {
        let mut out = Vec::new();
        for (k, s) in self.summands.iter().enumerate() {
            let Summand::CharPoly(c) = s else { continue };
            let Some(declared) = &c.hodge else { continue };
            let off: Vec<(i64, i64)> = declared
                .entries()
                .keys()
                .copied()
                .filter(|&(i, j)| i + j != c.degree)
                .collect();
            if !off.is_empty() {
                out.push(HodgeDiagnostic {
                    summand: k,
                    kind: HodgeDiagnosticKind::OffDegree,
                    detail: format!("entries {off:?} are not in degree {}", c.degree),
                });
            }
            let total = declared.total_in_degree(c.degree);
            if total != c.poly.dimension() as u64 {
                out.push(HodgeDiagnostic {
                    summand: k,
                    kind: HodgeDiagnosticKind::DimensionMismatch,
                    detail: format!(
                        "declared Hodge numbers sum to {total}, polynomial has degree {}",
                        c.poly.dimension()
                    ),
                });
            }
            if let Ok(derived) = s.derived_hodge() {
                if &derived != declared {
                    out.push(HodgeDiagnostic {
                        summand: k,
                        kind: HodgeDiagnosticKind::DiffersFromSlopes,
                        detail: format!("declared {declared}, slopes give {derived}"),
                    });
                }
            }
        }
        out
    }

    /// `[min i - 2, max i + 2]` over the Hodge table, or `[-2, 2]` if empty.
    pub fn default_weights(&self) -> (i64, i64) {
        match self.hodge_table().ok().and_then(|h| h.weight_range()) {
            Some((lo, hi)) => (lo - 2, hi + 2),
            None => (-2, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HodgeDiagnosticKind {
    OffDegree,
    DimensionMismatch,
    DiffersFromSlopes,
}

impl HodgeDiagnosticKind {
    /// Whether the input cannot describe a gauge at all.
    pub fn is_inconsistent(self) -> bool {
        !matches!(self, HodgeDiagnosticKind::DiffersFromSlopes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HodgeDiagnostic {
    pub summand: usize,
    pub kind: HodgeDiagnosticKind,
    pub detail: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{parse_rational, Matrix};

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::prime_field(p).unwrap()
    }

    #[test]
    fn slope_summand_polynomial() {
        let c = ctx(5);
        let s = SlopeSummand::new(vec![SlopeDatum::new(parse_rational("1/2").unwrap(), 4)], 1, &c).unwrap();
        assert_eq!(s.charpoly().poly(), &RatPolynomial::from_i64(&[1, 0, -5]).pow(2));
        assert!(SlopeSummand::new(vec![SlopeDatum::new(parse_rational("1/2").unwrap(), 3)], 1, &c).is_err());
    }

    #[test]
    fn shift_and_twist_of_dieudonne_summand() {
        let c = ctx(3);
        let unit = Summand::Dieudonne(DieudonneGauge::unit(&c).unwrap());
        let moved = unit.shifted(2).twisted(-1);
        assert_eq!(moved.degree(), 2);
        assert_eq!(moved.zeta_factor().unwrap(), RatPolynomial::from_i64(&[1, -3]));
        assert_eq!(moved.hodge_table().unwrap(), HodgeTable::from_entries([((1, 1), 1)]));
    }

    #[test]
    fn derived_tables_agree_across_tiers() {
        let c = ctx(5);
        let e = DieudonneGauge::new(1, 1, Matrix::from_i64(&[vec![1, -5], vec![1, 0]]), &c).unwrap();
        let dieu = Summand::Dieudonne(e.clone().placed(1));
        let poly = Summand::CharPoly(CharPolySummand {
            poly: IsocrystalCharPoly::new(e.zeta_factor(), &c).unwrap(),
            hodge: None,
            degree: 1,
        });
        assert_eq!(dieu.derived_hodge().unwrap(), poly.derived_hodge().unwrap());
        assert_eq!(dieu.slopes(), poly.slopes());
    }

    #[test]
    fn diagnostics_flag_dimension_mismatch() {
        let c = ctx(5);
        let g = GaugeSpec::new(&c).with(Summand::CharPoly(CharPolySummand {
            poly: IsocrystalCharPoly::new(RatPolynomial::from_i64(&[1, -1, 5]), &c).unwrap(),
            hodge: Some(HodgeTable::from_entries([((0, 1), 1), ((1, 0), 2)])),
            degree: 1,
        }));
        let d = g.hodge_diagnostics();
        assert!(d.iter().any(|x| x.kind == HodgeDiagnosticKind::DimensionMismatch));
    }
}
