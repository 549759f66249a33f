//! Input files: gauge collections and Bockstein problems.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Deserialize;

use zetalab::gauge::{
    CharPolySummand, DieudonneGauge, GaugeSpec, HodgeTable, SlopeSummand, Summand, TorsionGauge,
};
use zetalab::isocrystal::{IsocrystalCharPoly, SlopeDatum};
use zetalab::padic::{parse_rational, FpModule, Matrix, PAdicContext, RatPolynomial};
use zetalab::zeta::SurfaceData;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// An integer or rational written either as a JSON number or a string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<BigRational, CliError> {
        match self {
            Number::Int(k) => Ok(BigRational::from_integer((*k).into())),
            Number::Text(s) => parse_rational(s).map_err(|e| CliError::Schema(e.to_string())),
        }
    }
}

fn matrix(rows: &[Vec<Number>]) -> Result<Matrix, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(Number::rational).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Matrix::from_rows(rows).map_err(|e| CliError::Schema(e.to_string()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeFile {
    pub schema_version: u32,
    pub p: u64,
    #[serde(default = "one")]
    pub n: u32,
    pub gauges: BTreeMap<String, GaugeJson>,
    #[serde(default)]
    pub surfaces: BTreeMap<String, SurfaceJson>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeJson {
    #[serde(default)]
    pub shift: i64,
    #[serde(default)]
    pub twist: i64,
    pub summands: Vec<SummandJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "tier", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SummandJson {
    Charpoly {
        degree: i64,
        #[serde(default)]
        twist: i64,
        poly: Vec<Number>,
        hodge: Option<Vec<[i64; 3]>>,
    },
    Slope {
        degree: i64,
        #[serde(default)]
        twist: i64,
        slopes: Vec<(String, usize)>,
    },
    Dieudonne {
        degree: i64,
        #[serde(default)]
        twist: i64,
        t_rank: usize,
        w_rank: usize,
        frobenius: Vec<Vec<Number>>,
    },
    Torsion {
        degree: i64,
        #[serde(default)]
        twist: i64,
        t_rank: usize,
        w_rank: usize,
        frobenius: Vec<Vec<Number>>,
        modulus: u32,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub gauge: String,
    pub gram: Vec<Vec<Number>>,
    pub ns_torsion_order: u64,
    pub pic_dim: i64,
    pub chi_o: i64,
}

fn hodge(entries: &[[i64; 3]]) -> Result<HodgeTable, CliError> {
    let mut t = HodgeTable::new();
    for &[i, j, h] in entries {
        let h = u64::try_from(h).map_err(|_| CliError::Schema(format!("negative Hodge number h^{{{i},{j}}}")))?;
        t.add(i, j, h);
    }
    Ok(t)
}

impl SummandJson {
    fn build(&self, ctx: &PAdicContext) -> Result<Summand, CliError> {
        let schema = |e: zetalab::Error| CliError::Schema(e.to_string());
        let (summand, twist) = match self {
            SummandJson::Charpoly { degree, twist, poly, hodge: h } => {
                let coeffs = poly.iter().map(Number::rational).collect::<Result<Vec<_>, _>>()?;
                let poly = IsocrystalCharPoly::new(RatPolynomial::new(coeffs), ctx).map_err(schema)?;
                let hodge = h.as_deref().map(hodge).transpose()?;
                (Summand::CharPoly(CharPolySummand { poly, hodge, degree: *degree }), *twist)
            }
            SummandJson::Slope { degree, twist, slopes } => {
                let data = slopes
                    .iter()
                    .map(|(s, m)| Ok(SlopeDatum::new(parse_rational(s).map_err(schema)?, *m)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                (Summand::Slope(SlopeSummand::new(data, *degree, ctx).map_err(schema)?), *twist)
            }
            SummandJson::Dieudonne { degree, twist, t_rank, w_rank, frobenius } => {
                let g = DieudonneGauge::new(*t_rank, *w_rank, matrix(frobenius)?, ctx).map_err(schema)?;
                (Summand::Dieudonne(g.placed(*degree)), *twist)
            }
            SummandJson::Torsion { degree, twist, t_rank, w_rank, frobenius, modulus } => {
                let g = DieudonneGauge::new(*t_rank, *w_rank, matrix(frobenius)?, ctx).map_err(schema)?;
                let t = TorsionGauge::new(g, *modulus).map_err(schema)?;
                (Summand::Torsion(t.placed(*degree)), *twist)
            }
        };
        Ok(summand.twisted(twist))
    }
}

impl GaugeJson {
    pub fn build(&self, ctx: &PAdicContext) -> Result<GaugeSpec, CliError> {
        let mut g = GaugeSpec::new(ctx);
        for s in &self.summands {
            g.push(s.build(ctx)?);
        }
        Ok(g.twist(self.twist).shift(self.shift))
    }
}

impl GaugeFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: GaugeFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn ctx(&self) -> Result<PAdicContext, CliError> {
        PAdicContext::new(self.p, self.n).map_err(|e| CliError::Schema(e.to_string()))
    }

    /// All gauges, or just the named one.
    pub fn gauges(&self, name: Option<&str>) -> Result<BTreeMap<String, GaugeSpec>, CliError> {
        let ctx = self.ctx()?;
        let mut out = BTreeMap::new();
        for (k, g) in self.selected(&self.gauges, name)? {
            out.insert(k.clone(), g.build(&ctx)?);
        }
        Ok(out)
    }

    pub fn surfaces(&self, name: Option<&str>) -> Result<BTreeMap<String, (GaugeSpec, SurfaceData)>, CliError> {
        let ctx = self.ctx()?;
        let mut out = BTreeMap::new();
        for (k, s) in self.selected(&self.surfaces, name)? {
            let gauge = self
                .gauges
                .get(&s.gauge)
                .ok_or_else(|| CliError::UnknownName(format!("surface {k} refers to unknown gauge {}", s.gauge)))?
                .build(&ctx)?;
            let data = SurfaceData {
                gram: matrix(&s.gram)?,
                ns_torsion_order: s.ns_torsion_order,
                pic_dim: s.pic_dim,
                chi_o: s.chi_o,
            };
            out.insert(k.clone(), (gauge, data));
        }
        Ok(out)
    }

    fn selected<'a, T>(
        &self,
        all: &'a BTreeMap<String, T>,
        name: Option<&str>,
    ) -> Result<Vec<(&'a String, &'a T)>, CliError> {
        match name {
            None => Ok(all.iter().collect()),
            Some(n) => all
                .get_key_value(n)
                .map(|kv| vec![kv])
                .ok_or_else(|| CliError::UnknownName(n.to_string())),
        }
    }
}

/// `(M, θ)` with `M = Z_p^free ⊕ ⊕ Z/p^{e_i}` in the usual generator order.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BocksteinFile {
    pub schema_version: u32,
    pub p: u64,
    pub matrix: Vec<Vec<Number>>,
    #[serde(default)]
    pub torsion_exponents: Vec<u32>,
}

impl BocksteinFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: BocksteinFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn endo(&self) -> Result<(PAdicContext, zetalab::bockstein::EndoModule), CliError> {
        let schema = |e: zetalab::Error| CliError::Schema(e.to_string());
        let ctx = PAdicContext::prime_field(self.p).map_err(schema)?;
        let theta = matrix(&self.matrix)?;
        if !theta.is_square() {
            return Err(CliError::Schema("matrix must be square".into()));
        }
        let torsion = self.torsion_exponents.len();
        if torsion > theta.rows() || self.torsion_exponents.contains(&0) {
            return Err(CliError::Schema("torsion_exponents must be positive, one per torsion generator".into()));
        }
        // Free generators first, then the cyclic torsion ones.
        let module = FpModule {
            free_rank: theta.rows() - torsion,
            torsion_exponents: self.torsion_exponents.clone(),
        };
        let em = zetalab::bockstein::EndoModule::new(module.presentation(&ctx), theta, &ctx).map_err(schema)?;
        Ok((ctx, em))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_as_numbers_or_strings() {
        let text = r#"{"schema_version": 1, "p": 3, "gauges": {"g": {"summands": [
            {"tier": "charpoly", "degree": 1, "poly": [1, "-2/3", "3"]}]}}}"#;
        let g = GaugeFile::parse(text).unwrap().gauges(None).unwrap();
        let z = zetalab::zeta::zeta_from_gauge(&g["g"]);
        assert_eq!(z.factor(1).to_string(), RatPolynomial::new(vec![
            BigRational::from_integer(1.into()),
            BigRational::new((-2).into(), 3.into()),
            BigRational::from_integer(3.into()),
        ]).to_string());
    }

    #[test]
    fn rejects_malformed_summands() {
        for summand in [
            r#"{"tier": "charpoly", "degree": 0, "poly": ["1", "-1"], "hodge": [[0, 0, -1]]}"#,
            r#"{"tier": "slope", "degree": 0, "slopes": [["1/2", 1]]}"#,
            r#"{"tier": "dieudonne", "degree": 0, "t_rank": 1, "w_rank": 0, "frobenius": [[3]]}"#,
            r#"{"tier": "charpoly", "degree": 0, "poly": ["1", "x"]}"#,
        ] {
            let text = format!(r#"{{"schema_version": 1, "p": 3, "gauges": {{"g": {{"summands": [{summand}]}}}}}}"#);
            let res = GaugeFile::parse(&text).and_then(|f| f.gauges(None));
            assert!(matches!(res, Err(CliError::Schema(_))), "{summand}");
        }
    }

    #[test]
    fn bockstein_generators_keep_their_order() {
        let file = BocksteinFile::parse(
            r#"{"schema_version": 1, "p": 3, "matrix": [[3, 1, 0], [0, 2, 0], [0, 0, 3]], "torsion_exponents": [2]}"#,
        )
        .unwrap();
        let (ctx, em) = file.endo().unwrap();
        assert_eq!(em.structure(&ctx), FpModule::new(2, vec![2]));
    }
}
