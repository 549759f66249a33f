//! The curated corpus and the checks `zetalab selftest` runs on it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use zetalab::bockstein::{bockstein_char, stabilization_index, stable_bockstein_char, uk_valuation};
use zetalab::gauge::{
    descent_rank_checks, nygaard_characteristic, weighted_hodge_euler, FiltrationGauge, GaugeSpec, Summand,
};
use zetalab::zeta::{artin_tate_check, shift_law, twist_shift_laws, verify_theorem, SurfaceData, Verdict};

use crate::commands::{envelope, sha256_hex, to_json};
use crate::input::{BocksteinFile, GaugeFile};
use crate::{CliError, Common, Outcome};

pub const GAUGE_CORPUS: &[(&str, &str)] = &[
    ("curated", include_str!("../examples/curated.json")),
    ("extension_field", include_str!("../examples/extension_field.json")),
];

pub const BOCKSTEIN_CORPUS: &[(&str, &str)] = &[
    ("multiplication_by_p", include_str!("../examples/bockstein_p.json")),
    ("nilpotent", include_str!("../examples/bockstein_nilpotent.json")),
    ("torsion", include_str!("../examples/bockstein_torsion.json")),
    ("mixed", include_str!("../examples/bockstein_mixed.json")),
];

pub const WEIGHTS: RangeInclusive<i64> = -3..=5;
pub const TWISTS: RangeInclusive<i64> = -2..=2;
pub const SHIFTS: RangeInclusive<i64> = 1..=2;
/// Weights for the syntomic rank identities.
pub const DESCENT_WEIGHTS: RangeInclusive<i64> = -2..=3;

/// Every gauge of the given files, named `file/gauge`.
pub fn gauges_of(files: &[(&str, &str)]) -> Result<Vec<(String, GaugeSpec)>, CliError> {
    let mut out = Vec::new();
    for (file, text) in files {
        for (name, g) in GaugeFile::parse(text)?.gauges(None)? {
            out.push((format!("{file}/{name}"), g));
        }
    }
    Ok(out)
}

pub fn surfaces_of(files: &[(&str, &str)]) -> Result<Vec<(String, GaugeSpec, SurfaceData)>, CliError> {
    let mut out = Vec::new();
    for (file, text) in files {
        for (name, (g, d)) in GaugeFile::parse(text)?.surfaces(None)? {
            out.push((format!("{file}/{name}"), g, d));
        }
    }
    Ok(out)
}

#[derive(Debug, Default, Serialize)]
pub struct Check {
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Serialize)]
pub struct WeightRow {
    pub verdict: Verdict,
    pub rho: i64,
    pub lhs_exponent: i64,
    pub mu_exponent: i64,
    pub chi: i64,
}

#[derive(Debug, Serialize)]
pub struct SurfaceRow {
    pub beta_exponent: i64,
    pub brauer_exponent: i64,
    pub h1_correction_exponent: i64,
    pub brauer_parity_even: bool,
    pub consistent: bool,
}

#[derive(Debug, Serialize)]
pub struct BocksteinRow {
    pub characteristic: Option<i64>,
    pub stable: i64,
    pub index: usize,
    pub eigenvalue_valuation: i64,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub corpus_sha256: BTreeMap<String, String>,
    pub checks: BTreeMap<&'static str, Check>,
    pub gauges: BTreeMap<String, BTreeMap<i64, WeightRow>>,
    pub surfaces: BTreeMap<String, SurfaceRow>,
    pub bockstein: BTreeMap<String, BocksteinRow>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.checks.values().all(Check::ok)
    }
}

struct WeightJob {
    name: String,
    r: i64,
    row: WeightRow,
    problems: Vec<String>,
    twist_failures: Vec<i64>,
    shift_failures: Vec<i64>,
}

fn weight_job(name: &str, g: &GaugeSpec, r: i64) -> WeightJob {
    let rep = verify_theorem(g, r);
    WeightJob {
        name: name.to_string(),
        r,
        row: WeightRow {
            verdict: rep.verdict,
            rho: rep.rho,
            lhs_exponent: rep.lhs_exponent,
            mu_exponent: rep.mu_exponent,
            chi: rep.chi,
        },
        problems: rep.problems,
        twist_failures: TWISTS.filter(|&i| !twist_shift_laws(g, i, r).holds()).collect(),
        shift_failures: SHIFTS.filter(|&k| !shift_law(g, k, r).holds()).collect(),
    }
}

fn filtration_summands(g: &GaugeSpec) -> Vec<FiltrationGauge<'_>> {
    g.summands()
        .iter()
        .filter_map(|s| match s {
            Summand::Dieudonne(d) => Some(FiltrationGauge::from(d)),
            Summand::Torsion(t) => Some(FiltrationGauge::from(t)),
            _ => None,
        })
        .collect()
}

/// Runs every check on the given gauge and Bockstein files.
pub fn report(gauge_files: &[(&str, &str)], bockstein_files: &[(&str, &str)]) -> Result<SelftestReport, CliError> {
    let gauges = gauges_of(gauge_files)?;
    let surfaces = surfaces_of(gauge_files)?;

    let jobs: Vec<(usize, i64)> = (0..gauges.len()).flat_map(|k| WEIGHTS.map(move |r| (k, r))).collect();
    let results: Vec<WeightJob> = jobs
        .par_iter()
        .map(|&(k, r)| weight_job(&gauges[k].0, &gauges[k].1, r))
        .collect();

    let mut checks: BTreeMap<&'static str, Check> = BTreeMap::new();
    let mut rows: BTreeMap<String, BTreeMap<i64, WeightRow>> = BTreeMap::new();
    for job in results {
        let WeightJob { name, r, row, problems, twist_failures, shift_failures } = job;
        checks
            .entry("theorem")
            .or_default()
            .record(row.verdict == Verdict::Verified, || format!("{name} r={r}: {problems:?}"));
        let twist = checks.entry("twist_laws").or_default();
        for i in TWISTS {
            twist.record(!twist_failures.contains(&i), || format!("{name} r={r} twist {i}"));
        }
        let shift = checks.entry("shift_laws").or_default();
        for k in SHIFTS {
            shift.record(!shift_failures.contains(&k), || format!("{name} r={r} shift {k}"));
        }
        rows.entry(name).or_default().insert(r, row);
    }

    for (name, g) in &gauges {
        let n = g.ctx().n() as i64;
        for (k, f) in filtration_summands(g).into_iter().enumerate() {
            let table = f.hodge_table();
            for r in WEIGHTS {
                let lhs = nygaard_characteristic(f, r);
                let rhs = n * weighted_hodge_euler(&table, r);
                checks
                    .entry("niceob")
                    .or_default()
                    .record(lhs == rhs, || format!("{name}[{k}] r={r}: {lhs} vs {rhs}"));
            }
            if let FiltrationGauge::Free(d) = f {
                if n == 1 {
                    for r in DESCENT_WEIGHTS {
                        let ok = descent_rank_checks(d, r).map(|d| d.holds()).unwrap_or(false);
                        checks.entry("descent").or_default().record(ok, || format!("{name}[{k}] r={r}"));
                    }
                }
            }
        }
    }

    let mut surface_rows = BTreeMap::new();
    for (name, g, data) in &surfaces {
        match artin_tate_check(g, data) {
            Ok(rep) => {
                checks
                    .entry("surfaces")
                    .or_default()
                    .record(rep.consistent, || format!("{name}: {:?}", rep.problems));
                surface_rows.insert(
                    name.clone(),
                    SurfaceRow {
                        beta_exponent: rep.beta_exponent,
                        brauer_exponent: rep.brauer_exponent,
                        h1_correction_exponent: rep.h1_correction_exponent,
                        brauer_parity_even: rep.brauer_parity_even,
                        consistent: rep.consistent,
                    },
                );
            }
            Err(e) => checks.entry("surfaces").or_default().record(false, || format!("{name}: {e}")),
        }
    }

    let mut bockstein_rows = BTreeMap::new();
    for (name, text) in bockstein_files {
        let (ctx, em) = BocksteinFile::parse(text)?.endo()?;
        let stable = stable_bockstein_char(&em, &ctx);
        let eigen = uk_valuation(&em, &ctx);
        let bock = checks.entry("bockstein").or_default();
        bock.record(stable.value == eigen, || format!("{name}: stable {} vs eigenvalues {eigen}", stable.value));
        let k = stabilization_index(&em, &ctx);
        for r in k..k + 3 {
            let lo = bockstein_char(&em.pow(r), &ctx);
            let hi = bockstein_char(&em.pow(r + 1), &ctx);
            let ok = matches!((lo, hi), (Some(a), Some(b)) if (r as i64 + 1) * a == r as i64 * b);
            bock.record(ok, || format!("{name}: scaling at theta^{r}"));
        }
        bockstein_rows.insert(
            name.to_string(),
            BocksteinRow {
                characteristic: bockstein_char(&em, &ctx),
                stable: stable.value,
                index: stable.index,
                eigenvalue_valuation: eigen,
            },
        );
    }

    let corpus_sha256 = gauge_files
        .iter()
        .chain(bockstein_files)
        .map(|(name, text)| (name.to_string(), sha256_hex(text.as_bytes())))
        .collect();
    Ok(SelftestReport {
        corpus_sha256,
        checks,
        gauges: rows,
        surfaces: surface_rows,
        bockstein: bockstein_rows,
    })
}

pub fn run(c: &Common) -> Result<Outcome, CliError> {
    let external;
    let (gauge_files, digest): (Vec<(&str, &str)>, Option<String>) = match &c.input {
        Some(path) => {
            external = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let digest = sha256_hex(external.as_bytes());
            (vec![("input", external.as_str())], Some(digest))
        }
        None => (GAUGE_CORPUS.to_vec(), None),
    };
    let bockstein_files: &[(&str, &str)] = if c.input.is_some() { &[] } else { BOCKSTEIN_CORPUS };
    let rep = report(&gauge_files, bockstein_files)?;
    let code = if rep.ok() { 0 } else { 1 };
    let stdout = if c.json {
        to_json(&envelope("selftest", digest, &rep))
    } else {
        let mut out = String::new();
        for (name, check) in &rep.checks {
            let status = if check.ok() { "ok" } else { "FAILED" };
            let _ = writeln!(out, "{name}: {}/{} {status}", check.passed, check.total);
            for f in &check.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        out
    };
    Ok(Outcome { stdout, code })
}
