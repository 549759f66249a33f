use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use zetalab::bockstein::{bockstein_complex, stable_bockstein_char, uk_valuation, StableBockstein};
use zetalab::gauge::GaugeSpec;
use zetalab::padic::format_p_power;
use zetalab::zeta::{
    artin_tate_check, ord_at, special_value_limit, special_value_norm, verify_theorem, zeta_from_gauge,
    ArtinTateReport, SpecialValueReport, Verdict,
};

use crate::input::{BocksteinFile, GaugeFile};
use crate::{CliError, Common, Outcome, Weights};

/// Common header of every JSON report. No timestamps, so reports of the same
/// input are byte-identical.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input_sha256: Option<String>,
    pub result: T,
}

pub fn envelope<T: Serialize>(command: &'static str, digest: Option<String>, result: T) -> Envelope<T> {
    Envelope {
        tool: "zetalab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        input_sha256: digest,
        result,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (k, (cell, w)) in cells.zip(&widths).enumerate() {
            if k > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn read_input(c: &Common) -> Result<(String, String), CliError> {
    let path = c
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("--input FILE is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let digest = sha256_hex(text.as_bytes());
    Ok((text, digest))
}

fn load_gauges(c: &Common) -> Result<(GaugeFile, BTreeMap<String, GaugeSpec>, String), CliError> {
    let (text, digest) = read_input(c)?;
    let file = GaugeFile::parse(&text)?;
    let gauges = file.gauges(c.gauge.as_deref())?;
    Ok((file, gauges, digest))
}

fn weight_range(w: Weights, g: &GaugeSpec) -> std::ops::RangeInclusive<i64> {
    let (a, b) = match w {
        Weights::Range(a, b) => (a, b),
        Weights::Default => g.default_weights(),
    };
    a..=b
}

#[derive(Debug, Serialize)]
struct SummandSlopes {
    tier: &'static str,
    degree: i64,
    zeta_factor: Option<String>,
    /// `slope ×multiplicity`.
    slopes: Vec<String>,
    hodge: Option<String>,
    declared_hodge: Option<String>,
}

pub fn slopes(c: &Common) -> Result<Outcome, CliError> {
    let (_, gauges, digest) = load_gauges(c)?;
    let mut result: BTreeMap<String, Vec<SummandSlopes>> = BTreeMap::new();
    for (name, g) in &gauges {
        let rows = g
            .summands()
            .iter()
            .map(|s| SummandSlopes {
                tier: s.tier(),
                degree: s.degree(),
                zeta_factor: s.zeta_factor().map(|p| p.to_string()),
                slopes: s.slopes().iter().map(|d| d.to_string()).collect(),
                hodge: s.derived_hodge().ok().map(|h| h.to_string()),
                declared_hodge: s.declared_hodge().map(|h| h.to_string()),
            })
            .collect();
        result.insert(name.clone(), rows);
    }
    let stdout = if c.json {
        to_json(&envelope("slopes", Some(digest), &result))
    } else {
        let rows: Vec<Vec<String>> = result
            .iter()
            .flat_map(|(name, rows)| {
                rows.iter().enumerate().map(move |(k, r)| {
                    vec![
                        format!("{name}[{k}]"),
                        r.tier.to_string(),
                        r.degree.to_string(),
                        r.slopes.join(" "),
                        r.hodge.clone().unwrap_or_else(|| "not realizable".into()),
                    ]
                })
            })
            .collect();
        table(&["summand", "tier", "degree", "slopes", "hodge"], &rows)
    };
    Ok(Outcome { stdout, code: 0 })
}

#[derive(Debug, Serialize)]
struct ZetaResult {
    factors: BTreeMap<i64, String>,
    ord: BTreeMap<i64, i64>,
}

pub fn zeta(c: &Common) -> Result<Outcome, CliError> {
    let (_, gauges, digest) = load_gauges(c)?;
    let weights = c.weights()?;
    let mut result = BTreeMap::new();
    for (name, g) in &gauges {
        let z = zeta_from_gauge(g);
        result.insert(
            name.clone(),
            ZetaResult {
                factors: z.factors().iter().map(|(&j, p)| (j, p.to_string())).collect(),
                ord: weight_range(weights, g).map(|r| (r, ord_at(&z, r))).collect(),
            },
        );
    }
    let stdout = if c.json {
        to_json(&envelope("zeta", Some(digest), &result))
    } else {
        let factors: Vec<Vec<String>> = result
            .iter()
            .flat_map(|(name, z)| z.factors.iter().map(move |(j, p)| vec![name.clone(), j.to_string(), p.clone()]))
            .collect();
        let ords: Vec<Vec<String>> = result
            .iter()
            .flat_map(|(name, z)| z.ord.iter().map(move |(r, o)| vec![name.clone(), r.to_string(), o.to_string()]))
            .collect();
        format!(
            "{}\n{}",
            table(&["gauge", "degree", "P_j(t)"], &factors),
            table(&["gauge", "r", "ord_{s=r}"], &ords)
        )
    };
    Ok(Outcome { stdout, code: 0 })
}

#[derive(Debug, Serialize)]
struct SpecialResult {
    rho: i64,
    lhs_exponent: i64,
    norm: String,
    limit: String,
}

pub fn special(c: &Common) -> Result<Outcome, CliError> {
    let (file, gauges, digest) = load_gauges(c)?;
    let weights = c.weights()?;
    let mut result: BTreeMap<String, BTreeMap<i64, SpecialResult>> = BTreeMap::new();
    for (name, g) in &gauges {
        let z = zeta_from_gauge(g);
        let rows = weight_range(weights, g)
            .map(|r| {
                let a = special_value_norm(&z, r);
                let row = SpecialResult {
                    rho: ord_at(&z, r),
                    lhs_exponent: a,
                    norm: format_p_power(file.p, a),
                    limit: special_value_limit(&z, r).to_string(),
                };
                (r, row)
            })
            .collect();
        result.insert(name.clone(), rows);
    }
    let stdout = if c.json {
        to_json(&envelope("special", Some(digest), &result))
    } else {
        let rows: Vec<Vec<String>> = result
            .iter()
            .flat_map(|(name, rows)| {
                rows.iter().map(move |(r, s)| {
                    vec![name.clone(), r.to_string(), s.rho.to_string(), s.norm.clone(), s.limit.clone()]
                })
            })
            .collect();
        table(&["gauge", "r", "rho", "|lim|_p", "lim"], &rows)
    };
    Ok(Outcome { stdout, code: 0 })
}

#[derive(Debug, Serialize)]
struct BocksteinResult {
    module: String,
    kernel: String,
    cokernel: String,
    connecting_kernel: String,
    connecting_cokernel: String,
    characteristic: Option<i64>,
    stable: Option<StableBockstein>,
    eigenvalue_valuation: i64,
}

pub fn bockstein(c: &Common) -> Result<Outcome, CliError> {
    let (text, digest) = read_input(c)?;
    let (ctx, em) = BocksteinFile::parse(&text)?.endo()?;
    let b = bockstein_complex(&em, &ctx);
    let result = BocksteinResult {
        module: em.structure(&ctx).to_string(),
        kernel: b.kernel.to_string(),
        cokernel: b.cokernel.to_string(),
        connecting_kernel: b.connecting.kernel_module(&ctx).to_string(),
        connecting_cokernel: b.connecting.cokernel_module(&ctx).to_string(),
        characteristic: b.characteristic(&ctx),
        stable: c.stable.then(|| stable_bockstein_char(&em, &ctx)),
        eigenvalue_valuation: uk_valuation(&em, &ctx),
    };
    let stdout = if c.json {
        to_json(&envelope("bockstein", Some(digest), &result))
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "M = {}", result.module);
        let _ = writeln!(out, "M^theta = {}, M_theta = {}", result.kernel, result.cokernel);
        let _ = writeln!(
            out,
            "H^0(Bock) = {}, H^1(Bock) = {}",
            result.connecting_kernel, result.connecting_cokernel
        );
        match result.characteristic {
            Some(x) => {
                let _ = writeln!(out, "chi^l(Bock) = {x}");
            }
            None => {
                let _ = writeln!(out, "chi^l(Bock) undefined");
            }
        }
        if let Some(s) = result.stable {
            let _ = writeln!(out, "stable chi^l = {} (from theta^{})", s.value, s.index);
        }
        let _ = writeln!(out, "-v_p(nonzero eigenvalues) = {}", result.eigenvalue_valuation);
        out
    };
    Ok(Outcome { stdout, code: 0 })
}

/// Exit code of a batch of verdicts: failures dominate inconsistencies.
pub fn verdict_code<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    let mut code = 0;
    for v in verdicts {
        match v {
            Verdict::Failed => return 1,
            Verdict::InconsistentInput => code = 2,
            Verdict::Verified => {}
        }
    }
    code
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Verified => "verified",
        Verdict::Failed => "FAILED",
        Verdict::InconsistentInput => "inconsistent-input",
    }
}

pub fn verify(c: &Common) -> Result<Outcome, CliError> {
    let (_, gauges, digest) = load_gauges(c)?;
    let weights = c.weights()?;
    let mut result: BTreeMap<String, BTreeMap<i64, SpecialValueReport>> = BTreeMap::new();
    for (name, g) in &gauges {
        result.insert(name.clone(), weight_range(weights, g).map(|r| (r, verify_theorem(g, r))).collect());
    }
    let code = verdict_code(result.values().flat_map(|m| m.values().map(|r| &r.verdict)));
    let stdout = if c.json {
        to_json(&envelope("verify", Some(digest), &result))
    } else {
        let rows: Vec<Vec<String>> = result
            .iter()
            .flat_map(|(name, rows)| {
                rows.values().map(move |rep| {
                    vec![
                        name.clone(),
                        rep.weight.to_string(),
                        verdict_name(rep.verdict).to_string(),
                        rep.rho.to_string(),
                        rep.lhs_exponent.to_string(),
                        rep.mu_exponent.to_string(),
                        rep.chi.to_string(),
                    ]
                })
            })
            .collect();
        let mut out = table(&["gauge", "r", "verdict", "rho", "v(lim)", "v(mu)", "chi"], &rows);
        for (name, rows) in &result {
            for rep in rows.values() {
                for p in &rep.problems {
                    let _ = writeln!(out, "{name} r={}: {p}", rep.weight);
                }
            }
        }
        out
    };
    Ok(Outcome { stdout, code })
}

#[derive(Debug, Serialize)]
struct SurfaceResult {
    beta: String,
    brauer_norm: String,
    report: ArtinTateReport,
}

pub fn surface(c: &Common) -> Result<Outcome, CliError> {
    let (text, digest) = read_input(c)?;
    let file = GaugeFile::parse(&text)?;
    let mut result = BTreeMap::new();
    for (name, (g, data)) in file.surfaces(c.gauge.as_deref())? {
        let report = artin_tate_check(&g, &data).map_err(|e| CliError::Schema(format!("surface {name}: {e}")))?;
        result.insert(
            name,
            SurfaceResult {
                beta: format_p_power(file.p, report.beta_exponent),
                brauer_norm: format_p_power(file.p, report.brauer_exponent),
                report,
            },
        );
    }
    let code = if result.values().all(|s| s.report.consistent) { 0 } else { 1 };
    let stdout = if c.json {
        to_json(&envelope("surface", Some(digest), &result))
    } else {
        let rows: Vec<Vec<String>> = result
            .iter()
            .map(|(name, s)| {
                let r = &s.report;
                vec![
                    name.clone(),
                    s.beta.clone(),
                    s.brauer_norm.clone(),
                    r.h1_correction_exponent.to_string(),
                    if r.brauer_parity_even { "even" } else { "odd" }.to_string(),
                    if r.consistent { "consistent" } else { "inconsistent" }.to_string(),
                ]
            })
            .collect();
        let mut out = table(&["surface", "beta_r", "|Br|_p", "v(h1 corr)", "parity", "artin-tate"], &rows);
        for (name, s) in &result {
            for p in &s.report.problems {
                let _ = writeln!(out, "{name}: {p}");
            }
        }
        out
    };
    Ok(Outcome { stdout, code })
}
