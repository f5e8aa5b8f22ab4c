//! Report assembly and serialization. Reports are plain serde values built
//! in a fixed field order, so identical inputs produce byte-identical JSON.

use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Value};

use symspace::cex::{CexReport, FNorm};
use symspace::embed::{ChainReport, RhoConstruction, RhoReport, SeriesReport, WitnessOutcome};
use symspace::gfun::{ConditionReport, DilationProfile};
use symspace::norms::SupPoint;
use symspace::Error;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Output {
    format: Format,
    path: Option<PathBuf>,
}

/// A finished report in all three renderings.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// (header, rows)
    pub csv: (String, Vec<String>),
}

impl Output {
    pub fn new(format: Format, path: Option<PathBuf>) -> Self {
        Output { format, path }
    }

    pub fn emit(&self, report: &Report) -> Result<(), Error> {
        let body = match self.format {
            Format::Text => report.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                s.push_str(&report.csv.0);
                s.push('\n');
                for row in &report.csv.1 {
                    s.push_str(row);
                    s.push('\n');
                }
                s
            }
        };
        match &self.path {
            Some(p) => std::fs::write(p, body)
                .map_err(|e| Error::Parse(format!("writing {}: {e}", p.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

pub fn indices_report(spec: &str, p: &DilationProfile) -> Report {
    let json = json!({
        "spec": spec,
        "gamma": p.gamma_est,
        "delta": p.delta_est,
        "stable": p.stable,
        "fit_spread": p.fit_spread,
        "window": p.window,
        "samples": p.samples,
    });
    let mut text = format!(
        "indices of {spec}\n  gamma = {:.6}\n  delta = {:.6}\n  fit: {} (spread {:.5}, window |pow| in {}..{})\n",
        p.gamma_est,
        p.delta_est,
        if p.stable { "stable" } else { "unstable" },
        p.fit_spread,
        p.window.0,
        p.window.1
    );
    text.push_str("  pow  M(2^pow)\n");
    for s in &p.samples {
        text.push_str(&format!("  {:>4}  {:.6e}\n", s.pow, s.value));
    }
    let rows = p.samples.iter().map(|s| format!("{},{}", s.pow, s.value)).collect();
    Report { json, text, csv: ("pow,value".into(), rows) }
}

#[allow(clippy::too_many_arguments)]
pub fn embed_report(
    phi: &str,
    psi: &str,
    series: &SeriesReport,
    vanishing: &ConditionReport,
    gap: &ConditionReport,
    witness: Option<&WitnessOutcome>,
    chain: Option<&ChainReport>,
) -> Report {
    let (u, c, c1) = chain.map(|c| (Some(c.u), Some(c.c), Some(c.c1))).unwrap_or((None, None, None));
    let c2 = witness.and_then(|w| match w {
        WitnessOutcome::Found { c2, .. } => Some(*c2),
        WitnessOutcome::NotFound { .. } => None,
    });
    let trace: Vec<Value> = series
        .terms
        .iter()
        .zip(&series.partial_sums)
        .enumerate()
        .map(|(k, (t, s))| json!({"k": k, "term": t, "partial": s}))
        .collect();
    let json = json!({
        "phi": phi,
        "psi": psi,
        "verdict": series.verdict,
        "constants": {"u": u, "C": c, "C1": c1, "C2": c2},
        "sum_with_tail": series.sum_with_tail,
        "tail_bound": nan_null(series.tail_bound),
        "geo_ratio": series.geo_ratio,
        "p_exponent": series.p_exponent,
        "ratio_vanishes": {"verdict": vanishing.verdict, "last": vanishing.trace.last()},
        "ratio_index": {"verdict": gap.verdict, "gamma": gap.gamma},
        "witness": witness.map(witness_json),
        "chain": chain.map(chain_json),
        "trace": trace,
    });
    let mut text = format!(
        "embedding tests for phi={phi}, psi={psi}\n  increment series: {} (sum+tail {:.6}, geo ratio {:.4}, p-exponent {:.3})\n  ratio psi/phi -> 0: {} (last {:.4e})\n  ratio lower index: {} (gamma {:.4})\n",
        series.verdict,
        series.sum_with_tail,
        series.geo_ratio,
        series.p_exponent,
        vanishing.verdict,
        vanishing.trace.last().copied().unwrap_or(f64::NAN),
        gap.verdict,
        gap.gamma.unwrap_or(f64::NAN),
    );
    if let Some(w) = witness {
        match w {
            WitnessOutcome::Found { exponents, c2, total_measure } => text.push_str(&format!(
                "  witness: measures 2^-j for j = {exponents:?}, C2 = {c2:.4}, total {total_measure:.4}\n"
            )),
            WitnessOutcome::NotFound { reason } => {
                text.push_str(&format!("  witness: none ({reason})\n"))
            }
        }
    }
    if let Some(c) = chain {
        text.push_str(&format!(
            "  chain: u={:.4} C={:.4} C1={:.4} delta_phi={:.4} integral={:.6} <= {:.6}: {}\n",
            c.u,
            c.c,
            c.c1,
            c.delta_phi,
            c.integral,
            c.bound,
            if c.pass { "pass" } else { "fail" }
        ));
    }
    let rows = series
        .terms
        .iter()
        .zip(&series.partial_sums)
        .enumerate()
        .map(|(k, (t, s))| format!("{k},{t},{s}"))
        .collect();
    Report { json, text, csv: ("k,term,partial".into(), rows) }
}

fn witness_json(w: &WitnessOutcome) -> Value {
    match w {
        WitnessOutcome::Found { exponents, c2, total_measure } => {
            json!({"found": true, "exponents": exponents, "C2": c2, "total_measure": total_measure})
        }
        WitnessOutcome::NotFound { reason } => json!({"found": false, "reason": reason}),
    }
}

fn chain_json(c: &ChainReport) -> Value {
    serde_json::to_value(c).expect("chain report serializes")
}

pub fn rho_report(phi: &str, psi: &str, rc: &RhoConstruction, rep: &RhoReport) -> Report {
    let h: Vec<Value> = rc.h_points.iter().map(|&(t, y)| json!([t, y])).collect();
    let json = json!({
        "phi": phi,
        "psi": psi,
        "u": rc.u,
        "depth": rc.depth,
        "tail": rc.tail,
        "s0": rc.s[0],
        "h_points": h,
        "checks": rep.checks,
        "majorant_ratio": rep.majorant_ratio,
        "pass": rep.pass,
    });
    let mut text = format!(
        "replacement weight for phi={phi}, psi={psi}\n  u = {:.4}, depth {}, S_0 = {:.6}, truncation tail {:.3e}\n  majorant sits within factor {:.6} of the raw points\n",
        rc.u, rc.depth, rc.s[0], rc.tail, rep.majorant_ratio
    );
    for c in &rep.checks {
        text.push_str(&format!(
            "  {}: {} (computed {:.6e})\n",
            c.name,
            if c.pass { "pass" } else { "fail" },
            c.computed
        ));
    }
    text.push_str(if rep.pass { "all checks pass\n" } else { "CHECKS FAILED\n" });
    let rows = rep
        .checks
        .iter()
        .map(|c| format!("{},{},{}", c.name, c.computed, c.pass))
        .collect();
    Report { json, text, csv: ("check,computed,pass".into(), rows) }
}

pub fn cex_report(rep: &CexReport) -> Report {
    let json = serde_json::to_value(rep).expect("family report serializes");
    let mut text = format!(
        "family verification: depth {}, {} samples, seed {:#x}\n  E/F ratio in [{:.4}, {:.4}], spread {:.4}\n",
        rep.m_max, rep.samples, rep.seed, rep.ratio_min, rep.ratio_max, rep.spread
    );
    for c in &rep.claims {
        text.push_str(&format!(
            "  {:<34} {:>14.6e} {:>3} {:>12.6e}  {}\n",
            c.claim_id,
            c.computed,
            kind_str(c.kind),
            c.bound,
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    text.push_str(if rep.pass { "all claims pass\n" } else { "CLAIMS FAILED\n" });
    let rows = rep
        .claims
        .iter()
        .map(|c| format!("{},{},{},{},{}", c.claim_id, kind_str(c.kind), c.computed, c.bound, c.pass))
        .collect();
    Report { json, text, csv: ("claim_id,kind,computed,bound,pass".into(), rows) }
}

fn kind_str(k: symspace::cex::ClaimKind) -> &'static str {
    match k {
        symspace::cex::ClaimKind::Le => "le",
        symspace::cex::ClaimKind::Ge => "ge",
        symspace::cex::ClaimKind::Gt => "gt",
        symspace::cex::ClaimKind::Abs => "abs",
    }
}

pub enum NormDetail {
    Sup(SupPoint),
    F(FNorm),
}

pub fn norm_report(space: &str, value: f64, detail: Option<NormDetail>) -> Report {
    let detail_json = match &detail {
        Some(NormDetail::Sup(s)) => json!({"at_log2": s.at_log2, "refinement": s.refinement}),
        Some(NormDetail::F(f)) => json!({
            "chi_value": f.chi.value,
            "pairings": f.pairings,
            "m_used": f.m_used,
            "tail_bound": f.tail_bound,
        }),
        None => Value::Null,
    };
    let json = json!({"space": space, "value": value, "detail": detail_json});
    let mut text = format!("{space} norm = {value:.12}\n");
    match &detail {
        Some(NormDetail::Sup(s)) => text.push_str(&format!(
            "  attained near t = 2^{:.3}, refinement {}\n",
            s.at_log2, s.refinement
        )),
        Some(NormDetail::F(f)) => text.push_str(&format!(
            "  indicator family {:.12}; envelopes used 0..={} (tail bound {:.3e})\n",
            f.chi.value, f.m_used, f.tail_bound
        )),
        None => {}
    }
    Report {
        json,
        text,
        csv: ("space,value".into(), vec![format!("{space},{value}")]),
    }
}

fn nan_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
