//! Text and JSON rendering of classification reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::classify::{
    Biregularity, CheckOutcome, ClassificationReport, NoInvolutionReason, SweepReport, Verdict,
};
use crate::error::{Error, Result};
use crate::walls::{FlopVerdict, WallKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Pretty JSON with object keys in sorted order.
fn sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Serialization(e.to_string()))?;
    let mut out =
        serde_json::to_string_pretty(&v).map_err(|e| Error::Serialization(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

pub fn render(report: &ClassificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => sorted_json(report),
        Format::Text => Ok(render_text(report)),
    }
}

pub fn render_sweep(sweep: &SweepReport, format: Format) -> Result<String> {
    match format {
        Format::Json => sorted_json(sweep),
        Format::Text => Ok(render_sweep_text(sweep)),
    }
}

pub fn parse_report(json: &str) -> Result<ClassificationReport> {
    serde_json::from_str(json).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn parse_sweep(json: &str) -> Result<SweepReport> {
    serde_json::from_str(json).map_err(|e| Error::Serialization(e.to_string()))
}

fn verdict_text(v: &Verdict) -> &'static str {
    match v {
        Verdict::NaturalCoveringInvolution => "natural covering involution",
        Verdict::DerivedNaturalInvolution => "derived-natural involution",
        Verdict::NoInvolution {
            reason: NoInvolutionReason::Square,
        } => "no involution (t(n-1) is a perfect square)",
        Verdict::NoInvolution {
            reason: NoInvolutionReason::NegPellUnsolvable,
        } => "no involution (X^2 - t(n-1) Y^2 = -1 has no solution)",
    }
}

fn outcome_text(c: &CheckOutcome) -> String {
    match c {
        CheckOutcome::Holds => "holds".into(),
        CheckOutcome::Fails { detail } => format!("FAILS: {detail}"),
        CheckOutcome::NoWitnessUpTo { bound } => format!("no witness up to {bound}"),
        CheckOutcome::WitnessFound { bound, witness } => {
            format!("WITNESS {witness} (bound {bound})")
        }
    }
}

fn render_text(r: &ClassificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "K3 surface of degree {} (t = {}), S^[{}]",
        r.degree(),
        r.t,
        r.n
    );
    let _ = writeln!(s, "verdict: {}", verdict_text(&r.verdict));
    if let Some(p) = &r.pell {
        let _ = writeln!(s, "negative Pell solution (a, b) = ({}, {})", p.a, p.b);
    }
    if let Some(p) = &r.positive_pell {
        let _ = writeln!(s, "positive Pell solution = ({}, {})", p.a, p.b);
    }
    if let Some(m) = &r.ns_matrix {
        let _ = writeln!(s, "action on NS(S^[n]):\n{}", m.matrix());
    }
    if let Some(m) = &r.mukai_matrix {
        let _ = writeln!(s, "action on the Mukai lattice:\n{}", m.matrix());
    }
    if let Some(p) = &r.stability {
        let _ = writeln!(
            s,
            "invariant stability condition: omega = {} H, beta = {} H",
            p.x, p.y
        );
    }
    if let Some(d) = &r.discriminant {
        let _ = writeln!(
            s,
            "discriminant action: multiplier {} mod {}",
            d.multiplier, d.modulus
        );
    }
    if !r.checks.is_empty() {
        let _ = writeln!(s, "checks:");
        for (name, c) in &r.checks {
            let _ = writeln!(s, "  {name}: {}", outcome_text(c));
        }
    }
    if let Some(w) = &r.wall_report {
        let _ = writeln!(s, "wall scan (bound {}):", w.bound);
        for kind in WallKind::ALL {
            let _ = writeln!(
                s,
                "  {}: {} witnesses",
                kind.name(),
                w.witnesses(kind).len()
            );
        }
    }
    for f in &r.flop_checks {
        let verdict = match f.verdict {
            FlopVerdict::ExcludedOnPath => "excluded on the path",
            FlopVerdict::Inconclusive => "inconclusive",
        };
        let _ = writeln!(
            s,
            "flop profile (p, k) = ({}, {}): discriminant {}, {verdict}",
            f.profile.p, f.profile.k, f.discriminant
        );
    }
    if let Some(b) = &r.biregularity {
        let text = match b {
            Biregularity::KnownBiregular(src) => format!("known biregular ({src})"),
            Biregularity::BirationalCertifiedOnPath => {
                "birational; no flopping obstruction found on the path".into()
            }
            Biregularity::RequiresExternalCaseList => {
                "undetermined; requires an external list of flopping walls".into()
            }
        };
        let _ = writeln!(s, "biregularity: {text}");
    }
    if let Some(d) = &r.known_description {
        let _ = writeln!(s, "known example: {d}");
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn render_sweep_text(sweep: &SweepReport) -> String {
    let mut s = String::new();
    for c in &sweep.cells {
        let status = match (&c.report, &c.error) {
            (Some(r), _) => verdict_text(&r.verdict).to_string(),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => "error".into(),
        };
        let _ = writeln!(s, "t = {:>3}  n = {:>3}  {status}", c.t, c.n);
    }
    let _ = writeln!(s, "summary:");
    for (k, v) in &sweep.summary {
        let _ = writeln!(s, "  {k}: {v}");
    }
    s
}
