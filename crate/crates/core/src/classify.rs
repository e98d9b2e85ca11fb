//! The full pipeline for one `(t, n)`: existence, witnesses, exact
//! verification and bounded wall certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{
    check_isometries, mukai_extension, ns_involution, MukaiIsometry, NsIsometry,
};
use crate::known;
use crate::lattice::{discriminant_action, DiscriminantAction, NsGram, Surface};
use crate::pell::{
    aux_equation_scan, criterion_parameter, solve_neg_pell, solve_pos_pell, NegPellOutcome,
    PellPair, PellSign,
};
use crate::stability::{
    canonical_params, charge_invariance, spherical_positivity_scan, StabilityParams,
};
use crate::walls::{
    flopping_obstruction, scan_walls, FlopCheck, FlopProfile, FlopVerdict, WallKind, WallScanReport,
};

pub const SCHEMA_VERSION: &str = "1";

const DEGREE_TWO_NOTE: &str = "other non-natural birational automorphisms of S^[n], if any, \
act by −1 on the discriminant group; they are not classified here";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Box size for the wall scans.
    pub scan_bound: u64,
    pub positivity_bound: u64,
    pub aux_bound: u64,
    /// `None` uses [`default_flop_profiles`].
    pub flop_profiles: Option<Vec<FlopProfile>>,
    pub flop_search_bound: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            scan_bound: 100,
            positivity_bound: 200,
            aux_bound: 10_000,
            flop_profiles: None,
            flop_search_bound: 100,
        }
    }
}

/// The discriminant-one profiles `(p, k) = ((n−1)j² ± j, 2(n−1)j ± 1)` for
/// `0 ≤ j ≤ 2`.
pub fn default_flop_profiles(n: u64) -> Vec<FlopProfile> {
    let n1 = (n - 1) as i64;
    let mut set = BTreeSet::new();
    for j in 0..=2i64 {
        set.insert(FlopProfile::new(n1 * j * j + j, 2 * n1 * j + 1));
        if j > 0 {
            set.insert(FlopProfile::new(n1 * j * j - j, 2 * n1 * j - 1));
        }
    }
    set.into_iter().collect()
}

/// Parses lines `p k`; `#` starts a comment.
pub fn parse_flop_profiles(text: &str) -> Result<Vec<FlopProfile>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::ProfileSyntax {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [p, k] = fields[..] else {
            return Err(syntax(format!("expected two integers, found {:?}", line)));
        };
        let p = p.parse().map_err(|e| syntax(format!("p = {p:?}: {e}")))?;
        let k = k.parse().map_err(|e| syntax(format!("k = {k:?}: {e}")))?;
        out.push(FlopProfile::new(p, k));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoInvolutionReason {
    Square,
    NegPellUnsolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    NaturalCoveringInvolution,
    DerivedNaturalInvolution,
    NoInvolution { reason: NoInvolutionReason },
}

impl Verdict {
    pub fn key(&self) -> &'static str {
        match self {
            Verdict::NaturalCoveringInvolution => "natural_covering_involution",
            Verdict::DerivedNaturalInvolution => "derived_natural_involution",
            Verdict::NoInvolution {
                reason: NoInvolutionReason::Square,
            } => "no_involution_square",
            Verdict::NoInvolution {
                reason: NoInvolutionReason::NegPellUnsolvable,
            } => "no_involution_neg_pell_unsolvable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Holds,
    Fails {
        detail: String,
    },
    NoWitnessUpTo {
        #[serde(with = "crate::serde_big::u64str")]
        bound: u64,
    },
    WitnessFound {
        #[serde(with = "crate::serde_big::u64str")]
        bound: u64,
        witness: String,
    },
}

impl CheckOutcome {
    pub fn passes(&self) -> bool {
        matches!(
            self,
            CheckOutcome::Holds | CheckOutcome::NoWitnessUpTo { .. }
        )
    }

    fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            CheckOutcome::Holds
        } else {
            CheckOutcome::Fails { detail: detail() }
        }
    }

    fn from_search<W: ToString>(bound: u64, witness: Option<W>) -> Self {
        match witness {
            None => CheckOutcome::NoWitnessUpTo { bound },
            Some(w) => CheckOutcome::WitnessFound {
                bound,
                witness: w.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "source", rename_all = "snake_case")]
pub enum Biregularity {
    KnownBiregular(String),
    BirationalCertifiedOnPath,
    RequiresExternalCaseList,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: String,
    #[serde(with = "crate::serde_big::u64str")]
    pub t: u64,
    #[serde(with = "crate::serde_big::u64str")]
    pub n: u64,
    pub verdict: Verdict,
    pub pell: Option<PellPair>,
    pub positive_pell: Option<PellPair>,
    pub ns_matrix: Option<NsIsometry>,
    pub mukai_matrix: Option<MukaiIsometry>,
    pub stability: Option<StabilityParams>,
    pub discriminant: Option<DiscriminantAction>,
    pub checks: BTreeMap<String, CheckOutcome>,
    pub wall_report: Option<WallScanReport>,
    pub flop_checks: Vec<FlopCheck>,
    pub biregularity: Option<Biregularity>,
    pub known_description: Option<String>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    fn bare(t: u64, n: u64, verdict: Verdict) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            t,
            n,
            verdict,
            pell: None,
            positive_pell: None,
            ns_matrix: None,
            mukai_matrix: None,
            stability: None,
            discriminant: None,
            checks: BTreeMap::new(),
            wall_report: None,
            flop_checks: Vec::new(),
            biregularity: None,
            known_description: known::known_examples_lookup(t, n),
            notes: Vec::new(),
        }
    }

    pub fn degree(&self) -> u64 {
        2 * self.t
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(CheckOutcome::passes)
    }
}

pub fn classify(t: u64, n: u64, options: &ClassifyOptions) -> Result<ClassificationReport> {
    let surface = Surface::new(t)?;
    let d = criterion_parameter(t, n)?;

    if t == 1 {
        let mut report = ClassificationReport::bare(t, n, Verdict::NaturalCoveringInvolution);
        report.biregularity = Some(Biregularity::KnownBiregular(
            "natural involution induced by the covering involution of the double plane".into(),
        ));
        report.notes.push(DEGREE_TWO_NOTE.into());
        return Ok(report);
    }

    let pell = match solve_neg_pell(d)? {
        NegPellOutcome::Solved(p) => p,
        outcome => {
            let reason = match outcome {
                NegPellOutcome::Square => NoInvolutionReason::Square,
                _ => NoInvolutionReason::NegPellUnsolvable,
            };
            let report = ClassificationReport::bare(t, n, Verdict::NoInvolution { reason });
            if report.known_description.is_some() {
                return Err(Error::Inconsistent {
                    t,
                    n,
                    check: "known_example".into(),
                    detail: "a known derived-natural involution exists but the criterion fails"
                        .into(),
                });
            }
            return Ok(report);
        }
    };

    let mut report = ClassificationReport::bare(t, n, Verdict::DerivedNaturalInvolution);
    let mut checks = BTreeMap::new();

    let positive = solve_pos_pell(d)?;
    let expected = PellPair::new(
        BigInt::from(2) * &pell.a * &pell.a + 1,
        BigInt::from(2) * &pell.a * &pell.b,
        PellSign::Positive,
    );
    checks.insert(
        "pell_positive_fundamental".to_string(),
        CheckOutcome::from_bool(positive == expected, || {
            format!("positive fundamental {positive} differs from (2a²+1, 2ab) = {expected}")
        }),
    );

    let m = ns_involution(t, n, &pell)?;
    let tau = mukai_extension(t, n, &pell)?;
    let iso = check_isometries(&surface, n, &m, &tau)?;
    for (name, ok) in [
        ("ns_involution", iso.ns_involution),
        ("ns_isometry", iso.ns_isometry),
        ("ns_det_minus_one", iso.ns_det_minus_one),
        ("mukai_involution", iso.mukai_involution),
        ("mukai_isometry", iso.mukai_isometry),
        ("mukai_det_minus_one", iso.mukai_det_minus_one),
        ("mukai_fixes_vn", iso.fixes_vn),
        ("restriction_consistent", iso.restriction_consistent),
    ] {
        checks.insert(
            name.to_string(),
            CheckOutcome::from_bool(ok, || name.replace('_', " ")),
        );
    }

    let disc = discriminant_action(&m, &NsGram::new(surface, n)?)?;
    checks.insert(
        "discriminant_trivial".to_string(),
        CheckOutcome::from_bool(disc.is_trivial(), || {
            format!("multiplier {} modulo {}", disc.multiplier, disc.modulus)
        }),
    );

    let params = canonical_params(t, n, &pell)?;
    checks.insert(
        "charge_invariance".to_string(),
        CheckOutcome::from_bool(charge_invariance(&tau, &surface, &params)?, || {
            "Z∘τ ≠ Z at the canonical parameters".into()
        }),
    );
    checks.insert(
        "spherical_positivity".to_string(),
        CheckOutcome::from_search(
            options.positivity_bound,
            spherical_positivity_scan(t, n, &pell, options.positivity_bound)?,
        ),
    );
    if n >= 3 {
        let aux = aux_equation_scan(t, n, options.aux_bound)?;
        checks.insert(
            "aux_equation".to_string(),
            CheckOutcome::from_search(options.aux_bound, aux.map(|(x, y)| format!("({x}, {y})"))),
        );
    }

    let walls = scan_walls(t, n, &pell, options.scan_bound)?;
    for kind in WallKind::ALL {
        let key = format!("wall.{}", kind.key());
        let first = walls.witnesses(kind).first().map(|c| c.w.to_string());
        checks.insert(key, CheckOutcome::from_search(options.scan_bound, first));
    }

    let profiles = match &options.flop_profiles {
        Some(p) => p.clone(),
        None => default_flop_profiles(n),
    };
    let mut flop_checks = Vec::with_capacity(profiles.len());
    for profile in profiles {
        let check = flopping_obstruction(t, n, &pell, profile, options.flop_search_bound)?;
        if check.verdict == FlopVerdict::ExcludedOnPath {
            checks.insert(
                format!("flop.p={}.k={}", profile.p, profile.k),
                CheckOutcome::from_search(
                    options.flop_search_bound,
                    check.witness.as_ref().map(|c| c.w.to_string()),
                ),
            );
        }
        flop_checks.push(check);
    }

    if let Some((name, outcome)) = checks.iter().find(|(_, c)| !c.passes()) {
        return Err(Error::Inconsistent {
            t,
            n,
            check: name.clone(),
            detail: format!("{outcome:?}"),
        });
    }

    report.biregularity = Some(match known::lookup(t, n) {
        Some(e) if e.biregular => Biregularity::KnownBiregular(e.name.clone()),
        _ if flop_checks
            .iter()
            .any(|c| c.verdict == FlopVerdict::Inconclusive) =>
        {
            Biregularity::RequiresExternalCaseList
        }
        _ => Biregularity::BirationalCertifiedOnPath,
    });
    report.pell = Some(pell);
    report.positive_pell = Some(positive);
    report.ns_matrix = Some(m);
    report.mukai_matrix = Some(tau);
    report.stability = Some(params);
    report.discriminant = Some(disc);
    report.checks = checks;
    report.wall_report = Some(walls);
    report.flop_checks = flop_checks;
    Ok(report)
}

/// One cell of a sweep: a report or the error it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    #[serde(with = "crate::serde_big::u64str")]
    pub t: u64,
    #[serde(with = "crate::serde_big::u64str")]
    pub n: u64,
    pub report: Option<ClassificationReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: String,
    pub cells: Vec<SweepCell>,
    /// Count per verdict key, plus `error`.
    pub summary: BTreeMap<String, String>,
}

impl SweepReport {
    pub fn count(&self, key: &str) -> u64 {
        self.summary
            .get(key)
            .and_then(|c| c.parse().ok())
            .unwrap_or(0)
    }
}

/// Classifies every `(t, n)` in the product range, ordered by `(t, n)`.
pub fn batch_sweep(
    t_range: RangeInclusive<u64>,
    n_range: RangeInclusive<u64>,
    options: &ClassifyOptions,
) -> Result<SweepReport> {
    if t_range.is_empty() {
        return Err(Error::EmptyRange(format!(
            "t in [{}, {}]",
            t_range.start(),
            t_range.end()
        )));
    }
    if n_range.is_empty() {
        return Err(Error::EmptyRange(format!(
            "n in [{}, {}]",
            n_range.start(),
            n_range.end()
        )));
    }
    let grid: Vec<(u64, u64)> = t_range
        .flat_map(|t| n_range.clone().map(move |n| (t, n)))
        .collect();
    let cells: Vec<SweepCell> = grid
        .into_par_iter()
        .map(|(t, n)| match classify(t, n, options) {
            Ok(r) => SweepCell {
                t,
                n,
                report: Some(r),
                error: None,
            },
            Err(e) => SweepCell {
                t,
                n,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for key in [
        Verdict::NaturalCoveringInvolution,
        Verdict::DerivedNaturalInvolution,
        Verdict::NoInvolution {
            reason: NoInvolutionReason::Square,
        },
        Verdict::NoInvolution {
            reason: NoInvolutionReason::NegPellUnsolvable,
        },
    ]
    .map(|v| v.key())
    .into_iter()
    .chain(["error"])
    {
        counts.insert(key.to_string(), 0);
    }
    for cell in &cells {
        let key = cell.report.as_ref().map_or("error", |r| r.verdict.key());
        *counts.get_mut(key).expect("all keys present") += 1;
    }
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION.to_string(),
        cells,
        summary: counts
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ClassifyOptions {
        ClassifyOptions {
            scan_bound: 20,
            positivity_bound: 50,
            aux_bound: 500,
            flop_profiles: None,
            flop_search_bound: 30,
        }
    }

    #[test]
    fn verdict_examples() {
        let r = classify(2, 2, &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::DerivedNaturalInvolution);
        assert_eq!(r.pell, Some(PellPair::new(1, 1, PellSign::Negative)));
        assert!(r
            .known_description
            .as_deref()
            .unwrap()
            .contains("Beauville"));
        assert_eq!(
            r.biregularity,
            Some(Biregularity::KnownBiregular("Beauville involution".into()))
        );
        assert!(r.all_checks_pass());
        assert!(!r.checks.contains_key("aux_equation"));

        let r = classify(2, 3, &quick()).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::NoInvolution {
                reason: NoInvolutionReason::Square
            }
        );
        assert!(r.pell.is_none() && r.ns_matrix.is_none());

        let r = classify(1, 5, &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::NaturalCoveringInvolution);
        assert_eq!(r.notes.len(), 1);

        let r = classify(5, 11, &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::DerivedNaturalInvolution);
        assert_eq!(r.pell, Some(PellPair::new(7, 1, PellSign::Negative)));
        assert_eq!(
            r.biregularity,
            Some(Biregularity::BirationalCertifiedOnPath)
        );
        assert!(r.checks.contains_key("aux_equation"));

        let r = classify(3, 3, &quick()).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::NoInvolution {
                reason: NoInvolutionReason::NegPellUnsolvable
            }
        );
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(classify(0, 2, &quick()), Err(Error::InvalidDegree(0)));
        assert_eq!(
            classify(2, 1, &quick()),
            Err(Error::InvalidPoints { got: 1, min: 2 })
        );
    }

    #[test]
    fn inconclusive_profile_changes_biregularity() {
        let mut opts = quick();
        opts.flop_profiles = Some(vec![FlopProfile::new(-1, 1)]);
        let r = classify(5, 3, &opts).unwrap();
        assert_eq!(r.flop_checks[0].verdict, FlopVerdict::Inconclusive);
        assert_eq!(r.biregularity, Some(Biregularity::RequiresExternalCaseList));
        opts.flop_profiles = Some(vec![FlopProfile::new(0, 0)]);
        assert!(matches!(
            classify(5, 3, &opts),
            Err(Error::VacuousProfile { .. })
        ));
    }

    #[test]
    fn default_profiles_have_discriminant_one() {
        for n in 2..20 {
            let profiles = default_flop_profiles(n);
            assert!(profiles.contains(&FlopProfile::new(0, 1)));
            for p in profiles {
                assert_eq!(p.discriminant(n), BigInt::from(1));
            }
        }
    }

    #[test]
    fn profile_file_parsing() {
        let text = "# profiles\n0 1\n\n  2 3   # comment\n-1 1\n";
        assert_eq!(
            parse_flop_profiles(text).unwrap(),
            vec![
                FlopProfile::new(0, 1),
                FlopProfile::new(2, 3),
                FlopProfile::new(-1, 1)
            ]
        );
        assert!(matches!(
            parse_flop_profiles("0 1\n1 2 3\n"),
            Err(Error::ProfileSyntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_flop_profiles("x 1"),
            Err(Error::ProfileSyntax { line: 1, .. })
        ));
    }

    #[test]
    fn sweep_examples() {
        let s = batch_sweep(2..=3, 2..=3, &quick()).unwrap();
        let cells: Vec<_> = s.cells.iter().map(|c| (c.t, c.n)).collect();
        assert_eq!(cells, vec![(2, 2), (2, 3), (3, 2), (3, 3)]);
        let verdicts: Vec<_> = s
            .cells
            .iter()
            .map(|c| c.report.as_ref().unwrap().verdict.key())
            .collect();
        assert_eq!(
            verdicts,
            vec![
                "derived_natural_involution",
                "no_involution_square",
                "no_involution_neg_pell_unsolvable",
                "no_involution_neg_pell_unsolvable"
            ]
        );
        assert_eq!(s.count("derived_natural_involution"), 1);
        assert_eq!(s.count("error"), 0);

        #[allow(clippy::reversed_empty_ranges)]
        let empty = batch_sweep(3..=2, 2..=3, &quick());
        assert!(matches!(empty, Err(Error::EmptyRange(_))));
    }

    #[test]
    fn sweep_degree_ten() {
        let s = batch_sweep(5..=5, 2..=14, &quick()).unwrap();
        let derived: Vec<u64> = s
            .cells
            .iter()
            .filter(|c| c.report.as_ref().unwrap().verdict == Verdict::DerivedNaturalInvolution)
            .map(|c| c.n)
            .collect();
        assert_eq!(derived, vec![2, 3, 11, 14]);
    }

    #[test]
    fn sweep_records_cell_errors() {
        let s = batch_sweep(0..=1, 2..=2, &quick()).unwrap();
        assert_eq!(s.count("error"), 1);
        assert_eq!(s.count("natural_covering_involution"), 1);
        assert!(s.cells[0].error.as_deref().unwrap().contains("at least 1"));
    }
}
