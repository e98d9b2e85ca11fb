//! Potential walls for `v_n` along the path `λ ↦ σ_{λω₀,β₀}`, `λ ≥ 1`.
//!
//! A class `w = (r, mH, s)` lies on a potential wall when `Z(w)` and `Z(v_n)`
//! are ℝ-proportional. At the canonical parameters this reads
//!
//! ```text
//! (2(n−1)b²t + λ² − 1)·m + ab·((n−1)r + s) = 0
//! ```
//!
//! and with `λ² = 1 + 2(n−1)b·λ₀` it pins down
//! `λ₀ = −a((n−1)r + s) / (2(n−1)m) − bt` whenever `m ≠ 0`.
//!
//! The scans below enumerate integer boxes exhaustively. An empty result is a
//! certificate up to the stated bound, nothing more.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ideal_sheaf_vector, mukai_pairing, MukaiVector, Surface};
use crate::pell::{criterion_parameter, PellPair, PellSign};
use crate::stability::{canonical_params, charge_with_lambda_sq, PathScale, StabilityParams};

/// Where a class meets the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallMembership {
    /// On the wall at exactly this `λ₀ ≥ 0`.
    OnPath(BigRational),
    OffPath,
    /// `m = 0` and `(n−1)r + s = 0`: proportional for every `λ`.
    AllLambda,
}

/// `(⟨w, w⟩, ⟨w, v_n⟩)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    #[serde(with = "crate::serde_big::int")]
    pub self_pairing: BigInt,
    #[serde(with = "crate::serde_big::int")]
    pub with_vn: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WallKind {
    BrillNoether,
    HilbertChow,
    LiGiesekerUhlenbeck,
    TotallySemistable,
}

impl WallKind {
    pub const ALL: [WallKind; 4] = [
        WallKind::BrillNoether,
        WallKind::HilbertChow,
        WallKind::LiGiesekerUhlenbeck,
        WallKind::TotallySemistable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WallKind::BrillNoether => "Brill-Noether",
            WallKind::HilbertChow => "Hilbert-Chow",
            WallKind::LiGiesekerUhlenbeck => "Li-Gieseker-Uhlenbeck",
            WallKind::TotallySemistable => "totally semistable",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            WallKind::BrillNoether => "brill_noether",
            WallKind::HilbertChow => "hilbert_chow",
            WallKind::LiGiesekerUhlenbeck => "li_gieseker_uhlenbeck",
            WallKind::TotallySemistable => "totally_semistable",
        }
    }

    /// Numerical profile test. Brill–Noether: spherical with `⟨w,v⟩ = 0`;
    /// Hilbert–Chow: isotropic with `⟨w,v⟩ = 1`; Li–Gieseker–Uhlenbeck:
    /// isotropic with `⟨w,v⟩ = 2`; totally semistable: spherical with
    /// `⟨w,v⟩ < 0` (effectivity is checked separately).
    fn matches(self, self_pairing: i128, with_vn: i128) -> bool {
        match self {
            WallKind::BrillNoether => self_pairing == -2 && with_vn == 0,
            WallKind::HilbertChow => self_pairing == 0 && with_vn == 1,
            WallKind::LiGiesekerUhlenbeck => self_pairing == 0 && with_vn == 2,
            WallKind::TotallySemistable => self_pairing == -2 && with_vn < 0,
        }
    }
}

/// A class on the path together with where it meets it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCandidate {
    pub w: MukaiVector,
    /// `λ₀` of the wall; `0` when `every_lambda` is set.
    #[serde(with = "crate::serde_big::rational")]
    pub lambda0: BigRational,
    pub every_lambda: bool,
    pub profile: Profile,
}

impl WallCandidate {
    fn membership(&self) -> WallMembership {
        if self.every_lambda {
            WallMembership::AllLambda
        } else {
            WallMembership::OnPath(self.lambda0.clone())
        }
    }
}

fn lex_cmp(a: &WallCandidate, b: &WallCandidate) -> Ordering {
    a.w.cmp(&b.w)
}

/// Per-type witnesses found by [`scan_walls`]; all lists are expected empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallScanReport {
    #[serde(with = "crate::serde_big::u64str")]
    pub bound: u64,
    pub brill_noether: Vec<WallCandidate>,
    pub hilbert_chow: Vec<WallCandidate>,
    pub li_gieseker_uhlenbeck: Vec<WallCandidate>,
    pub totally_semistable: Vec<WallCandidate>,
}

impl WallScanReport {
    fn empty(bound: u64) -> Self {
        Self {
            bound,
            brill_noether: Vec::new(),
            hilbert_chow: Vec::new(),
            li_gieseker_uhlenbeck: Vec::new(),
            totally_semistable: Vec::new(),
        }
    }

    pub fn witnesses(&self, kind: WallKind) -> &[WallCandidate] {
        match kind {
            WallKind::BrillNoether => &self.brill_noether,
            WallKind::HilbertChow => &self.hilbert_chow,
            WallKind::LiGiesekerUhlenbeck => &self.li_gieseker_uhlenbeck,
            WallKind::TotallySemistable => &self.totally_semistable,
        }
    }

    fn witnesses_mut(&mut self, kind: WallKind) -> &mut Vec<WallCandidate> {
        match kind {
            WallKind::BrillNoether => &mut self.brill_noether,
            WallKind::HilbertChow => &mut self.hilbert_chow,
            WallKind::LiGiesekerUhlenbeck => &mut self.li_gieseker_uhlenbeck,
            WallKind::TotallySemistable => &mut self.totally_semistable,
        }
    }

    pub fn is_clear(&self) -> bool {
        WallKind::ALL.iter().all(|&k| self.witnesses(k).is_empty())
    }
}

/// Validated data of one `(t, n, a, b)` case.
#[derive(Debug, Clone)]
struct PathCase {
    surface: Surface,
    n: u64,
    pell: PellPair,
    vn: MukaiVector,
    params: StabilityParams,
    scale: PathScale,
}

impl PathCase {
    fn new(t: u64, n: u64, p: &PellPair) -> Result<Self> {
        let surface = Surface::new(t)?;
        let d = criterion_parameter(t, n)?;
        if p.sign != PellSign::Negative || !p.solves(d) {
            return Err(Error::NotNegativePellSolution {
                a: p.a.to_string(),
                b: p.b.to_string(),
                d,
            });
        }
        Ok(Self {
            surface,
            n,
            pell: p.clone(),
            vn: ideal_sheaf_vector(n)?,
            params: canonical_params(t, n, p)?,
            scale: PathScale::new(n, p.b.clone()),
        })
    }

    fn n1(&self) -> BigInt {
        BigInt::from(self.n - 1)
    }

    fn raw_lambda0(&self, w: &MukaiVector) -> Option<BigRational> {
        if w.m.is_zero() {
            return None;
        }
        let n1 = self.n1();
        let numer = -(&self.pell.a) * (&n1 * &w.r + &w.s);
        let denom = BigInt::from(2) * &n1 * &w.m;
        let bt = &self.pell.b * BigInt::from(self.surface.t());
        Some(BigRational::new(numer, denom) - BigRational::from_integer(bt))
    }

    fn membership(&self, w: &MukaiVector) -> Result<WallMembership> {
        if w.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(match self.raw_lambda0(w) {
            Some(l) if !l.is_negative() => WallMembership::OnPath(l),
            Some(_) => WallMembership::OffPath,
            None if (self.n1() * &w.r + &w.s).is_zero() => WallMembership::AllLambda,
            None => WallMembership::OffPath,
        })
    }

    fn profile(&self, w: &MukaiVector) -> Profile {
        Profile {
            self_pairing: mukai_pairing(w, w, &self.surface),
            with_vn: mukai_pairing(w, &self.vn, &self.surface),
        }
    }

    fn effective_at(&self, lambda0: &BigRational, w: &MukaiVector) -> bool {
        let lambda_sq = self.scale.lambda_sq(lambda0);
        let charge = |v: &MukaiVector| {
            charge_with_lambda_sq(&self.surface, &self.params.x, &self.params.y, &lambda_sq, v)
        };
        let inner = charge(w).real_inner(&charge(&self.vn), &lambda_sq);
        mukai_pairing(w, w, &self.surface) >= BigInt::from(-2) && inner.is_positive()
    }

    fn candidate(&self, w: MukaiVector) -> Result<Option<WallCandidate>> {
        let (lambda0, every_lambda) = match self.membership(&w)? {
            WallMembership::OnPath(l) => (l, false),
            WallMembership::AllLambda => (BigRational::zero(), true),
            WallMembership::OffPath => return Ok(None),
        };
        let profile = self.profile(&w);
        Ok(Some(WallCandidate {
            w,
            lambda0,
            every_lambda,
            profile,
        }))
    }
}

/// Solves the membership equation for `λ₀`; `None` when `m = 0`.
/// The value may be negative (the class then meets the line off the path).
pub fn membership_lambda0(
    t: u64,
    n: u64,
    p: &PellPair,
    w: &MukaiVector,
) -> Result<Option<BigRational>> {
    Ok(PathCase::new(t, n, p)?.raw_lambda0(w))
}

/// Classifies where `w` meets the path.
pub fn wall_lambda0(t: u64, n: u64, p: &PellPair, w: &MukaiVector) -> Result<WallMembership> {
    PathCase::new(t, n, p)?.membership(w)
}

/// `(⟨w, w⟩, ⟨w, v_n⟩)` on the surface of degree `2t`.
pub fn pairing_profile(w: &MukaiVector, n: u64, t: u64) -> Result<Profile> {
    let surface = Surface::new(t)?;
    let vn = ideal_sheaf_vector(n)?;
    Ok(Profile {
        self_pairing: mukai_pairing(w, w, &surface),
        with_vn: mukai_pairing(w, &vn, &surface),
    })
}

/// `⟨w,w⟩ ≥ −2` and `Re(Z(w)/Z(v_n)) > 0` at `σ_{λω₀,β₀}`, for `w` on the
/// wall at `λ₀`. The sign is read off `Re(Z(w)·conj Z(v_n))`.
pub fn is_effective(
    t: u64,
    n: u64,
    p: &PellPair,
    lambda0: &BigRational,
    w: &MukaiVector,
) -> Result<bool> {
    if lambda0.is_negative() {
        return Err(Error::NegativeLambda0(lambda0.to_string()));
    }
    let case = PathCase::new(t, n, p)?;
    let on_wall = match case.membership(w)? {
        WallMembership::OnPath(l) => &l == lambda0,
        WallMembership::AllLambda => true,
        WallMembership::OffPath => false,
    };
    if !on_wall {
        return Err(Error::NotOnWall {
            r: w.r.to_string(),
            m: w.m.to_string(),
            s: w.s.to_string(),
            lambda0: lambda0.to_string(),
        });
    }
    Ok(case.effective_at(lambda0, w))
}

/// Splits `[-bound, bound]` into at most `slabs` contiguous ranges.
fn slabs(bound: i64, slabs: usize) -> Vec<(i64, i64)> {
    let total = 2 * bound + 1;
    let parts = (slabs.max(1) as i64).min(total);
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut lo = -bound;
    for i in 0..parts {
        let len = base + i64::from(i < extra);
        out.push((lo, lo + len - 1));
        lo += len;
    }
    out
}

fn default_slabs() -> usize {
    rayon::current_num_threads() * 4
}

/// Enumerates `|r|, |m|, |s| ≤ bound` and reports every on-path class with a
/// Brill–Noether, Hilbert–Chow or Li–Gieseker–Uhlenbeck profile, and every
/// effective on-path spherical class with `⟨w, v_n⟩ < 0`.
pub fn scan_walls(t: u64, n: u64, p: &PellPair, bound: u64) -> Result<WallScanReport> {
    scan_walls_partitioned(t, n, p, bound, default_slabs())
}

/// [`scan_walls`] with an explicit number of `r`-slabs. The result does not
/// depend on `slab_count`.
pub fn scan_walls_partitioned(
    t: u64,
    n: u64,
    p: &PellPair,
    bound: u64,
    slab_count: usize,
) -> Result<WallScanReport> {
    let case = PathCase::new(t, n, p)?;
    let b = i64::try_from(bound).map_err(|_| Error::Overflow { t, n })?;
    let (t2, n1) = (2 * i128::from(t), i128::from(n - 1));

    let per_slab: Vec<Result<Vec<(WallKind, WallCandidate)>>> = slabs(b, slab_count)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut found = Vec::new();
            for r in lo..=hi {
                let r = i128::from(r);
                for m in -b..=b {
                    let m = i128::from(m);
                    let tm2 = t2 * m * m;
                    for s in -b..=b {
                        let s = i128::from(s);
                        let self_pairing = tm2 - 2 * r * s;
                        let with_vn = n1 * r - s;
                        let Some(kind) = WallKind::ALL
                            .into_iter()
                            .find(|k| k.matches(self_pairing, with_vn))
                        else {
                            continue;
                        };
                        let w = MukaiVector::new(r, m, s);
                        let Some(c) = case.candidate(w)? else {
                            continue;
                        };
                        if kind == WallKind::TotallySemistable
                            && !case.effective_at(&c.lambda0, &c.w)
                        {
                            continue;
                        }
                        found.push((kind, c));
                    }
                }
            }
            Ok(found)
        })
        .collect();

    let mut report = WallScanReport::empty(bound);
    for slab in per_slab {
        for (kind, c) in slab? {
            report.witnesses_mut(kind).push(c);
        }
    }
    for kind in WallKind::ALL {
        report.witnesses_mut(kind).sort_by(lex_cmp);
    }
    Ok(report)
}

/// Every on-path class in `|r|, |m|, |s| ≤ bound` with the exact profile
/// `(self_pairing, with_vn)`, sorted lexicographically.
pub fn scan_profile(
    t: u64,
    n: u64,
    p: &PellPair,
    bound: u64,
    self_pairing: i64,
    with_vn: i64,
) -> Result<Vec<WallCandidate>> {
    let case = PathCase::new(t, n, p)?;
    let b = i64::try_from(bound).map_err(|_| Error::Overflow { t, n })?;
    let (t2, n1) = (2 * i128::from(t), i128::from(n - 1));
    let (sp, k) = (i128::from(self_pairing), i128::from(with_vn));

    let per_r: Vec<Result<Vec<WallCandidate>>> = (-b..=b)
        .into_par_iter()
        .map(|r| {
            let r = i128::from(r);
            let s = n1 * r - k;
            if s.abs() > i128::from(b) {
                return Ok(Vec::new());
            }
            let mut found = Vec::new();
            for m in -b..=b {
                let m = i128::from(m);
                if t2 * m * m - 2 * r * s != sp {
                    continue;
                }
                if let Some(c) = case.candidate(MukaiVector::new(r, m, s))? {
                    found.push(c);
                }
            }
            Ok(found)
        })
        .collect();

    let mut out = Vec::new();
    for chunk in per_r {
        out.extend(chunk?);
    }
    out.sort_by(lex_cmp);
    Ok(out)
}

/// A `(p, k)` profile: `⟨w, w⟩ = 2p`, `⟨w, v_n⟩ = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlopProfile {
    #[serde(with = "crate::serde_big::i64str")]
    pub p: i64,
    #[serde(with = "crate::serde_big::i64str")]
    pub k: i64,
}

impl FlopProfile {
    pub fn new(p: i64, k: i64) -> Self {
        Self { p, k }
    }

    /// `k² − 4p(n−1)`, which equals `(2(n−1)r − k)² − t(n−1)(2m)²` for any
    /// class with this profile.
    pub fn discriminant(&self, n: u64) -> BigInt {
        let k = BigInt::from(self.k);
        &k * &k - BigInt::from(4) * BigInt::from(self.p) * BigInt::from(n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlopVerdict {
    /// Every class with the profile meets the line at `λ₀ ≤ −1/(2(n−1)b) < 0`.
    ExcludedOnPath,
    /// The Pell bound does not apply; see the bounded search.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopCheck {
    pub profile: FlopProfile,
    #[serde(with = "crate::serde_big::int")]
    pub discriminant: BigInt,
    pub verdict: FlopVerdict,
    /// `−1/(2(n−1)b)` for excluded profiles.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub lambda0_ceiling: Option<BigRational>,
    #[serde(with = "crate::serde_big::u64str")]
    pub search_bound: u64,
    /// Lexicographically first on-path class found in the bounded search.
    pub witness: Option<WallCandidate>,
}

mod opt_rational {
    use num::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::serde_big::rational")] BigRational);

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|q| Wrap(q.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Decides whether a class with profile `(p, k)` can sit on the path.
///
/// For `w = (r, mH, s)` with this profile, `X = 2(n−1)r − k` and `Y = 2m`
/// satisfy `X² − t(n−1)·Y² = k² − 4p(n−1)`. When the right side is `1` every
/// solution with `m ≠ 0` is a power of `(2a²+1, 2ab)`, so
/// `|m| / |X| ≥ ab / (2a²+1)`, and since `(n−1)r + s = X` the membership
/// equation forces `λ₀ ≤ −1/(2(n−1)b)`. Other discriminants are reported as
/// inconclusive. Either way a direct search over `|r|, |m| ≤ search_bound`
/// is attached.
pub fn flopping_obstruction(
    t: u64,
    n: u64,
    p: &PellPair,
    profile: FlopProfile,
    search_bound: u64,
) -> Result<FlopCheck> {
    let case = PathCase::new(t, n, p)?;
    let discriminant = profile.discriminant(n);
    if !discriminant.is_positive() {
        return Err(Error::VacuousProfile {
            p: profile.p,
            k: profile.k,
            disc: discriminant.to_string(),
        });
    }
    let (verdict, lambda0_ceiling) = if discriminant.is_one() {
        let ceiling = BigRational::new(-BigInt::one(), BigInt::from(2) * case.n1() * &p.b);
        (FlopVerdict::ExcludedOnPath, Some(ceiling))
    } else {
        (FlopVerdict::Inconclusive, None)
    };
    let witness = flop_search(&case, profile, search_bound)?;
    Ok(FlopCheck {
        profile,
        discriminant,
        verdict,
        lambda0_ceiling,
        search_bound,
        witness,
    })
}

fn flop_search(case: &PathCase, profile: FlopProfile, bound: u64) -> Result<Option<WallCandidate>> {
    let b = i128::from(bound);
    let t2 = 2 * i128::from(case.surface.t());
    let n1 = i128::from(case.n - 1);
    let (pp, k) = (2 * i128::from(profile.p), i128::from(profile.k));
    let hits: Vec<Result<Option<WallCandidate>>> = (-b..=b)
        .into_par_iter()
        .map(|r| {
            let s = n1 * r - k;
            for m in -b..=b {
                if t2 * m * m - 2 * r * s != pp || (r == 0 && m == 0 && s == 0) {
                    continue;
                }
                if let Some(c) = case.candidate(MukaiVector::new(r, m, s))? {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        })
        .collect();
    for hit in hits {
        if let Some(c) = hit? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Re-verifies a reported candidate from scratch.
pub fn recheck_candidate(t: u64, n: u64, p: &PellPair, c: &WallCandidate) -> Result<bool> {
    let case = PathCase::new(t, n, p)?;
    Ok(case.membership(&c.w)? == c.membership() && case.profile(&c.w) == c.profile)
}

/// Largest `λ₀` (on or off the path) among classes with profile `(p, k)` and
/// `m ≠ 0` in the box `|r|, |m| ≤ bound`.
pub fn max_profile_lambda0(
    t: u64,
    n: u64,
    p: &PellPair,
    profile: FlopProfile,
    bound: u64,
) -> Result<Option<BigRational>> {
    let case = PathCase::new(t, n, p)?;
    let b = i128::from(bound);
    let t2 = 2 * i128::from(t);
    let n1 = i128::from(n - 1);
    let (pp, k) = (2 * i128::from(profile.p), i128::from(profile.k));
    let mut best: Option<BigRational> = None;
    for r in -b..=b {
        let s = n1 * r - k;
        for m in (-b..=b).filter(|m| *m != 0) {
            if t2 * m * m - 2 * r * s != pp {
                continue;
            }
            let l = case
                .raw_lambda0(&MukaiVector::new(r, m, s))
                .expect("m is nonzero");
            if best.as_ref().is_none_or(|x| &l > x) {
                best = Some(l);
            }
        }
    }
    Ok(best)
}

/// `gcd` of the coordinates; `0` for the zero vector.
pub fn content(v: &MukaiVector) -> BigInt {
    v.r.gcd(&v.m).gcd(&v.s)
}
