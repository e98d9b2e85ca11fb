//! Central charges `Z_{ω,β}` for divisor-multiple parameters `ω = λ·xH`,
//! `β = yH`, evaluated in exact rational arithmetic.
//!
//! For a class `(r, mH, s)`:
//!
//! ```text
//! Re Z = λ²·t·x²·r + 2t·m·y − s − t·y²·r
//! Im Z = λ · 2t·x·(m − r·y)
//! ```
//!
//! Along the path `λ² = 1 + 2(n−1)·b·λ₀` the scale `λ` is usually irrational,
//! so [`ChargeValue`] keeps `Im Z / λ` and every comparison is phrased in `λ²`.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::MukaiIsometry;
use crate::lattice::{MukaiVector, Surface};
use crate::pell::{criterion_parameter, PellPair, PellSign};

fn rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `ω = λ·xH`, `β = yH`, with `λ` determined by `lambda0` on a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityParams {
    #[serde(with = "crate::serde_big::rational")]
    pub x: BigRational,
    #[serde(with = "crate::serde_big::rational")]
    pub y: BigRational,
    #[serde(with = "crate::serde_big::rational")]
    pub lambda0: BigRational,
}

impl StabilityParams {
    pub fn new(x: BigRational, y: BigRational, lambda0: BigRational) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::NonPositiveScale(x.to_string()));
        }
        if lambda0.is_negative() {
            return Err(Error::NegativeLambda0(lambda0.to_string()));
        }
        Ok(Self { x, y, lambda0 })
    }

    pub fn with_lambda0(&self, lambda0: BigRational) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), lambda0)
    }
}

/// The path `λ ↦ σ_{λω₀,β₀}` parametrized by `λ² = 1 + 2(n−1)·b·λ₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathScale {
    n: u64,
    b: BigInt,
}

impl PathScale {
    pub fn new(n: u64, b: BigInt) -> Self {
        Self { n, b }
    }

    pub fn lambda_sq(&self, lambda0: &BigRational) -> BigRational {
        rat(1) + rat(2 * (self.n - 1)) * rat(self.b.clone()) * lambda0
    }
}

/// `Z = re + i·λ·im_coeff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "crate::serde_big::rational")]
    pub re: BigRational,
    #[serde(with = "crate::serde_big::rational")]
    pub im_coeff: BigRational,
}

impl ChargeValue {
    pub fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im_coeff: BigRational::zero(),
        }
    }

    /// `Re(Z · conj(Z'))`, which has the sign of `Re(Z / Z')` when `Z' ≠ 0`.
    pub fn real_inner(&self, other: &ChargeValue, lambda_sq: &BigRational) -> BigRational {
        &self.re * &other.re + lambda_sq * &self.im_coeff * &other.im_coeff
    }

    /// `(Re Z · Im Z' − Re Z' · Im Z) / λ`; zero iff `Z`, `Z'` are ℝ-proportional.
    pub fn cross(&self, other: &ChargeValue) -> BigRational {
        &self.re * &other.im_coeff - &other.re * &self.im_coeff
    }
}

impl std::ops::Add for &ChargeValue {
    type Output = ChargeValue;
    fn add(self, rhs: &ChargeValue) -> ChargeValue {
        ChargeValue {
            re: &self.re + &rhs.re,
            im_coeff: &self.im_coeff + &rhs.im_coeff,
        }
    }
}

/// Evaluates `Z_{λxH, yH}(v)`; without a path `λ = 1`.
pub fn central_charge(
    surf: &Surface,
    params: &StabilityParams,
    v: &MukaiVector,
    path: Option<&PathScale>,
) -> ChargeValue {
    let lambda_sq = match path {
        Some(p) => p.lambda_sq(&params.lambda0),
        None => rat(1),
    };
    charge_with_lambda_sq(surf, &params.x, &params.y, &lambda_sq, v)
}

pub(crate) fn charge_with_lambda_sq(
    surf: &Surface,
    x: &BigRational,
    y: &BigRational,
    lambda_sq: &BigRational,
    v: &MukaiVector,
) -> ChargeValue {
    let t = rat(surf.t());
    let (r, m, s) = (rat(v.r.clone()), rat(v.m.clone()), rat(v.s.clone()));
    let re = lambda_sq * &t * x * x * &r + rat(2) * &t * &m * y - &s - &t * y * y * &r;
    let im_coeff = rat(2) * &t * x * (&m - &r * y);
    ChargeValue { re, im_coeff }
}

fn check_negative_pair(t: u64, n: u64, p: &PellPair) -> Result<()> {
    let d = criterion_parameter(t, n)?;
    if p.sign != PellSign::Negative || !p.solves(d) {
        return Err(Error::NotNegativePellSolution {
            a: p.a.to_string(),
            b: p.b.to_string(),
            d,
        });
    }
    Ok(())
}

/// The `τ`-invariant parameters `ω₀ = H/(tb)`, `β₀ = −aH/(tb)`.
pub fn canonical_params(t: u64, n: u64, p: &PellPair) -> Result<StabilityParams> {
    check_negative_pair(t, n, p)?;
    let tb = BigInt::from(t) * &p.b;
    StabilityParams::new(
        BigRational::new(BigInt::one(), tb.clone()),
        BigRational::new(-p.a.clone(), tb),
        BigRational::zero(),
    )
}

/// Whether `Z ∘ τ = Z` on `Num(S)`, checked on the standard basis.
pub fn charge_invariance(
    tau: &MukaiIsometry,
    surf: &Surface,
    params: &StabilityParams,
) -> Result<bool> {
    if !params.lambda0.is_zero() {
        return Err(Error::NonzeroLambda0(params.lambda0.to_string()));
    }
    let basis = [
        MukaiVector::new(1, 0, 0),
        MukaiVector::new(0, 1, 0),
        MukaiVector::new(0, 0, 1),
    ];
    Ok(basis.iter().all(|e| {
        central_charge(surf, params, &tau.apply(e), None) == central_charge(surf, params, e, None)
    }))
}

/// Searches for a spherical class that would make `Z_{ω₀,β₀}` fail to be a
/// stability function: `1 ≤ r ≤ bound`, `|m| ≤ bound`,
/// `|s| ≤ (n−1)·bound + bound` with `a·r + t·m·b = 0`, `t·m² = r·s − 1`
/// and `(n−1)·r ≤ s`. Returns the lexicographically smallest witness.
pub fn spherical_positivity_scan(
    t: u64,
    n: u64,
    p: &PellPair,
    bound: u64,
) -> Result<Option<MukaiVector>> {
    check_negative_pair(t, n, p)?;
    let tb = BigInt::from(t);
    let n1 = BigInt::from(n - 1);
    let s_bound = BigInt::from(n) * BigInt::from(bound);
    let bound_i = bound as i128;

    let witness = (1..=bound).into_par_iter().find_map_first(|r| {
        let r = BigInt::from(r);
        for m in -bound_i..=bound_i {
            let m = BigInt::from(m);
            if !(&p.a * &r + &tb * &m * &p.b).is_zero() {
                continue;
            }
            // t·m² = r·s − 1 fixes s.
            let numer: BigInt = &tb * &m * &m + 1;
            if !numer.is_multiple_of(&r) {
                continue;
            }
            let s = numer / &r;
            if s.abs() <= s_bound && &n1 * &r <= s {
                return Some(MukaiVector::new(r, m, s));
            }
        }
        None
    });
    Ok(witness)
}
