//! Pell equations `X² − D·Y² = ±1` via the periodic continued fraction of `√D`.
//!
//! Write `√D = [a₀; a₁, …, a_L]` with period `L` (the last quotient is
//! `2a₀`), and let `p_k / q_k` be the convergents. Then `(p_{L−1}, q_{L−1})`
//! is the fundamental solution of `X² − D·Y² = (−1)^L`. Hence the negative
//! equation is solvable iff `L` is odd, and the positive fundamental solution
//! is `(p_{L−1}, q_{L−1})` for even `L` and `(p_{2L−1}, q_{2L−1})` for odd `L`.

use std::fmt;

use num::integer::Roots;
use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of `X² − D·Y² = ±1` a [`PellPair`] solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PellSign {
    #[serde(rename = "-1")]
    Negative,
    #[serde(rename = "+1")]
    Positive,
}

impl PellSign {
    pub fn value(self) -> i64 {
        match self {
            PellSign::Negative => -1,
            PellSign::Positive => 1,
        }
    }
}

/// The fundamental positive solution `(a, b)` of `X² − D·Y² = sign`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PellPair {
    #[serde(with = "crate::serde_big::int")]
    pub a: BigInt,
    #[serde(with = "crate::serde_big::int")]
    pub b: BigInt,
    pub sign: PellSign,
}

impl PellPair {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, sign: PellSign) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            sign,
        }
    }

    /// `a² − D·b²`.
    pub fn norm(&self, d: u64) -> BigInt {
        &self.a * &self.a - BigInt::from(d) * &self.b * &self.b
    }

    /// Checks `a, b > 0` and `a² − D·b² = sign`.
    pub fn solves(&self, d: u64) -> bool {
        self.a.is_positive()
            && self.b.is_positive()
            && self.norm(d) == BigInt::from(self.sign.value())
    }
}

impl fmt::Display for PellPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Result of solving `X² − D·Y² = −1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NegPellOutcome {
    Solved(PellPair),
    /// The period of `√D` is even.
    Unsolvable,
    /// `D` is a perfect square.
    Square,
}

/// `√D = [a₀; period…]` for nonsquare `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtContinuedFraction {
    pub a0: u64,
    pub period: Vec<u64>,
}

impl SqrtContinuedFraction {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient `a_k`.
    pub fn quotient(&self, k: usize) -> u64 {
        if k == 0 {
            self.a0
        } else {
            self.period[(k - 1) % self.period.len()]
        }
    }

    /// Convergent `(p_k, q_k)`.
    pub fn convergent(&self, k: usize) -> (BigInt, BigInt) {
        let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(self.a0));
        let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
        for i in 1..=k {
            let a = BigInt::from(self.quotient(i));
            let p_next = &a * &p + &p_prev;
            let q_next = &a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        (p, q)
    }
}

pub fn is_square_u64(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

/// Expands `√D` as a periodic continued fraction; `None` for square `D`.
pub fn sqrt_continued_fraction(d: u64) -> Option<SqrtContinuedFraction> {
    if is_square_u64(d) {
        return None;
    }
    let a0 = d.sqrt();
    // m, q stay below 2√D, so u128 intermediates never overflow.
    let (d, a0w) = (d as u128, a0 as u128);
    let (mut m, mut q, mut a) = (0u128, 1u128, a0w);
    let mut period = Vec::new();
    loop {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0w + m) / q;
        period.push(a as u64);
        if a == 2 * a0w {
            break;
        }
    }
    Some(SqrtContinuedFraction { a0, period })
}

/// Fundamental solution of `X² − D·Y² = −1`, or why there is none.
pub fn solve_neg_pell(d: u64) -> Result<NegPellOutcome> {
    if d == 0 {
        return Err(Error::ZeroPellParameter);
    }
    let Some(cf) = sqrt_continued_fraction(d) else {
        return Ok(NegPellOutcome::Square);
    };
    let len = cf.period_len();
    if len % 2 == 0 {
        return Ok(NegPellOutcome::Unsolvable);
    }
    let (a, b) = cf.convergent(len - 1);
    Ok(NegPellOutcome::Solved(PellPair::new(
        a,
        b,
        PellSign::Negative,
    )))
}

/// Fundamental solution of `X² − D·Y² = 1` for nonsquare `D`.
pub fn solve_pos_pell(d: u64) -> Result<PellPair> {
    if d == 0 {
        return Err(Error::ZeroPellParameter);
    }
    let cf = sqrt_continued_fraction(d).ok_or(Error::SquarePellParameter(d))?;
    let len = cf.period_len();
    let index = if len % 2 == 0 { len - 1 } else { 2 * len - 1 };
    let (a, b) = cf.convergent(index);
    Ok(PellPair::new(a, b, PellSign::Positive))
}

/// `t(n−1)`, the parameter of the existence criterion.
pub fn criterion_parameter(t: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidPoints { got: n, min: 2 });
    }
    t.checked_mul(n - 1).ok_or(Error::Overflow { t, n })
}

/// Searches `(n−1)X² − tY² = 1` over `1 ≤ X, Y ≤ bound`.
///
/// Only meaningful for `n ≥ 3` where the negative Pell equation for
/// `t(n−1)` is solvable; there no solution is expected. Returns the witness
/// with smallest `X`, if any.
pub fn aux_equation_scan(t: u64, n: u64, bound: u64) -> Result<Option<(BigInt, BigInt)>> {
    if n < 3 {
        return Err(Error::InvalidPoints { got: n, min: 3 });
    }
    if t < 2 {
        return Err(Error::CriterionFails {
            t,
            n,
            reason: "t must be at least 2".into(),
        });
    }
    let d = criterion_parameter(t, n)?;
    match solve_neg_pell(d)? {
        NegPellOutcome::Solved(_) => {}
        NegPellOutcome::Square => {
            return Err(Error::CriterionFails {
                t,
                n,
                reason: format!("t(n-1) = {d} is a square"),
            })
        }
        NegPellOutcome::Unsolvable => {
            return Err(Error::CriterionFails {
                t,
                n,
                reason: format!("X^2 - {d} Y^2 = -1 has no solution"),
            })
        }
    }

    let (coef, tb) = (BigInt::from(n - 1), BigInt::from(t));
    let y_max = BigInt::from(bound);
    for x in 1..=bound {
        let x = BigInt::from(x);
        let rhs: BigInt = &coef * &x * &x - 1;
        if !rhs.is_multiple_of(&tb) {
            continue;
        }
        let y2 = rhs / &tb;
        let y = y2.sqrt();
        if y.is_positive() && y <= y_max && &y * &y == y2 {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}
