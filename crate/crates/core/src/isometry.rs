//! Lattice isometries attached to a derived-natural involution.
//!
//! Given the fundamental solution `(a, b)` of `X² − t(n−1)Y² = −1`, the
//! involution acts on `NS(S^[n])` (basis `θ_n(0,−H,0), θ_n(1,0,n−1)`) by
//!
//! ```text
//! ⎡ 2a²+1   −2(n−1)ab ⎤
//! ⎣ 2tab     −2a²−1   ⎦
//! ```
//!
//! and extends to the Mukai lattice `Num(S)` (basis `(1,0,0), (0,H,0), (0,0,1)`)
//! fixing `v_n`. All matrices act on column vectors.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ideal_sheaf_vector, mukai_gram, MukaiVector, NsGram, Surface};
use crate::matrix::SquareMatrix;
use crate::pell::{criterion_parameter, PellPair, PellSign};

/// A 2x2 isometry of `NS(S^[n])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NsIsometry(SquareMatrix);

impl NsIsometry {
    pub fn new(m: SquareMatrix) -> Self {
        assert_eq!(m.dim(), 2, "NS(S^[n]) has rank two");
        Self(m)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// A 3x3 isometry of the algebraic Mukai lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MukaiIsometry(SquareMatrix);

impl MukaiIsometry {
    pub fn new(m: SquareMatrix) -> Self {
        assert_eq!(m.dim(), 3, "Num(S) has rank three");
        Self(m)
    }

    pub fn identity() -> Self {
        Self(SquareMatrix::identity(3))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn apply(&self, v: &MukaiVector) -> MukaiVector {
        let image = self.0.apply(&v.coords()).expect("3x3 acting on rank three");
        MukaiVector::from_coords(&image)
    }
}

/// `Mᵀ·G·M == G`.
pub fn verify_isometry(m: &SquareMatrix, gram: &SquareMatrix) -> Result<bool> {
    let gm = gram.checked_mul(m)?;
    Ok(m.transpose().checked_mul(&gm)? == *gram)
}

/// `M² == I`.
pub fn verify_involution(m: &SquareMatrix) -> bool {
    (m * m).is_identity()
}

fn checked_pair(t: u64, n: u64, p: &PellPair) -> Result<u64> {
    let d = criterion_parameter(t, n)?;
    if p.sign != PellSign::Negative || !p.solves(d) {
        return Err(Error::NotNegativePellSolution {
            a: p.a.to_string(),
            b: p.b.to_string(),
            d,
        });
    }
    Ok(d)
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// The involution on `NS(S^[n])` determined by the negative Pell solution.
pub fn ns_involution(t: u64, n: u64, p: &PellPair) -> Result<NsIsometry> {
    checked_pair(t, n, p)?;
    let (a, b) = (&p.a, &p.b);
    let a2 = a * a;
    let ab = a * b;
    let rows = vec![
        vec![2 * &a2 + 1, -2 * big(n - 1) * &ab],
        vec![2 * big(t) * &ab, -2 * &a2 - 1],
    ];
    Ok(NsIsometry::new(SquareMatrix::from_rows(rows)))
}

/// The extension `τ` of [`ns_involution`] to `Num(S)` fixing `v_n`.
pub fn mukai_extension(t: u64, n: u64, p: &PellPair) -> Result<MukaiIsometry> {
    checked_pair(t, n, p)?;
    let (a, b) = (&p.a, &p.b);
    let (t, n1) = (big(t), big(n - 1));
    let a2 = a * a;
    let ab = a * b;
    let b2 = b * b;
    let rows = vec![
        vec![-a2.clone(), -2 * &t * &ab, -(&t * &b2)],
        vec![&n1 * &ab, 2 * &a2 + 1, ab.clone()],
        vec![-(&n1 * &n1 * &t * &b2), -2 * &t * &n1 * &ab, -a2],
    ];
    Ok(MukaiIsometry::new(SquareMatrix::from_rows(rows)))
}

/// Restricts `τ` to the span of `(0,−H,0)` and `(1,0,n−1)`, returning the
/// matrix in that basis. Fails if `τ` does not preserve the span.
pub fn restrict_to_ns(tau: &MukaiIsometry, ns: &NsGram) -> Result<NsIsometry> {
    let n1 = big(ns.n() - 1);
    let mut columns = Vec::with_capacity(2);
    for e in ns.basis_in_mukai_lattice() {
        let img = tau.apply(&e);
        // α(0,−1,0) + β(1,0,n−1) = (β, −α, (n−1)β)
        if img.s != &n1 * &img.r {
            return Err(Error::OutsideNsSpan {
                r: img.r.to_string(),
                m: img.m.to_string(),
                s: img.s.to_string(),
            });
        }
        columns.push([-img.m.clone(), img.r.clone()]);
    }
    let rows = (0..2)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(NsIsometry::new(SquareMatrix::from_rows(rows)))
}

/// Every lattice-level property of the pair `(M, τ)`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryChecks {
    pub ns_involution: bool,
    pub ns_isometry: bool,
    pub ns_det_minus_one: bool,
    pub mukai_involution: bool,
    pub mukai_isometry: bool,
    pub mukai_det_minus_one: bool,
    pub fixes_vn: bool,
    pub restriction_consistent: bool,
}

impl IsometryChecks {
    pub fn all_pass(&self) -> bool {
        self.ns_involution
            && self.ns_isometry
            && self.ns_det_minus_one
            && self.mukai_involution
            && self.mukai_isometry
            && self.mukai_det_minus_one
            && self.fixes_vn
            && self.restriction_consistent
    }
}

pub fn check_isometries(
    surface: &Surface,
    n: u64,
    m: &NsIsometry,
    tau: &MukaiIsometry,
) -> Result<IsometryChecks> {
    let ns = NsGram::new(*surface, n)?;
    let vn = ideal_sheaf_vector(n)?;
    let minus_one = BigInt::from(-1);
    let restriction_consistent = match restrict_to_ns(tau, &ns) {
        Ok(r) => r == *m,
        Err(Error::OutsideNsSpan { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(IsometryChecks {
        ns_involution: verify_involution(m.matrix()),
        ns_isometry: verify_isometry(m.matrix(), ns.gram())?,
        ns_det_minus_one: m.matrix().determinant() == minus_one,
        mukai_involution: verify_involution(tau.matrix()),
        mukai_isometry: verify_isometry(tau.matrix(), &mukai_gram(surface))?,
        mukai_det_minus_one: tau.matrix().determinant() == minus_one,
        fixes_vn: tau.apply(&vn) == vn,
        restriction_consistent,
    })
}
