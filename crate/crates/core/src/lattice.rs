//! The algebraic Mukai lattice of a generic polarized K3 surface and the
//! rank-two Néron–Severi lattice of its Hilbert scheme of points.
//!
//! A generic polarized K3 surface of degree `2t` has Picard group generated
//! by one ample class `H` with `H² = 2t`, so its numerical Grothendieck
//! lattice is `ℤ³` with classes written `(r, mH, s)` and the Mukai pairing
//!
//! ```text
//! ⟨(r, mH, s), (r', m'H, s')⟩ = 2t·m·m' − r·s' − r'·s
//! ```
//!
//! Inside `v_n^⊥` the classes `(0, −H, 0)` and `(1, 0, n−1)` span the
//! Néron–Severi lattice of `S^[n]`, with Gram matrix `diag(2t, −2(n−1))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{verify_isometry, NsIsometry};
use crate::matrix::SquareMatrix;

/// A generic polarized K3 surface, remembered only through `H² = 2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    #[serde(with = "crate::serde_big::u64str")]
    t: u64,
}

impl Surface {
    pub fn new(t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidDegree(t));
        }
        Ok(Self { t })
    }

    /// Builds the surface from its degree `2t`; odd degrees are rejected.
    pub fn from_degree(degree: u64) -> Result<Self> {
        if degree % 2 == 1 {
            return Err(Error::OddDegree(degree));
        }
        Self::new(degree / 2)
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn degree(&self) -> u64 {
        2 * self.t
    }

    /// `H · H = 2t`.
    pub fn h_square(&self) -> BigInt {
        BigInt::from(2 * self.t)
    }
}

/// An algebraic class `(r, mH, s)` on a generic polarized K3 surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MukaiVector {
    #[serde(with = "crate::serde_big::int")]
    pub r: BigInt,
    #[serde(with = "crate::serde_big::int")]
    pub m: BigInt,
    #[serde(with = "crate::serde_big::int")]
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, m: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        Self {
            r: r.into(),
            m: m.into(),
            s: s.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.m.is_zero() && self.s.is_zero()
    }

    pub fn coords(&self) -> [BigInt; 3] {
        [self.r.clone(), self.m.clone(), self.s.clone()]
    }

    pub fn from_coords(c: &[BigInt]) -> Self {
        assert_eq!(c.len(), 3, "Mukai vectors have three coordinates");
        Self::new(c[0].clone(), c[1].clone(), c[2].clone())
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}H, {})", self.r, self.m, self.s)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r + &rhs.r, &self.m + &rhs.m, &self.s + &rhs.s)
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r - &rhs.r, &self.m - &rhs.m, &self.s - &rhs.s)
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        MukaiVector::new(-&self.r, -&self.m, -&self.s)
    }
}

impl Mul<&MukaiVector> for &BigInt {
    type Output = MukaiVector;
    fn mul(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector::new(self * &rhs.r, self * &rhs.m, self * &rhs.s)
    }
}

/// The Mukai pairing `2t·m·m' − r·s' − r'·s`.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector, surf: &Surface) -> BigInt {
    surf.h_square() * &v.m * &w.m - &v.r * &w.s - &w.r * &v.s
}

/// Gram matrix of the Mukai pairing in the basis `(1,0,0), (0,H,0), (0,0,1)`.
pub fn mukai_gram(surf: &Surface) -> SquareMatrix {
    SquareMatrix::from_rows(vec![
        vec![BigInt::zero(), BigInt::zero(), -BigInt::one()],
        vec![BigInt::zero(), surf.h_square(), BigInt::zero()],
        vec![-BigInt::one(), BigInt::zero(), BigInt::zero()],
    ])
}

/// The Mukai vector `v_n = (1, 0, 1 − n)` of an ideal sheaf of `n` points.
pub fn ideal_sheaf_vector(n: u64) -> Result<MukaiVector> {
    if n < 2 {
        return Err(Error::InvalidPoints { got: n, min: 2 });
    }
    Ok(MukaiVector::new(1, 0, BigInt::one() - BigInt::from(n)))
}

/// The Néron–Severi lattice of `S^[n]` in the basis
/// `e₁ = θ_n(0, −H, 0)`, `e₂ = θ_n(1, 0, n−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsGram {
    surface: Surface,
    n: u64,
    gram: SquareMatrix,
}

impl NsGram {
    pub fn new(surface: Surface, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPoints { got: n, min: 2 });
        }
        let gram = SquareMatrix::diagonal(vec![
            surface.h_square(),
            -BigInt::from(2) * BigInt::from(n - 1),
        ]);
        Ok(Self { surface, n, gram })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn gram(&self) -> &SquareMatrix {
        &self.gram
    }

    /// Order `2(n−1)` of the discriminant group of `H²(S^[n], ℤ)`.
    pub fn discriminant_order(&self) -> BigInt {
        BigInt::from(2) * BigInt::from(self.n - 1)
    }

    /// Preimages of `e₁` and `e₂` in the Mukai lattice, as `(r, m, s)`.
    pub fn basis_in_mukai_lattice(&self) -> [MukaiVector; 2] {
        [
            MukaiVector::new(0, -1, 0),
            MukaiVector::new(1, 0, BigInt::from(self.n - 1)),
        ]
    }
}

/// Action of an isometry of `NS(S^[n])` on discriminant groups.
///
/// `H²(S^[n], ℤ) = H²(S, ℤ) ⊕ ⟨e₂⟩` with `H²(S, ℤ)` unimodular, so its
/// discriminant group is cyclic of order `2(n−1)`, generated by the class of
/// `e₂ / 2(n−1)`. Writing `M(e₂) = u·e₁ + c·e₂`, the generator goes to `c`
/// times itself exactly when `u·e₁ / 2(n−1)` is integral, i.e. when
/// `2(n−1) | u`. The analogous data for the `ℤ/2t` factor of the rank-two
/// lattice's own discriminant group is reported alongside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantAction {
    #[serde(with = "crate::serde_big::int")]
    pub modulus: BigInt,
    /// `c mod 2(n−1)`, reduced into `[0, modulus)`.
    #[serde(with = "crate::serde_big::int")]
    pub multiplier: BigInt,
    /// The `e₁`-coefficient `u` of `M(e₂)`.
    #[serde(with = "crate::serde_big::int")]
    pub cross_term: BigInt,
    /// Whether `2(n−1)` divides `u`.
    pub glue_integral: bool,
    #[serde(with = "crate::serde_big::int")]
    pub polarization_modulus: BigInt,
    /// Coefficient of `e₁` in `M(e₁)`, reduced modulo `2t`.
    #[serde(with = "crate::serde_big::int")]
    pub polarization_multiplier: BigInt,
    /// Whether `2t` divides the `e₂`-coefficient of `M(e₁)`.
    pub polarization_glue_integral: bool,
}

impl DiscriminantAction {
    /// The derived-natural test: the isometry is the identity on `ℤ/2(n−1)`.
    pub fn is_trivial(&self) -> bool {
        self.glue_integral && (self.multiplier.is_one() || self.modulus.is_one())
    }
}

/// Computes how `m` acts on the discriminant group of `H²(S^[n], ℤ)`.
pub fn discriminant_action(m: &NsIsometry, gram: &NsGram) -> Result<DiscriminantAction> {
    let entries = m.matrix();
    if !verify_isometry(entries, gram.gram())? {
        return Err(Error::NotAnIsometry);
    }
    let modulus = gram.discriminant_order();
    let cross_term = entries.get(0, 1).clone();
    let multiplier = entries.get(1, 1).mod_floor(&modulus);
    if !multiplier.gcd(&modulus).is_one() {
        return Err(Error::NonUnitMultiplier {
            multiplier: multiplier.to_string(),
            modulus: modulus.to_string(),
        });
    }
    let glue_integral = cross_term.is_multiple_of(&modulus);

    let polarization_modulus = gram.surface().h_square();
    let polarization_multiplier = entries.get(0, 0).mod_floor(&polarization_modulus);
    let polarization_glue_integral = entries.get(1, 0).is_multiple_of(&polarization_modulus);

    Ok(DiscriminantAction {
        modulus,
        multiplier,
        cross_term,
        glue_integral,
        polarization_modulus,
        polarization_multiplier,
        polarization_glue_integral,
    })
}

/// True when `x` is a perfect square (negative numbers never are).
pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let root = num::integer::Roots::sqrt(x);
    &root * &root == *x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surf(t: u64) -> Surface {
        Surface::new(t).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let v = MukaiVector::new(1, 0, -1);
        assert_eq!(mukai_pairing(&v, &v, &surf(2)), BigInt::from(2));
        let h = MukaiVector::new(0, 1, 0);
        assert_eq!(mukai_pairing(&h, &h, &surf(2)), BigInt::from(4));
        let rank = MukaiVector::new(1, 0, 0);
        let point = MukaiVector::new(0, 0, 1);
        assert_eq!(mukai_pairing(&rank, &point, &surf(5)), BigInt::from(-1));
    }

    #[test]
    fn ideal_sheaf_vectors() {
        assert_eq!(ideal_sheaf_vector(2).unwrap(), MukaiVector::new(1, 0, -1));
        assert_eq!(ideal_sheaf_vector(6).unwrap(), MukaiVector::new(1, 0, -5));
        let v3 = ideal_sheaf_vector(3).unwrap();
        assert_eq!(mukai_pairing(&v3, &v3, &surf(5)), BigInt::from(4));
        assert_eq!(
            ideal_sheaf_vector(1),
            Err(Error::InvalidPoints { got: 1, min: 2 })
        );
    }

    #[test]
    fn ideal_sheaf_self_pairing_is_2n_minus_2() {
        for n in 2..=200u64 {
            let v = ideal_sheaf_vector(n).unwrap();
            for t in [1, 2, 7] {
                assert_eq!(mukai_pairing(&v, &v, &surf(t)), BigInt::from(2 * (n - 1)));
            }
        }
    }

    #[test]
    fn surface_validation() {
        assert_eq!(Surface::new(0), Err(Error::InvalidDegree(0)));
        assert_eq!(Surface::from_degree(7), Err(Error::OddDegree(7)));
        assert_eq!(Surface::from_degree(10).unwrap().t(), 5);
    }

    #[test]
    fn ns_basis_is_orthogonal_with_expected_gram() {
        let s = surf(3);
        let ns = NsGram::new(s, 4).unwrap();
        let [e1, e2] = ns.basis_in_mukai_lattice();
        assert_eq!(mukai_pairing(&e1, &e1, &s), BigInt::from(6));
        assert_eq!(mukai_pairing(&e2, &e2, &s), BigInt::from(-6));
        assert_eq!(mukai_pairing(&e1, &e2, &s), BigInt::zero());
        let vn = ideal_sheaf_vector(4).unwrap();
        assert!(mukai_pairing(&e1, &vn, &s).is_zero());
        assert!(mukai_pairing(&e2, &vn, &s).is_zero());
    }

    #[test]
    fn discriminant_action_examples() {
        let m = NsIsometry::new(SquareMatrix::from_i64([[3, -2], [4, -3]]));
        let act = discriminant_action(&m, &NsGram::new(surf(2), 2).unwrap()).unwrap();
        assert_eq!(act.modulus, BigInt::from(2));
        assert_eq!(act.multiplier, BigInt::one());
        assert!(act.glue_integral);
        assert!(act.is_trivial());

        let m = NsIsometry::new(SquareMatrix::from_i64([[19, -12], [30, -19]]));
        let act = discriminant_action(&m, &NsGram::new(surf(5), 3).unwrap()).unwrap();
        assert_eq!(act.modulus, BigInt::from(4));
        assert_eq!(act.multiplier, BigInt::one());
        assert_eq!(act.cross_term, BigInt::from(-12));
        assert!(act.is_trivial());
        // 19 ≡ -1 mod 10: the polarization factor is negated.
        assert_eq!(act.polarization_multiplier, BigInt::from(9));
        assert!(act.polarization_glue_integral);

        for (t, n) in [(1, 2), (4, 9), (13, 5)] {
            let id = NsIsometry::new(SquareMatrix::identity(2));
            let act = discriminant_action(&id, &NsGram::new(surf(t), n).unwrap()).unwrap();
            assert!(act.is_trivial());
        }
    }

    #[test]
    fn discriminant_action_rejects_non_isometry() {
        let m = NsIsometry::new(SquareMatrix::from_i64([[1, 1], [0, 1]]));
        assert_eq!(
            discriminant_action(&m, &NsGram::new(surf(2), 2).unwrap()),
            Err(Error::NotAnIsometry)
        );
    }

    #[test]
    fn minus_identity_acts_by_minus_one() {
        let m = NsIsometry::new(SquareMatrix::from_i64([[-1, 0], [0, -1]]));
        let act = discriminant_action(&m, &NsGram::new(surf(2), 4).unwrap()).unwrap();
        assert_eq!(act.multiplier, BigInt::from(5));
        assert!(!act.is_trivial());
    }

    fn vector() -> impl Strategy<Value = MukaiVector> {
        (-10_000i64..10_000, -10_000i64..10_000, -10_000i64..10_000)
            .prop_map(|(r, m, s)| MukaiVector::new(r, m, s))
    }

    proptest! {
        #[test]
        fn pairing_symmetric_bilinear(
            u in vector(), v in vector(), w in vector(),
            c in -50i64..50, t in 1u64..100,
        ) {
            let s = surf(t);
            let c = BigInt::from(c);
            prop_assert_eq!(mukai_pairing(&u, &v, &s), mukai_pairing(&v, &u, &s));
            let lhs = mukai_pairing(&(&(&c * &u) + &v), &w, &s);
            let rhs = &c * mukai_pairing(&u, &w, &s) + mukai_pairing(&v, &w, &s);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pairing_matches_gram(u in vector(), v in vector(), t in 1u64..100) {
            let s = surf(t);
            let gv = mukai_gram(&s).apply(&v.coords()).unwrap();
            let via_gram: BigInt = u.coords().iter().zip(&gv).map(|(a, b)| a * b).sum();
            prop_assert_eq!(via_gram, mukai_pairing(&u, &v, &s));
        }
    }
}
