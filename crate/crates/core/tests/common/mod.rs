//! Independent oracles shared by the integration and acceptance tests. None
//! of this goes through continued fractions.

#![allow(dead_code)]

use num::{BigInt, One, Signed, Zero};

/// `(t, n, a, b)` of the worked examples.
pub const GOLDEN: [(u64, u64, i64, i64); 6] = [
    (2, 2, 1, 1),
    (5, 2, 2, 1),
    (5, 3, 3, 1),
    (2, 6, 3, 1),
    (5, 11, 7, 1),
    (5, 14, 8, 1),
];

pub fn is_square(x: &BigInt) -> bool {
    !x.is_negative() && {
        let r = x.sqrt();
        &r * &r == *x
    }
}

pub fn isqrt_u64(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// The solution of `X² − D·Y² = sign` with smallest `1 ≤ Y ≤ limit`.
pub fn brute_pell(d: u64, sign: i64, limit: u64) -> Option<(BigInt, BigInt)> {
    let d = BigInt::from(d);
    (1..=limit).find_map(|y| {
        let y = BigInt::from(y);
        let x2 = &d * &y * &y + sign;
        is_square(&x2).then(|| (x2.sqrt(), y))
    })
}

/// `(u + v√D)^k` in `ℤ[√D]`.
pub fn unit_pow(u: &BigInt, v: &BigInt, d: u64, k: u32) -> (BigInt, BigInt) {
    let d = BigInt::from(d);
    let (mut x, mut y) = (BigInt::one(), BigInt::zero());
    let (mut bu, mut bv) = (u.clone(), v.clone());
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            let nx = &x * &bu + &d * &y * &bv;
            let ny = &x * &bv + &y * &bu;
            x = nx;
            y = ny;
        }
        let nu = &bu * &bu + &d * &bv * &bv;
        let nv = BigInt::from(2) * &bu * &bv;
        bu = nu;
        bv = nv;
        e >>= 1;
    }
    (x, y)
}

fn primes_up_to(n: u64) -> Vec<u32> {
    (2..=n as u32)
        .filter(|p| (2..*p).take_while(|q| q * q <= *p).all(|q| p % q != 0))
        .collect()
}

/// A unit `u + v√D` with `u, v > 0` and `(u + v√D)^k = x + y√D` for some
/// prime `k ≥ 2`, if one exists. `x + y√D` must be a unit.
pub fn unit_root(x: &BigInt, y: &BigInt, d: u64) -> Option<(BigInt, BigInt, u32)> {
    // u + v√D lies within 1 of 2u, and x + y√D within 1 of 2x.
    let twice = BigInt::from(2) * x;
    let max_k = twice.bits();
    for k in primes_up_to(max_k) {
        let r = twice.nth_root(k);
        let centre: BigInt = &r / 2;
        let lo = std::cmp::max(&centre - BigInt::from(2), BigInt::one());
        let mut u = lo;
        let hi = &centre + BigInt::from(2);
        while u <= hi {
            for sign in [1i64, -1] {
                let rhs: BigInt = &u * &u - sign;
                if rhs.is_positive() && (&rhs % d).is_zero() {
                    let v2 = &rhs / d;
                    if is_square(&v2) {
                        let v = v2.sqrt();
                        if unit_pow(&u, &v, d, k) == (x.clone(), y.clone()) {
                            return Some((u.clone(), v, k));
                        }
                    }
                }
            }
            u += 1;
        }
    }
    None
}

/// Checks claimed fundamental solutions of `X² − D·Y² = ∓1` for nonsquare
/// `D`. Returns a description of the first failure.
pub fn check_pell_claims(
    d: u64,
    negative: Option<(BigInt, BigInt)>,
    positive: (BigInt, BigInt),
    brute_limit: u64,
) -> Result<(), String> {
    let db = BigInt::from(d);
    let norm = |x: &BigInt, y: &BigInt| x * x - &db * y * y;
    let (x, y) = &positive;
    if norm(x, y) != BigInt::one() || !x.is_positive() || !y.is_positive() {
        return Err(format!("D={d}: ({x}, {y}) does not solve X²−DY²=1"));
    }
    match &negative {
        Some((a, b)) => {
            if norm(a, b) != BigInt::from(-1) || !a.is_positive() || !b.is_positive() {
                return Err(format!("D={d}: ({a}, {b}) does not solve X²−DY²=−1"));
            }
            if let Some((u, v, k)) = unit_root(a, b, d) {
                return Err(format!("D={d}: ({a}, {b}) = ({u} + {v}√D)^{k}"));
            }
            let sq = unit_pow(a, b, d, 2);
            if sq != positive {
                return Err(format!(
                    "D={d}: positive solution is not the square of the negative one"
                ));
            }
            let expected = (BigInt::from(2) * a * a + 1, BigInt::from(2) * a * b);
            if expected != positive {
                return Err(format!(
                    "D={d}: positive solution differs from (2a²+1, 2ab)"
                ));
            }
            if let Some((bx, by)) = brute_pell(d, -1, brute_limit) {
                if (&bx, &by) != (a, b) {
                    return Err(format!("D={d}: brute force finds smaller ({bx}, {by})"));
                }
            } else if *b <= BigInt::from(brute_limit) {
                return Err(format!("D={d}: brute force misses ({a}, {b})"));
            }
        }
        None => {
            // A norm −1 unit would make the positive fundamental solution its square.
            if let Some((u, v, k)) = unit_root(x, y, d) {
                return Err(format!("D={d}: ({x}, {y}) = ({u} + {v}√D)^{k}"));
            }
            if let Some((bx, by)) = brute_pell(d, -1, brute_limit) {
                return Err(format!("D={d}: claimed unsolvable but ({bx}, {by}) solves"));
            }
        }
    }
    match brute_pell(d, 1, brute_limit) {
        Some((bx, by)) if (&bx, &by) != (x, y) => Err(format!(
            "D={d}: brute force finds smaller positive ({bx}, {by})"
        )),
        None if *y <= BigInt::from(brute_limit) => {
            Err(format!("D={d}: brute force misses positive ({x}, {y})"))
        }
        _ => Ok(()),
    }
}
