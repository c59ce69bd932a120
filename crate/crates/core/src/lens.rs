//! Correction terms of lens spaces by the standard recursion
//!   d(L(p,q), i) = -1/4 + (p+q-1-2i)^2 / (4pq) - d(L(q, p mod q), i mod q),
//! with d(S^3) = 0. Used only as an independent oracle.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{input, Result};

pub type Q = Ratio<i128>;

pub fn lens_d(p: i64, q: i64, i: i64) -> Q {
    if p == 1 {
        return Q::from_integer(0);
    }
    let (p128, q128, i128_) = (p as i128, q as i128, i as i128);
    let s = p128 + q128 - 1 - 2 * i128_;
    Q::new(-1, 4) + Q::new(s * s, 4 * p128 * q128) - lens_d(q, p.rem_euclid(q), i.rem_euclid(q))
}

/// All p values, indexed by the recursion's own label i in [0, p).
pub fn lens_d_recursive(p: i64, q: i64) -> Result<Vec<Q>> {
    if p < 2 || q <= 0 || q >= p {
        return input(format!("lens space L({p},{q}) needs p > q > 0"));
    }
    if p.gcd(&q) != 1 {
        return input(format!("L({p},{q}) needs p and q coprime"));
    }
    Ok((0..p).map(|i| lens_d(p, q, i)).collect())
}

/// Conjugation in the recursion's labels: i -> q - 1 - i (mod p).
pub fn lens_conjugate(p: i64, q: i64, i: i64) -> i64 {
    (q - 1 - i).rem_euclid(p)
}

/// Centered, doubled cohomology label of recursion index i; conjugation is z -> -z.
pub fn cohomology_label(p: i64, q: i64, i: i64) -> i64 {
    (2 * i - (q - 1)).rem_euclid(p)
}

/// Inverse of `cohomology_label` for odd p.
pub fn recursion_index(p: i64, q: i64, z: i64) -> i64 {
    let half = (p + 1) / 2;
    ((z + q - 1).rem_euclid(p) as i128 * half as i128 % p as i128) as i64
}
