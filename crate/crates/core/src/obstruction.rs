//! Arithmetic of the obstruction: orders of H_1, the admissible family,
//! square roots of -1, metabolizers of doubled linking forms, and the choice
//! of k_n.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{consistency, input, Error, Result};
use crate::lens::Q;
use crate::surgery::{branched_cover_d_diff, calibrate_shifts, DInvariantVector};

/// |det| of the linking matrix [[-2n, 1], [1, 2n]], checked against 4n^2 + 1.
pub fn h1_order(n: u64) -> Result<u64> {
    if n == 0 {
        return input("n must be positive");
    }
    let n = n as i128;
    let det = (-2 * n) * (2 * n) - 1;
    let v = det.unsigned_abs();
    if v != (4 * n * n + 1) as u128 {
        return consistency(format!("determinant {v} disagrees with 4n^2+1"));
    }
    u64::try_from(v).map_err(|_| Error::Input(format!("4n^2+1 overflows 64 bits for n = {n}")))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// Brent's variant; n odd composite.
fn rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m, mut g, mut r, mut q) = (2u64, 128u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0, 0);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Prime factorization with multiplicities, ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveResult {
    pub n: u64,
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
    pub admissible: bool,
    pub roots_b: Vec<u64>,
}

fn admissible_factors(value: u64, f: &[(u64, u32)]) -> bool {
    value >= 9 && f.iter().all(|&(_, e)| e == 1) && f.len() <= 2
}

pub fn admissible(n: u64) -> Result<SieveResult> {
    let value = h1_order(n)?;
    Ok(sieve_value(n, value))
}

fn sieve_value(n: u64, value: u64) -> SieveResult {
    let factors = factorize(value);
    let ok = admissible_factors(value, &factors);
    let roots_b = if ok { sqrt_minus_one(value) } else { Vec::new() };
    SieveResult { n, value, factors, admissible: ok, roots_b }
}

#[derive(Clone, Debug, Serialize)]
pub struct Family {
    pub members: Vec<SieveResult>,
    pub warning: Option<String>,
}

/// n_1 = 2, then n_k = A N with A the product of the earlier values and N the
/// least positive integer making 4 n_k^2 + 1 admissible.
pub fn sieve_family(count: usize) -> Result<Family> {
    if count == 0 {
        return input("count must be at least 1");
    }
    const SEARCH: u64 = 1 << 20;
    let mut members = vec![admissible(2)?];
    let mut a: u128 = 17;
    let mut warning = None;
    'grow: while members.len() < count {
        for big_n in 1..=SEARCH {
            let n = a * big_n as u128;
            let value = 4 * n * n + 1;
            let Ok(value) = u64::try_from(value) else {
                warning = Some(format!(
                    "stopped after {} members: the next candidate 4n^2+1 exceeds 64 bits",
                    members.len()
                ));
                break 'grow;
            };
            let r = sieve_value(n as u64, value);
            if r.admissible {
                a *= value as u128;
                members.push(r);
                continue 'grow;
            }
        }
        warning = Some(format!("no admissible multiple found within {SEARCH} steps"));
        break;
    }
    for (x, y) in members.iter().enumerate().flat_map(|(i, x)| members[i + 1..].iter().map(move |y| (x, y))) {
        if x.value.gcd(&y.value) != 1 {
            return consistency(format!("family values {} and {} share a factor", x.value, y.value));
        }
    }
    Ok(Family { members, warning })
}

fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    // m, n coprime; x = a mod m, x = b mod n
    let mn = m as u128 * n as u128;
    let inv = mod_inverse(m % n, n).expect("moduli are coprime") as u128;
    let t = ((b as u128 + n as u128 - a as u128 % n as u128) % n as u128) * inv % n as u128;
    ((a as u128 + m as u128 * t) % mn) as u64
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Roots of x^2 = -1 modulo q^e, q prime.
fn sqrt_minus_one_prime_power(q: u64, e: u32) -> Vec<u64> {
    let qe = q.pow(e);
    if q == 2 {
        return if e == 1 { vec![1] } else { vec![] };
    }
    if q % 4 == 3 {
        return vec![];
    }
    // c^((q-1)/4) for a non-residue c squares to -1
    let mut r = (2..q).map(|c| pow_mod(c, (q - 1) / 4, q)).find(|&r| mul_mod(r, r, q) == q - 1).unwrap();
    let mut m = q;
    for _ in 1..e {
        // Hensel: r <- r - (r^2 + 1) / (2r)
        m *= q;
        let f = (mul_mod(r, r, m) + 1) % m;
        let inv = mod_inverse(2 * r % m, m).unwrap();
        r = (r + m - mul_mod(f, inv, m)) % m;
    }
    let mut v = vec![r, qe - r];
    v.sort_unstable();
    v
}

fn roots_of_one_prime_power(q: u64, e: u32) -> Vec<u64> {
    let qe = q.pow(e);
    let mut v = match (q, e) {
        (2, 1) => vec![1],
        (2, 2) => vec![1, 3],
        (2, _) => vec![1, qe / 2 - 1, qe / 2 + 1, qe - 1],
        _ => vec![1, qe - 1],
    };
    v.sort_unstable();
    v.dedup();
    v
}

fn combine(n: u64, per: impl Fn(u64, u32) -> Vec<u64>) -> Vec<u64> {
    let mut acc: Vec<(u64, u64)> = vec![(0, 1)];
    for (q, e) in factorize(n) {
        let qe = q.pow(e);
        let roots = per(q, e);
        acc = acc.iter().flat_map(|&(a, m)| roots.iter().map(move |&r| (crt(a, m, r, qe), m * qe))).collect();
    }
    let mut out: Vec<u64> = acc.into_iter().map(|(a, _)| a % n).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All b with b^2 = -1 (mod n), ascending.
pub fn sqrt_minus_one(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    if n < 1_000_000 {
        return (0..n).filter(|&b| mul_mod(b, b, n) == n - 1).collect();
    }
    combine(n, sqrt_minus_one_prime_power)
}

/// All u with u^2 = 1 (mod n), ascending.
pub fn sqrt_one(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![0];
    }
    if n < 1_000_000 {
        return (0..n).filter(|&b| mul_mod(b, b, n) == 1 % n).collect();
    }
    combine(n, roots_of_one_prime_power)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinkingForm {
    pub modulus: u64,
    pub alpha: u64,
}

impl LinkingForm {
    pub fn new(modulus: u64, alpha: u64) -> Result<LinkingForm> {
        if modulus < 2 {
            return input(format!("modulus {modulus} must be at least 2"));
        }
        if alpha.gcd(&modulus) != 1 {
            return input(format!("alpha = {alpha} is not a unit mod {modulus}"));
        }
        Ok(LinkingForm { modulus, alpha: alpha % modulus })
    }

    /// Numerator of lk(x, y) on the doubled group, mod N.
    pub fn pair(&self, x: (u64, u64), y: (u64, u64)) -> u64 {
        let n = self.modulus;
        let s = (mul_mod(x.0, y.0, n) + mul_mod(x.1, y.1, n)) % n;
        mul_mod(self.alpha, s, n)
    }
}

/// Subgroup of (Z_N)^2 of order N in Hermite form: generated by (a, b) and
/// (0, d) with a d = N and 0 <= b < d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Metabolizer {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl Metabolizer {
    pub fn generators(&self) -> Vec<(u64, u64)> {
        let n = self.modulus;
        vec![(self.a % n, self.b % n), (0, self.d % n)]
    }

    /// Every element, each once.
    pub fn elements(&self) -> Vec<(u64, u64)> {
        let n = self.modulus;
        let mut out = Vec::with_capacity(n as usize);
        for s in 0..self.d {
            for t in 0..self.a {
                out.push(((self.a * s) % n, (self.b * s + self.d * t) % n));
            }
        }
        out
    }
}

/// Classification path, valid for square-free N: generated by (1, b) with b^2 = -1.
pub fn metabolizers(n: u64) -> Result<Vec<Metabolizer>> {
    if n < 2 {
        return input(format!("modulus {n} must be at least 2"));
    }
    if factorize(n).iter().any(|&(_, e)| e > 1) {
        return Err(Error::Hypothesis(format!("{n} is not square-free")));
    }
    Ok(sqrt_minus_one(n).into_iter().map(|b| Metabolizer { modulus: n, a: 1, b, d: n }).collect())
}

/// Every self-annihilating subgroup of order N, by enumeration of Hermite forms.
pub fn brute_force_metabolizers(form: &LinkingForm) -> Vec<Metabolizer> {
    let n = form.modulus;
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n % a == 0) {
        let d = n / a;
        for b in 0..d {
            let m = Metabolizer { modulus: n, a, b, d };
            let g = m.generators();
            let iso = g.iter().all(|&x| g.iter().all(|&y| form.pair(x, y) == 0));
            if iso {
                out.push(m);
            }
        }
    }
    out
}

/// Roots b with d(z) + d(bz) = 0 for every z.
pub fn antisymmetry_roots(d: &[Q]) -> Vec<u64> {
    let p = d.len() as u64;
    (1..p).filter(|&b| (0..p).all(|z| d[z as usize] + d[mul_mod(b, z, p) as usize] == Q::from_integer(0))).collect()
}

/// True when no metabolizer of the doubled form on (Z_N)^2 has
/// dA(z1) + dB(z2) = 0 at every element.
pub fn metabolizer_obstruction(da: &DInvariantVector, db: &DInvariantVector) -> Result<bool> {
    if da.modulus != db.modulus {
        return input(format!("moduli differ: {} vs {}", da.modulus, db.modulus));
    }
    if !da.is_calibrated() || !db.is_calibrated() {
        return input("both vectors must carry absolute values");
    }
    let (a, b) = (da.absolute()?, db.absolute()?);
    let n = da.modulus as u64;
    let candidates = match metabolizers(n) {
        Ok(m) => m,
        Err(Error::Hypothesis(_)) => brute_force_metabolizers(&LinkingForm::new(n, 1)?),
        Err(e) => return Err(e),
    };
    let vanishes = |m: &Metabolizer| {
        m.elements().iter().all(|&(x, y)| a[x as usize] + b[y as usize] == Q::from_integer(0))
    };
    Ok(!candidates.iter().any(vanishes))
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub n: u64,
    pub modulus: u64,
    pub roots_b: Vec<u64>,
    /// u with u^2 = 1, the products of pairs of roots
    pub units: Vec<u64>,
    /// cohomology label of s_n under each consistent label map
    pub alpha: Vec<u64>,
    #[serde(serialize_with = "ser_set")]
    pub s_b: BTreeSet<Q>,
    pub k_n: Option<u64>,
    pub note: String,
}

fn ser_set<S: serde::Serializer>(s: &BTreeSet<Q>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(s.len()))?;
    for q in s {
        seq.serialize_element(&format!("{}/{}", q.numer(), q.denom()))?;
    }
    seq.end()
}

/// The achievable values of d(L, u alpha) - d(L, alpha) and the least k in
/// [0, n/2) whose -2k avoids them.
pub fn choose_kn(n: u64) -> Result<ObstructionReport> {
    let sieve = admissible(n)?;
    if !sieve.admissible {
        return Err(Error::Hypothesis(format!("n = {n} is not admissible: 4n^2+1 = {}", sieve.value)));
    }
    let p = sieve.value;
    let units = sqrt_one(p);
    let roots = sieve.roots_b.clone();
    // every unit is a product of two roots of -1
    let products: BTreeSet<u64> = roots.iter().flat_map(|&x| roots.iter().map(move |&y| mul_mod(x, y, p))).collect();
    if products != units.iter().copied().collect() {
        return consistency(format!("products of roots of -1 mod {p} are not the roots of 1"));
    }
    let cal = calibrate_shifts(n as i64)?;
    let d = cal.lens_by_z();
    let mut s_b = BTreeSet::new();
    let mut alpha = Vec::new();
    for &map in &cal.maps {
        let z = cal.z_label_with(map, n as i64) as u64;
        alpha.push(z);
        for &u in &units {
            s_b.insert(d[mul_mod(u, z, p) as usize] - d[z as usize]);
        }
    }
    let per_map: Vec<BTreeSet<Q>> = alpha
        .iter()
        .map(|&z| units.iter().map(|&u| d[mul_mod(u, z, p) as usize] - d[z as usize]).collect())
        .collect();
    let note = if per_map.windows(2).all(|w| w[0] == w[1]) {
        format!("{} label maps, all giving the same differences", cal.maps.len())
    } else {
        format!("{} label maps disagree; S_b is their union", cal.maps.len())
    };
    let k_n = (0..).take_while(|k| 2 * k < n).find(|&k| !s_b.contains(&Q::from_integer(-2 * k as i128)));
    Ok(ObstructionReport { n, modulus: p, roots_b: roots, units, alpha, s_b, k_n, note })
}

/// Whether the witness inequality holds for K_{D_k,n}: -2k is not an achievable difference.
pub fn obstruct_slice(n: u64, k: u64) -> Result<bool> {
    if 2 * k >= n {
        return input(format!("k = {k} outside 0 <= k < n/2 for n = {n}"));
    }
    let report = choose_kn(n)?;
    let diff = branched_cover_d_diff(n as i64, k as i64)?;
    if diff != -2 * k as i64 {
        return consistency(format!("d-difference {diff} for (n, k) = ({n}, {k}) is not -2k"));
    }
    Ok(!report.s_b.contains(&Q::from_integer(diff as i128)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(h1_order(1).unwrap(), 5);
        assert_eq!(h1_order(2).unwrap(), 17);
        assert_eq!(h1_order(10).unwrap(), 401);
    }

    #[test]
    fn factoring() {
        assert_eq!(factorize(325), vec![(5, 2), (13, 1)]);
        assert_eq!(factorize(6189912977), vec![(11821, 1), (523637, 1)]);
        assert_eq!(factorize(1), vec![]);
        let big = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize(big), vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
        assert!(is_prime(18446744073709551557));
    }

    #[test]
    fn sieve_examples() {
        assert!(admissible(2).unwrap().admissible);
        assert!(admissible(4).unwrap().admissible);
        assert!(!admissible(9).unwrap().admissible);
        assert!(!admissible(1).unwrap().admissible);
    }

    #[test]
    fn roots() {
        assert_eq!(sqrt_minus_one(17), vec![4, 13]);
        assert_eq!(sqrt_minus_one(65), vec![8, 18, 47, 57]);
        assert!(sqrt_minus_one(7).is_empty());
        assert_eq!(sqrt_one(65), vec![1, 14, 51, 64]);
    }

    #[test]
    fn fast_roots_agree_with_search() {
        for n in [1157u64, 4901, 6189912977] {
            for b in combine(n, sqrt_minus_one_prime_power) {
                assert_eq!(mul_mod(b, b, n), n - 1);
            }
        }
        for n in 2..3000u64 {
            assert_eq!(combine(n, sqrt_minus_one_prime_power), sqrt_minus_one(n), "n = {n}");
            assert_eq!(combine(n, roots_of_one_prime_power), sqrt_one(n), "n = {n}");
        }
    }

    #[test]
    fn small_metabolizers() {
        let f = LinkingForm::new(5, 1).unwrap();
        let m: Vec<(u64, u64)> = brute_force_metabolizers(&f).iter().map(|m| (m.a, m.b)).collect();
        assert_eq!(m, vec![(1, 2), (1, 3)]);
        assert!(metabolizers(9).is_err());
        assert!(!brute_force_metabolizers(&LinkingForm::new(9, 1).unwrap()).is_empty());
    }
}
