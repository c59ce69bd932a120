use std::collections::BTreeSet;

use hfslice::lens::Q;
use hfslice::obstruction::*;
use hfslice::surgery::{calibrate_shifts, calibrated_vector, DEntry, DInvariantVector, ModelChoice};
use hfslice::ShiftTag;
use num_integer::Integer;

fn square_free(n: u64) -> bool {
    (2..=n).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

#[test]
fn classification_matches_enumeration() {
    for n in 2..=100u64 {
        if !square_free(n) {
            assert!(metabolizers(n).is_err());
            continue;
        }
        let classified: BTreeSet<Metabolizer> = metabolizers(n).unwrap().into_iter().collect();
        for alpha in (1..n).filter(|a| a.gcd(&n) == 1) {
            let brute: BTreeSet<Metabolizer> =
                brute_force_metabolizers(&LinkingForm::new(n, alpha).unwrap()).into_iter().collect();
            assert_eq!(brute, classified, "N = {n}, alpha = {alpha}");
        }
    }
}

#[test]
fn metabolizer_examples() {
    let gens = |n| metabolizers(n).unwrap().iter().map(|m| (m.a, m.b)).collect::<Vec<_>>();
    assert_eq!(gens(5), vec![(1, 2), (1, 3)]);
    assert_eq!(gens(17), vec![(1, 4), (1, 13)]);
    let m = metabolizers(13).unwrap()[0];
    let f = LinkingForm::new(13, 1).unwrap();
    let elems = m.elements();
    assert_eq!(elems.len(), 13);
    assert!(elems.iter().all(|&x| elems.iter().all(|&y| f.pair(x, y) == 0)));
    // not square-free: the classification refuses, enumeration still finds (3, 0) + (0, 3)
    assert!(metabolizers(9).is_err());
    let b = brute_force_metabolizers(&LinkingForm::new(9, 1).unwrap());
    assert!(b.contains(&Metabolizer { modulus: 9, a: 3, b: 0, d: 3 }));
    assert!(LinkingForm::new(10, 4).is_err());
}

#[test]
fn roots_of_minus_one() {
    assert_eq!(sqrt_minus_one(17), vec![4, 13]);
    assert_eq!(sqrt_minus_one(65), vec![8, 18, 47, 57]);
    assert!(sqrt_minus_one(7).is_empty());
    for n in 1..=60u64 {
        let r = admissible(n).unwrap();
        if r.admissible {
            let count = r.roots_b.len();
            assert!(count <= 4);
            if r.factors.len() == 1 {
                assert_eq!(count, 2);
            }
        }
    }
    // beyond the brute-force bound
    let big = 6189912977u64;
    let r = sqrt_minus_one(big);
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|&b| (b as u128 * b as u128 + 1) % big as u128 == 0));
}

#[test]
fn sieve() {
    let r = admissible(9).unwrap();
    assert_eq!((r.value, r.admissible), (325, false));
    assert_eq!(r.factors, vec![(5, 2), (13, 1)]);
    assert!(admissible(4).unwrap().admissible);
    assert_eq!(admissible(10).unwrap().value, 401);
    let fam = sieve_family(3).unwrap();
    let ns: Vec<u64> = fam.members.iter().map(|m| m.n).collect();
    assert_eq!(ns, vec![2, 17, 39338]);
    assert_eq!(fam.members[0].value, 17);
    assert!(fam.members.iter().all(|m| m.admissible));
    // no prime of 17 divides later values
    assert!(fam.members[1..].iter().all(|m| m.value % 17 != 0));
    assert!(fam.warning.is_none());
    let more = sieve_family(5).unwrap();
    assert_eq!(more.members.len(), 3);
    assert!(more.warning.is_some());
}

#[test]
fn choice_of_k() {
    for n in [3u64, 5, 10, 14] {
        let r = choose_kn(n).unwrap();
        assert!(r.s_b.len() <= 4);
        assert!(r.units.len() <= 4);
        let k = r.k_n.unwrap();
        assert!(2 * k < n);
        assert!(obstruct_slice(n, k).unwrap());
    }
    // k = 0 is never a witness: the identity unit always gives difference 0
    assert!(!obstruct_slice(10, 0).unwrap());
    let r = choose_kn(2).unwrap();
    assert_eq!(r.k_n, None);
    assert!(r.s_b.contains(&Q::from_integer(0)));
    assert!(choose_kn(9).is_err());
}

#[test]
fn roots_and_their_negatives_agree() {
    let cal = calibrate_shifts(5).unwrap();
    let d = cal.lens_by_z();
    let p = cal.modulus as u64;
    let z = cal.z_label(5) as u64;
    for b in sqrt_minus_one(p) {
        let x = (b * z % p) as usize;
        let y = ((p - b) * z % p) as usize;
        assert_eq!(d[x], d[y]);
    }
}

fn vector(p: i64, values: impl Fn(i64) -> Q) -> DInvariantVector {
    let entries = (0..p)
        .map(|z| DEntry { label: z, d_rel: 0, tag: ShiftTag::zero(), d_abs: Some(values(z)) })
        .collect();
    DInvariantVector { modulus: p, entries }
}

#[test]
fn sum_vanishing() {
    let zero = vector(5, |_| Q::from_integer(0));
    assert!(!metabolizer_obstruction(&zero, &zero).unwrap());
    // z^2 mod 5: d(z) + d(2z) = z^2 + 4z^2 = 5z^2 is never 0 at z = 1
    let sq = vector(5, |z| Q::from_integer((z * z % 5) as i128));
    assert!(metabolizer_obstruction(&sq, &sq).unwrap());
    let uncal = DInvariantVector { modulus: 5, entries: vec![] };
    assert!(metabolizer_obstruction(&uncal, &zero).is_err());
}

#[test]
fn doubled_knot_against_unknot() {
    let cal = calibrate_shifts(3).unwrap();
    let u = calibrated_vector(&cal, 0, ModelChoice::Essential).unwrap();
    let d = calibrated_vector(&cal, 1, ModelChoice::Essential).unwrap();
    // K_U # K_U is slice, K_D # K_U is obstructed
    assert!(!metabolizer_obstruction(&u, &u).unwrap());
    assert!(metabolizer_obstruction(&d, &u).unwrap());
}

#[test]
fn golden_table() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../tables/kn_table.json");
    let golden: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let rows = hfslice::cli::kn_table(30).unwrap();
    assert_eq!(serde_json::to_value(&rows).unwrap(), golden);
}
