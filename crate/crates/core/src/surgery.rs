//! d-invariants of large-surgery quotients, the Spin^c schedule of the
//! two-step surgery, collapse analysis, and the branched-cover pipeline.
//!
//! The manifold is -N surgery on K_1 = -2k D followed by surgery on a
//! meridian-like K_2 = 2k D. For a Spin^c label in [0, N^2] the complex
//! collapses to one term C_l (x) CFK(K_2), quotiented at a j-shift c.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{consistency, input, Error, Result};
use crate::lens::{cohomology_label, lens_d, Q};
use crate::models::{build_model_str, split_staircase, unknot_model};
use crate::refilter::{extend_spinc, genus_bound, refilter_unchecked};
use crate::tag::{Atom, ShiftTag};
use crate::tower::tower_bottom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// kill {i < 0} and {j < m}
    Union,
    /// kill {i < 0 and j < m}
    Intersection,
}

#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub base: Complex,
    pub m: i64,
    pub mode: Mode,
    pub tag: ShiftTag,
}

pub fn quotient_complex(c: &Complex, m: i64, mode: Mode) -> QuotientComplex {
    QuotientComplex { base: c.clone(), m, mode, tag: c.tag.clone() }
}

impl QuotientComplex {
    /// Largest p with U^p g outside the killed region.
    pub fn p_survive(&self, k: usize) -> i64 {
        let g = &self.base.gens()[k];
        match self.mode {
            Mode::Intersection => g.i.max(g.j - self.m),
            Mode::Union => g.i.min(g.j - self.m),
        }
    }

    pub fn survives(&self, k: usize, p: i64) -> bool {
        p <= self.p_survive(k)
    }
}

/// Bottom grading of the U-tower in the quotient, with the quotient's tag.
pub fn d_relative(q: &QuotientComplex) -> Result<(i64, ShiftTag)> {
    let h = q.base.homology_rank();
    if h != 1 {
        return Err(Error::Hypothesis(format!("base {} has homology rank {h}, not 1", q.base.label)));
    }
    let d = tower_bottom(&q.base, &|k| q.p_survive(k))?;
    Ok((d, q.tag.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    /// index in S(s), congruent to the label mod N^2 + 1
    pub t: i64,
    /// t mod N
    pub l: i64,
    /// j-shift (t - l) / N
    pub c: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpincSchedule {
    #[serde(rename = "N")]
    pub n: i64,
    pub k: i64,
    pub terms: Vec<Term>,
}

/// Terms t = k + (N^2+1)j for |j| <= N + 2, ordered by j-shift.
pub fn spinc_schedule(n: i64, k: i64) -> Result<SpincSchedule> {
    if n < 1 {
        return input(format!("N = {n} must be positive"));
    }
    if k < 0 || k > n * n {
        return input(format!("label {k} outside [0, {}]", n * n));
    }
    let p = n * n + 1;
    let mut terms: Vec<Term> = (-n - 2..=n + 2)
        .map(|j| {
            let t = k + p * j;
            let l = t.rem_euclid(n);
            Term { t, l, c: (t - l) / n }
        })
        .collect();
    terms.sort_by_key(|t| t.c);
    let s = SpincSchedule { n, k, terms };
    check_schedule(&s)?;
    Ok(s)
}

fn check_schedule(s: &SpincSchedule) -> Result<()> {
    let p = s.n * s.n + 1;
    for w in s.terms.windows(2) {
        let want = if w[0].l == s.n - 1 { s.n + 1 } else { s.n };
        if w[1].c - w[0].c != want || w[1].l != (w[0].l + 1) % s.n {
            return consistency(format!("schedule step {:?} -> {:?} breaks the shift pattern", w[0], w[1]));
        }
    }
    for t in &s.terms {
        if (t.t - s.k).rem_euclid(p) != 0 || t.t.rem_euclid(s.n) != t.l {
            return consistency(format!("term {t:?} breaks the defining congruences"));
        }
    }
    Ok(())
}

/// Outcome of the collapse: which term carries the homology, and the run of
/// terms whose quotient computes the same d.
#[derive(Clone, Debug, Serialize)]
pub struct Collapse {
    pub survivor: usize,
    /// indices into the schedule, inclusive; ends at the survivor
    pub valid_from: usize,
    pub bands: Vec<(i64, i64)>,
}

impl Collapse {
    pub fn valid(&self) -> std::ops::RangeInclusive<usize> {
        self.valid_from..=self.survivor
    }
}

/// `bands[l]` is the i - j band of C_l; term bands are shifted by c. The
/// survivor is the first term reaching diagonal 1; terms after it must lie
/// entirely on diagonals >= 0.
pub fn collapse_analysis(bands: &BTreeMap<i64, (i64, i64)>, schedule: &SpincSchedule) -> Result<Collapse> {
    let n = schedule.n;
    for (l, (lo, hi)) in bands {
        if hi - lo + 1 > n {
            return Err(Error::Hypothesis(format!("width {} of C_{l} exceeds N = {n}", hi - lo + 1)));
        }
    }
    let shifted: Vec<(i64, i64)> = schedule
        .terms
        .iter()
        .map(|t| {
            bands
                .get(&t.l)
                .map(|(lo, hi)| (lo + t.c, hi + t.c))
                .ok_or_else(|| Error::Input(format!("no band for l = {}", t.l)))
        })
        .collect::<Result<_>>()?;
    let Some(survivor) = shifted.iter().position(|&(_, hi)| hi >= 1) else {
        return consistency("no term reaches the origin diagonal");
    };
    if survivor == 0 {
        return consistency("schedule window too short below the survivor");
    }
    if let Some(bad) = shifted[survivor + 1..].iter().position(|&(lo, _)| lo < 0) {
        return consistency(format!("terms {survivor} and {} both meet the origin diagonal", survivor + 1 + bad));
    }
    let valid_from = (0..=survivor).rev().find(|&i| shifted[i].0 < 0).unwrap_or(survivor);
    Ok(Collapse { survivor, valid_from, bands: shifted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    /// 2k D replaced by its staircase summand T(2,4k+1)
    Essential,
    /// the full tensor power of the 15-generator model
    Full,
}

/// The two-step surgery for twist parameter k and coefficient N.
#[derive(Clone, Debug)]
pub struct Chain {
    pub n: i64,
    pub twist: i64,
    pub choice: ModelChoice,
    /// CFK of K_2 = 2k D
    pub second: Complex,
    /// reduced refiltered complexes of m(K_2), indexed by l in [0, N)
    pub refiltered: Vec<Complex>,
}

/// Base index used for residue l: l itself up to N/2, else l - N and one extension.
pub fn base_index(n: i64, l: i64) -> (i64, i64) {
    if l <= n / 2 {
        (l, 0)
    } else {
        (l - n, 1)
    }
}

impl Chain {
    pub fn new(n: i64, twist: i64, choice: ModelChoice) -> Result<Chain> {
        if n < 2 {
            return input(format!("N = {n} must be at least 2"));
        }
        if twist < 0 {
            return input(format!("k = {twist} must be non-negative"));
        }
        let second = match (twist, choice) {
            (0, _) => unknot_model(),
            (_, ModelChoice::Essential) => {
                split_staircase(2 * twist as usize)?.staircase.with_label(format!("{}*D", 2 * twist))
            }
            (_, ModelChoice::Full) => build_model_str(&format!("{}*D", 2 * twist))?,
        };
        let mirror = second.dualize();
        let g = genus_bound(&mirror)?;
        if n < 2 * g {
            return Err(Error::Hypothesis(format!("N >= 2g violated: N = {n}, g = {g}")));
        }
        let refiltered = (0..n)
            .into_par_iter()
            .map(|l| {
                let (m, ext) = base_index(n, l);
                extend_spinc(&refilter_unchecked(&mirror, n, m).reduce(), ext)
            })
            .collect();
        Ok(Chain { n, twist, choice, second, refiltered })
    }

    pub fn bands(&self) -> BTreeMap<i64, (i64, i64)> {
        let (slo, shi) = self.second.band().expect("knot complexes are non-empty");
        self.refiltered
            .iter()
            .enumerate()
            .map(|(l, r)| {
                let (lo, hi) = r.band().expect("refiltered complex is non-empty");
                (l as i64, (lo + slo, hi + shi))
            })
            .collect()
    }

    pub fn schedule(&self, label: i64) -> Result<SpincSchedule> {
        spinc_schedule(self.n, label)
    }

    pub fn collapse(&self, schedule: &SpincSchedule) -> Result<Collapse> {
        collapse_analysis(&self.bands(), schedule)
    }

    pub fn term_complex(&self, l: i64) -> Complex {
        self.refiltered[l as usize].tensor(&self.second)
    }

    pub fn quotient(&self, term: &Term) -> QuotientComplex {
        let base = self.term_complex(term.l).reduce();
        let mut q = quotient_complex(&base, term.c, Mode::Intersection);
        q.tag.add_atom(Atom::Eps2 { n: self.n, m: term.t }, 1);
        q
    }

    pub fn d_at(&self, term: &Term) -> Result<(i64, ShiftTag)> {
        d_relative(&self.quotient(term))
    }
}

/// Last term valid for both collapses.
pub fn common_term(schedule: &SpincSchedule, a: &Collapse, b: &Collapse) -> Result<Term> {
    let lo = a.valid_from.max(b.valid_from);
    let hi = a.survivor.min(b.survivor);
    if lo > hi {
        return consistency(format!("label {}: the two chains share no valid term", schedule.k));
    }
    Ok(schedule.terms[hi])
}

/// d of the doubled chain minus d of the unknot chain at one label.
pub fn label_difference(d_chain: &Chain, u_chain: &Chain, label: i64) -> Result<(i64, Term)> {
    let s = d_chain.schedule(label)?;
    let cd = d_chain.collapse(&s)?;
    let cu = u_chain.collapse(&s)?;
    let term = common_term(&s, &cd, &cu)?;
    let (dd, td) = d_chain.d_at(&term)?;
    let (du, tu) = u_chain.d_at(&term)?;
    if td != tu {
        return consistency(format!("grading tags differ: {td} vs {tu}"));
    }
    Ok((dd - du, term))
}

/// d(M(K_{D_k,n}), s_n) - d(M(K_{U,n}), s_n).
pub fn branched_cover_d_diff(n: i64, k: i64) -> Result<i64> {
    branched_cover_d_diff_with(n, k, ModelChoice::Essential)
}

pub fn branched_cover_d_diff_with(n: i64, k: i64, choice: ModelChoice) -> Result<i64> {
    if n < 2 {
        return input(format!("n = {n} must be at least 2"));
    }
    if k < 0 || 2 * k >= n {
        return input(format!("k = {k} outside 0 <= k < n/2 for n = {n}"));
    }
    let d_chain = Chain::new(2 * n, k, choice)?;
    let u_chain = Chain::new(2 * n, 0, choice)?;
    Ok(label_difference(&d_chain, &u_chain, n)?.0)
}

/// Differences at every label in [0, N^2].
pub fn difference_vector(n: i64, k: i64, choice: ModelChoice) -> Result<Vec<i64>> {
    let d_chain = Chain::new(2 * n, k, choice)?;
    let u_chain = Chain::new(2 * n, 0, choice)?;
    let p = 4 * n * n + 1;
    (0..p).into_par_iter().map(|label| Ok(label_difference(&d_chain, &u_chain, label)?.0)).collect()
}

/// Conjugation on surgery labels: k -> -k - N - 1.
pub fn label_conjugate(n_coef: i64, k: i64) -> i64 {
    let p = n_coef * n_coef + 1;
    (-k - n_coef - 1).rem_euclid(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEntry {
    pub label: i64,
    pub d_rel: i64,
    pub tag: ShiftTag,
    #[serde(with = "opt_ratio", skip_serializing_if = "Option::is_none", default)]
    pub d_abs: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DInvariantVector {
    pub modulus: i64,
    pub entries: Vec<DEntry>,
}

impl DInvariantVector {
    pub fn is_calibrated(&self) -> bool {
        self.entries.iter().all(|e| e.d_abs.is_some())
    }

    /// Absolute values indexed by label; requires every label exactly once.
    pub fn absolute(&self) -> Result<Vec<Q>> {
        let mut out = vec![None; self.modulus as usize];
        for e in &self.entries {
            let Some(v) = e.d_abs else {
                return input(format!("label {} is not calibrated", e.label));
            };
            let z = e.label.rem_euclid(self.modulus) as usize;
            if out[z].replace(v).is_some() {
                return input(format!("label {} appears twice", e.label));
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(z, v)| v.ok_or_else(|| Error::Input(format!("label {z} missing"))))
            .collect()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("vector serializes")
    }
}

mod opt_ratio {
    use super::Q;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_str(&format!("{}/{}", q.numer(), q.denom())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let Some(s) = Option::<String>::deserialize(d)? else { return Ok(None) };
        let (a, b) = s.split_once('/').unwrap_or((&s, "1"));
        let a: i128 = a.trim().parse().map_err(D::Error::custom)?;
        let b: i128 = b.trim().parse().map_err(D::Error::custom)?;
        if b == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Some(Q::new(a, b)))
    }
}

/// Affine label map k -> a k + b into the lens recursion's indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub a: i64,
    pub b: i64,
}

impl LabelMap {
    pub fn apply(&self, p: i64, k: i64) -> i64 {
        (self.a * k + self.b).rem_euclid(p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolvedShift {
    pub term: Term,
    pub tag: ShiftTag,
    #[serde(serialize_with = "ser_ratio")]
    pub shift: Q,
}

fn ser_ratio<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

/// Unknot pipeline matched against L(4n^2+1, 2n).
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub n: i64,
    pub modulus: i64,
    /// every affine map with a = +-1 intertwining the two conjugations
    pub maps: Vec<LabelMap>,
    /// relative d of the unknot chain at each label's survivor
    pub unknot: DInvariantVector,
    /// numeric value of every tag met in a valid term, keyed by term index t
    pub shifts: BTreeMap<i64, ResolvedShift>,
}

impl Calibration {
    pub fn map(&self) -> LabelMap {
        self.maps[0]
    }

    /// Cohomology label of surgery label k under the chosen map.
    pub fn z_label(&self, k: i64) -> i64 {
        cohomology_label(self.modulus, 2 * self.n, self.map().apply(self.modulus, k))
    }

    pub fn z_label_with(&self, map: LabelMap, k: i64) -> i64 {
        cohomology_label(self.modulus, 2 * self.n, map.apply(self.modulus, k))
    }

    /// Lens values in cohomology labels.
    pub fn lens_by_z(&self) -> Vec<Q> {
        let (p, q) = (self.modulus, 2 * self.n);
        let mut out = vec![Q::from_integer(0); p as usize];
        for i in 0..p {
            out[cohomology_label(p, q, i) as usize] = lens_d(p, q, i);
        }
        out
    }
}

pub fn calibrate_shifts(n: i64) -> Result<Calibration> {
    if n < 2 {
        return input(format!("n = {n} must be at least 2"));
    }
    let nc = 2 * n;
    let p = nc * nc + 1;
    let chain = Chain::new(nc, 0, ModelChoice::Essential)?;

    // label maps respecting both conjugations
    let maps: Vec<LabelMap> = [1i64, -1]
        .into_iter()
        .flat_map(|a| (0..p).map(move |b| LabelMap { a, b }))
        .filter(|m| (0..p).all(|k| m.apply(p, label_conjugate(nc, k)) == (nc - 1 - m.apply(p, k)).rem_euclid(p)))
        .collect();
    if maps.is_empty() {
        return consistency("no affine label map matches the conjugations");
    }
    let map = maps[0];

    let per_label: Vec<(DEntry, Vec<ResolvedShift>)> = (0..p)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let s = chain.schedule(k)?;
            let col = chain.collapse(&s)?;
            let target = lens_d(p, nc, map.apply(p, k));
            let mut shifts = Vec::new();
            let mut entry = None;
            for idx in col.valid() {
                let term = s.terms[idx];
                let (d, tag) = chain.d_at(&term)?;
                let shift = target - Q::from_integer(d as i128);
                if idx == col.survivor {
                    entry = Some(DEntry { label: k, d_rel: d, tag: tag.clone(), d_abs: Some(target) });
                }
                shifts.push(ResolvedShift { term, tag, shift });
            }
            Ok((entry.expect("survivor is valid"), shifts))
        })
        .collect::<Result<_>>()?;

    let mut entries = Vec::new();
    let mut shifts = BTreeMap::new();
    for (e, ss) in per_label {
        entries.push(e);
        for s in ss {
            shifts.insert(s.term.t, s);
        }
    }
    Ok(Calibration { n, modulus: p, maps, unknot: DInvariantVector { modulus: p, entries }, shifts })
}

/// Calibrated absolute d-vector of M(K_{D_k,n}) in cohomology labels.
pub fn calibrated_vector(cal: &Calibration, k: i64, choice: ModelChoice) -> Result<DInvariantVector> {
    let nc = 2 * cal.n;
    let d_chain = Chain::new(nc, k, choice)?;
    let entries: Vec<DEntry> = (0..cal.modulus)
        .into_par_iter()
        .map(|label| -> Result<DEntry> {
            let s = d_chain.schedule(label)?;
            let col = d_chain.collapse(&s)?;
            let idx = col
                .valid()
                .rev()
                .find(|&i| cal.shifts.contains_key(&s.terms[i].t))
                .ok_or_else(|| Error::Consistency(format!("label {label}: no calibrated term in range")))?;
            let term = s.terms[idx];
            let (d, tag) = d_chain.d_at(&term)?;
            let r = &cal.shifts[&term.t];
            if r.tag != tag {
                return consistency(format!("label {label}: tag {tag} has no resolved value"));
            }
            Ok(DEntry { label: cal.z_label(label), d_rel: d, tag, d_abs: Some(Q::from_integer(d as i128) + r.shift) })
        })
        .collect::<Result<_>>()?;
    let mut entries = entries;
    entries.sort_by_key(|e| e.label);
    Ok(DInvariantVector { modulus: cal.modulus, entries })
}
