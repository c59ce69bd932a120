//! Finite models of bifiltered complexes over F[U, U^-1].
//!
//! Only one lift of each generator is stored. An arrow `from -> U^upow to`
//! stands for the whole U-orbit of that differential component.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::gf2::{self, SparseVec};
use crate::tag::{Atom, ShiftTag};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub gr: i64,
    pub i: i64,
    pub j: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, gr: i64, i: i64, j: i64) -> Self {
        Generator { id: id.into(), gr, i, j }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub upow: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub label: String,
    pub tag: ShiftTag,
    gens: Vec<Generator>,
    arrows: Vec<Arrow>,
}

/// How a uniform shift treats gradings.
#[derive(Clone, Debug)]
pub enum GradingShift {
    Known(i64),
    Symbolic(Atom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    SelfArrow(String),
    NegativeUpow { from: String, to: String, upow: i64 },
    Grading { from: String, to: String, upow: i64 },
    Filtration { from: String, to: String, upow: i64 },
    /// A component of the square of the differential that survives mod 2.
    SquareNonzero { from: String, to: String, upow: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate generator id {id}"),
            Violation::SelfArrow(id) => write!(f, "arrow from {id} to itself"),
            Violation::NegativeUpow { from, to, upow } => {
                write!(f, "arrow {from} -> U^{upow} {to} has negative U-power")
            }
            Violation::Grading { from, to, upow } => {
                write!(f, "arrow {from} -> U^{upow} {to} does not lower grading by one")
            }
            Violation::Filtration { from, to, upow } => {
                write!(f, "arrow {from} -> U^{upow} {to} raises a filtration")
            }
            Violation::SquareNonzero { from, to, upow } => {
                write!(f, "d^2 has a nonzero component {from} -> U^{upow} {to}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "pass");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn sorted_arrows(mut arrows: Vec<Arrow>) -> Vec<Arrow> {
    // coefficients live in F2: repeated entries cancel in pairs
    arrows.sort();
    let mut out: Vec<Arrow> = Vec::with_capacity(arrows.len());
    for a in arrows {
        if out.last() == Some(&a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

impl Complex {
    pub fn new(label: impl Into<String>, gens: Vec<Generator>, arrows: Vec<Arrow>) -> Self {
        Complex { label: label.into(), tag: ShiftTag::zero(), gens, arrows: sorted_arrows(arrows) }
    }

    /// Builds from ids; unknown ids are an input error.
    pub fn from_named(
        label: impl Into<String>,
        gens: Vec<Generator>,
        arrows: &[(&str, &str, i64)],
    ) -> Result<Self> {
        let index: HashMap<&str, usize> = gens.iter().enumerate().map(|(k, g)| (g.id.as_str(), k)).collect();
        let mut list = Vec::with_capacity(arrows.len());
        for (a, b, u) in arrows {
            let (Some(&from), Some(&to)) = (index.get(a), index.get(b)) else {
                return input(format!("arrow {a} -> {b} names an unknown generator"));
            };
            list.push(Arrow { from, to, upow: *u });
        }
        Ok(Complex::new(label, gens, list))
    }

    pub fn empty(label: impl Into<String>) -> Self {
        Complex::new(label, Vec::new(), Vec::new())
    }

    pub fn with_tag(mut self, tag: ShiftTag) -> Self {
        self.tag = tag;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn out_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.gens.len()];
        for a in &self.arrows {
            out[a.from].push((a.to, a.upow));
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let mut seen = HashSet::new();
        for g in &self.gens {
            if !seen.insert(g.id.as_str()) {
                v.push(Violation::DuplicateId(g.id.clone()));
            }
        }
        let id = |k: usize| self.gens[k].id.clone();
        for a in &self.arrows {
            let (s, t) = (&self.gens[a.from], &self.gens[a.to]);
            if a.from == a.to {
                v.push(Violation::SelfArrow(id(a.from)));
                continue;
            }
            if a.upow < 0 {
                v.push(Violation::NegativeUpow { from: id(a.from), to: id(a.to), upow: a.upow });
            }
            if t.gr - 2 * a.upow != s.gr - 1 {
                v.push(Violation::Grading { from: id(a.from), to: id(a.to), upow: a.upow });
            }
            if t.i - a.upow > s.i || t.j - a.upow > s.j {
                v.push(Violation::Filtration { from: id(a.from), to: id(a.to), upow: a.upow });
            }
        }
        let out = self.out_lists();
        for (x, succ) in out.iter().enumerate() {
            let mut count: BTreeMap<(usize, i64), u8> = BTreeMap::new();
            for &(y, u) in succ {
                for &(z, w) in &out[y] {
                    *count.entry((z, u + w)).or_insert(0) ^= 1;
                }
            }
            for ((z, e), c) in count {
                if c == 1 {
                    v.push(Violation::SquareNonzero { from: id(x), to: id(z), upow: e });
                }
            }
        }
        ValidationReport { violations: v }
    }

    pub fn tensor(&self, other: &Complex) -> Complex {
        let n2 = other.len();
        let mut gens = Vec::with_capacity(self.len() * n2);
        for a in &self.gens {
            for b in &other.gens {
                gens.push(Generator::new(format!("{}.{}", a.id, b.id), a.gr + b.gr, a.i + b.i, a.j + b.j));
            }
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() * n2 + other.arrows.len() * self.len());
        for x in &self.arrows {
            for b in 0..n2 {
                arrows.push(Arrow { from: x.from * n2 + b, to: x.to * n2 + b, upow: x.upow });
            }
        }
        for y in &other.arrows {
            for a in 0..self.len() {
                arrows.push(Arrow { from: a * n2 + y.from, to: a * n2 + y.to, upow: y.upow });
            }
        }
        let mut c = Complex::new(format!("{} # {}", self.label, other.label), gens, arrows)
            .with_tag(self.tag.plus(&other.tag));
        c.ensure_unique_ids("t");
        c
    }

    pub fn dualize(&self) -> Complex {
        let gens = self.gens.iter().map(|g| Generator::new(g.id.clone(), -g.gr, -g.i, -g.j)).collect();
        let arrows = self.arrows.iter().map(|a| Arrow { from: a.to, to: a.from, upow: a.upow }).collect();
        Complex::new(format!("m({})", self.label), gens, arrows).with_tag(self.tag.negated())
    }

    pub fn shift(&self, di: i64, dj: i64, dg: GradingShift) -> Complex {
        let mut c = self.clone();
        let dgk = match &dg {
            GradingShift::Known(k) => *k,
            GradingShift::Symbolic(a) => {
                c.tag.add_atom(a.clone(), 1);
                0
            }
        };
        for g in &mut c.gens {
            g.i += di;
            g.j += dj;
            g.gr += dgk;
        }
        c
    }

    /// Replaces every generator g by U^p g.
    pub fn u_translate(&self, p: i64) -> Complex {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.gr -= 2 * p;
            g.i -= p;
            g.j -= p;
        }
        c
    }

    /// Replaces generator k by U^{d[k]} times itself.
    pub fn relift(&self, d: &[i64]) -> Complex {
        let mut c = self.clone();
        for (g, &p) in c.gens.iter_mut().zip(d) {
            g.gr -= 2 * p;
            g.i -= p;
            g.j -= p;
        }
        for a in &mut c.arrows {
            a.upow += d[a.from] - d[a.to];
        }
        c.arrows = sorted_arrows(std::mem::take(&mut c.arrows));
        c
    }

    /// The lift of each generator with grading 0 or 1.
    pub fn relift_parity(&self) -> Complex {
        let d: Vec<i64> = self.gens.iter().map(|g| g.gr.div_euclid(2)).collect();
        self.relift(&d)
    }

    /// Range of i - j over generators.
    pub fn band(&self) -> Option<(i64, i64)> {
        let it = self.gens.iter().map(|g| g.i - g.j);
        let lo = it.clone().min()?;
        let hi = it.max()?;
        Some((lo, hi))
    }

    pub fn width(&self) -> Result<i64> {
        match self.band() {
            Some((lo, hi)) => Ok(hi - lo + 1),
            None => input("width of an empty complex is undefined"),
        }
    }

    /// Columns of the differential with U set to 1.
    fn collapsed_columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.len()];
        for a in &self.arrows {
            cols[a.from].push(a.to as u32);
        }
        cols.into_iter().map(gf2::normalize).collect()
    }

    /// Rank of the homology over one grading period.
    pub fn homology_rank(&self) -> usize {
        self.len() - 2 * gf2::rank(&self.collapsed_columns())
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_rank() == 0
    }

    /// Graded homology of the column i = 0, j = j0 of the full complex.
    pub fn slice_homology(&self, j0: i64) -> BTreeMap<i64, usize> {
        // generator g contributes U^{g.i} g, sitting at (0, j - i)
        let members: Vec<usize> = (0..self.len()).filter(|&k| self.gens[k].j - self.gens[k].i == j0).collect();
        let local: HashMap<usize, u32> = members.iter().enumerate().map(|(n, &k)| (k, n as u32)).collect();
        let mut cols: Vec<Vec<u32>> = vec![Vec::new(); members.len()];
        for a in &self.arrows {
            let (Some(&s), Some(&t)) = (local.get(&a.from), local.get(&a.to)) else { continue };
            if self.gens[a.from].i + a.upow == self.gens[a.to].i {
                cols[s as usize].push(t);
            }
        }
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let mut grade_cols: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
        for (n, &k) in members.iter().enumerate() {
            let g = &self.gens[k];
            let h = g.gr - 2 * g.i;
            *dims.entry(h).or_insert(0) += 1;
            grade_cols.entry(h).or_default().push(gf2::normalize(std::mem::take(&mut cols[n])));
        }
        // rank of d out of grade h is lost from both h and h - 1
        let mut lost: BTreeMap<i64, usize> = BTreeMap::new();
        for (h, cs) in grade_cols {
            let r = gf2::rank(&cs);
            *lost.entry(h).or_insert(0) += r;
            *lost.entry(h - 1).or_insert(0) += r;
        }
        dims.into_iter()
            .filter_map(|(h, d)| {
                let r = d - lost.get(&h).copied().unwrap_or(0);
                (r > 0).then_some((h, r))
            })
            .collect()
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let off = self.len();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow { from: a.from + off, to: a.to + off, upow: a.upow }));
        let mut c = Complex::new(format!("{} + {}", self.label, other.label), gens, arrows)
            .with_tag(self.tag.clone());
        c.ensure_unique_ids("s");
        c
    }

    /// The span of the listed generators with the arrows among them.
    pub fn induced(&self, keep: &[usize]) -> Complex {
        let local: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &k)| (k, n)).collect();
        let gens = keep.iter().map(|&k| self.gens[k].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .filter_map(|a| Some(Arrow { from: *local.get(&a.from)?, to: *local.get(&a.to)?, upow: a.upow }))
            .collect();
        Complex::new(self.label.clone(), gens, arrows).with_tag(self.tag.clone())
    }

    pub fn induced_by_ids(&self, ids: &[&str]) -> Result<Complex> {
        let mut keep = Vec::new();
        for id in ids {
            match self.index_of(id) {
                Some(k) => keep.push(k),
                None => return input(format!("no generator named {id}")),
            }
        }
        Ok(self.induced(&keep))
    }

    fn ensure_unique_ids(&mut self, prefix: &str) {
        let mut seen = HashSet::new();
        if self.gens.iter().all(|g| seen.insert(g.id.clone())) {
            return;
        }
        for (k, g) in self.gens.iter_mut().enumerate() {
            g.id = format!("{prefix}{k}");
        }
    }

    /// Gaussian cancellation of every arrow that preserves the bifiltration.
    pub fn reduce(&self) -> Complex {
        let n = self.len();
        let mut out: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
        let mut inn: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
        for a in &self.arrows {
            out[a.from].insert(a.to, a.upow);
            inn[a.to].insert(a.from, a.upow);
        }
        let gens = &self.gens;
        let exact = |x: usize, y: usize, u: i64| gens[y].i - u == gens[x].i && gens[y].j - u == gens[x].j;
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for x in 0..n {
                if !alive[x] {
                    continue;
                }
                let Some((y, u)) = out[x].iter().map(|(&y, &u)| (y, u)).find(|&(y, u)| exact(x, y, u)) else {
                    continue;
                };
                let sources: Vec<(usize, i64)> =
                    inn[y].iter().filter(|(&z, _)| z != x).map(|(&z, &p)| (z, p)).collect();
                let targets: Vec<(usize, i64)> =
                    out[x].iter().filter(|(&w, _)| w != y).map(|(&w, &q)| (w, q)).collect();
                for v in [x, y] {
                    for (w, _) in std::mem::take(&mut out[v]) {
                        inn[w].remove(&v);
                    }
                    for (z, _) in std::mem::take(&mut inn[v]) {
                        out[z].remove(&v);
                    }
                    alive[v] = false;
                }
                for &(z, p) in &sources {
                    for &(w, q) in &targets {
                        let e = p + q - u;
                        if out[z].remove(&w).is_some() {
                            inn[w].remove(&z);
                        } else {
                            out[z].insert(w, e);
                            inn[w].insert(z, e);
                        }
                    }
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let survivors: Vec<usize> = (0..n).filter(|&k| alive[k]).collect();
        let local: HashMap<usize, usize> = survivors.iter().enumerate().map(|(m, &k)| (k, m)).collect();
        let mut arrows = Vec::new();
        for &x in &survivors {
            for (&y, &u) in &out[x] {
                arrows.push(Arrow { from: local[&x], to: local[&y], upow: u });
            }
        }
        let c = Complex::new(self.label.clone(), survivors.iter().map(|&k| gens[k].clone()).collect(), arrows)
            .with_tag(self.tag.clone());
        if c.arrows.iter().any(|a| a.upow < 0) {
            c.relift_parity()
        } else {
            c
        }
    }

    /// Isomorphism-invariant presentation: parity lifts, canonical ids g0, g1, ...
    pub fn canonical_form(&self) -> Complex {
        let c = self.relift_parity();
        let order = canonical_order(&c);
        let mut pos = vec![0usize; c.len()];
        for (p, &k) in order.iter().enumerate() {
            pos[k] = p;
        }
        let gens = order
            .iter()
            .enumerate()
            .map(|(p, &k)| {
                let g = &c.gens[k];
                Generator::new(format!("g{p}"), g.gr, g.i, g.j)
            })
            .collect();
        let arrows = c.arrows.iter().map(|a| Arrow { from: pos[a.from], to: pos[a.to], upow: a.upow }).collect();
        Complex::new(self.label.clone(), gens, arrows).with_tag(self.tag.clone())
    }

    /// Canonical serialization with the free-text label dropped.
    pub fn canonical_key(&self) -> String {
        let mut c = self.canonical_form();
        c.label.clear();
        c.to_json()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<Complex> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("bad complex JSON: {e}")))
    }

    /// ASCII picture: one row per j (top = largest), one column per i.
    pub fn diagram(&self) -> String {
        let mut cells: BTreeMap<(i64, i64), Vec<String>> = BTreeMap::new();
        for g in &self.gens {
            cells.entry((g.j, g.i)).or_default().push(format!("{}^{}", g.id, g.gr));
        }
        let mut s = format!("{}  [{} generators, tag {}]\n", self.label, self.len(), self.tag);
        if self.is_empty() {
            return s;
        }
        let imin = self.gens.iter().map(|g| g.i).min().unwrap();
        let imax = self.gens.iter().map(|g| g.i).max().unwrap();
        let jmin = self.gens.iter().map(|g| g.j).min().unwrap();
        let jmax = self.gens.iter().map(|g| g.j).max().unwrap();
        let text = |i: i64, j: i64| cells.get(&(j, i)).map(|v| v.join(",")).unwrap_or_else(|| ".".into());
        let w = (imin..=imax)
            .flat_map(|i| (jmin..=jmax).map(move |j| (i, j)))
            .map(|(i, j)| text(i, j).len())
            .max()
            .unwrap_or(1)
            .max(3);
        s.push_str(&format!("{:>5} |", "j\\i"));
        for i in imin..=imax {
            s.push_str(&format!(" {:>w$}", i));
        }
        s.push('\n');
        for j in (jmin..=jmax).rev() {
            s.push_str(&format!("{:>5} |", j));
            for i in imin..=imax {
                s.push_str(&format!(" {:>w$}", text(i, j)));
            }
            s.push('\n');
        }
        for a in &self.arrows {
            let u = if a.upow == 0 { String::new() } else { format!("U^{} ", a.upow) };
            s.push_str(&format!("  d {} -> {}{}\n", self.gens[a.from].id, u, self.gens[a.to].id));
        }
        s
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut uniq: Vec<K> = keys.to_vec();
    uniq.sort();
    uniq.dedup();
    keys.iter().map(|k| uniq.binary_search(k).unwrap() as u32).collect()
}

fn refine(c: &Complex, adj: &[Vec<(u8, i64, usize)>], mut colors: Vec<u32>) -> Vec<u32> {
    let mut classes = colors.iter().collect::<HashSet<_>>().len();
    loop {
        let sigs: Vec<(u32, Vec<(u8, i64, u32)>)> = (0..c.len())
            .map(|v| {
                let mut nb: Vec<(u8, i64, u32)> = adj[v].iter().map(|&(d, u, w)| (d, u, colors[w])).collect();
                nb.sort();
                (colors[v], nb)
            })
            .collect();
        let next = rank_keys(&sigs);
        let k = next.iter().collect::<HashSet<_>>().len();
        colors = next;
        if k == classes {
            return colors;
        }
        classes = k;
    }
}

fn encode(c: &Complex, colors: &[u32]) -> (Vec<usize>, Vec<i64>) {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by_key(|&v| colors[v]);
    let mut pos = vec![0usize; c.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut arrows: Vec<(usize, usize, i64)> = c.arrows.iter().map(|a| (pos[a.from], pos[a.to], a.upow)).collect();
    arrows.sort();
    let mut enc = Vec::with_capacity(3 * c.len() + 3 * arrows.len());
    for &v in &order {
        let g = &c.gens[v];
        enc.extend([g.gr, g.i, g.j]);
    }
    for (a, b, u) in arrows {
        enc.extend([a as i64, b as i64, u]);
    }
    (order, enc)
}

fn search(
    c: &Complex,
    adj: &[Vec<(u8, i64, usize)>],
    colors: Vec<u32>,
    best: &mut Option<(Vec<i64>, Vec<usize>)>,
) {
    let colors = refine(c, adj, colors);
    let mut count: BTreeMap<u32, usize> = BTreeMap::new();
    for &col in &colors {
        *count.entry(col).or_insert(0) += 1;
    }
    let Some((&cell, _)) = count.iter().find(|(_, &n)| n > 1) else {
        let (order, enc) = encode(c, &colors);
        if best.as_ref().map_or(true, |(b, _)| enc < *b) {
            *best = Some((enc, order));
        }
        return;
    };
    for v in 0..c.len() {
        if colors[v] != cell {
            continue;
        }
        let keys: Vec<(u32, u8)> = (0..c.len()).map(|w| (colors[w], u8::from(w != v))).collect();
        search(c, adj, rank_keys(&keys), best);
    }
}

/// Generator order realizing the lexicographically least encoding.
fn canonical_order(c: &Complex) -> Vec<usize> {
    let mut adj: Vec<Vec<(u8, i64, usize)>> = vec![Vec::new(); c.len()];
    for a in &c.arrows {
        adj[a.from].push((0, a.upow, a.to));
        adj[a.to].push((1, a.upow, a.from));
    }
    let start: Vec<(i64, i64, i64)> = c.gens.iter().map(|g| (g.gr, g.i, g.j)).collect();
    let mut best = None;
    search(c, &adj, rank_keys(&start), &mut best);
    best.map(|(_, order)| order).unwrap_or_default()
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    from: String,
    to: String,
    upow: i64,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    label: String,
    #[serde(default)]
    shift_tag: ShiftTag,
    generators: Vec<Generator>,
    differential: Vec<ArrowJson>,
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            label: self.label.clone(),
            shift_tag: self.tag.clone(),
            generators: self.gens.clone(),
            differential: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    from: self.gens[a.from].id.clone(),
                    to: self.gens[a.to].id.clone(),
                    upow: a.upow,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ComplexJson::deserialize(d)?;
        let arrows: Vec<(&str, &str, i64)> =
            j.differential.iter().map(|a| (a.from.as_str(), a.to.as_str(), a.upow)).collect();
        let c = Complex::from_named(j.label.clone(), j.generators.clone(), &arrows).map_err(D::Error::custom)?;
        Ok(c.with_tag(j.shift_tag))
    }
}
