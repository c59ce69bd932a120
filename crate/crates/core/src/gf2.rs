//! Sparse linear algebra over the two-element field.
//!
//! Vectors are sorted lists of row indices. Reduction is the usual
//! lowest-one column elimination, which stays sparse on boundary matrices.

use std::collections::HashMap;

pub type SparseVec = Vec<u32>;

/// Symmetric difference of two sorted index lists.
pub fn xor(a: &[u32], b: &[u32]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}

/// Sort and cancel repeated indices in pairs.
pub fn normalize(mut v: Vec<u32>) -> SparseVec {
    v.sort_unstable();
    let mut out: Vec<u32> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// An echelon basis of a subspace, keyed by lowest (largest) index.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    cols: Vec<SparseVec>,
    pivot: HashMap<u32, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_columns<I: IntoIterator<Item = SparseVec>>(cols: I) -> Self {
        let mut e = Self::new();
        for c in cols {
            e.insert(c);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Residue of `v` modulo the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some(&low) = v.last() {
            match self.pivot.get(&low) {
                Some(&c) => v = xor(&v, &self.cols[c]),
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).is_empty()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.last() {
            None => false,
            Some(&low) => {
                self.pivot.insert(low, self.cols.len());
                self.cols.push(r);
                true
            }
        }
    }
}

/// Basis of the kernel of the map whose k-th column is `cols[k]`,
/// each kernel vector given as a sorted list of column indices.
pub fn kernel(cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut reduced: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut pivot: HashMap<u32, usize> = HashMap::new();
    let mut ker = Vec::new();
    for (k, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        let mut comb = vec![k as u32];
        while let Some(&low) = v.last() {
            match pivot.get(&low) {
                Some(&p) => {
                    v = xor(&v, &reduced[p].0);
                    comb = xor(&comb, &reduced[p].1);
                }
                None => break,
            }
        }
        match v.last() {
            None => ker.push(comb),
            Some(&low) => {
                pivot.insert(low, reduced.len());
                reduced.push((v, comb));
            }
        }
    }
    ker
}

pub fn rank(cols: &[SparseVec]) -> usize {
    Echelon::from_columns(cols.iter().cloned()).rank()
}
