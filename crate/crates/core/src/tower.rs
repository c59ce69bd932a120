//! The U-tower of a complex whose homology over F[U, U^-1] has rank one.
//!
//! A single grading degree of C (x) F[U, U^-1] holds exactly one translate of
//! each generator of the right parity, so every question below is finite
//! linear algebra on the U = 1 collapse, split by parity.

use std::collections::{BTreeSet, HashMap};

use crate::complex::Complex;
use crate::error::{consistency, Error, Result};
use crate::gf2::{self, Echelon, SparseVec};

/// A cycle generating the homology in degrees of its parity.
#[derive(Clone, Debug)]
pub struct TowerCycle {
    pub parity: i64,
    /// Generators whose translates make up the cycle.
    pub support: Vec<usize>,
}

struct Parity {
    /// generators of this parity, ascending
    members: Vec<usize>,
    local: HashMap<usize, u32>,
}

fn split_parity(c: &Complex) -> [Parity; 2] {
    let mk = |p: i64| {
        let members: Vec<usize> = (0..c.len()).filter(|&k| c.gens()[k].gr.rem_euclid(2) == p).collect();
        let local = members.iter().enumerate().map(|(n, &k)| (k, n as u32)).collect();
        Parity { members, local }
    };
    [mk(0), mk(1)]
}

/// Boundaries of every generator, in local indices of the opposite parity.
fn boundary_columns(c: &Complex, parts: &[Parity; 2]) -> Vec<SparseVec> {
    let mut cols = vec![Vec::new(); c.len()];
    for a in c.arrows() {
        let p = (c.gens()[a.to].gr.rem_euclid(2)) as usize;
        cols[a.from].push(parts[p].local[&a.to]);
    }
    cols.into_iter().map(gf2::normalize).collect()
}

pub fn tower_cycle(c: &Complex) -> Result<TowerCycle> {
    let parts = split_parity(c);
    let cols = boundary_columns(c, &parts);
    for p in 0..2usize {
        let other = &parts[1 - p];
        let bound = Echelon::from_columns(other.members.iter().map(|&k| cols[k].clone()));
        let own: Vec<SparseVec> = parts[p].members.iter().map(|&k| cols[k].clone()).collect();
        for z in gf2::kernel(&own) {
            if !bound.reduce(z.clone()).is_empty() {
                let support = z.iter().map(|&n| parts[p].members[n as usize]).collect();
                return Ok(TowerCycle { parity: p as i64, support });
            }
        }
    }
    Err(Error::Hypothesis(format!("complex {} has no homology", c.label)))
}

/// Filtration level of the tower class in degree `parity`: the least (i, j)
/// such that some representative lies in filtration (<= i, <= j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EssentialPosition {
    pub gr: i64,
    pub i: i64,
    pub j: i64,
}

pub fn essential_position(c: &Complex) -> Result<EssentialPosition> {
    let tower = tower_cycle(c)?;
    let h = tower.parity;
    let parts = split_parity(c);
    let cols = boundary_columns(c, &parts);
    let own = &parts[h as usize];
    let bound = Echelon::from_columns(parts[1 - h as usize].members.iter().map(|&k| cols[k].clone()));
    // translate U^p g with p = (gr - h)/2 sits at (i - p, j - p)
    let level: Vec<(i64, i64)> = own
        .members
        .iter()
        .map(|&k| {
            let g = &c.gens()[k];
            let p = (g.gr - h) / 2;
            (g.i - p, g.j - p)
        })
        .collect();
    let representable = |keep: &dyn Fn(i64, i64) -> bool| -> bool {
        let sub: Vec<usize> = (0..own.members.len()).filter(|&n| keep(level[n].0, level[n].1)).collect();
        let sub_cols: Vec<SparseVec> = sub.iter().map(|&n| cols[own.members[n]].clone()).collect();
        gf2::kernel(&sub_cols).into_iter().any(|z| {
            let v = gf2::normalize(z.iter().map(|&s| sub[s as usize] as u32).collect());
            !bound.reduce(v).is_empty()
        })
    };
    let least = |coord: usize| -> Result<i64> {
        let vals: BTreeSet<i64> = level.iter().map(|l| if coord == 0 { l.0 } else { l.1 }).collect();
        for s in vals {
            let ok = if coord == 0 { representable(&|i, _| i <= s) } else { representable(&|_, j| j <= s) };
            if ok {
                return Ok(s);
            }
        }
        consistency("tower class is not represented in the full complex")
    };
    let fi = least(0)?;
    let fj = least(1)?;
    if !representable(&|i, j| i <= fi && j <= fj) {
        return consistency(format!(
            "tower class of {} has no representative at ({fi},{fj}) although each coordinate is attained",
            c.label
        ));
    }
    Ok(EssentialPosition { gr: h, i: fi, j: fj })
}

/// Least grading h such that the tower class survives in degree h of the
/// quotient whose surviving translates are U^p g with p <= survive(g).
pub fn tower_bottom(c: &Complex, survive: &dyn Fn(usize) -> i64) -> Result<i64> {
    let tower = tower_cycle(c)?;
    let pi = tower.parity;
    let gens = c.gens();
    let out = c.out_lists();
    let bottom = |k: usize| gens[k].gr - 2 * survive(k);
    let own: Vec<usize> = (0..c.len()).filter(|&k| gens[k].gr.rem_euclid(2) == pi).collect();
    let lo = own.iter().map(|&k| bottom(k)).min().expect("tower parity is populated");
    let hi = (0..c.len())
        .map(|k| if gens[k].gr.rem_euclid(2) == pi { bottom(k) } else { bottom(k) - 1 })
        .max()
        .unwrap();
    let hi = if (hi - pi).rem_euclid(2) == 0 { hi } else { hi + 1 };

    let alive_at = |h: i64| -> bool {
        // degree h and h+1 pieces of the quotient
        let in_piece = |k: usize, deg: i64| (gens[k].gr - deg) / 2 <= survive(k);
        let mut local: HashMap<usize, u32> = HashMap::new();
        for &k in &own {
            if in_piece(k, h) {
                local.insert(k, local.len() as u32);
            }
        }
        let mut bound = Echelon::new();
        for k in 0..c.len() {
            if gens[k].gr.rem_euclid(2) == pi || !in_piece(k, h + 1) {
                continue;
            }
            let p = (gens[k].gr - h - 1) / 2;
            let col: Vec<u32> = out[k]
                .iter()
                .filter(|&&(t, u)| p + u <= survive(t))
                .map(|&(t, _)| local[&t])
                .collect();
            bound.insert(gf2::normalize(col));
        }
        let w: Vec<u32> = tower.support.iter().filter_map(|k| local.get(k).copied()).collect();
        !bound.reduce(gf2::normalize(w)).is_empty()
    };
    if !alive_at(hi) {
        return consistency("tower class vanishes where the quotient is the whole complex");
    }
    // survival is upward closed in h; bisect over degrees of the tower parity
    let (mut a, mut b) = ((lo - pi).div_euclid(2), (hi - pi).div_euclid(2));
    if alive_at(pi + 2 * a) {
        return Ok(pi + 2 * a);
    }
    while b - a > 1 {
        let mid = (a + b) / 2;
        if alive_at(pi + 2 * mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(pi + 2 * b)
}
