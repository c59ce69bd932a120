//! Shared fixtures: random complexes built from known pieces and scrambled by
//! filtered basis changes, plus a brute-force truncated d computation that
//! shares no code with the library's tower search.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hfslice::surgery::Mode;
use hfslice::{torus_model, unknot_model, Arrow, Complex, Generator};
use proptest::prelude::*;

/// x -> x + U^s y for the unique s matching gradings, when that is a
/// filtered change of basis. Returns None when the move is not allowed.
pub fn basis_change(c: &Complex, x: usize, y: usize) -> Option<Complex> {
    let g = c.gens();
    if x == y || (g[y].gr - g[x].gr).rem_euclid(2) != 0 {
        return None;
    }
    let s = (g[y].gr - g[x].gr) / 2;
    if g[y].i - s > g[x].i || g[y].j - s > g[x].j {
        return None;
    }
    let mut m: BTreeSet<(usize, usize)> = c.arrows().iter().map(|a| (a.from, a.to)).collect();
    let toggle = |m: &mut BTreeSet<(usize, usize)>, e: (usize, usize)| {
        if !m.remove(&e) {
            m.insert(e);
        }
    };
    // d' = P d P with P = 1 + U^s e_y e_x^T: first column x += column y ...
    let outs: Vec<usize> = m.iter().filter(|e| e.0 == y).map(|e| e.1).collect();
    for t in outs {
        toggle(&mut m, (x, t));
    }
    // ... then row y += row x
    let ins: Vec<usize> = m.iter().filter(|e| e.1 == x).map(|e| e.0).collect();
    for s in ins {
        toggle(&mut m, (s, y));
    }
    let arrows: Vec<Arrow> =
        m.into_iter().map(|(f, t)| Arrow { from: f, to: t, upow: (g[t].gr - g[f].gr + 1) / 2 }).collect();
    let out = Complex::new(c.label.clone(), g.to_vec(), arrows).with_tag(c.tag.clone());
    out.validate().is_ok().then_some(out)
}

pub fn scramble(c: &Complex, moves: &[(usize, usize)]) -> Complex {
    let n = c.len();
    let mut c = c.clone();
    if n < 2 {
        return c;
    }
    for &(a, b) in moves {
        if let Some(next) = basis_change(&c, a % n, b % n) {
            c = next;
        }
    }
    c
}

/// Acyclic building blocks: an arrow x -> y, or a unit square.
pub fn acyclic_piece(square: bool, gr: i64, i: i64, j: i64, a: i64, b: i64) -> Complex {
    if square {
        let gens = vec![
            Generator::new("a", gr, i, j),
            Generator::new("b", gr - 1, i - 1, j),
            Generator::new("c", gr - 1, i, j - 1),
            Generator::new("d", gr - 2, i - 1, j - 1),
        ];
        let arrows = [(0, 1), (0, 2), (1, 3), (2, 3)].map(|(f, t)| Arrow { from: f, to: t, upow: 0 });
        Complex::new("box", gens, arrows.to_vec())
    } else {
        let gens = vec![Generator::new("x", gr, i, j), Generator::new("y", gr - 1, i - a, j - b)];
        Complex::new("pair", gens, vec![Arrow { from: 0, to: 1, upow: 0 }])
    }
}

pub fn staircase_sum(ks: &[(usize, bool)]) -> Complex {
    let mut c = unknot_model();
    for &(k, mirror) in ks {
        let t = torus_model(k);
        c = c.tensor(&if mirror { t.dualize() } else { t });
    }
    c
}

pub fn arb_acyclic() -> impl Strategy<Value = Complex> {
    (
        prop::collection::vec((any::<bool>(), -3i64..3, -2i64..3, -2i64..3, 0i64..2, 0i64..2), 1..4),
        prop::collection::vec((0usize..64, 0usize..64), 0..12),
    )
        .prop_map(|(pieces, moves)| {
            let mut c = Complex::empty("A");
            for (sq, gr, i, j, a, b) in pieces {
                c = c.direct_sum(&acyclic_piece(sq, gr, i, j, a, b));
            }
            scramble(&c, &moves)
        })
}

/// Homology rank one: tensor products of staircases and mirrors, plus
/// optional acyclic junk, scrambled.
pub fn arb_knot_like() -> impl Strategy<Value = Complex> {
    (
        prop::collection::vec((0usize..3, any::<bool>()), 1..3),
        prop::option::of(arb_acyclic()),
        prop::collection::vec((0usize..64, 0usize..64), 0..16),
    )
        .prop_map(|(ks, junk, moves)| {
            let mut c = staircase_sum(&ks);
            if let Some(a) = junk {
                c = c.direct_sum(&a);
            }
            scramble(&c, &moves)
        })
}

/// d^2 computed directly from the arrow list, over F2[U].
pub fn square_vanishes(c: &Complex) -> bool {
    let mut count: std::collections::BTreeMap<(usize, usize, i64), u32> = Default::default();
    let out = c.out_lists();
    for (x, list) in out.iter().enumerate() {
        for &(y, u) in list {
            for &(z, v) in &out[y] {
                *count.entry((x, z, u + v)).or_default() += 1;
            }
        }
    }
    count.values().all(|n| n % 2 == 0)
}

// ---------- truncated d, dense linear algebra ----------

fn rank(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| rows[k][col]) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= *b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Kernel of a map given by its columns (each column a Vec<bool> over the target).
fn kernel(cols: &[Vec<bool>], target: usize) -> Vec<Vec<bool>> {
    let n = cols.len();
    // rows of [A^T | I]; rows reducing to zero on the left give the kernel
    let mut rows: Vec<Vec<bool>> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut r = c.clone();
            r.resize(target, false);
            r.extend((0..n).map(|s| s == k));
            r
        })
        .collect();
    let mut r = 0;
    for col in 0..target {
        let Some(p) = (r..n).find(|&k| rows[k][col]) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= *b;
                }
            }
        }
        r += 1;
    }
    rows[r..].iter().map(|row| row[target..].to_vec()).collect()
}

fn p_survive(g: &Generator, m: i64, mode: Mode) -> i64 {
    match mode {
        Mode::Intersection => g.i.max(g.j - m),
        Mode::Union => g.i.min(g.j - m),
    }
}

/// Least grading of a class in the image of U^(T/2), scanning degrees upward.
pub fn windowed_d(c: &Complex, m: i64, mode: Mode, window: i64) -> Option<i64> {
    let gens = c.gens();
    let ps: Vec<i64> = gens.iter().map(|g| p_survive(g, m, mode)).collect();
    let out = c.out_lists();
    let basis = |h: i64| -> Vec<(usize, i64)> {
        (0..gens.len())
            .filter(|&k| (gens[k].gr - h).rem_euclid(2) == 0 && (gens[k].gr - h) / 2 <= ps[k])
            .map(|k| (k, (gens[k].gr - h) / 2))
            .collect()
    };
    let index = |b: &[(usize, i64)], e: (usize, i64)| b.iter().position(|&x| x == e);
    // columns of d from degree h to h - 1
    let dcols = |h: i64| -> (Vec<Vec<bool>>, usize) {
        let src = basis(h);
        let tgt = basis(h - 1);
        let cols = src
            .iter()
            .map(|&(k, p)| {
                let mut col = vec![false; tgt.len()];
                for &(t, u) in &out[k] {
                    if p + u <= ps[t] {
                        let r = index(&tgt, (t, p + u)).expect("target is in the basis");
                        col[r] ^= true;
                    }
                }
                col
            })
            .collect();
        (cols, tgt.len())
    };
    let l = window / 2;
    let lo = (0..gens.len()).map(|k| gens[k].gr - 2 * ps[k]).min()?;
    let hi = (0..gens.len()).map(|k| gens[k].gr - 2 * ps[k]).max()? + 2;
    for h in lo..=hi {
        let tgt = basis(h);
        if tgt.is_empty() {
            continue;
        }
        let (top, top_len) = dcols(h + 2 * l);
        let src = basis(h + 2 * l);
        let cycles = kernel(&top, top_len);
        let images: Vec<Vec<bool>> = cycles
            .iter()
            .map(|z| {
                let mut v = vec![false; tgt.len()];
                for (s, &on) in z.iter().enumerate() {
                    if on {
                        let (k, p) = src[s];
                        if p + l <= ps[k] {
                            v[index(&tgt, (k, p + l)).unwrap()] ^= true;
                        }
                    }
                }
                v
            })
            .collect();
        let (bcols, _) = dcols(h + 1);
        let rb = rank(bcols.clone());
        let mut both = bcols;
        both.extend(images);
        if rank(both) > rb {
            return Some(h);
        }
    }
    None
}

/// Default window with the T / T+2 stability check, doubling up to twice.
pub fn windowed_d_stable(c: &Complex, m: i64, mode: Mode) -> Option<i64> {
    let span = c.gens().iter().map(|g| g.gr).max()? - c.gens().iter().map(|g| g.gr).min()?;
    let mut t = 2 * (c.len() as i64 + span);
    for _ in 0..3 {
        let a = windowed_d(c, m, mode, t);
        if a.is_some() && a == windowed_d(c, m, mode, t + 2) {
            return a;
        }
        t *= 2;
    }
    None
}
