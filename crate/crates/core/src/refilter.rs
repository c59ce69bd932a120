//! Refiltering: the complex of the meridian in large negative surgery.
//!
//! For -N surgery with N >= 2g and index m in the base range, a generator
//! [x,i,j] keeps its grading and moves to F_m(i,j). Other Spin^c indices
//! m + tN are obtained by lowering j by t.

use crate::complex::{Complex, GradingShift};
use crate::error::{input, Error, Result};
use crate::tag::Atom;
use crate::tower::{essential_position, EssentialPosition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefilterParams {
    pub n: i64,
    pub m: i64,
    pub genus_bound: i64,
}

/// Inclusive range of indices m handled directly, for surgery coefficient -N.
pub fn base_range(n: i64) -> (i64, i64) {
    ((2 - n).div_euclid(2), n.div_euclid(2))
}

pub fn f_m(m: i64, i: i64, j: i64) -> (i64, i64) {
    if j > i + m {
        (i, i)
    } else {
        (j - m, j - m - 1)
    }
}

/// Genus read off the width of the reduced complex, width = 2g + 1.
pub fn genus_bound(c: &Complex) -> Result<i64> {
    let w = c.reduce().width()?;
    Ok((w - 1) / 2)
}

pub fn params(c: &Complex, n: i64, m: i64) -> Result<RefilterParams> {
    if n < 2 {
        return input(format!("surgery coefficient N = {n} must be at least 2"));
    }
    let g = genus_bound(c)?;
    if n < 2 * g {
        return Err(Error::Hypothesis(format!("hypothesis N >= 2g violated: N = {n}, g = {g}")));
    }
    let (lo, hi) = base_range(n);
    if m < lo || m > hi {
        return input(format!(
            "m = {m} is outside the base range [{lo}, {hi}] for N = {n}; refilter at m mod N and use extend_spinc"
        ));
    }
    Ok(RefilterParams { n, m, genus_bound: g })
}

pub fn refilter(c: &Complex, n: i64, m: i64) -> Result<Complex> {
    params(c, n, m)?;
    Ok(refilter_unchecked(c, n, m))
}

/// The formula without the hypothesis checks; used where the genus is known.
pub fn refilter_unchecked(c: &Complex, n: i64, m: i64) -> Complex {
    let mut gens = c.gens().to_vec();
    for g in &mut gens {
        (g.i, g.j) = f_m(m, g.i, g.j);
    }
    let mut out = Complex::new(format!("rf({},{n},{m})", c.label), gens, c.arrows().to_vec()).with_tag(c.tag.clone());
    out.tag.add_atom(Atom::Eps1 { n, m }, 1);
    out
}

/// Index m + tN: the same complex with j lowered by t.
pub fn extend_spinc(c: &Complex, t: i64) -> Complex {
    c.shift(0, -t, GradingShift::Known(0))
}

/// Uniform (d, d) shift putting the tower class of grading 0 or 1 at i = 0.
pub fn normalize(c: &Complex) -> Result<Complex> {
    let e = essential_position(c)?;
    Ok(c.shift(-e.i, -e.i, GradingShift::Known(0)))
}

/// Position of the tower class after normalization, (0, delta).
pub fn normalized_position(c: &Complex) -> Result<EssentialPosition> {
    let e = essential_position(c)?;
    Ok(EssentialPosition { gr: e.gr, i: 0, j: e.j - e.i })
}

/// The filtration offset of the mirrored doubled knots, -N = -2n, index m:
/// 0 if m < -2k or m odd below 2k, otherwise -1.
pub fn doubled_delta(k: i64, m: i64) -> i64 {
    if m < -2 * k || (m.rem_euclid(2) == 1 && m < 2 * k) {
        0
    } else {
        -1
    }
}

/// The same offset for the unknot: 0 for m < 0, -1 for m >= 0.
pub fn unknot_delta(m: i64) -> i64 {
    if m < 0 {
        0
    } else {
        -1
    }
}
