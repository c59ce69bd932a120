//! The knots in play: unknot, T(2,2k+1), the untwisted Whitehead double D of
//! the right-handed trefoil, and connected sums and mirrors of these.

use std::fmt;

use crate::complex::{Arrow, Complex, Generator};
use crate::error::{consistency, input, Result};
use crate::gf2;

pub fn unknot_model() -> Complex {
    Complex::new("U", vec![Generator::new("a", 0, 0, 0)], vec![])
}

/// Staircase of T(2,2k+1): x_i at (i, k-i) in grading 0, y_i at (i, k+1-i) in grading 1.
pub fn torus_model(k: usize) -> Complex {
    let k = k as i64;
    let mut gens = Vec::new();
    for i in 0..=k {
        gens.push(Generator::new(format!("x{i}"), 0, i, k - i));
    }
    for i in 1..=k {
        gens.push(Generator::new(format!("y{i}"), 1, i, k + 1 - i));
    }
    let mut arrows = Vec::new();
    for i in 1..=k {
        let y = (k + i) as usize;
        arrows.push(Arrow { from: y, to: (i - 1) as usize, upow: 0 });
        arrows.push(Arrow { from: y, to: i as usize, upow: 0 });
    }
    Complex::new(format!("T(2,{})", 2 * k + 1), gens, arrows)
}

/// The 15-generator model of CFK-infinity of D.
pub fn whitehead_double_model() -> Complex {
    let g = Generator::new;
    let gens = vec![
        g("u1", -1, 0, 1),
        g("u2", -1, 0, 1),
        g("x1", 0, 0, 1),
        g("x2", 0, 0, 1),
        g("v1", -2, 0, 0),
        g("v2", -2, 0, 0),
        g("v3", -2, 0, 0),
        g("v4", -2, 0, 0),
        g("y1", -1, 0, 0),
        g("y2", -1, 0, 0),
        g("y3", -1, 0, 0),
        g("w1", -3, 0, -1),
        g("w2", -3, 0, -1),
        g("z1", -2, 0, -1),
        g("z2", -2, 0, -1),
    ];
    let arrows = [
        ("x2", "y1", 0),
        ("y2", "x1", 1),
        ("y2", "z1", 0),
        ("y3", "x2", 1),
        ("y3", "z2", 0),
        ("z2", "y1", 1),
        ("u1", "v1", 0),
        ("u2", "v2", 0),
        ("v3", "u1", 1),
        ("v3", "w1", 0),
        ("v4", "u2", 1),
        ("v4", "w2", 0),
        ("w1", "v1", 1),
        ("w2", "v2", 1),
    ];
    Complex::from_named("D", gens, &arrows).expect("model names are consistent")
}

/// Generators of the D model spanning its staircase summand.
pub const WHITEHEAD_STAIRCASE: [&str; 3] = ["x1", "y2", "z1"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExpr {
    Unknot,
    /// T(2,q), q odd and at least 3.
    Torus(u32),
    Whitehead,
    Mirror(Box<KnotExpr>),
    Sum(Box<KnotExpr>, Box<KnotExpr>),
    Repeat(u32, Box<KnotExpr>),
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Unknot => write!(f, "U"),
            KnotExpr::Torus(q) => write!(f, "T(2,{q})"),
            KnotExpr::Whitehead => write!(f, "D"),
            KnotExpr::Mirror(e) => write!(f, "m({e})"),
            KnotExpr::Sum(a, b) => write!(f, "{a}#{b}"),
            KnotExpr::Repeat(k, e) => match **e {
                KnotExpr::Sum(..) => write!(f, "{k}*({e})"),
                _ => write!(f, "{k}*{e}"),
            },
        }
    }
}

impl KnotExpr {
    pub fn parse(s: &str) -> Result<KnotExpr> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { toks, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return input(format!("unexpected '{}' at position {} in {s:?}", p.toks[p.pos], p.pos));
        }
        Ok(e)
    }

    /// Pushes mirrors down to the leaves; mirroring distributes over sums.
    pub fn normalized(&self) -> KnotExpr {
        fn go(e: &KnotExpr, flip: bool) -> KnotExpr {
            match e {
                KnotExpr::Mirror(inner) => go(inner, !flip),
                KnotExpr::Sum(a, b) => KnotExpr::Sum(Box::new(go(a, flip)), Box::new(go(b, flip))),
                KnotExpr::Repeat(k, inner) => KnotExpr::Repeat(*k, Box::new(go(inner, flip))),
                KnotExpr::Unknot => KnotExpr::Unknot,
                leaf if flip => KnotExpr::Mirror(Box::new(leaf.clone())),
                leaf => leaf.clone(),
            }
        }
        go(self, false)
    }
}

struct Parser {
    toks: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            input(format!("expected '{c}' at position {}", self.pos))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.toks[start..self.pos].iter().collect();
        s.parse().map_err(|_| crate::error::Error::Input(format!("expected a number at position {start}")))
    }

    fn sum(&mut self) -> Result<KnotExpr> {
        let mut e = self.term()?;
        while self.peek() == Some('#') {
            self.pos += 1;
            let r = self.term()?;
            e = KnotExpr::Sum(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<KnotExpr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.number()?;
                self.eat('*')?;
                if k == 0 {
                    return input("repeat count must be at least 1");
                }
                let inner = self.term()?;
                Ok(KnotExpr::Repeat(k, Box::new(inner)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.eat(')')?;
                Ok(e)
            }
            Some('U') => {
                self.pos += 1;
                Ok(KnotExpr::Unknot)
            }
            Some('D') => {
                self.pos += 1;
                Ok(KnotExpr::Whitehead)
            }
            Some('T') => {
                self.pos += 1;
                self.eat('(')?;
                let p = self.number()?;
                if p != 2 {
                    return input("only T(2,q) torus knots are modelled");
                }
                self.eat(',')?;
                let q = self.number()?;
                self.eat(')')?;
                if q < 3 || q % 2 == 0 {
                    return input(format!("T(2,{q}) needs q odd and at least 3"));
                }
                Ok(KnotExpr::Torus(q))
            }
            Some('m') => {
                self.pos += 1;
                let rest: String = self.toks[self.pos..].iter().take(5).collect();
                if rest.starts_with("irror") {
                    self.pos += 5;
                }
                self.eat('(')?;
                let e = self.sum()?;
                self.eat(')')?;
                Ok(KnotExpr::Mirror(Box::new(e)))
            }
            Some(c) => input(format!("unexpected '{c}' at position {}", self.pos)),
            None => input("unexpected end of expression"),
        }
    }
}

fn eval(e: &KnotExpr) -> Complex {
    match e {
        KnotExpr::Unknot => unknot_model(),
        KnotExpr::Torus(q) => torus_model(((q - 1) / 2) as usize),
        KnotExpr::Whitehead => whitehead_double_model(),
        KnotExpr::Mirror(inner) => eval(inner).dualize(),
        KnotExpr::Sum(a, b) => eval(a).tensor(&eval(b)),
        KnotExpr::Repeat(k, inner) => {
            let base = eval(inner);
            let mut acc = base.clone();
            for _ in 1..*k {
                acc = acc.tensor(&base);
            }
            acc
        }
    }
}

pub fn build_model(e: &KnotExpr) -> Complex {
    eval(&e.normalized()).with_label(e.to_string())
}

pub fn build_model_str(s: &str) -> Result<Complex> {
    Ok(build_model(&KnotExpr::parse(s)?))
}

/// Same homotopy type as `build_model` up to acyclic summands: every copy of D
/// is replaced by its staircase summand and staircase powers are split.
pub fn essential_model(e: &KnotExpr) -> Result<Complex> {
    fn trefoil_count(e: &KnotExpr, flip: bool, acc: &mut (i64, i64), other: &mut Vec<KnotExpr>) {
        match e {
            KnotExpr::Mirror(inner) => trefoil_count(inner, !flip, acc, other),
            KnotExpr::Sum(a, b) => {
                trefoil_count(a, flip, acc, other);
                trefoil_count(b, flip, acc, other);
            }
            KnotExpr::Repeat(k, inner) => {
                for _ in 0..*k {
                    trefoil_count(inner, flip, acc, other);
                }
            }
            KnotExpr::Unknot => {}
            KnotExpr::Whitehead | KnotExpr::Torus(3) => {
                if flip {
                    acc.1 += 1
                } else {
                    acc.0 += 1
                }
            }
            leaf => other.push(if flip { KnotExpr::Mirror(Box::new(leaf.clone())) } else { leaf.clone() }),
        }
    }
    let mut acc = (0, 0);
    let mut other = Vec::new();
    trefoil_count(e, false, &mut acc, &mut other);
    let mut c = unknot_model();
    if acc.0 > 0 {
        c = c.tensor(&split_staircase(acc.0 as usize)?.staircase);
    }
    if acc.1 > 0 {
        c = c.tensor(&split_staircase(acc.1 as usize)?.staircase.dualize());
    }
    for leaf in other {
        c = c.tensor(&eval(&leaf));
    }
    Ok(c.with_label(format!("ess({e})")))
}

#[derive(Clone, Debug)]
pub struct Split {
    pub staircase: Complex,
    pub acyclic: Complex,
}

/// Splits T(2,3)^k into the T(2,2k+1) staircase and an acyclic complement,
/// one tensor factor at a time with the explicit alpha/beta/gamma basis change.
pub fn split_staircase(k: usize) -> Result<Split> {
    if k == 0 {
        return input("split_staircase needs k >= 1");
    }
    let tref = torus_model(1);
    let mut stair = tref.clone();
    let mut acyclic = Complex::empty("A");
    for step in 1..k {
        let (next, new_acyclic) = split_step(&stair, step)?;
        acyclic = acyclic.tensor(&tref).direct_sum(&new_acyclic);
        stair = next;
    }
    acyclic.label = format!("acyclic part of T(2,3)^{k}");
    Ok(Split { staircase: stair.with_label(format!("T(2,{})", 2 * k + 1)), acyclic })
}

/// T(2,2k+1) (x.., y..) times T(2,3) (z0 = x0, z1 = x1, w = y1) in a new basis.
fn split_step(stair: &Complex, k: usize) -> Result<(Complex, Complex)> {
    let prod = stair.tensor(&torus_model(1));
    let idx = |a: &str, b: &str| -> usize { prod.index_of(&format!("{a}.{b}")).expect("product basis element") };
    let x = |i: usize| format!("x{i}");
    let y = |i: usize| format!("y{i}");
    // T(2,3) staircase: x0 at (0,1) is z0, x1 at (1,0) is z1, y1 at (1,1) is w
    let (z0, z1, w) = ("x0", "x1", "y1");

    // new basis, each vector a list of old basis indices, with the id it will carry
    let mut basis: Vec<(String, Vec<usize>)> = Vec::new();
    let mut stair_ids = Vec::new();
    for i in 0..=k {
        basis.push((format!("x{i}"), vec![idx(&x(i), z0)]));
        stair_ids.push(basis.len() - 1);
    }
    basis.push((format!("x{}", k + 1), vec![idx(&x(k), z1)]));
    stair_ids.push(basis.len() - 1);
    for i in 1..=k {
        basis.push((format!("y{i}"), vec![idx(&y(i), z0)]));
        stair_ids.push(basis.len() - 1);
    }
    basis.push((format!("y{}", k + 1), vec![idx(&x(k), w)]));
    stair_ids.push(basis.len() - 1);
    let mut blocks = Vec::new();
    for i in 1..=k {
        let top = basis.len();
        basis.push((format!("yw{i}"), vec![idx(&y(i), w)]));
        basis.push((format!("alpha{}", i - 1), vec![idx(&x(i - 1), w), idx(&y(i), z0)]));
        basis.push((format!("gamma{i}"), vec![idx(&y(i), z1), idx(&x(i), w)]));
        basis.push((format!("beta{}", i - 1), vec![idx(&x(i - 1), z1), idx(&x(i), z0)]));
        blocks.push(top..top + 4);
    }
    if basis.len() != prod.len() {
        return consistency(format!("basis change has {} vectors for {} generators", basis.len(), prod.len()));
    }
    let rebased = change_basis(&prod, &basis)?;
    let staircase = rebased.induced(&stair_ids);
    let block_ids: Vec<usize> = blocks.iter().flat_map(|r| r.clone()).collect();
    let acyclic = rebased.induced(&block_ids);
    if staircase.arrows().len() + acyclic.arrows().len() != rebased.arrows().len() {
        return consistency("basis change did not split off the staircase as a direct summand");
    }
    if staircase.canonical_key() != torus_model(k + 1).canonical_key() {
        return consistency(format!("summand at step {k} is not the T(2,{}) staircase", 2 * k + 3));
    }
    if !acyclic.is_acyclic() {
        return consistency("complement of the staircase has homology");
    }
    Ok((staircase, acyclic))
}

/// Rewrites the differential in a new homogeneous basis with U-power zero
/// coefficients. Exponents of the new arrows are forced by the gradings.
pub fn change_basis(c: &Complex, basis: &[(String, Vec<usize>)]) -> Result<Complex> {
    let n = c.len();
    let mut gens = Vec::with_capacity(n);
    for (id, v) in basis {
        let g0 = &c.gens()[v[0]];
        if v.iter().any(|&k| {
            let g = &c.gens()[k];
            (g.gr, g.i, g.j) != (g0.gr, g0.i, g0.j)
        }) {
            return consistency(format!("basis vector {id} is not homogeneous"));
        }
        gens.push(Generator::new(id.clone(), g0.gr, g0.i, g0.j));
    }
    // P has the new basis as columns; the new differential is P^-1 d P
    let p: Vec<Vec<u32>> = basis.iter().map(|(_, v)| gf2::normalize(v.iter().map(|&k| k as u32).collect())).collect();
    let pinv = invert(&p, n)?;
    let out = c.out_lists();
    let mut arrows = Vec::new();
    for (b, col) in p.iter().enumerate() {
        let image: Vec<u32> = col.iter().flat_map(|&k| out[k as usize].iter().map(|&(t, _)| t as u32)).collect();
        let image = gf2::normalize(image);
        // express the image in the new basis
        let mut coords = Vec::new();
        for t in image {
            coords.extend(pinv[t as usize].iter().copied());
        }
        for t in gf2::normalize(coords) {
            let t = t as usize;
            let e = (gens[t].gr - gens[b].gr + 1) / 2;
            arrows.push(Arrow { from: b, to: t, upow: e });
        }
    }
    let out = Complex::new(c.label.clone(), gens, arrows).with_tag(c.tag.clone());
    if !out.validate().is_ok() {
        return consistency(format!("basis change produced an invalid complex: {}", out.validate()));
    }
    Ok(out)
}

/// Rows of the inverse: entry k lists the new-basis coordinates of old basis vector k.
fn invert(cols: &[Vec<u32>], n: usize) -> Result<Vec<Vec<u32>>> {
    // Gauss-Jordan on dense bit rows, small matrices only
    let mut m: Vec<Vec<bool>> = vec![vec![false; 2 * n]; n];
    for (c, col) in cols.iter().enumerate() {
        for &r in col {
            m[r as usize][c] = true;
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        row[n + r] = true;
    }
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c]) else {
            return consistency("basis change matrix is singular");
        };
        m.swap(c, piv);
        for r in 0..n {
            if r != c && m[r][c] {
                let src = m[c].clone();
                for (x, s) in m[r].iter_mut().zip(src) {
                    *x ^= s;
                }
            }
        }
    }
    // m is now [I | P^-1]; old vector k has coordinates column k of P^-1
    let mut rows = vec![Vec::new(); n];
    for (r, row) in m.iter().enumerate() {
        for k in 0..n {
            if row[n + k] {
                rows[k].push(r as u32);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn torus_model_shapes() {
        let t = torus_model(1);
        let pos: Vec<(i64, i64)> = t.gens().iter().map(|g| (g.i, g.j)).collect();
        assert_eq!(pos, vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(torus_model(2).width().unwrap(), 5);
        for k in 1..=5 {
            assert!(torus_model(k).validate().is_ok());
            assert_eq!(torus_model(k).homology_rank(), 1);
        }
    }

    #[test]
    fn whitehead_slices() {
        let d = whitehead_double_model();
        assert!(d.validate().is_ok());
        assert_eq!(d.slice_homology(1), BTreeMap::from([(-1, 2), (0, 2)]));
        assert_eq!(d.slice_homology(0), BTreeMap::from([(-2, 4), (-1, 3)]));
        assert_eq!(d.slice_homology(-1), BTreeMap::from([(-3, 2), (-2, 2)]));
        assert_eq!(d.homology_rank(), 1);
        assert_eq!(d.width().unwrap(), 3);
        assert_eq!(d.reduce(), d);
    }

    #[test]
    fn whitehead_splits_as_trefoil_plus_acyclic() {
        let d = whitehead_double_model();
        let t = d.induced_by_ids(&WHITEHEAD_STAIRCASE).unwrap();
        assert_eq!(t.canonical_key(), torus_model(1).canonical_key());
        let rest: Vec<usize> =
            (0..d.len()).filter(|&k| !WHITEHEAD_STAIRCASE.contains(&d.gens()[k].id.as_str())).collect();
        let a = d.induced(&rest);
        assert_eq!(a.len(), 12);
        assert!(a.is_acyclic());
        assert_eq!(t.arrows().len() + a.arrows().len(), d.arrows().len());
    }

    #[test]
    fn parser_accepts_the_grammar() {
        for (s, shown) in [
            ("U", "U"),
            ("T(2,5)", "T(2,5)"),
            ("m(2*D)", "m(2*D)"),
            ("D#m(D)", "D#m(D)"),
            ("3*D", "3*D"),
            ("mirror(T(2,3))", "m(T(2,3))"),
        ] {
            assert_eq!(KnotExpr::parse(s).unwrap().to_string(), shown);
        }
        for bad in ["T(2,4)", "T(3,5)", "0*D", "D#", "X", "m(D"] {
            assert!(KnotExpr::parse(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn build_examples() {
        let c = build_model_str("D#m(D)").unwrap();
        assert_eq!(c.len(), 225);
        assert_eq!(c.homology_rank(), 1);
        assert!(build_model_str("2*D").unwrap().width().unwrap() <= 5);
        assert_eq!(
            build_model_str("m(T(2,5))").unwrap().canonical_key(),
            torus_model(2).dualize().canonical_key()
        );
    }

    #[test]
    fn mirror_distributes_over_sum() {
        let a = build_model_str("m(T(2,3)#T(2,5))").unwrap();
        let b = torus_model(1).tensor(&torus_model(2)).dualize();
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn split_counts() {
        let s1 = split_staircase(1).unwrap();
        assert!(s1.acyclic.is_empty());
        let s2 = split_staircase(2).unwrap();
        assert_eq!((s2.staircase.len(), s2.acyclic.len()), (5, 4));
        let s3 = split_staircase(3).unwrap();
        assert_eq!((s3.staircase.len(), s3.acyclic.len()), (7, 20));
        assert!(s3.acyclic.validate().is_ok());
    }
}
