//! Symbolic grading shifts.
//!
//! Absolute gradings of the complexes in play are never pinned down, so
//! every complex carries a formal sum of unknown shifts. Two d-values may
//! only be subtracted when their tags agree.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Shift introduced by refiltering for surgery coefficient N at index m.
    Eps1 { n: i64, m: i64 },
    /// Shift of a large-surgery term for coefficient N at index m.
    Eps2 { n: i64, m: i64 },
    /// Unknown anchor of a named complex.
    Base(String),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eps1 { n, m } => write!(f, "eps1({n},{m})"),
            Atom::Eps2 { n, m } => write!(f, "eps2({n},{m})"),
            Atom::Base(l) => write!(f, "base({l})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShiftTag {
    atoms: BTreeMap<Atom, i64>,
    known: i64,
}

impl ShiftTag {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut t = Self::zero();
        t.add_atom(a, 1);
        t
    }

    pub fn known(k: i64) -> Self {
        ShiftTag { atoms: BTreeMap::new(), known: k }
    }

    pub fn add_atom(&mut self, a: Atom, coef: i64) {
        let c = self.atoms.entry(a.clone()).or_insert(0);
        *c += coef;
        if *c == 0 {
            self.atoms.remove(&a);
        }
    }

    pub fn add_known(&mut self, k: i64) {
        self.known += k;
    }

    pub fn known_part(&self) -> i64 {
        self.known
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, i64)> {
        self.atoms.iter().map(|(a, c)| (a, *c))
    }

    pub fn plus(&self, other: &ShiftTag) -> ShiftTag {
        let mut t = self.clone();
        for (a, c) in other.atoms() {
            t.add_atom(a.clone(), c);
        }
        t.known += other.known;
        t
    }

    pub fn minus(&self, other: &ShiftTag) -> ShiftTag {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> ShiftTag {
        ShiftTag {
            atoms: self.atoms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
            known: -self.known,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.known == 0
    }

    pub fn is_symbolic(&self) -> bool {
        !self.atoms.is_empty()
    }
}

impl fmt::Display for ShiftTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in &self.atoms {
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{a}")?;
            } else {
                write!(f, "{sign}{mag}*{a}")?;
            }
            first = false;
        }
        if self.known != 0 || first {
            if first {
                write!(f, "{}", self.known)?;
            } else if self.known > 0 {
                write!(f, "+{}", self.known)?;
            } else {
                write!(f, "{}", self.known)?;
            }
        }
        Ok(())
    }
}

// JSON form: a flat list of terms, e.g.
// [{"atom":"eps1","n":8,"m":1,"coef":1},{"atom":"known","coef":-2}]
#[derive(Serialize, Deserialize)]
struct TagTerm {
    atom: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    label: Option<String>,
    coef: i64,
}

impl Serialize for ShiftTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut terms = Vec::new();
        for (a, c) in &self.atoms {
            let (atom, n, m, label) = match a {
                Atom::Eps1 { n, m } => ("eps1", Some(*n), Some(*m), None),
                Atom::Eps2 { n, m } => ("eps2", Some(*n), Some(*m), None),
                Atom::Base(l) => ("base", None, None, Some(l.clone())),
            };
            terms.push(TagTerm { atom: atom.into(), n, m, label, coef: *c });
        }
        if self.known != 0 {
            terms.push(TagTerm { atom: "known".into(), n: None, m: None, label: None, coef: self.known });
        }
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ShiftTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TagTerm>::deserialize(d)?;
        let mut t = ShiftTag::zero();
        for term in terms {
            let need = |v: Option<i64>, what: &str| {
                v.ok_or_else(|| D::Error::custom(format!("tag atom {} needs field {what}", term.atom)))
            };
            match term.atom.as_str() {
                "eps1" => t.add_atom(Atom::Eps1 { n: need(term.n, "n")?, m: need(term.m, "m")? }, term.coef),
                "eps2" => t.add_atom(Atom::Eps2 { n: need(term.n, "n")?, m: need(term.m, "m")? }, term.coef),
                "base" => {
                    let l = term.label.clone().ok_or_else(|| D::Error::custom("base atom needs label"))?;
                    t.add_atom(Atom::Base(l), term.coef)
                }
                "known" => t.known += term.coef,
                other => return Err(D::Error::custom(format!("unknown tag atom {other}"))),
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_tags_cancel() {
        let mut a = ShiftTag::atom(Atom::Eps1 { n: 8, m: 1 });
        a.add_atom(Atom::Eps2 { n: 8, m: 4 }, 1);
        let b = a.clone();
        assert!(a.minus(&b).is_zero());
        assert_eq!(a, b);
    }

    #[test]
    fn coefficients_collapse_to_nothing() {
        let mut a = ShiftTag::atom(Atom::Base("x".into()));
        a.add_atom(Atom::Base("x".into()), -1);
        assert!(a.is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let mut a = ShiftTag::atom(Atom::Eps1 { n: 4, m: -1 });
        a.add_atom(Atom::Base("T(2,5)".into()), 2);
        a.add_known(-3);
        let s = serde_json::to_string(&a).unwrap();
        let b: ShiftTag = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "eps1(4,-1)+2*base(T(2,5))-3");
    }
}
