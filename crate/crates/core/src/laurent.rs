//! Sparse multivariate Laurent polynomials with big-integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division is not exact")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid variable name {0:?}")]
    InvalidVarId(String),
    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
}

/// Identifier of an indeterminate. Ordered by its string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(Arc<str>);

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && !matches!(c, '+' | '-' | '*' | '^' | '"' | ',' | '\\')
}

impl VarId {
    /// Accepts names that start with a letter or `_` and avoid whitespace and `+-*^",\`.
    pub fn new(name: &str) -> Result<Self, LaurentError> {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if is_ident_start(c) && chars.all(is_ident_char) => Ok(VarId(Arc::from(name))),
            _ => Err(LaurentError::InvalidVarId(name.to_string())),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Panics on an invalid name; meant for literals.
impl From<&str> for VarId {
    fn from(name: &str) -> Self {
        VarId::new(name).unwrap_or_else(|_| panic!("invalid variable name {name:?}"))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A Laurent monomial: sorted `(variable, nonzero exponent)` pairs.
///
/// `Ord` is the graded lexicographic order: total degree first, then the
/// exponent of the smallest variable, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarId, i64)>>(pairs: I) -> Self {
        let mut map: BTreeMap<VarId, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|(_, e)| *e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &VarId) -> i64 {
        match self.exps.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, i64)> {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|(_, e)| *e > 0)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|(v, e)| (v.clone(), -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a + b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a - b)
    }

    /// Componentwise minimum, with absent variables counted as exponent 0.
    pub fn meet(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.min(b))
    }

    /// Componentwise maximum, with absent variables counted as exponent 0.
    pub fn join(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.max(b))
    }

    /// True if `other / self` has no negative exponent.
    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).exps.iter().all(|(_, e)| *e > 0)
    }

    /// The part with negative exponents, inverted (so it has positive exponents).
    pub fn denominator(&self) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .filter(|(_, e)| *e < 0)
                .map(|(v, e)| (v.clone(), -e))
                .collect(),
        }
    }

    fn merge(&self, other: &Monomial, op: impl Fn(i64, i64) -> i64) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() || j < b.len() {
            let (v, e) = match (a.get(i), b.get(j)) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, op(*ea, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, op(0, *eb))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, op(*ea, *eb))
                    }
                },
                (Some((va, ea)), None) => {
                    i += 1;
                    (va, op(*ea, 0))
                }
                (None, Some((vb, eb))) => {
                    j += 1;
                    (vb, op(0, *eb))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((v.clone(), e));
            }
        }
        Monomial { exps: out }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return ea.cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(eb),
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Laurent polynomial over the integers. Terms are kept in graded-lex
/// order, so the last entry is the leading term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The integer value, if this is a constant (zero included).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The variable, if this is exactly a single variable with coefficient 1.
    pub fn as_var(&self) -> Option<&VarId> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        match m.exps.as_slice() {
            [(v, 1)] if c.is_one() => Some(v),
            _ => None,
        }
    }

    /// True if no term has a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.exps.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// True iff every stored coefficient is positive.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// Componentwise minimum exponent over all terms (a variable absent from
    /// a term counts as exponent 0 there).
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.meet(m))
    }

    /// Writes `self` as `numerator / denominator` with a polynomial numerator
    /// and a monomial denominator.
    pub fn split_denominator(&self) -> (LaurentPoly, Monomial) {
        let den = self.min_monomial().meet(&Monomial::one()).inverse();
        (self.shift(&den), den)
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, d)| (k.clone(), d * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Exact quotient in the Laurent ring.
    ///
    /// Both operands are shifted by their componentwise minimal monomials to
    /// become ordinary polynomials without monomial factors; the quotient of
    /// those is then a polynomial and is found by leading-term division.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if den.terms.len() == 1 {
            let (m, c) = den.terms.iter().next().unwrap();
            let inv = m.inverse();
            let mut terms = BTreeMap::new();
            for (k, d) in &self.terms {
                let (q, r) = d.div_rem(c);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible);
                }
                terms.insert(k.mul(&inv), q);
            }
            return Ok(LaurentPoly { terms });
        }
        let md = den.min_monomial();
        let mn = self.min_monomial();
        let d = den.shift(&md.inverse());
        let mut r = self.shift(&mn.inverse());
        let (lm_d, lc_d) = d.terms.last_key_value().unwrap();
        let mut q = LaurentPoly::zero();
        while let Some((lm_r, lc_r)) = r.terms.last_key_value() {
            if !lm_d.divides(lm_r) {
                return Err(LaurentError::NotDivisible);
            }
            let (c, rem) = lc_r.div_rem(lc_d);
            if !rem.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let m = lm_r.div(lm_d);
            for (dm, dc) in &d.terms {
                r.add_term(dm.mul(&m), -(dc * &c));
            }
            q.terms.insert(m, c);
        }
        Ok(q.shift(&mn.div(&md)))
    }

    /// Replaces variables by polynomials; variables without an entry stay.
    /// Only valid when every substituted variable occurs with nonnegative
    /// exponent; callers handle denominators themselves.
    pub fn substitute_polynomial(&self, images: &BTreeMap<VarId, LaurentPoly>) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut value = LaurentPoly::constant(c.clone());
            for (v, e) in m.iter() {
                match images.get(v) {
                    Some(img) if e > 0 => value = &value * &img.pow(e as u32),
                    Some(_) => panic!("substitute_polynomial: negative exponent of {v}"),
                    None => kept.push((v.clone(), e)),
                }
            }
            let value = value.shift(&Monomial { exps: kept });
            for (k, d) in value.terms {
                out.add_term(k, d);
            }
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<VarId> for LaurentPoly {
    fn from(v: VarId) -> Self {
        LaurentPoly::var(v)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

/// Canonical text: terms in descending graded-lex order, e.g. `x1*x2^-1 + 2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TextParser::new(s).poly()
    }
}

struct TextParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TextParser<'a> {
    fn new(src: &'a str) -> Self {
        TextParser { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T, LaurentError> {
        Err(LaurentError::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn poly(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        let mut negative = false;
        if self.peek() == Some('-') {
            negative = true;
            self.bump();
            self.skip_ws();
        }
        loop {
            let t = self.term()?;
            out = if negative { &out - &t } else { &out + &t };
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return self.fail("'+', '-' or end of input"),
            }
            self.bump();
            self.skip_ws();
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn term(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut coef = BigInt::one();
        let mut factors = Vec::new();
        if let Some(d) = self.digits() {
            coef = d.parse().expect("ascii digits");
        } else {
            factors.push(self.factor()?);
        }
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.peek() != Some('*') {
                self.pos = save;
                break;
            }
            self.bump();
            self.skip_ws();
            factors.push(self.factor()?);
        }
        Ok(LaurentPoly::term(Monomial::from_pairs(factors), coef))
    }

    fn factor(&mut self) -> Result<(VarId, i64), LaurentError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => self.bump(),
            _ => return self.fail("a variable or an integer"),
        }
        while self.peek().is_some_and(is_ident_char) {
            self.bump();
        }
        let v = VarId::new(&self.src[start..self.pos])?;
        let save = self.pos;
        self.skip_ws();
        if self.peek() != Some('^') {
            self.pos = save;
            return Ok((v, 1));
        }
        self.bump();
        self.skip_ws();
        let negative = self.peek() == Some('-');
        if negative {
            self.bump();
        }
        let Some(d) = self.digits() else {
            return self.fail("an integer exponent");
        };
        let Ok(e) = d.parse::<i64>() else {
            return self.fail("an exponent that fits in 64 bits");
        };
        Ok((v, if negative { -e } else { e }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert!((&p("x1") + &p("-x1")).is_zero());
        assert_eq!(&p("x1*x2^-1") + &p("1"), p("x1*x2^-1 + 1"));
        assert_eq!(&p("2*x1 + x2") + &p("3*x1"), p("5*x1 + x2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x1 + x2") * &p("x2^-1"), p("x1*x2^-1 + 1"));
        assert_eq!(&p("y1 + 1") * &p("y2 + 1"), p("y1*y2 + y1 + y2 + 1"));
        assert!((&p("x1 + 3") * &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn exact_div_examples() {
        assert_eq!(p("y1*y2 + y1 + y2 + 1").exact_div(&p("y1 + 1")).unwrap(), p("y2 + 1"));
        assert_eq!(p("x1*x3 + 1").exact_div(&p("x2")).unwrap(), p("x1*x3*x2^-1 + x2^-1"));
        assert_eq!(p("x1 + x2").exact_div(&p("x1 + 1")), Err(LaurentError::NotDivisible));
        assert_eq!(
            p("x1").exact_div(&LaurentPoly::zero()),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn exact_div_checks_integer_coefficients() {
        assert_eq!(p("3*x1 + 2").exact_div(&p("2")), Err(LaurentError::NotDivisible));
        assert_eq!(p("4*x1 + 2").exact_div(&p("2")).unwrap(), p("2*x1 + 1"));
        assert_eq!(p("2*x + 2").exact_div(&p("2*x + 2")).unwrap(), p("1"));
        assert_eq!(p("x + 1").exact_div(&p("2*x + 2")), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn exact_div_with_negative_exponents() {
        let a = p("x1^-2*x2 + x3^-1");
        let b = p("x1 + x2^-1*x3 + 7");
        assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn positivity_examples() {
        assert!(p("x1*x2^-1 + 1").has_nonnegative_coefficients());
        assert!(!p("x1 - x2").has_nonnegative_coefficients());
        let e = p("x1*x3 + x2 + 1").exact_div(&p("x2*x3")).unwrap();
        assert!(e.has_nonnegative_coefficients());
        assert_eq!(e, p("x1*x2^-1 + x2^-1*x3^-1 + x3^-1"));
    }

    #[test]
    fn graded_lex_order() {
        let m = |s: &str| p(s).terms().next().unwrap().0.clone();
        assert!(m("x1^2") > m("x1*x2"));
        assert!(m("x1*x2") > m("x2^2"));
        assert!(m("x2^3") > m("x1^2"));
        assert!(m("x1") > m("x2"));
        assert!(m("x1") > m("1"));
        assert!(m("1") > m("x1^-1"));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("1 + y1 + y2").to_string(), "y1 + y2 + 1");
        assert_eq!(p(" -1 +  2 * x^-1*y").to_string(), "-1 + 2*x^-1*y");
        assert_eq!(p("x^-1 - 3*y^2").to_string(), "-3*y^2 + x^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("x'1^3 * a(0;1/2)").to_string(), "a(0;1/2)*x'1^3");
        assert_eq!(p("x*x^-1").to_string(), "1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("x +".parse::<LaurentPoly>(), Err(LaurentError::Parse { .. })));
        assert!(matches!(
            "2x".parse::<LaurentPoly>(),
            Err(LaurentError::Parse { offset: 1, .. })
        ));
        assert!(matches!("x^".parse::<LaurentPoly>(), Err(LaurentError::Parse { .. })));
        assert!("".parse::<LaurentPoly>().is_err());
        assert!(VarId::new("1x").is_err());
        assert!(VarId::new("a b").is_err());
        assert!(VarId::new("x-1").is_err());
    }

    #[test]
    fn split_denominator_recombines() {
        let q = p("x1*x2^-2 + x3^-1 + 4");
        assert_eq!(p("x1^2 + x1").min_monomial().to_string(), "x1");
        assert_eq!(p("x1 + 1").exact_div(&p("x1^2 + x1")).unwrap(), p("x1^-1"));
        let (n, d) = q.split_denominator();
        assert!(n.is_polynomial());
        assert_eq!(d.to_string(), "x2^2*x3");
        assert_eq!(n.shift(&d.inverse()), q);
    }
}
