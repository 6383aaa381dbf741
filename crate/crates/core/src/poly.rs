//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are stored sorted by descending grevlex, with no zero coefficients
//! and no repeated monomials; every constructor restores that invariant.
//! Monomial orders other than grevlex exist as comparison functions only,
//! the Groebner engine re-sorts its working copies under the active order.

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use num_bigint::BigInt;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

/// Exponent vector. Length always equals the ring's variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u32; 10]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self; caller guarantees divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variable indices with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Block order eliminating the first `k` variables: grevlex on the first
    /// block, ties broken by grevlex on the rest.
    Elimination(usize),
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            // smaller rightmost exponent wins in grevlex
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex_slice(&a.0, &b.0),
            MonomialOrder::Lex => {
                for i in 0..a.0.len() {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elimination(k) => grevlex_slice(&a.0[..*k], &b.0[..*k])
                .then_with(|| grevlex_slice(&a.0[*k..], &b.0[*k..])),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grevlex" => Ok(MonomialOrder::GrevLex),
            "lex" => Ok(MonomialOrder::Lex),
            _ => Err(Error::Parse(format!("unknown monomial order {s:?}"))),
        }
    }
}

/// Polynomial ring context: a field plus named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: FieldSpec,
    pub names: Vec<String>,
}

impl PolyRing {
    /// Variables x1..xn.
    pub fn plain(field: FieldSpec, n: usize) -> Arc<Self> {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Arc::new(PolyRing { field, names })
    }

    /// Variables x1..xn, y1..yn.
    pub fn xy(field: FieldSpec, n: usize) -> Arc<Self> {
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        names.extend((1..=n).map(|i| format!("y{i}")));
        Arc::new(PolyRing { field, names })
    }

    pub fn with_names(field: FieldSpec, names: Vec<String>) -> Arc<Self> {
        Arc::new(PolyRing { field, names })
    }

    /// Same ring with one extra variable appended (last in the order).
    pub fn extended(ring: &Arc<PolyRing>, extra: &str) -> Arc<Self> {
        let mut names = ring.names.clone();
        names.push(extra.to_string());
        Arc::new(PolyRing { field: ring.field.clone(), names })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }
}

pub fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone)]
pub struct Polynomial {
    pub ring: Arc<PolyRing>,
    /// Sorted descending grevlex; no zero coefficients.
    terms: Vec<(Monomial, FieldScalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Polynomial::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldScalar) -> Self {
        if ring.field.is_zero(&c) {
            return Polynomial::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i, 1), ring.field.one())],
        }
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, FieldScalar)>) -> Self {
        let mut p = Polynomial { ring: ring.clone(), terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let field = self.ring.field.clone();
        self.terms
            .sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, FieldScalar)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = field.add(&last.1, &c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !field.is_zero(c));
        self.terms = out;
    }

    pub fn terms(&self) -> &[(Monomial, FieldScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value of a constant polynomial; None if any variable appears.
    pub fn constant_value(&self) -> Option<FieldScalar> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .first()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| self.ring.field.zero()),
        )
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the storage order (grevlex).
    pub fn leading_term(&self) -> Option<&(Monomial, FieldScalar)> {
        self.terms.first()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch in add");
        let field = &self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match MonomialOrder::GrevLex.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&self.terms[i].1, &other.terms[j].1);
                    if !field.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        let field = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, c: &FieldScalar) -> Polynomial {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), field.mul(k, c))).collect(),
        }
    }

    /// Multiplication by a single term keeps the term list sorted.
    pub fn mul_term(&self, mono: &Monomial, c: &FieldScalar) -> Polynomial {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), field.mul(k, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch in mul");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = &self.ring.field;
        let mut acc: Vec<(Monomial, FieldScalar)> =
            Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (m2, c2) in &other.terms {
                acc.push((m.mul(m2), field.mul(c, c2)));
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    /// Repeated squaring.
    pub fn pow(&self, e: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = &self.ring.field;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            let c2 = field.mul(c, &field.from_i64(e as i64));
            terms.push((m2, c2));
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn evaluate(&self, point: &[FieldScalar]) -> Result<FieldScalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "evaluate needs {} coordinates, got {}",
                self.ring.nvars(),
                point.len()
            )));
        }
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&point[i], e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Ring map sending variable i to images[i]; the result lives in the
    /// images' ring. Powers are cached per variable.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "substitute needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        for img in images {
            if !same_ring(&img.ring, target) {
                return Err(Error::RingMismatch("substitution image in wrong ring".into()));
            }
        }
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u64))
                    .clone();
                t = t.mul(&p);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> FieldScalar {
        self.terms
            .iter()
            .find(|(m2, _)| m2 == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Monic under grevlex; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.field.inv(c).expect("leading coefficient nonzero");
                self.mul_scalar(&inv)
            }
        }
    }
}

/// The coordinate ring of X x X: two blocks of the ambient variables.
/// Block one keeps the x-names, block two is the y-copy.
#[derive(Debug, Clone)]
pub struct DoubledRing {
    pub ring: Arc<PolyRing>,
    pub n: usize,
}

impl DoubledRing {
    pub fn new(ambient: &Arc<PolyRing>) -> Self {
        let n = ambient.nvars();
        DoubledRing { ring: PolyRing::xy(ambient.field.clone(), n), n }
    }

    fn shift(&self, f: &Polynomial, offset: usize) -> Polynomial {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = SmallVec::from_elem(0u32, 2 * self.n);
                for (i, &x) in m.0.iter().enumerate() {
                    e[i + offset] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// f(x_1..x_n) as an element of the doubled ring.
    pub fn embed_x(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.ring.nvars(), self.n, "ambient arity mismatch");
        self.shift(f, 0)
    }

    /// f(y_1..y_n) as an element of the doubled ring.
    pub fn embed_y(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.ring.nvars(), self.n, "ambient arity mismatch");
        self.shift(f, self.n)
    }

    /// delta(f) = f(x) - f(y). Linear, kills constants, and satisfies
    /// delta(fg) = delta(f) g(x) + f(x) delta(g) - delta(f) delta(g).
    pub fn delta(&self, f: &Polynomial) -> Polynomial {
        self.embed_x(f).sub(&self.embed_y(f))
    }
}

// ---------------------------------------------------------------------------
// parsing and printing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    name_idx: HashMap<&'a str, usize>,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Arc<PolyRing>, input: &str) -> Self {
        let name_idx = ring
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        Parser { ring, name_idx, chars: input.chars().collect(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at offset {}", self.pos)));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
    }

    fn parse_ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn parse_exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        if self.peek() == Some('-') {
            return Err(Error::Parse("negative exponents are not allowed".into()));
        }
        let e = self.parse_uint()?;
        u32::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))
    }

    /// factor := uint [/ uint] | name [^ uint]
    fn parse_factor(&mut self) -> Result<Polynomial> {
        let field = &self.ring.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint()?;
                if self.peek() == Some('/') {
                    self.bump();
                    let den = self.parse_uint()?;
                    let s = field.from_fraction(&num, &den)?;
                    Ok(Polynomial::constant(self.ring, s))
                } else {
                    Ok(Polynomial::constant(self.ring, field.from_bigint(&num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.parse_ident();
                let exp = if self.peek() == Some('^') {
                    self.bump();
                    self.parse_exponent()?
                } else {
                    1
                };
                if let Some(&i) = self.name_idx.get(name.as_str()) {
                    Ok(Polynomial::from_terms(
                        self.ring,
                        vec![(Monomial::var(self.ring.nvars(), i, exp), field.one())],
                    ))
                } else if name == "a" {
                    let g = field.generator()?;
                    Ok(Polynomial::constant(self.ring, field.pow(&g, exp as u64)))
                } else {
                    Err(Error::Parse(format!("unknown variable {name:?}")))
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?} in term"))),
        }
    }

    /// term := factor (* factor)*
    fn parse_term(&mut self) -> Result<Polynomial> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some('*') {
            self.bump();
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                self.bump();
                negate = true;
            }
            Some('+') => {
                self.bump();
            }
            None => return Err(Error::Parse("empty polynomial".into())),
            _ => {}
        }
        loop {
            let t = self.parse_term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => {
                    self.bump();
                    negate = false;
                }
                Some('-') => {
                    self.bump();
                    negate = true;
                }
                None => break,
                Some(c) => return Err(Error::Parse(format!("unexpected character {c:?}"))),
            }
        }
        Ok(acc)
    }
}

pub fn parse_poly(ring: &Arc<PolyRing>, input: &str) -> Result<Polynomial> {
    Parser::new(ring, input).parse_poly()
}

impl Polynomial {
    /// Render with terms sorted descending under `order` rather than the
    /// internal storage order; the leading term comes first.
    pub fn to_string_in(&self, order: MonomialOrder) -> String {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        render_terms(&self.ring, &terms)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_terms(&self.ring, &self.terms))
    }
}

fn render_terms(ring: &PolyRing, terms: &[(Monomial, FieldScalar)]) -> String {
    {
        if terms.is_empty() {
            return "0".to_string();
        }
        let field = &ring.field;
        let mut out = String::new();
        for (idx, (m, c)) in terms.iter().enumerate() {
            // negative rationals print with a binding minus
            let (neg, c_abs) = match c {
                FieldScalar::Rat(r) if r < &num_rational::BigRational::from(BigInt::from(0)) => {
                    (true, field.neg(c))
                }
                _ => (false, c.clone()),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_str = field.format_scalar(&c_abs);
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() {
                factors.push(coeff_str);
            } else {
                if coeff_str != "1" {
                    if field.scalar_needs_parens(&c_abs) {
                        factors.push(format!("({coeff_str})"));
                    } else {
                        factors.push(coeff_str);
                    }
                }
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if e == 1 {
                        factors.push(ring.names[i].clone());
                    } else {
                        factors.push(format!("{}^{}", ring.names[i], e));
                    }
                }
            }
            write!(out, "{}", factors.join("*")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7_ring(n: usize) -> Arc<PolyRing> {
        PolyRing::plain(FieldSpec::parse("F7").unwrap(), n)
    }

    #[test]
    fn parse_print_round_trip() {
        let r = f7_ring(4);
        let s = "x1^3 + x2*x3 + x3*x4 + x4^2";
        let p = parse_poly(&r, s).unwrap();
        assert_eq!(p.to_string(), s);
        assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_rational_coefficients() {
        let r = PolyRing::plain(FieldSpec::Rationals, 2);
        let p = parse_poly(&r, "2/3*x1^2*x2 - x2 + 1").unwrap();
        assert_eq!(p.to_string(), "2/3*x1^2*x2 - x2 + 1");
        let q = parse_poly(&r, "-x1 - 1/2").unwrap();
        assert_eq!(q.to_string(), "-x1 - 1/2");
    }

    #[test]
    fn parse_rejections() {
        let r = f7_ring(4);
        assert!(matches!(parse_poly(&r, "x1^-2"), Err(Error::Parse(_))));
        assert!(matches!(parse_poly(&r, "x5"), Err(Error::Parse(_))));
        assert!(matches!(parse_poly(&r, "a + x1"), Err(Error::Parse(_)))); // F7 has no generator
        assert!(matches!(parse_poly(&r, ""), Err(Error::Parse(_))));
        assert!(matches!(parse_poly(&r, "x1 + + x2"), Err(Error::Parse(_))));
    }

    #[test]
    fn extension_generator_in_coefficients() {
        let r = PolyRing::plain(FieldSpec::parse("F16:x^4+x+1").unwrap(), 2);
        let p = parse_poly(&r, "a^4*x1 + a*x2").unwrap();
        // a^4 = a + 1, which needs parens in coefficient position
        assert_eq!(p.to_string(), "(a+1)*x1 + a*x2");
    }

    #[test]
    fn grevlex_storage_order() {
        let r = PolyRing::plain(FieldSpec::Rationals, 2);
        let p = parse_poly(&r, "x2^2 + x1*x2 + x1^2 + x1").unwrap();
        assert_eq!(p.to_string(), "x1^2 + x1*x2 + x2^2 + x1");
    }

    #[test]
    fn lex_vs_grevlex() {
        let a = Monomial(SmallVec::from_slice(&[1, 0])); // x1
        let b = Monomial(SmallVec::from_slice(&[0, 5])); // x2^5
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b), Ordering::Less);
        // elimination of the first variable: anything with x1 beats pure x2
        assert_eq!(MonomialOrder::Elimination(1).cmp(&a, &b), Ordering::Greater);
    }

    #[test]
    fn arithmetic_and_pow() {
        let rq = PolyRing::plain(FieldSpec::Rationals, 2);
        let p = parse_poly(&rq, "x1 + x2").unwrap();
        assert_eq!(p.pow(2).to_string(), "x1^2 + 2*x1*x2 + x2^2");
        let r2 = PolyRing::plain(FieldSpec::parse("F2").unwrap(), 2);
        let q = parse_poly(&r2, "x1 + x2").unwrap();
        assert_eq!(q.pow(2).to_string(), "x1^2 + x2^2");
        let one = parse_poly(&r2, "x1 + 1").unwrap();
        assert_eq!(one.pow(4).to_string(), "x1^4 + 1");
    }

    #[test]
    fn derivative_respects_characteristic() {
        let rq = PolyRing::plain(FieldSpec::Rationals, 2);
        let p = parse_poly(&rq, "x1^3 + x2").unwrap();
        assert_eq!(p.derivative(0).to_string(), "3*x1^2");
        let r3 = PolyRing::plain(FieldSpec::parse("F3").unwrap(), 2);
        let q = parse_poly(&r3, "x1^3 + x2").unwrap();
        assert!(q.derivative(0).is_zero());
    }

    #[test]
    fn evaluate_at_points() {
        let r = f7_ring(4);
        let h = parse_poly(&r, "x1^3 + x2*x3 + x3*x4 + x4^2").unwrap();
        let f7 = &r.field;
        let origin = vec![f7.zero(), f7.zero(), f7.zero(), f7.zero()];
        assert!(f7.is_zero(&h.evaluate(&origin).unwrap()));
        let pt = vec![f7.from_i64(1), f7.from_i64(2), f7.from_i64(3), f7.from_i64(1)];
        // 1 + 6 + 3 + 1 = 11 = 4 mod 7
        assert_eq!(h.evaluate(&pt).unwrap(), f7.from_i64(4));
        assert!(h.evaluate(&origin[..3]).is_err());
    }

    #[test]
    fn delta_basics() {
        let r = f7_ring(2);
        let d = DoubledRing::new(&r);
        let f = parse_poly(&r, "x1*x2").unwrap();
        assert_eq!(d.delta(&f).to_string(), "x1*x2 + 6*y1*y2");
        // constants die
        let c = parse_poly(&r, "5").unwrap();
        assert!(d.delta(&c).is_zero());
        // product rule: delta(fg) = delta(f) g_x + f_x delta(g) - delta(f) delta(g)
        let g = parse_poly(&r, "x1 + 3*x2^2").unwrap();
        let lhs = d.delta(&f.mul(&g));
        let rhs = d
            .delta(&f)
            .mul(&d.embed_x(&g))
            .add(&d.embed_x(&f).mul(&d.delta(&g)))
            .sub(&d.delta(&f).mul(&d.delta(&g)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_composes() {
        let r = PolyRing::plain(FieldSpec::Rationals, 1);
        let r2 = PolyRing::plain(FieldSpec::Rationals, 2);
        let p = parse_poly(&r, "x1^2").unwrap();
        let img = parse_poly(&r2, "x1 + x2").unwrap();
        let q = p.substitute(&r2, &[img]).unwrap();
        assert_eq!(q.to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }
}
