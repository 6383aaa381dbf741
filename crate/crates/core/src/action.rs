//! Group elements acting on affine space, affine varieties, and tori, plus
//! finite-group closure.
//!
//! The action on functions is by inverse composition: (sigma . f)(x) =
//! f(sigma^{-1} x), so act is a left action and polynomial pullback uses the
//! inverse matrix.

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::matrix::ExactMatrix;
use crate::poly::{Monomial, PolyRing, Polynomial};
use smallvec::SmallVec;
use std::collections::HashMap;
use std::sync::Arc;

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        IntMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "size mismatch");
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, entries: out }
    }

    pub fn to_exact(&self, field: &FieldSpec) -> ExactMatrix {
        let entries = self.entries.iter().map(|&v| field.from_i64(v)).collect();
        ExactMatrix::new(field.clone(), self.n, self.n, entries)
    }

    pub fn det(&self) -> i64 {
        let q = FieldSpec::Rationals;
        let d = self.to_exact(&q).det().expect("square");
        match d {
            FieldScalar::Rat(r) => {
                debug_assert!(r.is_integer());
                let n: num_bigint::BigInt = r.to_integer();
                i64::try_from(n).expect("determinant fits i64")
            }
            _ => unreachable!(),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), 1 | -1)
    }

    /// Exact inverse; defined only for unimodular matrices.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let d = self.det();
        if !matches!(d, 1 | -1) {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        let q = FieldSpec::Rationals;
        let inv = self.to_exact(&q).invert()?;
        let entries = inv
            .entries()
            .iter()
            .map(|s| match s {
                FieldScalar::Rat(r) => {
                    debug_assert!(r.is_integer());
                    i64::try_from(r.to_integer()).expect("inverse entry fits i64")
                }
                _ => unreachable!(),
            })
            .collect();
        Ok(IntMatrix { n: self.n, entries })
    }

    /// Rank over Q, the reflection rank convention for lattice elements.
    pub fn rank_over_q(&self) -> usize {
        self.to_exact(&FieldSpec::Rationals).rank()
    }

    pub fn sub_identity(&self) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] -= 1;
        }
        out
    }
}

/// One group element. Linear and affine elements act on the ambient n-space
/// of a scene; lattice elements are abstract automorphisms of Z^n; monomial
/// elements are lattice elements realized on the 2n-variable torus ring.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionElement {
    Linear(ExactMatrix),
    Affine(ExactMatrix, Vec<FieldScalar>),
    Lattice(IntMatrix),
    Monomial(IntMatrix),
}

/// Canonical serialization used for hashing and closure deduplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElemKey {
    Field(u8, Vec<FieldScalar>),
    Int(u8, Vec<i64>),
}

impl ActionElement {
    pub fn linear(m: ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("linear element needs a square matrix".into()));
        }
        Ok(ActionElement::Linear(m))
    }

    pub fn affine(m: ExactMatrix, t: Vec<FieldScalar>) -> Result<Self> {
        if !m.is_square() || m.rows != t.len() {
            return Err(Error::DimensionMismatch(
                "affine element needs a square matrix and a matching translation".into(),
            ));
        }
        Ok(ActionElement::Affine(m, t))
    }

    pub fn lattice(m: IntMatrix) -> Result<Self> {
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular(m.det().to_string()));
        }
        Ok(ActionElement::Lattice(m))
    }

    pub fn monomial(m: IntMatrix) -> Result<Self> {
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular(m.det().to_string()));
        }
        Ok(ActionElement::Monomial(m))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ActionElement::Linear(_) => "linear",
            ActionElement::Affine(..) => "affine",
            ActionElement::Lattice(_) => "lattice",
            ActionElement::Monomial(_) => "monomial",
        }
    }

    /// Number of ambient polynomial variables the element acts on.
    pub fn ambient_vars(&self) -> usize {
        match self {
            ActionElement::Linear(m) => m.rows,
            ActionElement::Affine(m, _) => m.rows,
            ActionElement::Lattice(m) => m.n,
            ActionElement::Monomial(m) => 2 * m.n,
        }
    }

    pub fn key(&self) -> ElemKey {
        match self {
            ActionElement::Linear(m) => ElemKey::Field(0, m.entries().to_vec()),
            ActionElement::Affine(m, t) => {
                let mut v = m.entries().to_vec();
                v.extend(t.iter().cloned());
                ElemKey::Field(1, v)
            }
            ActionElement::Lattice(m) => ElemKey::Int(2, m.entries().to_vec()),
            ActionElement::Monomial(m) => ElemKey::Int(3, m.entries().to_vec()),
        }
    }

    /// self applied after other: (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &ActionElement) -> Result<ActionElement> {
        match (self, other) {
            (ActionElement::Linear(a), ActionElement::Linear(b)) => {
                Ok(ActionElement::Linear(a.mul(b)?))
            }
            (ActionElement::Affine(a, s), ActionElement::Affine(b, t)) => {
                let m = a.mul(b)?;
                let mut tr = a.mul_vec(t)?;
                let f = &a.field;
                for (u, v) in tr.iter_mut().zip(s) {
                    *u = f.add(u, v);
                }
                Ok(ActionElement::Affine(m, tr))
            }
            (ActionElement::Lattice(a), ActionElement::Lattice(b)) => {
                Ok(ActionElement::Lattice(a.mul(b)))
            }
            (ActionElement::Monomial(a), ActionElement::Monomial(b)) => {
                Ok(ActionElement::Monomial(a.mul(b)))
            }
            _ => Err(Error::MixedKind(format!(
                "{} with {}",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    pub fn inverse(&self) -> Result<ActionElement> {
        match self {
            ActionElement::Linear(a) => Ok(ActionElement::Linear(a.invert()?)),
            ActionElement::Affine(a, t) => {
                let inv = a.invert()?;
                let f = &a.field;
                let bt = inv.mul_vec(t)?;
                let neg: Vec<FieldScalar> = bt.iter().map(|v| f.neg(v)).collect();
                Ok(ActionElement::Affine(inv, neg))
            }
            ActionElement::Lattice(a) => Ok(ActionElement::Lattice(a.inverse()?)),
            ActionElement::Monomial(a) => Ok(ActionElement::Monomial(a.inverse()?)),
        }
    }

    /// Promotes a linear element to affine with zero translation.
    fn to_affine(&self) -> ActionElement {
        match self {
            ActionElement::Linear(m) => {
                let t = vec![m.field.zero(); m.rows];
                ActionElement::Affine(m.clone(), t)
            }
            other => other.clone(),
        }
    }

    /// Image of a point under the element (the action on the space, not on
    /// functions). Monomial elements act on stored torus points
    /// (x_1..x_n, x_1^{-1}..x_n^{-1}) by exponent columns of the matrix.
    pub fn apply_point(&self, p: &[FieldScalar], field: &FieldSpec) -> Result<Vec<FieldScalar>> {
        match self {
            ActionElement::Linear(m) => {
                if p.len() != m.cols {
                    return Err(Error::DimensionMismatch("point length".into()));
                }
                m.mul_vec(p)
            }
            ActionElement::Affine(m, t) => {
                if p.len() != m.cols {
                    return Err(Error::DimensionMismatch("point length".into()));
                }
                let mut v = m.mul_vec(p)?;
                for (u, w) in v.iter_mut().zip(t) {
                    *u = field.add(u, w);
                }
                Ok(v)
            }
            ActionElement::Monomial(m) => {
                let n = m.n;
                if p.len() != 2 * n {
                    return Err(Error::DimensionMismatch("torus point length".into()));
                }
                let mut out = vec![field.one(); 2 * n];
                for j in 0..n {
                    let mut acc = field.one();
                    for i in 0..n {
                        let e = m.get(i, j);
                        if e == 0 {
                            continue;
                        }
                        let base = if e > 0 { &p[i] } else { &p[n + i] };
                        acc = field.mul(&acc, &field.pow(base, e.unsigned_abs()));
                    }
                    let inv = field.inv(&acc)?;
                    out[j] = acc;
                    out[n + j] = inv;
                }
                Ok(out)
            }
            ActionElement::Lattice(_) => Err(Error::MixedKind(
                "lattice elements act on tori via monomial elements".into(),
            )),
        }
    }
}

/// Pullback of f along the element: act(g, f) = f composed with g^{-1}.
pub fn act(g: &ActionElement, f: &Polynomial) -> Result<Polynomial> {
    let ring = &f.ring;
    if g.ambient_vars() != ring.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "element acts on {} variables, polynomial ring has {}",
            g.ambient_vars(),
            ring.nvars()
        )));
    }
    match g {
        ActionElement::Linear(_) | ActionElement::Affine(..) => {
            let inv = g.inverse()?;
            let (m, t) = match &inv {
                ActionElement::Linear(m) => (m, None),
                ActionElement::Affine(m, t) => (m, Some(t)),
                _ => unreachable!(),
            };
            let field = &ring.field;
            let images: Vec<Polynomial> = (0..ring.nvars())
                .map(|l| {
                    let mut terms = Vec::new();
                    for j in 0..ring.nvars() {
                        let c = m.get(l, j);
                        if !field.is_zero(c) {
                            terms.push((Monomial::var(ring.nvars(), j, 1), c.clone()));
                        }
                    }
                    if let Some(t) = t {
                        if !field.is_zero(&t[l]) {
                            terms.push((Monomial::one(ring.nvars()), t[l].clone()));
                        }
                    }
                    Polynomial::from_terms(ring, terms)
                })
                .collect();
            f.substitute(ring, &images)
        }
        ActionElement::Monomial(m) => {
            let n = m.n;
            let inv = m.inverse()?;
            let terms = f
                .terms()
                .iter()
                .map(|(mono, c)| {
                    // Laurent exponent of the term, mapped through the inverse
                    let mut w = vec![0i64; n];
                    for i in 0..n {
                        let u = mono.0[i] as i64 - mono.0[n + i] as i64;
                        if u != 0 {
                            for k in 0..n {
                                w[k] += inv.get(k, i) * u;
                            }
                        }
                    }
                    let mut e = SmallVec::from_elem(0u32, 2 * n);
                    for (k, &wk) in w.iter().enumerate() {
                        if wk > 0 {
                            e[k] = wk as u32;
                        } else if wk < 0 {
                            e[n + k] = (-wk) as u32;
                        }
                    }
                    (Monomial(e), c.clone())
                })
                .collect();
            Ok(Polynomial::from_terms(ring, terms))
        }
        ActionElement::Lattice(_) => Err(Error::MixedKind(
            "lattice elements act on polynomial rings only through torus scenes".into(),
        )),
    }
}

/// Reduces every term by the torus relations x_i y_i = 1: the canonical
/// representative of a torus function.
pub fn laurent_normalize(f: &Polynomial, n: usize) -> Polynomial {
    assert_eq!(f.ring.nvars(), 2 * n, "torus ring has 2n variables");
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = m.0.clone();
            for i in 0..n {
                let k = e[i].min(e[n + i]);
                e[i] -= k;
                e[n + i] -= k;
            }
            (Monomial(e), c.clone())
        })
        .collect();
    Polynomial::from_terms(&f.ring, terms)
}

/// A finite group presented by generators, closed under multiplication.
/// Element 0 is the identity; element order is breadth-first discovery,
/// multiplying on the right by the generators in their listed order.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub generators: Vec<ActionElement>,
    pub elements: Vec<ActionElement>,
    index: HashMap<ElemKey, usize>,
}

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

pub fn close_group(
    generators: &[ActionElement],
    identity: ActionElement,
    cap: usize,
) -> Result<FiniteGroup> {
    // normalize mixed linear/affine input: they are the same kind of map
    let promote = generators
        .iter()
        .any(|g| matches!(g, ActionElement::Affine(..)));
    let gens: Vec<ActionElement> = generators
        .iter()
        .map(|g| if promote { g.to_affine() } else { g.clone() })
        .collect();
    let identity = if promote { identity.to_affine() } else { identity };
    for g in &gens {
        if g.kind_name() != identity.kind_name() || g.ambient_vars() != identity.ambient_vars() {
            return Err(Error::MixedKind(format!(
                "{} on {} variables next to {} on {}",
                g.kind_name(),
                g.ambient_vars(),
                identity.kind_name(),
                identity.ambient_vars()
            )));
        }
    }
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity.key(), 0usize);
    let mut head = 0usize;
    while head < elements.len() {
        let current = elements[head].clone();
        for g in &gens {
            let prod = current.compose(g)?;
            let key = prod.key();
            if !index.contains_key(&key) {
                index.insert(key, elements.len());
                elements.push(prod);
                if elements.len() > cap {
                    return Err(Error::ClosureCap(cap));
                }
            }
        }
        head += 1;
    }
    Ok(FiniteGroup { generators: gens, elements, index })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &ActionElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &ActionElement) -> Option<usize> {
        self.index.get(&g.key()).copied()
    }

    pub fn mul_indices(&self, i: usize, j: usize) -> usize {
        let prod = self.elements[i]
            .compose(&self.elements[j])
            .expect("closed under composition");
        *self.index.get(&prod.key()).expect("closure is closed")
    }

    pub fn inv_index(&self, i: usize) -> usize {
        let inv = self.elements[i].inverse().expect("group elements invert");
        *self.index.get(&inv.key()).expect("closure contains inverses")
    }

    /// Indices of the subgroup generated by the subset.
    pub fn subgroup_closure(&self, subset: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head];
            head += 1;
            for &s in subset {
                let next = self.mul_indices(cur, s);
                if !seen[next] {
                    seen[next] = true;
                    queue.push(next);
                }
            }
        }
        let mut out: Vec<usize> = seen
            .iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| i)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_generated_by(&self, subset: &[usize]) -> bool {
        self.subgroup_closure(subset).len() == self.order()
    }

    /// True when every generator (hence every element) is linear.
    pub fn is_linear(&self) -> bool {
        self.elements
            .iter()
            .all(|e| matches!(e, ActionElement::Linear(_)))
    }
}

/// act(sigma, f) = f for every generator; generators suffice because act is
/// a homomorphism in sigma.
pub fn is_invariant(group: &FiniteGroup, f: &Polynomial) -> Result<bool> {
    for g in &group.generators {
        if act(g, f)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance on the torus: images are compared modulo the torus relations.
pub fn is_invariant_torus(group: &FiniteGroup, f: &Polynomial, n: usize) -> Result<bool> {
    let nf = laurent_normalize(f, n);
    for g in &group.generators {
        if laurent_normalize(&act(g, &nf)?, n) != nf {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group averaging: (1/|G|) sum of sigma . f. Projects onto invariants when
/// the characteristic does not divide |G|.
pub fn reynolds(group: &FiniteGroup, f: &Polynomial) -> Result<Polynomial> {
    let field = &f.ring.field;
    let p = field.characteristic();
    let order = group.order() as u64;
    if p != 0 && order % p == 0 {
        return Err(Error::ModularCharacteristic(order));
    }
    let mut acc = Polynomial::zero(&f.ring);
    for g in &group.elements {
        acc = acc.add(&act(g, f)?);
    }
    let inv = field.inv(&field.from_i64(order as i64))?;
    Ok(acc.mul_scalar(&inv))
}

/// The ideal of coordinate differences (act(g, x_l) - x_l): its zero set is
/// the fixed locus of g, because sigma^{-1} x = x and sigma x = x agree.
pub fn coordinate_difference_ideal(ring: &Arc<PolyRing>, g: &ActionElement) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for l in 0..ring.nvars() {
        let xl = Polynomial::var(ring, l);
        let d = act(g, &xl)?.sub(&xl);
        if !d.is_zero() {
            out.push(d);
        }
    }
    Ok(out)
}
