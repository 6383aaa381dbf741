//! Buchberger engine with Gebauer-Moeller pair elimination.
//!
//! Selection is the normal strategy: lowest lcm total degree first, ties by
//! the generator index pair. Output bases are reduced (auto-reduced, monic,
//! sorted ascending by leading monomial), so equal ideals give equal bases
//! under a fixed order. Resource caps surface as recoverable errors.

use crate::error::{Error, Result};
use crate::field::FieldScalar;
use crate::poly::{Monomial, MonomialOrder, PolyRing, Polynomial};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    pub max_basis: usize,
    pub max_pairs: usize,
    /// Budget on term operations during reductions, the engine's unit of work.
    pub max_term_ops: u64,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_basis: 20_000, max_pairs: 200_000, max_term_ops: 200_000_000 }
    }
}

/// Terms sorted descending under the active order.
type Terms = Vec<(Monomial, FieldScalar)>;

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub ring: Arc<PolyRing>,
    pub order: MonomialOrder,
    /// Reduced basis, monic, sorted ascending by leading monomial.
    pub elements: Vec<Polynomial>,
    /// Leading monomials of `elements`, same order.
    leading: Vec<Monomial>,
}

fn to_ordered(f: &Polynomial, order: MonomialOrder) -> Terms {
    let mut t: Terms = f.terms().to_vec();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn from_ordered(ring: &Arc<PolyRing>, t: Terms) -> Polynomial {
    Polynomial::from_terms(ring, t)
}

/// work -= coeff * mono * g, both sorted descending under `order`.
/// Returns the merged result; counts g.len() term ops into `ops`.
fn sub_scaled(
    ring: &PolyRing,
    order: MonomialOrder,
    work: &Terms,
    g: &Terms,
    mono: &Monomial,
    coeff: &FieldScalar,
    ops: &mut u64,
) -> Terms {
    let field = &ring.field;
    *ops += g.len() as u64;
    let mut out: Terms = Vec::with_capacity(work.len() + g.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < work.len() && j < g.len() {
        let gj = (g[j].0.mul(mono), field.mul(&g[j].1, coeff));
        match order.cmp(&work[i].0, &gj.0) {
            Ordering::Greater => {
                out.push(work[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gj.0, field.neg(&gj.1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = field.sub(&work[i].1, &gj.1);
                if !field.is_zero(&c) {
                    out.push((work[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&work[i..]);
    while j < g.len() {
        out.push((g[j].0.mul(mono), field.neg(&field.mul(&g[j].1, coeff))));
        j += 1;
    }
    out
}

/// Full normal form of `f` against monic reducers; deterministic because the
/// first reducer (by slice position) whose leading monomial divides wins.
fn reduce_full(
    ring: &PolyRing,
    order: MonomialOrder,
    f: Terms,
    reducers: &[Terms],
    skip: Option<usize>,
    cfg: &GroebnerConfig,
    ops: &mut u64,
) -> Result<Terms> {
    let mut remainder: Terms = Vec::new();
    let mut work = f;
    while let Some((m, c)) = work.first().cloned() {
        if *ops > cfg.max_term_ops {
            return Err(Error::GroebnerCap(format!(
                "term-operation budget {} exhausted",
                cfg.max_term_ops
            )));
        }
        let hit = reducers
            .iter()
            .enumerate()
            .find(|(k, g)| Some(*k) != skip && !g.is_empty() && g[0].0.divides(&m));
        match hit {
            Some((_, g)) => {
                let mono = g[0].0.div_into(&m);
                // reducers are monic, so the factor is the working coefficient
                work = sub_scaled(ring, order, &work, g, &mono, &c, ops);
            }
            None => {
                remainder.push((m, c));
                work.remove(0);
            }
        }
    }
    Ok(remainder)
}

fn make_monic(ring: &PolyRing, t: &mut Terms) {
    if let Some((_, c)) = t.first() {
        let inv = ring.field.inv(c).expect("leading coefficient nonzero");
        if ring.field.is_zero(&ring.field.sub(&inv, &ring.field.one())) {
            return;
        }
        for (_, k) in t.iter_mut() {
            *k = ring.field.mul(k, &inv);
        }
    }
}

struct Engine<'a> {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    cfg: &'a GroebnerConfig,
    basis: Vec<Terms>,
    alive: Vec<bool>,
    /// (lcm degree, i, j) -> lcm monomial; BTreeMap pops the normal-strategy
    /// minimum and keeps iteration deterministic.
    pairs: BTreeMap<(u64, usize, usize), Monomial>,
    ops: u64,
}

impl<'a> Engine<'a> {
    fn lt(&self, i: usize) -> &Monomial {
        &self.basis[i][0].0
    }

    /// Gebauer-Moeller update on inserting element t.
    fn update_pairs(&mut self, t: usize) -> Result<()> {
        let lt_t = self.lt(t).clone();
        // chain criterion against surviving old pairs
        let mut dead: Vec<(u64, usize, usize)> = Vec::new();
        for (&(deg, i, j), l) in self.pairs.iter() {
            if lt_t.divides(l) {
                let li = self.lt(i).lcm(&lt_t);
                let lj = self.lt(j).lcm(&lt_t);
                if li != *l && lj != *l {
                    dead.push((deg, i, j));
                }
            }
        }
        for k in dead {
            self.pairs.remove(&k);
        }
        // candidate new pairs (i, t): retired elements still pair, their
        // content lives only in the s-polynomial against what retired them
        let mut cand: Vec<(usize, Monomial)> = (0..t)
            .map(|i| (i, self.lt(i).lcm(&lt_t)))
            .collect();
        // M criterion: drop candidates whose lcm is strictly divisible by
        // another candidate's lcm; if two lcms are equal keep the lower index.
        let mut keep: Vec<(usize, Monomial)> = Vec::new();
        'outer: for (pos, (i, l)) in cand.iter().enumerate() {
            for (pos2, (_, l2)) in cand.iter().enumerate() {
                if pos2 == pos {
                    continue;
                }
                if l2.divides(l) && (l2 != l || pos2 < pos) {
                    continue 'outer;
                }
            }
            keep.push((*i, l.clone()));
        }
        cand = keep;
        // product criterion last
        cand.retain(|(i, _)| !self.lt(*i).coprime(&lt_t));
        for (i, l) in cand {
            self.pairs.insert((l.degree(), i, t), l);
        }
        if self.pairs.len() > self.cfg.max_pairs {
            return Err(Error::GroebnerCap(format!(
                "pair queue exceeded {}",
                self.cfg.max_pairs
            )));
        }
        Ok(())
    }

    fn insert(&mut self, mut h: Terms) -> Result<()> {
        make_monic(&self.ring, &mut h);
        let lt_h = h[0].0.clone();
        self.basis.push(h);
        self.alive.push(true);
        let t = self.basis.len() - 1;
        // retire elements whose leading monomial the new one divides
        for i in 0..t {
            if self.alive[i] && lt_h.divides(self.lt(i)) {
                self.alive[i] = false;
            }
        }
        if self.basis.len() > self.cfg.max_basis {
            return Err(Error::GroebnerCap(format!(
                "basis exceeded {} elements",
                self.cfg.max_basis
            )));
        }
        self.update_pairs(t)
    }

    fn alive_reducers(&self) -> Vec<Terms> {
        self.basis
            .iter()
            .zip(&self.alive)
            .filter(|(_, a)| **a)
            .map(|(b, _)| b.clone())
            .collect()
    }

    fn run(&mut self) -> Result<()> {
        while let Some((&key, _)) = self.pairs.iter().next() {
            let lcm = self.pairs.remove(&key).expect("key just observed");
            let (_, i, j) = key;
            let field = self.ring.field.clone();
            // s-polynomial of monic f_i, f_j
            let mi = self.lt(i).div_into(&lcm);
            let mj = self.lt(j).div_into(&lcm);
            let fi = self.basis[i].clone();
            let spoly = sub_scaled(
                &self.ring,
                self.order,
                &fi.iter()
                    .map(|(m, c)| (m.mul(&mi), c.clone()))
                    .collect::<Terms>(),
                &self.basis[j],
                &mj,
                &field.one(),
                &mut self.ops,
            );
            let reducers = self.alive_reducers();
            let nf = reduce_full(
                &self.ring,
                self.order,
                spoly,
                &reducers,
                None,
                self.cfg,
                &mut self.ops,
            )?;
            if !nf.is_empty() {
                self.insert(nf)?;
            }
        }
        Ok(())
    }
}

pub fn groebner_basis(
    gens: &[Polynomial],
    order: MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let ring = gens
        .first()
        .map(|g| g.ring.clone())
        .expect("groebner_basis needs at least one generator or an explicit ring");
    groebner_basis_in(&ring, gens, order, cfg)
}

pub fn groebner_basis_in(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    order: MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    for g in gens {
        assert!(
            crate::poly::same_ring(&g.ring, ring),
            "generator outside the stated ring"
        );
    }
    let mut engine = Engine {
        ring: ring.clone(),
        order,
        cfg,
        basis: Vec::new(),
        alive: Vec::new(),
        pairs: BTreeMap::new(),
        ops: 0,
    };
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let ordered = to_ordered(g, order);
        let reducers = engine.alive_reducers();
        let nf = reduce_full(
            &engine.ring,
            order,
            ordered,
            &reducers,
            None,
            cfg,
            &mut engine.ops,
        )?;
        if !nf.is_empty() {
            engine.insert(nf)?;
        }
    }
    engine.run()?;

    // minimal basis: alive elements; then tail-reduce each against the others
    let mut minimal: Vec<Terms> = engine
        .basis
        .iter()
        .zip(&engine.alive)
        .filter(|(_, a)| **a)
        .map(|(b, _)| b.clone())
        .collect();
    minimal.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let snapshot = minimal.clone();
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for (k, f) in snapshot.iter().enumerate() {
        let mut nf = reduce_full(
            &engine.ring,
            order,
            f.clone(),
            &snapshot,
            Some(k),
            cfg,
            &mut engine.ops,
        )?;
        if !nf.is_empty() {
            make_monic(&engine.ring, &mut nf);
            reduced.push(nf);
        }
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let leading: Vec<Monomial> = reduced.iter().map(|t| t[0].0.clone()).collect();
    let elements = reduced
        .into_iter()
        .map(|t| from_ordered(ring, t))
        .collect();
    Ok(GroebnerBasis { ring: ring.clone(), order, elements, leading })
}

impl GroebnerBasis {
    /// Unique remainder of f modulo the reduced basis.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert!(
            crate::poly::same_ring(&f.ring, &self.ring),
            "normal_form argument outside the basis ring"
        );
        let cfg = GroebnerConfig { max_term_ops: u64::MAX, ..GroebnerConfig::default() };
        let mut ops = 0u64;
        let reducers: Vec<Terms> = self
            .elements
            .iter()
            .map(|e| to_ordered(e, self.order))
            .collect();
        let nf = reduce_full(
            &self.ring,
            self.order,
            to_ordered(f, self.order),
            &reducers,
            None,
            &cfg,
            &mut ops,
        )
        .expect("unbounded budget");
        from_ordered(&self.ring, nf)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// True when the basis is {1}, i.e. the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant() && !self.elements[0].is_zero()
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// The ideal is the unit ideal; the variety has no points.
    Empty,
    Dim(usize),
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Empty => write!(f, "empty"),
            Dimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Krull dimension of R/I via maximal variable sets independent modulo the
/// initial ideal: S is independent when no leading monomial has support
/// inside S.
pub fn dimension(ring: &Arc<PolyRing>, gens: &[Polynomial], cfg: &GroebnerConfig) -> Result<Dimension> {
    let gb = groebner_basis_in(ring, gens, MonomialOrder::GrevLex, cfg)?;
    Ok(dimension_from_basis(&gb))
}

pub fn dimension_from_basis(gb: &GroebnerBasis) -> Dimension {
    if gb.is_unit_ideal() {
        return Dimension::Empty;
    }
    let n = gb.ring.nvars();
    assert!(n <= 30, "independent-set search needs a small variable count");
    let supports: Vec<u32> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0usize;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|s| s & !mask != 0) {
            best = size;
        }
    }
    Dimension::Dim(best)
}

/// Radical membership via the Rabinowitsch trick: f lies in sqrt(I) iff
/// 1 lies in I + (1 - t f) in the ring with t appended last.
pub fn radical_member(
    ring: &Arc<PolyRing>,
    f: &Polynomial,
    gens: &[Polynomial],
    cfg: &GroebnerConfig,
) -> Result<bool> {
    let ring_t = PolyRing::extended(ring, "t");
    let mut lifted: Vec<Polynomial> = gens.iter().map(|g| lift_last(&ring_t, g)).collect();
    let t = Polynomial::var(&ring_t, ring_t.nvars() - 1);
    let one = Polynomial::one(&ring_t);
    lifted.push(one.sub(&t.mul(&lift_last(&ring_t, f))));
    let gb = groebner_basis_in(&ring_t, &lifted, MonomialOrder::GrevLex, cfg)?;
    Ok(gb.is_unit_ideal())
}

/// Reinterprets f in a ring with extra trailing variables.
pub fn lift_last(target: &Arc<PolyRing>, f: &Polynomial) -> Polynomial {
    let k = f.ring.nvars();
    assert!(target.nvars() >= k, "target ring too small");
    assert_eq!(
        target.names[..k],
        f.ring.names[..],
        "lift keeps existing variables in place"
    );
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = SmallVec::from_elem(0u32, target.nvars());
            e[..k].copy_from_slice(&m.0);
            (Monomial(e), c.clone())
        })
        .collect();
    Polynomial::from_terms(target, terms)
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first column. Fine for the minor sizes that arise here.
pub fn poly_det(ring: &Arc<PolyRing>, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(ring);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> = m
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cof = m[i][0].mul(&poly_det(ring, &sub));
        acc = if i % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

/// I plus all c x c minors of the Jacobian of the generators, the singular
/// locus of V(I) when c is the codimension and I is radical with equidimensional
/// variety.
pub fn singular_locus_ideal(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    codim: usize,
) -> Vec<Polynomial> {
    use itertools::Itertools;
    let nvars = ring.nvars();
    let jac: Vec<Vec<Polynomial>> = gens
        .iter()
        .map(|g| (0..nvars).map(|v| g.derivative(v)).collect())
        .collect();
    let mut out: Vec<Polynomial> = gens.to_vec();
    if codim == 0 || codim > gens.len() || codim > nvars {
        return out;
    }
    for rows in (0..gens.len()).combinations(codim) {
        for cols in (0..nvars).combinations(codim) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                .collect();
            let d = poly_det(ring, &sub);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}
