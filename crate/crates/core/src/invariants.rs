//! Degree-bounded invariant computation and identity verification.
//!
//! Two independent routes to graded dimensions: `invariant_space` computes a
//! basis of the homogeneous degree-d invariants by exact linear algebra
//! (valid in every characteristic, including the modular case), while
//! `molien_series` expands the classical generating function (defined only
//! when the characteristic does not divide the group order). Their agreement
//! is a cross-check, never an assumption.

use crate::action::{act, FiniteGroup};
use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::groebner::{groebner_basis_in, GroebnerConfig};
use crate::matrix::ExactMatrix;
use crate::poly::{parse_poly, Monomial, MonomialOrder, PolyRing, Polynomial};
use std::collections::HashMap;
use std::sync::Arc;

/// Homogeneous invariants of one degree: a linearly independent echelon
/// basis, each element invariant under the group.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub degree: usize,
    pub basis: Vec<Polynomial>,
}

/// Default degree cap for invariant searches: the group order (the familiar
/// bound for generators in coprime characteristic; merely a heuristic
/// stopping point in the modular case).
pub fn default_degree_bound(group: &FiniteGroup) -> usize {
    group.order()
}

/// Monomial count above which a graded piece is refused.
pub const MAX_MONOMIAL_BASIS: usize = 20_000;

fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(exps: &mut Vec<u32>, var: usize, left: u32, out: &mut Vec<Monomial>) {
        if var + 1 == exps.len() {
            exps[var] = left;
            out.push(Monomial(exps.iter().copied().collect()));
            return;
        }
        for e in (0..=left).rev() {
            exps[var] = e;
            rec(exps, var + 1, left - e, out);
            exps[var] = 0;
        }
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(&mut exps, 0, d as u32, &mut out);
    out
}

/// Basis of the homogeneous degree-d invariants, by the kernel method: stack
/// the matrices (action of generator - identity) on the degree-d coefficient
/// space and take the exact nullspace. Correct in every characteristic.
pub fn invariant_space(
    group: &FiniteGroup,
    ring: &Arc<PolyRing>,
    d: usize,
    max_degree: usize,
) -> Result<GradedPiece> {
    if !group.is_linear() {
        return Err(Error::NonLinearAction(
            "graded invariant spaces need a linear action".into(),
        ));
    }
    if d > max_degree {
        return Err(Error::DegreeBound(format!(
            "degree {d} exceeds the configured bound {max_degree}"
        )));
    }
    let monos = monomials_of_degree(ring.nvars(), d);
    let n = monos.len();
    if n > MAX_MONOMIAL_BASIS {
        return Err(Error::DegreeBound(format!(
            "{n} monomials of degree {d} exceed the basis cap {MAX_MONOMIAL_BASIS}"
        )));
    }
    let index: HashMap<&Monomial, usize> = monos.iter().zip(0..).collect();
    let field = &ring.field;
    let gens = &group.generators;
    let mut stacked = ExactMatrix::zero(field.clone(), gens.len() * n, n);
    for (gi, g) in gens.iter().enumerate() {
        for (j, m) in monos.iter().enumerate() {
            let mono_poly =
                Polynomial::from_terms(ring, vec![(m.clone(), field.one())]);
            let image = act(g, &mono_poly)?;
            for (im, c) in image.terms() {
                let i = *index
                    .get(im)
                    .expect("linear action preserves homogeneous degree");
                stacked.set(gi * n + i, j, c.clone());
            }
            // subtract the identity block
            let diag = gi * n + j;
            let cur = stacked.get(diag, j).clone();
            stacked.set(diag, j, field.sub(&cur, &field.one()));
        }
    }
    let basis = stacked
        .nullspace()
        .into_iter()
        .map(|v| {
            let terms = monos
                .iter()
                .zip(v.into_iter())
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(m, c)| (m.clone(), c))
                .collect();
            Polynomial::from_terms(ring, terms)
        })
        .collect();
    Ok(GradedPiece { degree: d, basis })
}

/// Largest matrix size accepted by the Molien determinant.
const MAX_MOLIEN_VARS: usize = 16;

fn poly_mul_univ(field: &FieldSpec, a: &[FieldScalar], b: &[FieldScalar]) -> Vec<FieldScalar> {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if field.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let prod = field.mul(ai, bj);
            out[i + j] = field.add(&out[i + j], &prod);
        }
    }
    out
}

/// det(I - z M) as a dense univariate polynomial, by subset expansion along
/// leading columns (exact in every characteristic; no divisions).
fn det_one_minus_z(m: &ExactMatrix) -> Result<Vec<FieldScalar>> {
    let n = m.rows;
    let field = &m.field;
    if n > MAX_MOLIEN_VARS {
        return Err(Error::DegreeBound(format!(
            "Molien determinant limited to {MAX_MOLIEN_VARS} variables, got {n}"
        )));
    }
    if n == 0 {
        return Ok(vec![field.one()]);
    }
    // entry polynomials of I - zM, constant then z-coefficient
    let entry = |i: usize, j: usize| -> [FieldScalar; 2] {
        let c = if i == j { field.one() } else { field.zero() };
        [c, field.neg(m.get(i, j))]
    };
    // dp[S] = det of the submatrix on rows S and the first |S| columns
    let mut dp: Vec<Option<Vec<FieldScalar>>> = vec![None; 1 << n];
    dp[0] = Some(vec![field.one()]);
    for mask in 1usize..(1 << n) {
        let col = mask.count_ones() as usize - 1;
        let mut acc = vec![field.zero(); n + 1];
        let mut pos = 0usize; // index of the row within the sorted subset
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let minor = dp[mask ^ (1 << i)]
                .as_ref()
                .expect("smaller masks already computed");
            let e = entry(i, col);
            let term = poly_mul_univ(field, &e, minor);
            let negate = (pos + col) % 2 == 1;
            for (k, t) in term.into_iter().enumerate() {
                let t = if negate { field.neg(&t) } else { t };
                acc[k] = field.add(&acc[k], &t);
            }
            pos += 1;
        }
        acc.truncate(mask.count_ones() as usize + 1);
        dp[mask] = Some(acc);
    }
    Ok(dp[(1 << n) - 1].take().expect("full mask computed"))
}

/// 1/p as a power series to `terms` coefficients; requires p(0) = 1.
fn series_inverse(field: &FieldSpec, p: &[FieldScalar], terms: usize) -> Vec<FieldScalar> {
    debug_assert_eq!(p.first().map(|c| field.is_zero(&field.sub(c, &field.one()))), Some(true));
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        if k == 0 {
            out.push(field.one());
            continue;
        }
        let mut s = field.zero();
        for i in 1..=k.min(p.len() - 1) {
            let prod = field.mul(&p[i], &out[k - i]);
            s = field.add(&s, &prod);
        }
        out.push(field.neg(&s));
    }
    out
}

/// First `terms` coefficients of the Molien series
/// (1/|G|) sum_sigma 1/det(I - z sigma). Defined only when the
/// characteristic does not divide |G|; in positive characteristic the
/// returned coefficients are the graded dimensions reduced mod p.
pub fn molien_series(group: &FiniteGroup, terms: usize) -> Result<Vec<FieldScalar>> {
    if !group.is_linear() {
        return Err(Error::NonLinearAction(
            "the Molien series needs a linear action".into(),
        ));
    }
    let field = match &group.elements[0] {
        crate::action::ActionElement::Linear(m) => m.field.clone(),
        _ => unreachable!("is_linear checked"),
    };
    let order = group.order();
    let order_scalar = field.from_i64(order as i64);
    if field.is_zero(&order_scalar) {
        return Err(Error::ModularCharacteristic(order as u64));
    }
    let mut total = vec![field.zero(); terms];
    for e in &group.elements {
        let m = match e {
            crate::action::ActionElement::Linear(m) => m,
            _ => unreachable!("is_linear checked"),
        };
        let det = det_one_minus_z(m)?;
        let inv = series_inverse(&field, &det, terms);
        for (t, c) in total.iter_mut().zip(inv) {
            *t = field.add(t, &c);
        }
    }
    let scale = field.inv(&order_scalar)?;
    Ok(total.into_iter().map(|c| field.mul(&c, &scale)).collect())
}

/// Substitutes named polynomials into an identity written over those names
/// and tests exact vanishing (optionally modulo a variety ideal). The
/// identity is either `lhs = rhs` or a single expression tested against
/// zero. Binding order never affects the verdict: names are resolved by
/// lookup.
pub fn check_identity(
    bindings: &[(String, Polynomial)],
    identity: &str,
    modulo: Option<&[Polynomial]>,
    cfg: &GroebnerConfig,
) -> Result<bool> {
    if bindings.is_empty() {
        return Err(Error::Parse("check_identity needs at least one binding".into()));
    }
    let target = bindings[0].1.ring.clone();
    let field = target.field.clone();
    let mut names = Vec::with_capacity(bindings.len());
    let mut images = Vec::with_capacity(bindings.len());
    for (name, poly) in bindings {
        if names.contains(name) {
            return Err(Error::Parse(format!("name {name:?} bound twice")));
        }
        if name == "a" {
            return Err(Error::Parse(
                "the name \"a\" is reserved for the extension generator".into(),
            ));
        }
        names.push(name.clone());
        images.push(poly.clone());
    }
    let name_ring = PolyRing::with_names(field, names);
    let parse_side = |s: &str| -> Result<Polynomial> {
        parse_poly(&name_ring, s)?.substitute(&target, &images)
    };
    let mut sides = identity.split('=');
    let lhs = parse_side(sides.next().unwrap_or(""))?;
    let diff = match sides.next() {
        Some(rhs_str) => {
            if sides.next().is_some() {
                return Err(Error::Parse("identity has more than one '='".into()));
            }
            lhs.sub(&parse_side(rhs_str)?)
        }
        None => lhs,
    };
    match modulo {
        None => Ok(diff.is_zero()),
        Some(variety) => {
            let gb = groebner_basis_in(&target, variety, MonomialOrder::GrevLex, cfg)?;
            Ok(gb.normal_form(&diff).is_zero())
        }
    }
}

/// Outcome of a subalgebra membership search.
#[derive(Debug, Clone)]
pub enum Membership {
    /// f equals this polynomial expression in the named generators, modulo
    /// the variety ideal. The expression lives in a ring whose variables are
    /// the generator names.
    Found { expression: Polynomial },
    NotFoundUpToBound { bound: usize },
}

/// Candidate-count cap for membership searches.
pub const MAX_MEMBERSHIP_CANDIDATES: usize = 20_000;

/// Searches for f as a polynomial of total degree <= bound in the named
/// generators, modulo the variety ideal: candidate products of generators
/// are reduced to normal form and an exact linear system is solved over the
/// coefficient space. Finding an expression is a proof of membership;
/// not finding one only rules out expressions within the bound.
pub fn check_membership_mod_variety(
    f: &Polynomial,
    generators: &[(String, Polynomial)],
    variety: &[Polynomial],
    bound: usize,
    cfg: &GroebnerConfig,
) -> Result<Membership> {
    if generators.is_empty() {
        return Err(Error::Parse("membership search needs at least one generator".into()));
    }
    let ring = f.ring.clone();
    let field = ring.field.clone();
    let gb = groebner_basis_in(&ring, variety, MonomialOrder::GrevLex, cfg)?;
    let target = gb.normal_form(f);
    let k = generators.len();
    // candidate exponent tuples, by total degree then position
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    let mut frontier: Vec<Vec<u32>> = vec![vec![0; k]];
    tuples.push(vec![0; k]);
    for _ in 1..=bound {
        let mut next = Vec::new();
        for t in &frontier {
            let first = t.iter().position(|&e| e > 0).unwrap_or(k - 1);
            for (i, _) in generators.iter().enumerate().take(first + 1) {
                let mut u = t.clone();
                u[i] += 1;
                next.push(u);
            }
        }
        tuples.extend(next.iter().cloned());
        frontier = next;
        if tuples.len() > MAX_MEMBERSHIP_CANDIDATES {
            return Err(Error::DegreeBound(format!(
                "more than {MAX_MEMBERSHIP_CANDIDATES} candidate products at bound {bound}"
            )));
        }
    }
    // normal forms of the candidate products
    let mut forms = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut prod = Polynomial::one(&ring);
        for (e, (_, g)) in t.iter().zip(generators) {
            for _ in 0..*e {
                prod = prod.mul(g);
            }
        }
        forms.push(gb.normal_form(&prod));
    }
    // coordinates: every monomial appearing in any form or the target
    let mut coords: HashMap<Monomial, usize> = HashMap::new();
    for p in forms.iter().chain(std::iter::once(&target)) {
        for (m, _) in p.terms() {
            let next = coords.len();
            coords.entry(m.clone()).or_insert(next);
        }
    }
    let rows = coords.len().max(1);
    let mut a = ExactMatrix::zero(field.clone(), rows, tuples.len());
    for (j, p) in forms.iter().enumerate() {
        for (m, c) in p.terms() {
            a.set(coords[m], j, c.clone());
        }
    }
    let mut rhs = vec![field.zero(); rows];
    for (m, c) in target.terms() {
        rhs[coords[m]] = c.clone();
    }
    match a.solve(&rhs)? {
        None => Ok(Membership::NotFoundUpToBound { bound }),
        Some(sol) => {
            let names: Vec<String> = generators.iter().map(|(n, _)| n.clone()).collect();
            let name_ring = PolyRing::with_names(field.clone(), names);
            let terms = tuples
                .iter()
                .zip(sol)
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(t, c)| (Monomial(t.iter().copied().collect()), c))
                .collect();
            Ok(Membership::Found { expression: Polynomial::from_terms(&name_ring, terms) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{close_group, is_invariant, ActionElement};

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    fn linear_group(field: &FieldSpec, n: usize, gens: &[Vec<Vec<i64>>]) -> FiniteGroup {
        let elems: Vec<ActionElement> = gens
            .iter()
            .map(|rows| ActionElement::linear(ExactMatrix::from_i64_rows(field, rows)).unwrap())
            .collect();
        let id = ActionElement::Linear(ExactMatrix::identity(field.clone(), n));
        close_group(&elems, id, 1000).unwrap()
    }

    fn sign_group_q() -> (FieldSpec, Arc<PolyRing>, FiniteGroup) {
        let q = FieldSpec::parse("Q").unwrap();
        let ring = PolyRing::plain(q.clone(), 2);
        let g = linear_group(&q, 2, &[vec![vec![-1, 0], vec![0, -1]]]);
        (q, ring, g)
    }

    #[test]
    fn sign_action_graded_dimensions() {
        let (q, ring, g) = sign_group_q();
        let d1 = invariant_space(&g, &ring, 1, 8).unwrap();
        assert!(d1.basis.is_empty());
        let d2 = invariant_space(&g, &ring, 2, 8).unwrap();
        assert_eq!(d2.basis.len(), 3);
        for b in &d2.basis {
            assert!(is_invariant(&g, b).unwrap());
        }
        // Molien: 1, 0, 3, 0, 5
        let series = molien_series(&g, 5).unwrap();
        let expect: Vec<FieldScalar> =
            [1, 0, 3, 0, 5].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(series, expect);
    }

    #[test]
    fn trivial_group_molien_is_binomial() {
        let q = FieldSpec::parse("Q").unwrap();
        let ring = PolyRing::plain(q.clone(), 3);
        let g = linear_group(&q, 3, &[]);
        let series = molien_series(&g, 5).unwrap();
        // C(n-1+d, d) for n = 3: 1, 3, 6, 10, 15
        let expect: Vec<FieldScalar> =
            [1, 3, 6, 10, 15].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(series, expect);
        for d in 0..5 {
            let piece = invariant_space(&g, &ring, d, 8).unwrap();
            assert_eq!(q.from_i64(piece.basis.len() as i64), series[d]);
        }
    }

    fn char2_group() -> (FieldSpec, Arc<PolyRing>, FiniteGroup) {
        let f2 = FieldSpec::parse("F2").unwrap();
        let ring = PolyRing::plain(f2.clone(), 4);
        let gen = |a: i64, b: i64, c: i64| {
            vec![
                vec![1, 0, 0, 0],
                vec![b, 1, c, 0],
                vec![0, 0, 1, 0],
                vec![c, 0, a, 1],
            ]
        };
        let g = linear_group(&f2, 4, &[gen(1, 0, 0), gen(0, 1, 0), gen(0, 0, 1)]);
        (f2, ring, g)
    }

    #[test]
    fn char2_linear_invariants_and_modular_refusal() {
        let (_, ring, g) = char2_group();
        assert_eq!(g.order(), 8);
        let d1 = invariant_space(&g, &ring, 1, 8).unwrap();
        let strs: Vec<String> = d1.basis.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, vec!["x1", "x3"]);
        // characteristic 2 divides |G| = 8: Molien must refuse
        assert!(matches!(
            molien_series(&g, 4),
            Err(Error::ModularCharacteristic(8))
        ));
    }

    #[test]
    fn char2_generator_relation_holds() {
        let (_, ring, _) = char2_group();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let f1 = p("x1");
        let f2 = p("x3");
        let f3 = p("x1^3*x2 + x1*x2*x3^2 + x1*x3^2*x4 + x1*x3*x4^2 + x2^4 + x2^2*x3^2 + x3^3*x4 + x3^2*x4^2");
        let f4 = p("x1^2*x3*x4 + x1^2*x4^2 + x1*x3^2*x4 + x1*x3*x4^2 + x3^2*x4^2 + x4^4");
        let h = p("x1^2*x2 + x1*x2^2 + x3^2*x4 + x3*x4^2");
        let bind = |xs: &[(&str, &Polynomial)]| {
            xs.iter()
                .map(|(n, q)| (n.to_string(), (*q).clone()))
                .collect::<Vec<_>>()
        };
        let bindings = bind(&[("f1", &f1), ("f2", &f2), ("f3", &f3), ("f4", &f4), ("h", &h)]);
        assert!(check_identity(
            &bindings,
            "f1^3*h + f1^2*f3 + f1*f2^2*h + f2^2*f4 + h^2",
            None,
            &cfg()
        )
        .unwrap());
        // binding order must not matter
        let shuffled = bind(&[("h", &h), ("f4", &f4), ("f3", &f3), ("f2", &f2), ("f1", &f1)]);
        assert!(check_identity(
            &shuffled,
            "f1^3*h + f1^2*f3 + f1*f2^2*h + f2^2*f4 + h^2",
            None,
            &cfg()
        )
        .unwrap());
        // the rewritten form with g3 = f1 h + f3, g4 = f1 h + f4
        let g3 = f1.mul(&h).add(&f3);
        let g4 = f1.mul(&h).add(&f4);
        let with_g = bind(&[("f1", &f1), ("f2", &f2), ("g3", &g3), ("g4", &g4), ("h", &h)]);
        assert!(check_identity(&with_g, "h^2 = f1^2*g3 + f2^2*g4", None, &cfg()).unwrap());
        // a perturbed identity must fail
        assert!(!check_identity(&with_g, "h^2 = f1^2*g3", None, &cfg()).unwrap());
    }

    #[test]
    fn cusp_generator_relations_hold() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let ring = PolyRing::plain(f7, 4);
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let bindings: Vec<(String, Polynomial)> = [
            ("f3", "x3^3"),
            ("f4", "x3^2*x4"),
            ("f5", "x3*x4^2"),
            ("f6", "x4^3"),
        ]
        .iter()
        .map(|(n, s)| (n.to_string(), p(s)))
        .collect();
        for rel in ["f3*f6 - f4*f5", "f4^2 - f3*f5", "f5^2 - f4*f6"] {
            assert!(check_identity(&bindings, rel, None, &cfg()).unwrap(), "{rel}");
        }
    }

    #[test]
    fn membership_mod_two_planes_ideal() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let ring = PolyRing::plain(f7, 4);
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let variety = vec![
            p("x1^2 - x3^2"),
            p("x2^2 - x4^2"),
            p("x1*x2 - x3*x4"),
            p("x1*x4 - x2*x3"),
        ];
        let gens = vec![("x1".to_string(), p("x1")), ("x2".to_string(), p("x2"))];
        match check_membership_mod_variety(&p("x3^2"), &gens, &variety, 4, &cfg()).unwrap() {
            Membership::Found { expression } => assert_eq!(expression.to_string(), "x1^2"),
            other => panic!("expected found, got {other:?}"),
        }
        match check_membership_mod_variety(&p("x3*x4"), &gens, &variety, 4, &cfg()).unwrap() {
            Membership::Found { expression } => assert_eq!(expression.to_string(), "x1*x2"),
            other => panic!("expected found, got {other:?}"),
        }
        match check_membership_mod_variety(&p("x3"), &gens, &variety, 4, &cfg()).unwrap() {
            Membership::NotFoundUpToBound { bound } => assert_eq!(bound, 4),
            other => panic!("expected not-found, got {other:?}"),
        }
    }

    #[test]
    fn identity_modulo_variety() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let ring = PolyRing::plain(f7, 4);
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let variety = vec![
            p("x1^2 - x3^2"),
            p("x2^2 - x4^2"),
            p("x1*x2 - x3*x4"),
            p("x1*x4 - x2*x3"),
        ];
        let bindings = vec![
            ("u".to_string(), p("x3^2")),
            ("v".to_string(), p("x1^2")),
        ];
        // x3^2 = x1^2 holds only modulo the variety
        assert!(!check_identity(&bindings, "u = v", None, &cfg()).unwrap());
        assert!(check_identity(&bindings, "u = v", Some(&variety), &cfg()).unwrap());
    }

    #[test]
    fn degree_bound_and_nonlinear_errors() {
        let (_, ring, g) = sign_group_q();
        assert!(matches!(
            invariant_space(&g, &ring, 5, 4),
            Err(Error::DegreeBound(_))
        ));
        let f5 = FieldSpec::parse("F5").unwrap();
        let shift = ActionElement::affine(
            ExactMatrix::identity(f5.clone(), 1),
            vec![f5.one()],
        )
        .unwrap();
        let id = ActionElement::affine(ExactMatrix::identity(f5.clone(), 1), vec![f5.zero()])
            .unwrap();
        let affine_group = close_group(&[shift], id, 100).unwrap();
        let r1 = PolyRing::plain(f5, 1);
        assert!(matches!(
            invariant_space(&affine_group, &r1, 1, 8),
            Err(Error::NonLinearAction(_))
        ));
        assert!(matches!(
            molien_series(&affine_group, 3),
            Err(Error::NonLinearAction(_))
        ));
    }
}
