//! Generative property tests. Each test states an algebraic law the library
//! must satisfy and lets the framework search for counterexamples; the
//! oracles here are independent re-derivations, never the code under test.

use proptest::prelude::*;
use sepinv_core::{
    act, close_group, dimension, groebner_basis_in, is_invariant, is_invariant_torus, orbit_sum,
    radical_member, reynolds, torus_ring, ActionElement, Dimension, DoubledRing, ExactMatrix,
    FieldSpec, FiniteGroup, GroebnerConfig, IntMatrix, Monomial, MonomialOrder, PolyRing,
    Polynomial,
};
use std::sync::Arc;

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::parse("Q").unwrap()),
        Just(FieldSpec::parse("F5").unwrap()),
        Just(FieldSpec::parse("F7").unwrap()),
    ]
}

fn poly_in(ring: &Arc<PolyRing>, max_deg: u32, max_terms: usize) -> BoxedStrategy<Polynomial> {
    let ring = ring.clone();
    let n = ring.nvars();
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -9i64..=9),
        0..=max_terms,
    )
    .prop_map(move |raw| {
        let terms = raw
            .into_iter()
            .map(|(e, c)| (Monomial(e.into()), ring.field.from_i64(c)))
            .collect();
        Polynomial::from_terms(&ring, terms)
    })
    .boxed()
}

fn ring_and_polys(k: usize) -> impl Strategy<Value = (Arc<PolyRing>, Vec<Polynomial>)> {
    (fields(), 1usize..=4).prop_flat_map(move |(f, n)| {
        let ring = PolyRing::plain(f, n);
        let polys = prop::collection::vec(poly_in(&ring, 3, 4), k);
        let ring2 = ring.clone();
        polys.prop_map(move |ps| (ring2.clone(), ps))
    })
}

/// Like `ring_and_polys` but over finite fields in few variables with low
/// degrees, for properties that run Buchberger on the drawn polynomials.
fn small_ring_and_polys(k: usize) -> impl Strategy<Value = (Arc<PolyRing>, Vec<Polynomial>)> {
    let small_fields = prop_oneof![
        Just(FieldSpec::parse("F5").unwrap()),
        Just(FieldSpec::parse("F7").unwrap()),
    ];
    (small_fields, 1usize..=3).prop_flat_map(move |(f, n)| {
        let ring = PolyRing::plain(f, n);
        let polys = prop::collection::vec(poly_in(&ring, 2, 3), k);
        let ring2 = ring.clone();
        polys.prop_map(move |ps| (ring2.clone(), ps))
    })
}

/// Random nonconstant monomial as an exponent vector.
fn monomial_exps(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, n)
        .prop_filter("nonconstant", |e| e.iter().any(|&x| x > 0))
}

fn monomial_poly(ring: &Arc<PolyRing>, exps: &[u32]) -> Polynomial {
    Polynomial::from_terms(
        ring,
        vec![(Monomial(exps.to_vec().into()), ring.field.one())],
    )
}

/// Signed permutation group over the given field: permutation matrices with
/// +-1 entries, closed under multiplication. Always finite.
fn signed_perm_group(
    field: &FieldSpec,
    perms: &[Vec<usize>],
    signs: &[Vec<bool>],
) -> FiniteGroup {
    let n = perms[0].len();
    let gens: Vec<ActionElement> = perms
        .iter()
        .zip(signs)
        .map(|(p, s)| {
            let mut m = ExactMatrix::zero(field.clone(), n, n);
            for (row, (&col, &neg)) in p.iter().zip(s).enumerate() {
                let v = if neg { field.from_i64(-1) } else { field.one() };
                m.set(row, col, v);
            }
            ActionElement::linear(m).unwrap()
        })
        .collect();
    let id = ActionElement::linear(ExactMatrix::identity(field.clone(), n)).unwrap();
    close_group(&gens, id, 1_000).unwrap()
}

fn perm_and_signs(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<bool>)> {
    (
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        prop::collection::vec(any::<bool>(), n),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// delta(f*g) = delta(f)*g(x) + f(y)*delta(g), and delta is additive.
    #[test]
    fn delta_product_and_sum_rules((ring, ps) in ring_and_polys(2)) {
        let d = DoubledRing::new(&ring);
        let (f, g) = (&ps[0], &ps[1]);
        let lhs = d.delta(&f.mul(g));
        let rhs = d.delta(f).mul(&d.embed_x(g)).add(&d.embed_y(f).mul(&d.delta(g)));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(d.delta(&f.add(g)), d.delta(f).add(&d.delta(g)));
    }

    /// delta(f) vanishes exactly for constants.
    #[test]
    fn delta_kernel_is_constants((ring, ps) in ring_and_polys(1)) {
        let d = DoubledRing::new(&ring);
        prop_assert_eq!(d.delta(&ps[0]).is_zero(), ps[0].is_constant());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// act is a group action by ring homomorphisms: act(s*t, f) =
    /// act(s, act(t, f)), act(s, fg) = act(s,f) act(s,g), and act(s^-1, -)
    /// undoes act(s, -).
    #[test]
    fn action_laws(
        field in fields(),
        n in 2usize..=4,
        seed in any::<u64>(),
        (i_raw, j_raw) in (any::<usize>(), any::<usize>()),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = n.min(4);
        // one random signed permutation generator keeps the group small
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let group = signed_perm_group(&field, &[perm], &[signs]);
        let ring = PolyRing::plain(field.clone(), n);
        let mut raw = Vec::new();
        for _ in 0..3 {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3u32)).collect();
            raw.push((Monomial(e.into()), field.from_i64(rng.gen_range(-5i64..=5))));
        }
        let f = Polynomial::from_terms(&ring, raw);
        let g = Polynomial::var(&ring, 0).add(&Polynomial::var(&ring, n - 1).mul(&f));
        let i = i_raw % group.order();
        let j = j_raw % group.order();
        let s = group.element(i);
        let t = group.element(j);
        let st = group.element(group.mul_indices(i, j));
        prop_assert_eq!(act(st, &f).unwrap(), act(s, &act(t, &f).unwrap()).unwrap());
        prop_assert_eq!(act(s, &f.mul(&g)).unwrap(), act(s, &f).unwrap().mul(&act(s, &g).unwrap()));
        let sinv = group.element(group.inv_index(i));
        prop_assert_eq!(act(sinv, &act(s, &f).unwrap()).unwrap(), f);
    }

    /// The averaging operator projects onto invariants in characteristic zero.
    #[test]
    fn reynolds_projects_onto_invariants(
        n in 2usize..=3,
        (perm, signs) in (2usize..=3).prop_flat_map(perm_and_signs),
        exps in prop::collection::vec(0u32..3, 3),
        c in -5i64..=5,
    ) {
        let field = FieldSpec::parse("Q").unwrap();
        let n = n.min(perm.len());
        let perm: Vec<usize> = perm.iter().filter(|&&p| p < n).copied().collect();
        let signs = signs[..n].to_vec();
        let group = signed_perm_group(&field, &[perm], &[signs]);
        let ring = PolyRing::plain(field.clone(), n);
        let f = Polynomial::from_terms(
            &ring,
            vec![(Monomial(exps[..n].to_vec().into()), field.from_i64(c))],
        );
        let r = reynolds(&group, &f).unwrap();
        prop_assert!(is_invariant(&group, &r).unwrap());
        prop_assert_eq!(reynolds(&group, &r).unwrap(), r);
    }
}

/// Membership oracle for radicals of monomial ideals: a monomial lies in the
/// radical exactly when its support contains the support of some generator.
fn support_oracle(query: &[u32], gens: &[Vec<u32>]) -> bool {
    gens.iter().any(|g| {
        g.iter()
            .zip(query)
            .all(|(&ge, &qe)| ge == 0 || qe > 0)
    })
}

/// Krull dimension oracle for monomial ideals: the largest set of variables
/// containing no generator's support.
fn staircase_oracle(n: usize, gens: &[Vec<u32>]) -> usize {
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let ok = gens.iter().all(|g| {
            g.iter()
                .enumerate()
                .any(|(v, &e)| e > 0 && mask & (1 << v) == 0)
        });
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radical_membership_matches_support_oracle(
        field in fields(),
        n in 2usize..=4,
        raw_gens in prop::collection::vec(prop::collection::vec(0u32..=3, 4), 1..=4),
        raw_query in monomial_exps(4, 3),
    ) {
        let cfg = GroebnerConfig::default();
        let ring = PolyRing::plain(field, n);
        let gens: Vec<Vec<u32>> = raw_gens
            .into_iter()
            .map(|g| g[..n].to_vec())
            .filter(|g| g.iter().any(|&e| e > 0))
            .collect();
        prop_assume!(!gens.is_empty());
        let query = raw_query[..n].to_vec();
        prop_assume!(query.iter().any(|&e| e > 0));
        let gen_polys: Vec<Polynomial> = gens.iter().map(|g| monomial_poly(&ring, g)).collect();
        let q = monomial_poly(&ring, &query);
        let got = radical_member(&ring, &q, &gen_polys, &cfg).unwrap();
        prop_assert_eq!(got, support_oracle(&query, &gens));
    }

    #[test]
    fn dimension_matches_staircase_oracle(
        field in fields(),
        n in 2usize..=5,
        raw_gens in prop::collection::vec(prop::collection::vec(0u32..=3, 5), 1..=4),
    ) {
        let cfg = GroebnerConfig::default();
        let ring = PolyRing::plain(field, n);
        let gens: Vec<Vec<u32>> = raw_gens
            .into_iter()
            .map(|g| g[..n].to_vec())
            .filter(|g| g.iter().any(|&e| e > 0))
            .collect();
        prop_assume!(!gens.is_empty());
        let gen_polys: Vec<Polynomial> = gens.iter().map(|g| monomial_poly(&ring, g)).collect();
        let got = dimension(&ring, &gen_polys, &cfg).unwrap();
        prop_assert_eq!(got, Dimension::Dim(staircase_oracle(n, &gens)));
    }

    /// Any explicit ring combination of the generators reduces to zero, and
    /// reduction is idempotent with the difference staying in the ideal.
    /// Inputs stay small: random Buchberger runs on dense rational cubics
    /// can blow up, and the law does not need big instances.
    #[test]
    fn normal_form_kills_combinations(
        (ring, ps) in small_ring_and_polys(5),
        lex in any::<bool>(),
    ) {
        let cfg = GroebnerConfig::default();
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GrevLex };
        let gens = &ps[..2];
        let gb = groebner_basis_in(&ring, gens, order, &cfg).unwrap();
        let combo = gens[0].mul(&ps[2]).add(&gens[1].mul(&ps[3]));
        prop_assert!(gb.normal_form(&combo).is_zero());
        let f = &ps[4];
        let nf = gb.normal_form(f);
        prop_assert_eq!(gb.normal_form(&nf), nf.clone());
        prop_assert!(gb.contains(&f.sub(&nf)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Monomial orders are total, antisymmetric, multiplication-compatible,
    /// and have 1 as the least monomial.
    #[test]
    fn monomial_order_laws(
        n in 1usize..=5,
        a_raw in prop::collection::vec(0u32..=4, 5),
        b_raw in prop::collection::vec(0u32..=4, 5),
        c_raw in prop::collection::vec(0u32..=4, 5),
        lex in any::<bool>(),
    ) {
        use std::cmp::Ordering;
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GrevLex };
        let a = Monomial(a_raw[..n].to_vec().into());
        let b = Monomial(b_raw[..n].to_vec().into());
        let c = Monomial(c_raw[..n].to_vec().into());
        prop_assert_eq!(order.cmp(&a, &b), order.cmp(&b, &a).reverse());
        prop_assert_eq!(order.cmp(&a, &b) == Ordering::Equal, a == b);
        let ac = a.mul(&c);
        let bc = b.mul(&c);
        prop_assert_eq!(order.cmp(&a, &b), order.cmp(&ac, &bc));
        let one = Monomial::one(n);
        prop_assert_ne!(order.cmp(&one, &a), Ordering::Greater);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Orbit sums of Laurent monomials are invariant under the lattice group.
    #[test]
    fn torus_orbit_sums_are_invariant(
        pick in prop::collection::vec(any::<bool>(), 3),
        w in prop::collection::vec(-3i64..=3, 2),
    ) {
        let pool = [
            IntMatrix::new(2, vec![0, 1, 1, 0]),   // swap
            IntMatrix::new(2, vec![0, -1, 1, 0]),  // quarter turn
            IntMatrix::new(2, vec![-1, 0, 0, -1]), // inversion
        ];
        let gens: Vec<ActionElement> = pool
            .iter()
            .zip(&pick)
            .filter(|(_, &keep)| keep)
            .map(|(m, _)| ActionElement::monomial(m.clone()).unwrap())
            .collect();
        prop_assume!(!gens.is_empty());
        let id = ActionElement::monomial(IntMatrix::identity(2)).unwrap();
        let group = close_group(&gens, id, 100).unwrap();
        let ring = torus_ring(FieldSpec::parse("F7").unwrap(), 2);
        let s = orbit_sum(&group, &ring, &w).unwrap();
        prop_assert!(is_invariant_torus(&group, &s, 2).unwrap());
    }
}
