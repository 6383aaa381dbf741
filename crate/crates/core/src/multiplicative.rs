//! Multiplicative invariant theory: finite subgroups of GL_n(Z) acting on
//! the rank-n torus by monomial substitutions. The torus is modelled inside
//! affine 2n-space as V(x_1 y_1 - 1, ..., x_n y_n - 1), with y_i standing
//! for x_i^{-1}, so every scene-level computation (component graph,
//! separating verification, point scans) applies unchanged.

use crate::action::{close_group, ActionElement, FiniteGroup, IntMatrix, DEFAULT_CLOSURE_CAP};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::groebner::GroebnerConfig;
use crate::poly::{Monomial, PolyRing, Polynomial};
use crate::scene::{fixed_codim_via_ideal, FixedCodim, HypothesisFlag, Scene};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Coordinate ring for a rank-n torus scene: variables x_1..x_n, y_1..y_n.
pub fn torus_ring(field: FieldSpec, n: usize) -> Arc<PolyRing> {
    PolyRing::xy(field, n)
}

/// The defining relations x_i y_i - 1 of the torus inside affine 2n-space.
pub fn torus_relations(ring: &Arc<PolyRing>) -> Vec<Polynomial> {
    let n = ring.nvars() / 2;
    (0..n)
        .map(|i| {
            Polynomial::var(ring, i)
                .mul(&Polynomial::var(ring, n + i))
                .sub(&Polynomial::one(ring))
        })
        .collect()
}

/// Builds the scene for a lattice action on the torus. Generators may be
/// lattice or monomial elements; both carry a unimodular integer matrix and
/// are closed into a finite monomial group. The torus is irreducible,
/// normal, Cohen-Macaulay and connected, so those flags are set here rather
/// than asserted by the user. Listed invariants are Laurent polynomials
/// written in the x/y encoding and are checked for invariance.
pub fn torus_scene(
    ring: &Arc<PolyRing>,
    generators: &[ActionElement],
    invariants: Vec<Polynomial>,
    cfg: &GroebnerConfig,
) -> Result<Scene> {
    let n = ring.nvars() / 2;
    if ring.nvars() != 2 * n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "torus ring needs 2n variables, got {}",
            ring.nvars()
        )));
    }
    let elems: Vec<ActionElement> = generators
        .iter()
        .map(|g| match g {
            ActionElement::Lattice(m) | ActionElement::Monomial(m) => {
                ActionElement::monomial(m.clone())
            }
            other => Err(Error::MixedKind(format!(
                "{} element cannot act on a torus",
                other.kind_name()
            ))),
        })
        .collect::<Result<_>>()?;
    let id = ActionElement::Monomial(IntMatrix::identity(n));
    let group = close_group(&elems, id, DEFAULT_CLOSURE_CAP)?;
    let flags: BTreeSet<HypothesisFlag> = [
        HypothesisFlag::Irreducible,
        HypothesisFlag::Connected,
        HypothesisFlag::Normal,
        HypothesisFlag::CohenMacaulay,
    ]
    .into_iter()
    .collect();
    Scene::new(
        ring.clone(),
        torus_relations(ring),
        None,
        group,
        invariants,
        flags,
        Some(n),
        cfg,
    )
}

/// Codimension of the fixed locus of a lattice/monomial element, by linear
/// algebra: the fixed points satisfy t^{M - I} = 1, a subgroup whose
/// dimension is n minus the rational rank of M - I, in every characteristic.
pub fn reflection_rank_lattice(g: &ActionElement) -> Result<usize> {
    match g {
        ActionElement::Lattice(m) | ActionElement::Monomial(m) => {
            Ok(m.sub_identity().rank_over_q())
        }
        other => Err(Error::MixedKind(format!(
            "{} element has no lattice reflection rank",
            other.kind_name()
        ))),
    }
}

/// One element's fixed-locus codimension by both routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCodimCheck {
    pub element_index: usize,
    /// rank of M - I over the rationals
    pub rank_route: usize,
    /// dim X minus the Groebner dimension of the fixed-locus ideal
    pub groebner_route: FixedCodim,
    pub agree: bool,
}

/// Cross-checks, for every group element, the matrix-rank codimension
/// against the Groebner codimension on the torus scene. The two routes share
/// no code below the scene API; disagreement is reported, never patched.
pub fn lattice_height_crosscheck(
    scene: &Scene,
    cfg: &GroebnerConfig,
) -> Result<Vec<LatticeCodimCheck>> {
    scene
        .group
        .elements
        .iter()
        .enumerate()
        .map(|(element_index, e)| {
            let rank_route = reflection_rank_lattice(e)?;
            let groebner_route = fixed_codim_via_ideal(e, scene, cfg)?;
            let agree = groebner_route == FixedCodim::Codim(rank_route);
            Ok(LatticeCodimCheck { element_index, rank_route, groebner_route, agree })
        })
        .collect()
}

/// The orbit sum of the Laurent monomial with the given exponent vector: the
/// sum of x^w over the orbit {M_g^{-1} w}. Invariant by construction; the
/// standard generators of the multiplicative invariant ring are orbit sums
/// of a fundamental domain of exponents.
pub fn orbit_sum(
    group: &FiniteGroup,
    ring: &Arc<PolyRing>,
    exponent: &[i64],
) -> Result<Polynomial> {
    let n = exponent.len();
    if ring.nvars() != 2 * n {
        return Err(Error::DimensionMismatch(format!(
            "exponent vector of length {n} needs a {}-variable ring, got {}",
            2 * n,
            ring.nvars()
        )));
    }
    let mut orbit: BTreeSet<Vec<i64>> = BTreeSet::new();
    for e in &group.elements {
        let m = match e {
            ActionElement::Lattice(m) | ActionElement::Monomial(m) => m,
            other => {
                return Err(Error::MixedKind(format!(
                    "{} element in a lattice orbit computation",
                    other.kind_name()
                )))
            }
        };
        let minv = m.inverse()?;
        let image: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| minv.get(i, j) * exponent[j]).sum())
            .collect();
        orbit.insert(image);
    }
    let one = ring.field.one();
    let terms = orbit
        .into_iter()
        .map(|w| {
            let mut mono = Monomial::one(2 * n);
            for (i, &wi) in w.iter().enumerate() {
                if wi > 0 {
                    mono.0[i] = u32::try_from(wi).expect("orbit exponent fits in u32");
                } else if wi < 0 {
                    mono.0[n + i] = u32::try_from(-wi).expect("orbit exponent fits in u32");
                }
            }
            (mono, one.clone())
        })
        .collect();
    Ok(Polynomial::from_terms(ring, terms))
}
