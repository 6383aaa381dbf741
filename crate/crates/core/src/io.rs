//! Scene files and ideal files.
//!
//! A scene file is JSON with fields `field`, `n`, `variety` (polynomial
//! strings), optional `components` (list of lists), `group` (generator
//! matrices with optional translations), `invariants`, and `flags`. A torus
//! scene replaces `n`/`variety` with `torus: n` and integer generator
//! matrices; the defining relations are synthesized. Matrix entries are JSON
//! integers or strings parsed as field constants (`"1/2"`, `"a"` for the
//! extension generator).
//!
//! An ideal file is plain text: a header line `ring n=<vars> field=<spec>`,
//! then one polynomial per line; `#` starts a comment.

use crate::action::{close_group, ActionElement, IntMatrix, DEFAULT_CLOSURE_CAP};
use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::groebner::GroebnerConfig;
use crate::matrix::ExactMatrix;
use crate::multiplicative::{torus_ring, torus_scene};
use crate::poly::{parse_poly, PolyRing, Polynomial};
use crate::scene::{HypothesisFlag, Scene};
use serde::Deserialize;
use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    field: String,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    torus: Option<usize>,
    #[serde(default)]
    variety: Vec<String>,
    #[serde(default)]
    components: Option<Vec<Vec<String>>>,
    group: GroupFile,
    #[serde(default)]
    invariants: Vec<String>,
    #[serde(default)]
    flags: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    generators: Vec<GeneratorFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    matrix: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    translation: Option<Vec<serde_json::Value>>,
}

fn scalar_entry(field: &FieldSpec, v: &serde_json::Value) -> Result<FieldScalar> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|i| field.from_i64(i))
            .ok_or_else(|| Error::Parse(format!("matrix entry {n} is not an integer"))),
        serde_json::Value::String(s) => {
            let consts = PolyRing::with_names(field.clone(), vec![]);
            let p = parse_poly(&consts, s)?;
            Ok(p.constant_value()
                .ok_or_else(|| Error::Parse(format!("matrix entry {s:?} is not a constant")))?)
        }
        other => Err(Error::Parse(format!("matrix entry {other} is neither number nor string"))),
    }
}

fn int_entry(v: &serde_json::Value) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("lattice matrix entry {v} is not an integer")))
}

fn square_matrix<T>(rows: &[Vec<serde_json::Value>], parse: impl Fn(&serde_json::Value) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let n = rows.len();
    rows.iter()
        .map(|r| {
            if r.len() != n {
                return Err(Error::Parse(format!(
                    "matrix row has {} entries, expected {n}",
                    r.len()
                )));
            }
            r.iter().map(&parse).collect()
        })
        .collect()
}

/// Parses and validates a scene from JSON text. Validation (invariance of
/// listed invariants, component containment, nonempty variety) happens here,
/// so a scene in hand is always consistent.
pub fn parse_scene_str(text: &str, cfg: &GroebnerConfig) -> Result<Scene> {
    let file: SceneFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scene file: {e}")))?;
    let field = FieldSpec::parse(&file.field)?;
    let mut flags: BTreeSet<HypothesisFlag> = BTreeSet::new();
    for f in &file.flags {
        flags.insert(HypothesisFlag::parse(f)?);
    }

    if let Some(t) = file.torus {
        if file.n.is_some() || !file.variety.is_empty() || file.components.is_some() {
            return Err(Error::Parse(
                "a torus scene takes only `torus`, `group`, `invariants`, `flags`".into(),
            ));
        }
        let ring = torus_ring(field, t);
        let gens: Vec<ActionElement> = file
            .group
            .generators
            .iter()
            .map(|g| {
                if g.translation.is_some() {
                    return Err(Error::Parse("lattice generators take no translation".into()));
                }
                let rows = square_matrix(&g.matrix, int_entry)?;
                if rows.len() != t {
                    return Err(Error::DimensionMismatch(format!(
                        "lattice generator is {}x{}, torus rank is {t}",
                        rows.len(),
                        rows.len()
                    )));
                }
                let entries: Vec<i64> = rows.into_iter().flatten().collect();
                ActionElement::lattice(IntMatrix::new(t, entries))
            })
            .collect::<Result<_>>()?;
        let invariants = file
            .invariants
            .iter()
            .map(|s| parse_poly(&ring, s))
            .collect::<Result<Vec<_>>>()?;
        return torus_scene(&ring, &gens, invariants, cfg);
    }

    let n = file
        .n
        .ok_or_else(|| Error::Parse("scene file needs `n` (or `torus`)".into()))?;
    let ring = PolyRing::plain(field.clone(), n);
    let parse_all = |ss: &[String]| -> Result<Vec<Polynomial>> {
        ss.iter().map(|s| parse_poly(&ring, s)).collect()
    };
    let variety = parse_all(&file.variety)?;
    let components = file
        .components
        .as_ref()
        .map(|cs| cs.iter().map(|c| parse_all(c)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let invariants = parse_all(&file.invariants)?;

    let any_translation = file.group.generators.iter().any(|g| g.translation.is_some());
    let gens: Vec<ActionElement> = file
        .group
        .generators
        .iter()
        .map(|g| {
            let rows = square_matrix(&g.matrix, |v| scalar_entry(&field, v))?;
            if rows.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "group generator is {}x{}, scene has n = {n}",
                    rows.len(),
                    rows.len()
                )));
            }
            let flat: Vec<FieldScalar> = rows.into_iter().flatten().collect();
            let m = ExactMatrix::new(field.clone(), n, n, flat);
            match &g.translation {
                None => ActionElement::linear(m),
                Some(tv) => {
                    if tv.len() != n {
                        return Err(Error::DimensionMismatch(format!(
                            "translation has {} entries, scene has n = {n}",
                            tv.len()
                        )));
                    }
                    let b = tv
                        .iter()
                        .map(|v| scalar_entry(&field, v))
                        .collect::<Result<Vec<_>>>()?;
                    ActionElement::affine(m, b)
                }
            }
        })
        .collect::<Result<_>>()?;
    let identity = if any_translation {
        ActionElement::affine(
            ExactMatrix::identity(field.clone(), n),
            vec![field.zero(); n],
        )?
    } else {
        ActionElement::Linear(ExactMatrix::identity(field.clone(), n))
    };
    let group = close_group(&gens, identity, DEFAULT_CLOSURE_CAP)?;
    Scene::new(ring, variety, components, group, invariants, flags, None, cfg)
}

pub fn load_scene(path: &Path, cfg: &GroebnerConfig) -> Result<Scene> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_scene_str(&text, cfg)
}

/// Parses an ideal file: `ring n=<vars> field=<spec>` header, then one
/// polynomial per line. Returns the ring and the generators.
pub fn parse_ideal_str(text: &str) -> Result<(Arc<PolyRing>, Vec<Polynomial>)> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("ideal file is empty".into()))?;
    let mut n: Option<usize> = None;
    let mut field: Option<FieldSpec> = None;
    let mut words = header.split_whitespace();
    if words.next() != Some("ring") {
        return Err(Error::Parse(format!(
            "ideal file must start with `ring n=<vars> field=<spec>`, got {header:?}"
        )));
    }
    for w in words {
        if let Some(v) = w.strip_prefix("n=") {
            n = Some(v.parse().map_err(|_| Error::Parse(format!("bad n in header: {w}")))?);
        } else if let Some(v) = w.strip_prefix("field=") {
            field = Some(FieldSpec::parse(v)?);
        } else {
            return Err(Error::Parse(format!("unknown header item {w:?}")));
        }
    }
    let n = n.ok_or_else(|| Error::Parse("header is missing n=".into()))?;
    let field = field.ok_or_else(|| Error::Parse("header is missing field=".into()))?;
    let ring = PolyRing::plain(field, n);
    let gens = lines.map(|l| parse_poly(&ring, l)).collect::<Result<Vec<_>>>()?;
    Ok((ring, gens))
}

pub fn load_ideal(path: &Path) -> Result<(Arc<PolyRing>, Vec<Polynomial>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_ideal_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::FixedCodim;

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn two_planes_scene_file_round_trip() {
        let text = r#"{
            "field": "F7",
            "n": 4,
            "variety": ["x1^2 - x3^2", "x2^2 - x4^2", "x1*x2 - x3*x4", "x1*x4 - x2*x3"],
            "components": [["x1 - x3", "x2 - x4"], ["x1 + x3", "x2 + x4"]],
            "group": {"generators": [
                {"matrix": [[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]]}
            ]},
            "invariants": ["x1", "x2"]
        }"#;
        let scene = parse_scene_str(text, &cfg()).unwrap();
        assert_eq!(scene.dim_x, 2);
        assert_eq!(scene.group.order(), 2);
        assert_eq!(scene.invariants.len(), 2);
        assert!(scene.components.as_ref().unwrap().len() == 2);
    }

    #[test]
    fn affine_generator_with_translation() {
        let text = r#"{
            "field": "F5",
            "n": 1,
            "group": {"generators": [
                {"matrix": [[1]], "translation": [1]}
            ]},
            "invariants": ["x1^5 - x1"],
            "flags": ["irreducible", "connected"]
        }"#;
        let scene = parse_scene_str(text, &cfg()).unwrap();
        assert_eq!(scene.group.order(), 5);
        assert_eq!(
            crate::scene::fixed_codim(scene.group.element(1), &scene, &cfg()).unwrap(),
            FixedCodim::EmptyFixedLocus
        );
    }

    #[test]
    fn torus_scene_file() {
        let text = r#"{
            "field": "F5",
            "torus": 1,
            "group": {"generators": [{"matrix": [[-1]]}]},
            "invariants": ["x1 + y1"]
        }"#;
        let scene = parse_scene_str(text, &cfg()).unwrap();
        assert_eq!(scene.torus_rank, Some(1));
        assert_eq!(scene.group.order(), 2);
        assert_eq!(scene.dim_x, 1);
    }

    #[test]
    fn extension_scalar_entries() {
        let text = r#"{
            "field": "F4:x^2+x+1",
            "n": 2,
            "group": {"generators": [{"matrix": [["a", 0], [0, "a^2"]]}]},
            "invariants": []
        }"#;
        let scene = parse_scene_str(text, &cfg()).unwrap();
        // a has multiplicative order 3 in F_4
        assert_eq!(scene.group.order(), 3);
    }

    #[test]
    fn bad_scene_files_are_rejected() {
        // unknown top-level field
        assert!(matches!(
            parse_scene_str(r#"{"field": "F7", "n": 1, "group": {"generators": []}, "bogus": 1}"#, &cfg()),
            Err(Error::Parse(_))
        ));
        // unknown flag
        assert!(matches!(
            parse_scene_str(
                r#"{"field": "F7", "n": 1, "group": {"generators": []}, "flags": ["smooth"]}"#,
                &cfg()
            ),
            Err(Error::Parse(_))
        ));
        // non-square matrix
        assert!(matches!(
            parse_scene_str(
                r#"{"field": "F7", "n": 2, "group": {"generators": [{"matrix": [[1,0]]}]}}"#,
                &cfg()
            ),
            Err(Error::Parse(_) | Error::DimensionMismatch(_))
        ));
        // torus with variety
        assert!(matches!(
            parse_scene_str(
                r#"{"field": "F7", "torus": 1, "variety": ["x1"], "group": {"generators": []}}"#,
                &cfg()
            ),
            Err(Error::Parse(_))
        ));
        // non-invariant listed invariant
        assert!(matches!(
            parse_scene_str(
                r#"{"field": "F7", "n": 2,
                    "group": {"generators": [{"matrix": [[0,1],[1,0]]}]},
                    "invariants": ["x1"]}"#,
                &cfg()
            ),
            Err(Error::NotInvariant(_))
        ));
    }

    #[test]
    fn ideal_file_parses() {
        let text = "# a comment\nring n=3 field=F7\nx1^2 - x2 # inline\n\nx2*x3\n";
        let (ring, gens) = parse_ideal_str(text).unwrap();
        assert_eq!(ring.nvars(), 3);
        assert_eq!(gens.len(), 2);
        assert!(matches!(
            parse_ideal_str("x1 + x2\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_ideal_str("ring n=2\nx1\n"), Err(Error::Parse(_))));
    }
}
