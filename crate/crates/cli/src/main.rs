//! Command-line front end. Every subcommand loads its input, runs one
//! library routine, and prints a deterministic `key: value` report: identical
//! inputs give byte-identical output. The verdict is the exit code —
//! 0 affirmative, 1 refuted/negative, 2 inconclusive, 3 malformed input or
//! unmet hypothesis, 4 resource cap — and the report body carries the
//! diagnostics, so scripts can branch on the code without parsing text.

use clap::{Parser, Subcommand, ValueEnum};
use sepinv_core::{
    build_component_graph, check_identity, classify_reflections, crosscheck_connectedness_with,
    default_degree_bound, gamma_sep_bounds, groebner_basis_in, invariant_space, load_ideal,
    load_scene, min_reflection_k_from, molien_series, parse_poly, verify_separating_groebner,
    verify_separating_points, Error, GroebnerConfig, MonomialOrder, PointsVerdict, Polynomial,
    Scene, SeparatingVerdict, ViolationCertificate, DEFAULT_POINT_CAP,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sepinv",
    version,
    about = "Separating invariants of finite group actions on affine varieties"
)]
struct Cli {
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Budget on term operations inside Groebner runs.
    #[arg(long, global = true, value_name = "N")]
    max_term_ops: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Groebner,
    Points,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Subcommand)]
enum Command {
    /// Classify each group element by the codimension of its fixed locus.
    Reflections {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
    },
    /// Emit the separating-variety component graph in DOT format.
    VsepGraph {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
    },
    /// Verify or refute a candidate separating set.
    CheckSeparating {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "groebner")]
        method: MethodArg,
        /// File with one candidate polynomial per line; defaults to the
        /// scene's invariant list.
        #[arg(long, value_name = "FILE")]
        candidates: Option<PathBuf>,
        /// Field extension degrees scanned by the points method.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2])]
        powers: Vec<u32>,
        /// Cap on variety points collected per scan.
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        point_cap: u64,
    },
    /// Bounds on the least possible size of a separating set.
    GammaBound {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        /// Hypothesis flags to assume in addition to the scene's own.
        #[arg(long, value_delimiter = ',', value_name = "FLAGS")]
        assume: Vec<String>,
    },
    /// Graded invariant bases up to a degree bound.
    Invariants {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        /// Defaults to the group order.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Reduced Groebner basis of an ideal file.
    Gb {
        #[arg(long, value_name = "FILE")]
        ideal: PathBuf,
        #[arg(long, value_enum, default_value = "grevlex")]
        order: OrderArg,
    },
    /// Molien series coefficients of the invariant ring.
    Molien {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Check a polynomial identity among named bound polynomials.
    CheckIdentity {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        /// Bindings "name=poly", repeatable.
        #[arg(long = "bind", value_name = "NAME=POLY")]
        bindings: Vec<String>,
        /// Identity over the bound names, "expr" or "lhs = rhs".
        #[arg(long)]
        identity: String,
        /// Reduce modulo the scene's variety ideal instead of exact equality.
        #[arg(long)]
        modulo_variety: bool,
    },
    /// Compare separating-variety connectedness against X-connectedness and
    /// k-reflection generation, at one codimension or over a sweep.
    CrosscheckConnectedness {
        #[arg(long, value_name = "FILE")]
        scene: PathBuf,
        /// Single codimension level; defaults to sweeping 0..=dim X.
        #[arg(long)]
        k: Option<usize>,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ClosureCap(_)
        | Error::GroebnerCap(_)
        | Error::EnumerationCap(_)
        | Error::DegreeBound(_) => 4,
        _ => 3,
    }
}

fn read_candidates(scene: &Scene, path: &Path) -> Result<Vec<Polynomial>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("candidates file {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_poly(&scene.ring, line)?);
    }
    if out.is_empty() {
        return Err(Error::Parse(format!(
            "candidates file {} lists no polynomials",
            path.display()
        )));
    }
    Ok(out)
}

fn scene_header(scene: &Scene) -> String {
    let flags = if scene.flags.is_empty() {
        "(none)".to_string()
    } else {
        scene
            .flags
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "field: {}\ndim_x: {}\ngroup_order: {}\nflags: {}\n",
        scene.ring.field,
        scene.dim_x,
        scene.group.order(),
        flags
    )
}

fn run_reflections(scene: &Scene, cfg: &GroebnerConfig) -> Result<(String, u8), Error> {
    let codims = classify_reflections(scene, cfg)?;
    let mut report = scene_header(scene);
    for (i, (g, c)) in scene.group.elements.iter().zip(&codims).enumerate() {
        report.push_str(&format!(
            "element {i}: kind={} fixed_codim={c}\n",
            g.kind_name()
        ));
    }
    match min_reflection_k_from(&scene.group, &codims) {
        Some(k) => report.push_str(&format!("min_reflection_k = {k}\n")),
        None => {
            report.push_str("min_reflection_k = none\n");
            report.push_str("note: the group is not generated by elements having fixed points\n");
        }
    }
    Ok((report, 0))
}

fn run_vsep_graph(scene: &Scene, cfg: &GroebnerConfig) -> Result<(String, u8), Error> {
    let graph = build_component_graph(scene, cfg)?;
    Ok((graph.to_dot(), 0))
}

fn run_check_separating(
    scene: &Scene,
    method: MethodArg,
    candidates: Option<&Path>,
    powers: &[u32],
    point_cap: u64,
    cfg: &GroebnerConfig,
) -> Result<(String, u8), Error> {
    let cands: Vec<Polynomial> = match candidates {
        Some(path) => read_candidates(scene, path)?,
        None => scene.invariants.clone(),
    };
    let mut report = scene_header(scene);
    report.push_str(&format!("candidates: {}\n", cands.len()));
    match method {
        MethodArg::Groebner => {
            report.push_str("method: groebner\n");
            match verify_separating_groebner(scene, &cands, cfg)? {
                SeparatingVerdict::Separating => {
                    report.push_str("verdict: separating\n");
                    Ok((report, 0))
                }
                SeparatingVerdict::NotSeparating { generator_index } => {
                    report.push_str("verdict: not_separating\n");
                    report.push_str(&format!("invariant_index: {generator_index}\n"));
                    report.push_str(&format!(
                        "invariant: {}\n",
                        scene.invariants[generator_index]
                    ));
                    Ok((report, 1))
                }
                SeparatingVerdict::Inconclusive { note } => {
                    report.push_str("verdict: inconclusive\n");
                    report.push_str(&format!("note: {note}\n"));
                    Ok((report, 2))
                }
            }
        }
        MethodArg::Points => {
            report.push_str("method: points\n");
            report.push_str(&format!(
                "powers: {}\n",
                powers
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            report.push_str(&format!("point_cap: {point_cap}\n"));
            match verify_separating_points(scene, &cands, powers, point_cap)? {
                PointsVerdict::NoViolationFound { scans } => {
                    for s in &scans {
                        report.push_str(&format!(
                            "scan: power={} field_order={} variety_points={}\n",
                            s.power, s.field_order, s.variety_points
                        ));
                    }
                    report.push_str("verdict: no_violation_found\n");
                    Ok((report, 0))
                }
                PointsVerdict::Refuted(w) => {
                    report.push_str("verdict: refuted\n");
                    report.push_str(&format!("power: {}\n", w.power));
                    report.push_str(&format!("field: {}\n", w.field));
                    let fmt_point = |p: &[sepinv_core::FieldScalar]| {
                        p.iter()
                            .map(|v| w.field.format_scalar(v))
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    report.push_str(&format!("x: ({})\n", fmt_point(&w.x)));
                    report.push_str(&format!("y: ({})\n", fmt_point(&w.y)));
                    match w.certificate {
                        ViolationCertificate::GeneratorDisagrees { generator_index } => {
                            report.push_str(&format!(
                                "certificate: listed invariant {generator_index} separates the pair\n"
                            ));
                        }
                        ViolationCertificate::DistinctOrbits => {
                            report.push_str(
                                "certificate: distinct orbits (no listed invariant separates the pair)\n",
                            );
                        }
                    }
                    Ok((report, 1))
                }
            }
        }
    }
}

fn run_gamma_bound(
    scene: &mut Scene,
    assume: &[String],
    cfg: &GroebnerConfig,
) -> Result<(String, u8), Error> {
    for raw in assume {
        for part in raw.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            scene
                .flags
                .insert(sepinv_core::HypothesisFlag::parse(part)?);
        }
    }
    let bounds = gamma_sep_bounds(scene, cfg)?;
    let mut report = scene_header(scene);
    report.push_str(&format!("lower: {}\n", bounds.lower));
    report.push_str(&format!("upper: {}\n", bounds.upper));
    for note in &bounds.notes {
        report.push_str(&format!("note: {note}\n"));
    }
    Ok((report, 0))
}

fn run_invariants(scene: &Scene, max_degree: Option<usize>) -> Result<(String, u8), Error> {
    let bound = max_degree.unwrap_or_else(|| default_degree_bound(&scene.group));
    let mut report = scene_header(scene);
    report.push_str(&format!("max_degree: {bound}\n"));
    for d in 0..=bound {
        let piece = invariant_space(&scene.group, &scene.ring, d, bound)?;
        report.push_str(&format!("degree {d}: dimension {}\n", piece.basis.len()));
        for b in &piece.basis {
            report.push_str(&format!("  {b}\n"));
        }
    }
    Ok((report, 0))
}

fn run_gb(ideal: &Path, order: OrderArg, cfg: &GroebnerConfig) -> Result<(String, u8), Error> {
    let (ring, gens) = load_ideal(ideal)?;
    let (order, name) = match order {
        OrderArg::Grevlex => (MonomialOrder::GrevLex, "grevlex"),
        OrderArg::Lex => (MonomialOrder::Lex, "lex"),
    };
    let gb = groebner_basis_in(&ring, &gens, order, cfg)?;
    let mut report = format!("field: {}\nvariables: {}\norder: {name}\n", ring.field, ring.nvars());
    report.push_str(&format!("basis_size: {}\n", gb.elements.len()));
    for g in &gb.elements {
        report.push_str(&format!("{}\n", g.to_string_in(order)));
    }
    Ok((report, 0))
}

fn run_molien(scene: &Scene, terms: usize) -> Result<(String, u8), Error> {
    let coeffs = molien_series(&scene.group, terms)?;
    let mut report = scene_header(scene);
    report.push_str(&format!("terms: {terms}\n"));
    let rendered = coeffs
        .iter()
        .map(|c| scene.ring.field.format_scalar(c))
        .collect::<Vec<_>>()
        .join(", ");
    report.push_str(&format!("coefficients: {rendered}\n"));
    Ok((report, 0))
}

fn run_check_identity(
    scene: &Scene,
    bindings: &[String],
    identity: &str,
    modulo_variety: bool,
    cfg: &GroebnerConfig,
) -> Result<(String, u8), Error> {
    let mut bound = Vec::new();
    for raw in bindings {
        let (name, rhs) = raw.split_once('=').ok_or_else(|| {
            Error::Parse(format!("binding {raw:?} is not of the form name=poly"))
        })?;
        bound.push((name.trim().to_string(), parse_poly(&scene.ring, rhs.trim())?));
    }
    let modulo = if modulo_variety {
        Some(scene.variety.as_slice())
    } else {
        None
    };
    let holds = check_identity(&bound, identity, modulo, cfg)?;
    let mut report = scene_header(scene);
    for (name, p) in &bound {
        report.push_str(&format!("binding: {name} = {p}\n"));
    }
    report.push_str(&format!("identity: {identity}\n"));
    report.push_str(&format!(
        "modulo_variety: {}\n",
        if modulo_variety { "yes" } else { "no" }
    ));
    report.push_str(&format!("holds: {holds}\n"));
    Ok((report, if holds { 0 } else { 1 }))
}

fn run_crosscheck(
    scene: &Scene,
    k: Option<usize>,
    cfg: &GroebnerConfig,
) -> Result<(String, u8), Error> {
    let graph = build_component_graph(scene, cfg)?;
    let codims = classify_reflections(scene, cfg)?;
    let levels: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=scene.dim_x).collect(),
    };
    let mut report = scene_header(scene);
    let mut disagreements = Vec::new();
    for &level in &levels {
        let c = crosscheck_connectedness_with(scene, &graph, &codims, level, cfg)?;
        report.push_str(&format!(
            "k={}: vsep_connected={} x_connected={} generated_by_k_reflections={} agree={}\n",
            c.k, c.vsep_connected, c.x_connected, c.generated_by_k_reflections, c.agree
        ));
        if !c.agree {
            disagreements.push(level);
        }
    }
    if disagreements.is_empty() {
        report.push_str("agreement: all\n");
        Ok((report, 0))
    } else {
        let list = disagreements
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        report.push_str(&format!("agreement: disagreement at k = {list}\n"));
        Ok((report, 1))
    }
}

fn dispatch(cli: &Cli, cfg: &GroebnerConfig) -> Result<(String, u8), Error> {
    match &cli.command {
        Command::Reflections { scene } => {
            let scene = load_scene(scene, cfg)?;
            run_reflections(&scene, cfg)
        }
        Command::VsepGraph { scene } => {
            let scene = load_scene(scene, cfg)?;
            run_vsep_graph(&scene, cfg)
        }
        Command::CheckSeparating {
            scene,
            method,
            candidates,
            powers,
            point_cap,
        } => {
            let scene = load_scene(scene, cfg)?;
            run_check_separating(&scene, *method, candidates.as_deref(), powers, *point_cap, cfg)
        }
        Command::GammaBound { scene, assume } => {
            let mut scene = load_scene(scene, cfg)?;
            run_gamma_bound(&mut scene, assume, cfg)
        }
        Command::Invariants { scene, max_degree } => {
            let scene = load_scene(scene, cfg)?;
            run_invariants(&scene, *max_degree)
        }
        Command::Gb { ideal, order } => run_gb(ideal, *order, cfg),
        Command::Molien { scene, terms } => {
            let scene = load_scene(scene, cfg)?;
            run_molien(&scene, *terms)
        }
        Command::CheckIdentity {
            scene,
            bindings,
            identity,
            modulo_variety,
        } => {
            let scene = load_scene(scene, cfg)?;
            run_check_identity(&scene, bindings, identity, *modulo_variety, cfg)
        }
        Command::CrosscheckConnectedness { scene, k } => {
            let scene = load_scene(scene, cfg)?;
            run_crosscheck(&scene, *k, cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = GroebnerConfig::default();
    if let Some(ops) = cli.max_term_ops {
        cfg.max_term_ops = ops;
    }
    match dispatch(&cli, &cfg) {
        Ok((mut report, code)) => {
            if !report.ends_with('\n') {
                report.push('\n');
            }
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &report) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            } else {
                print!("{report}");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
