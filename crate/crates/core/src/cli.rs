//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code: 0 when every check passes, 1 when a
//! check fails, 2 for usage and input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bgg_complex::{bgg_weights, euler_check};
use crate::error::{Error, Result};
use crate::group_cohomology::cache::{cache_path, cached_octagon_group};
use crate::group_cohomology::{
    coefficient_action, cohomology_report, geodesic_cocycle, is_coboundary, CocycleOptions, Coefficients,
    FlatRepresentation, Word,
};
use crate::kostant::{compare_with_bgg, kostant_report, realize, verify_square_zero, ModuleFamily};
use crate::linalg::RankTolerance;
use crate::tractor_numerics::holonomy::from_rows;
use crate::tractor_numerics::klein::KleinPoint;
use crate::tractor_numerics::{
    check_flatness, check_metric, normal_tractor_check, quotient_holonomy, CurveSpec, Hypersurface,
};
use crate::vz_branching::{branch, vanishing_profile};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Holonomy against generator matrices.
    pub holonomy: f64,
    /// Tractor-norm drift per unit hyperbolic length.
    pub metric_drift: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank_relative: f64,
    /// Required singular-value gap at the rank cutoff.
    pub rank_gap: f64,
    /// `∇ν` on totally geodesic slices.
    pub normal_tractor: f64,
    /// Relator constraint of a cocycle.
    pub relator: f64,
    /// Least-squares residual below which a cocycle counts as a coboundary.
    pub coboundary: f64,
    /// Residual a nontrivial cocycle must exceed.
    pub nontrivial: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            holonomy: 1e-6,
            metric_drift: 1e-9,
            rank_relative: 1e-7,
            rank_gap: 1e3,
            normal_tractor: 1e-8,
            relator: 1e-6,
            coboundary: 1e-6,
            nontrivial: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    /// RK4 step in hyperbolic arclength.
    pub step: f64,
    pub format: OutputFormat,
    pub cache: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), step: 1e-3, format: OutputFormat::Table, cache: None, seed: 2024 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let all = [
            ("holonomy", t.holonomy),
            ("metric_drift", t.metric_drift),
            ("rank_relative", t.rank_relative),
            ("rank_gap", t.rank_gap),
            ("normal_tractor", t.normal_tractor),
            ("relator", t.relator),
            ("coboundary", t.coboundary),
            ("nontrivial", t.nontrivial),
        ];
        if let Some((name, v)) = all.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
        }
        if !(self.step > 0.0 && self.step < 0.1) {
            return Err(Error::Config(format!("step must lie in (0, 0.1), got {}", self.step)));
        }
        Ok(())
    }

    pub fn rank(&self) -> RankTolerance {
        RankTolerance { relative: self.tolerances.rank_relative, gap: self.tolerances.rank_gap }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tractor-bgg",
    version,
    about = "BGG complexes, Kostant homology, tractor numerics and surface-group cohomology"
)]
pub struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file overriding the default run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slot table of the BGG complex for an `sl(n+1)` label.
    Bgg {
        #[arg(long)]
        n: usize,
        /// Comma-separated labels a1,...,aN.
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Chain dimensions, ranks and homology of the Kostant codifferential.
    Kostant {
        /// trivial, defining, dual, adjoint, symk:K or symk-dual:K.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Branching to `SO(n,1)` and vanishing profiles.
    Vz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family: String,
        /// Degree for `symk` and `symk-dual` given without `:K`.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Numerical checks of the tractor connection.
    #[command(subcommand)]
    Geometry(GeometryCommand),
    /// Holonomy of a word in the octagon group against its matrix.
    Holonomy {
        /// Word such as `1,-2,3` (generators numbered from 1).
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value = "defining")]
        rep: String,
        #[arg(long)]
        step: Option<f64>,
        /// Base point `x,y` (default the origin).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// `H⁰` and `H¹` of the octagon group.
    Cohomology {
        #[arg(long, default_value = "defining")]
        rep: String,
        #[arg(long)]
        h0: bool,
        #[arg(long)]
        h1: bool,
    },
    /// Crossing cocycle of a generator's axis and its nontriviality.
    Cocycle {
        /// Generator whose axis is used, numbered from 1.
        #[arg(long, default_value_t = 1)]
        axis_generator: usize,
        #[arg(long, default_value = "symk:1")]
        rep: String,
        /// Distance of the base point from the origin.
        #[arg(long, default_value_t = 1e-3)]
        base_offset: f64,
    },
    /// Cross-module consistency suites.
    Crosscheck {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeometryCommand {
    /// Holonomy of shrinking square loops.
    CheckFlatness(FlatnessArgs),
    /// Tractor-norm drift along a polygon.
    CheckMetric {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Parallelism of the normal tractor along a hypersurface.
    CheckNormalTractor(NormalArgs),
}

#[derive(Debug, Args)]
pub struct FlatnessArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Loop centre `x,y,...` (default the origin).
    #[arg(long, allow_hyphen_values = true)]
    pub centre: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    #[arg(long, default_value_t = 3)]
    pub halvings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    Plane,
    Sphere,
}

#[derive(Debug, Args)]
pub struct NormalArgs {
    #[arg(long, value_enum, default_value = "plane")]
    pub surface: SurfaceKind,
    /// Plane normal `a1,...,an` (default the last coordinate axis).
    #[arg(long, allow_hyphen_values = true)]
    pub normal: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    KostantVsBgg,
    HolonomyVsRep,
    EulerVsFox,
    CocycleNontrivial,
}

/// Result of one subcommand.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub report: Value,
    pub table: String,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| Error::Config(format!("bad {what} entry {t:?}")))).collect()
}

fn family_arg(family: &str, k: Option<usize>) -> Result<ModuleFamily> {
    match k {
        Some(k) if !family.contains(':') => format!("{family}:{k}").parse(),
        _ => family.parse(),
    }
}

fn group(cfg: &RunConfig, rep: &str) -> Result<FlatRepresentation> {
    let base = cached_octagon_group(cache_path(cfg.cache.as_deref()).as_deref())?;
    coefficient_action(&base, rep.parse()?)
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Bgg { n, weight } => {
            let a: Vec<i64> = parse_list(weight, "weight")?;
            let c = bgg_weights(*n, &a)?;
            let pass = euler_check(&c);
            let mut t = format!("BGG complex for sl({}) label {:?}\n", n + 1, a);
            for (k, slot) in c.slots.iter().enumerate() {
                let name = c.names[k].as_deref().unwrap_or("-");
                let _ = writeln!(t, "  {k}  {slot:?}  dim {}  {name}", c.dims[k]);
            }
            let _ = writeln!(t, "Euler sum vanishes: {}", mark(pass));
            Ok(Outcome { pass, report: json!({ "complex": c, "euler_check": pass }), table: t })
        }
        Command::Kostant { family, n } => {
            let family: ModuleFamily = family.parse()?;
            let e = realize(family, *n)?;
            let r = kostant_report(&e)?;
            let square_zero = verify_square_zero(&e);
            let cmp = compare_with_bgg(family, *n)?;
            let mut t = format!("Kostant codifferential, {family}, n = {n}, module dim {}\n", r.module_dim);
            let _ = writeln!(t, "  chain dims  {:?}", r.chain_dims);
            let _ = writeln!(t, "  ranks       {:?}", r.ranks);
            let _ = writeln!(t, "  homology    {:?}", r.homology);
            let _ = writeln!(t, "  bgg dims    {:?}  agree: {}", cmp.bgg, cmp.agree);
            let _ = writeln!(t, "  ∂*∂* = 0: {}", mark(square_zero));
            // disagreement with the bundle table is reported, not a failure
            Ok(Outcome {
                pass: square_zero,
                report: json!({ "report": r, "square_zero": square_zero, "bgg": cmp }),
                table: t,
            })
        }
        Command::Vz { n, family, k } => {
            let family = family_arg(family, *k)?;
            let b = branch(family, *n)?;
            let mut rows = Vec::new();
            let mut t = format!("{} of sl({}) restricted to so({n},1), dim {}\n", b.family, n + 1, b.source_dim);
            for s in &b.summands {
                let profile: Vec<usize> = vanishing_profile(&s.irrep).into_iter().collect();
                let _ = writeln!(t, "  {}  dim {}  vanishing in degrees {:?}", s.name, s.irrep.dim, profile);
                rows.push(
                    json!({ "name": s.name, "dim": s.irrep.dim, "weight": s.irrep.weight, "vanishing": profile }),
                );
            }
            let pass = b.total_dim() == b.source_dim;
            Ok(Outcome {
                pass,
                report: json!({ "family": b.family, "n": n, "source_dim": b.source_dim, "summands": rows }),
                table: t,
            })
        }
        Command::Geometry(g) => geometry(g, cfg),
        Command::Holonomy { word, rep, step, base } => {
            let g = group(cfg, rep)?;
            let w: Word = word.parse()?;
            let step = step.unwrap_or(cfg.step);
            let x0 = match base {
                Some(b) => KleinPoint::from_slice(&parse_list::<f64>(b, "base point")?)?,
                None => KleinPoint::origin(2),
            };
            let h = quotient_holonomy(&g, &w, &x0, step, Some(cfg.tolerances.holonomy))?;
            let expected = g.eval(&w);
            let scale = expected.amax().max(1.0);
            let max_error = (from_rows(&h.matrix) - &expected).amax() / scale;
            let pass = max_error < cfg.tolerances.holonomy;
            let t = format!(
                "holonomy of {w} ({rep}) against its matrix: relative error {max_error:.3e} (tolerance {:.1e}) {}\n",
                cfg.tolerances.holonomy,
                mark(pass)
            );
            Ok(Outcome {
                pass,
                report: json!({ "holonomy": h, "max_error": max_error, "tolerance": cfg.tolerances.holonomy, "pass": pass, "step": step }),
                table: t,
            })
        }
        Command::Cohomology { rep, h0, h1 } => {
            let g = group(cfg, rep)?;
            let r = cohomology_report(&g, cfg.rank())?;
            let pass = r.h1 as i64 == r.euler_prediction;
            let (show0, show1) = if !h0 && !h1 { (true, true) } else { (*h0, *h1) };
            let mut report = json!({
                "rep": g.coefficients.to_string(),
                "dim": r.coefficient_dim,
                "euler_prediction": r.euler_prediction,
                "min_gap": json!(&r)["min_gap"],
                "min_margin": r.min_margin,
                "relator_residual": g.relator_residual(),
                "pass": pass,
            });
            let mut t = format!("octagon group, coefficients {} (dim {})\n", g.coefficients, r.coefficient_dim);
            if show0 {
                report["h0"] = json!(r.h0);
                let _ = writeln!(t, "  h0 = {}", r.h0);
            }
            if show1 {
                report["h1"] = json!(r.h1);
                let _ = writeln!(t, "  h1 = {}  (Euler prediction {}) {}", r.h1, r.euler_prediction, mark(pass));
            }
            Ok(Outcome { pass, report, table: t })
        }
        Command::Cocycle { axis_generator, rep, base_offset } => {
            let k = match rep.parse::<Coefficients>()? {
                Coefficients::Defining => 1,
                Coefficients::TraceFree(k) if k >= 1 => k,
                other => {
                    return Err(Error::Config(format!("cocycle coefficients must be symk:K with K ≥ 1, got {other}")))
                }
            };
            if *axis_generator == 0 {
                return Err(Error::Config("generators are numbered from 1".into()));
            }
            let base = group(cfg, "defining")?;
            let opts = CocycleOptions { base_offset: *base_offset, ..CocycleOptions::default() };
            let (report, t, pass) = cocycle_case(&base, axis_generator - 1, k, &opts, cfg)?;
            Ok(Outcome { pass, report, table: t })
        }
        Command::Crosscheck { suite, n } => crosscheck(*suite, *n, cfg),
    }
}

fn cocycle_case(
    base: &FlatRepresentation,
    axis: usize,
    k: usize,
    opts: &CocycleOptions,
    cfg: &RunConfig,
) -> Result<(Value, String, bool)> {
    let r = geodesic_cocycle(base, axis, k, opts)?;
    let (trivial, residual) = is_coboundary(&r.cocycle, &r.representation, cfg.tolerances.coboundary);
    let relator_ok = r.relator_residual < cfg.tolerances.relator;
    let pass = relator_ok && !trivial && residual > cfg.tolerances.nontrivial;
    let t = format!(
        "axis of x{} with S^{k}_0 coefficients: crossings {:?}, relator residual {:.2e}, coboundary residual {:.3e} {}\n",
        axis + 1,
        r.crossings,
        r.relator_residual,
        residual,
        mark(pass)
    );
    let report = json!({
        "axis_generator": axis + 1,
        "k": k,
        "values": r.cocycle,
        "crossings": r.crossings,
        "min_crossing_sine": r.min_crossing_sine,
        "simplicity_margin": r.simplicity_margin,
        "axis_pairings": r.axis_pairings,
        "residuals": { "relator": r.relator_residual, "coboundary": residual },
        "verdicts": { "cocycle": relator_ok, "coboundary": trivial },
        "tolerances": { "relator": cfg.tolerances.relator, "coboundary": cfg.tolerances.coboundary, "nontrivial": cfg.tolerances.nontrivial },
        "pass": pass,
    });
    Ok((report, t, pass))
}

fn geometry(g: &GeometryCommand, cfg: &RunConfig) -> Result<Outcome> {
    match g {
        GeometryCommand::CheckFlatness(a) => {
            let centre = match &a.centre {
                Some(c) => KleinPoint::from_slice(&parse_list::<f64>(c, "centre")?)?,
                None => KleinPoint::origin(a.dim),
            };
            let r = check_flatness(&centre, a.side, a.halvings, cfg.step)?;
            let max_error = r.deviations.iter().copied().fold(0.0, f64::max);
            let shrinks = r.shrink_ratios.iter().all(|&q| q >= 4.0);
            let pass = max_error < cfg.tolerances.holonomy && shrinks;
            let mut t = format!("square loops about {:?}, step {}\n", r.centre, r.step);
            for (s, d) in r.sides.iter().zip(&r.deviations) {
                let _ = writeln!(t, "  side {s:<8} |M - I| = {d:.3e}");
            }
            let _ = writeln!(t, "  shrink ratios {:?} {}", r.shrink_ratios, mark(pass));
            Ok(Outcome {
                pass,
                report: json!({ "max_error": max_error, "tolerance": cfg.tolerances.holonomy, "pass": pass, "loops": r }),
                table: t,
            })
        }
        GeometryCommand::CheckMetric { dim } => {
            if *dim < 2 {
                return Err(Error::Config("dimension must be at least 2".into()));
            }
            let at = |v: &[(usize, f64)]| {
                let mut x = vec![0.0; *dim];
                for &(i, c) in v {
                    x[i] = c;
                }
                KleinPoint::from_slice(&x)
            };
            let curve = CurveSpec::new(vec![at(&[])?, at(&[(0, 0.7)])?, at(&[(1, -0.7)])?, at(&[])?], cfg.step)?;
            let tangent = DVector::from_fn(*dim, |i, _| 0.3 - 0.5 * i as f64);
            let r = check_metric(&curve, &tangent, 0.4)?;
            let pass = r.drift_per_length < cfg.tolerances.metric_drift;
            let t = format!(
                "tractor norm drift {:.3e} over length {:.3} ({:.3e} per unit, tolerance {:.1e}) {}\n",
                r.drift,
                r.length,
                r.drift_per_length,
                cfg.tolerances.metric_drift,
                mark(pass)
            );
            Ok(Outcome {
                pass,
                report: json!({ "max_error": r.drift_per_length, "tolerance": cfg.tolerances.metric_drift, "pass": pass, "drift": r }),
                table: t,
            })
        }
        GeometryCommand::CheckNormalTractor(a) => {
            let surface = match a.surface {
                SurfaceKind::Plane => {
                    let normal = match &a.normal {
                        Some(s) => parse_list(s, "normal")?,
                        None => (0..a.dim).map(|i| if i + 1 == a.dim { 1.0 } else { 0.0 }).collect(),
                    };
                    Hypersurface::Hyperplane { normal, offset: a.offset }
                }
                SurfaceKind::Sphere => Hypersurface::Sphere { dim: a.dim, radius: a.radius },
            };
            let r = normal_tractor_check(&surface, a.samples, cfg.seed, 1e-3)?;
            let (pass, expected) = match a.surface {
                SurfaceKind::Plane => (r.max_deviation < cfg.tolerances.normal_tractor, "parallel"),
                SurfaceKind::Sphere => (r.max_deviation > 0.1, "not parallel"),
            };
            let t = format!(
                "max |∇ν| over {} samples: {:.3e} (expected {expected}) {}\n",
                r.samples,
                r.max_deviation,
                mark(pass)
            );
            Ok(Outcome {
                pass,
                report: json!({ "max_error": r.max_deviation, "tolerance": cfg.tolerances.normal_tractor, "expected": expected, "pass": pass, "check": r }),
                table: t,
            })
        }
    }
}

fn crosscheck(suite: Suite, n: usize, cfg: &RunConfig) -> Result<Outcome> {
    let mut cases = Vec::new();
    let mut t = String::new();
    let mut pass = true;
    match suite {
        Suite::KostantVsBgg => {
            let mut families = vec![ModuleFamily::Trivial, ModuleFamily::Dual, ModuleFamily::Defining];
            families.extend((2..=3).map(ModuleFamily::SymKDual));
            families.extend((2..=3).map(ModuleFamily::SymK));
            families.push(ModuleFamily::Adjoint);
            for f in families {
                let c = compare_with_bgg(f, n)?;
                // the adjoint table entry is a known discrepancy and only flagged
                let flagged = f == ModuleFamily::Adjoint && !c.agree;
                pass &= c.agree || flagged;
                let status = if flagged { "FLAGGED" } else { mark(c.agree) };
                let _ = writeln!(t, "  {:<12} kostant {:?}  bgg {:?}  {status}", c.family, c.kostant, c.bgg);
                cases.push(json!({ "family": c.family, "kostant": c.kostant, "bgg": c.bgg, "agree": c.agree, "flagged": flagged }));
            }
        }
        Suite::HolonomyVsRep => {
            for rep in ["defining", "symk:2"] {
                let g = group(cfg, rep)?;
                for i in 0..g.generator_count() {
                    let w = Word::letter(i, false);
                    let h = quotient_holonomy(&g, &w, &KleinPoint::origin(2), cfg.step, Some(cfg.tolerances.holonomy))?;
                    let err = (from_rows(&h.matrix) - &g.matrices[i]).amax();
                    let ok = err < cfg.tolerances.holonomy;
                    pass &= ok;
                    let _ = writeln!(t, "  {rep:<9} x{}  max deviation {err:.3e}  {}", i + 1, mark(ok));
                    cases.push(json!({ "rep": rep, "generator": i + 1, "max_error": err, "pass": ok }));
                }
            }
        }
        Suite::EulerVsFox => {
            for rep in ["trivial", "defining", "symk:2", "symk:3"] {
                let g = group(cfg, rep)?;
                let r = cohomology_report(&g, cfg.rank())?;
                let ok = r.h1 as i64 == r.euler_prediction;
                pass &= ok;
                let _ = writeln!(t, "  {rep:<9} h0 {}  h1 {}  euler {}  {}", r.h0, r.h1, r.euler_prediction, mark(ok));
                cases.push(json!({ "rep": rep, "h0": r.h0, "h1": r.h1, "euler": r.euler_prediction, "min_gap": json!(&r)["min_gap"], "min_margin": r.min_margin, "pass": ok }));
            }
        }
        Suite::CocycleNontrivial => {
            let base = group(cfg, "defining")?;
            for k in 1..=3 {
                let (report, line, ok) = cocycle_case(&base, 0, k, &CocycleOptions::default(), cfg)?;
                pass &= ok;
                t.push_str("  ");
                t.push_str(&line);
                cases.push(report);
            }
        }
    }
    let header = format!("crosscheck {suite:?}: {}\n", mark(pass));
    Ok(Outcome { pass, report: json!({ "suite": suite, "cases": cases, "pass": pass }), table: header + &t })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bgg { .. } => "bgg",
        Command::Kostant { .. } => "kostant",
        Command::Vz { .. } => "vz",
        Command::Geometry(_) => "geometry",
        Command::Holonomy { .. } => "holonomy",
        Command::Cohomology { .. } => "cohomology",
        Command::Cocycle { .. } => "cocycle",
        Command::Crosscheck { .. } => "crosscheck",
    }
}

/// Runs the CLI on `args` (including the program name), writing the report
/// to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        },
        None => RunConfig::default(),
    };
    if cli.json {
        cfg.format = OutputFormat::Json;
    }
    let name = command_name(&cli.command);
    match execute(&cli.command, &cfg) {
        Ok(o) => {
            match cfg.format {
                OutputFormat::Json => {
                    let mut v = json!({ "schema": SCHEMA, "command": name, "pass": o.pass });
                    if let (Value::Object(dst), Value::Object(src)) = (&mut v, o.report) {
                        for (k, val) in src {
                            dst.entry(k).or_insert(val);
                        }
                    }
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
                }
                OutputFormat::Table => {
                    let _ = write!(out, "{}", o.table);
                }
            }
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let code = if e.is_input_error() { 2 } else { 1 };
            if cfg.format == OutputFormat::Json {
                let v = json!({ "schema": SCHEMA, "command": name, "pass": false, "error": e.to_string() });
                let _ = writeln!(out, "{v}");
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
