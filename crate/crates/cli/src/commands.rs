use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use spincalc_core::cliff::{self, make_rep, TwoForm};
use spincalc_core::index::{self, as_integer, LineBundleClass};
use spincalc_core::spectral::{
    classify, face_directions, harmonic_pythagoras, integral_criterion, prescribe_curvature, sign_invariance_check,
    DiscreteOperator, EdgeForm, FaceForm, Grid, GridFunction, PrescribeOptions,
};
use thiserror::Error;

use crate::expr::{parse_manifold, ExprError};
use crate::report::{envelope, rational};

pub const SEED_VAR: &str = "SPINCALC_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Syntax { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "spincalc", version, about = "Spin^c index arithmetic and generalized scalar curvature lab")]
pub struct Cli {
    /// Print a key/value table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Torus dimension (3 or 4).
    #[arg(long)]
    dim: Option<usize>,
    /// Grid spacing; defaults to 1/grid (unit torus).
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index of the spin^c Dirac operator for one line bundle.
    Index {
        manifold: String,
        /// First Chern class in the degree-2 basis, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c1: Vec<i64>,
    },
    /// Index polynomial and Â class.
    Poly { manifold: String },
    /// Admissible classes in a box on which the index vanishes.
    Search {
        manifold: String,
        #[arg(long = "box", default_value_t = 9)]
        bound: i64,
    },
    /// Index difference for bordisms built from `k` copies of spin manifolds with genus `Â`.
    Inddiff {
        /// `k:ahat`, repeatable.
        #[arg(long = "summand", required = true, value_parser = parse_summand, allow_hyphen_values = true)]
        summands: Vec<(i64, i64)>,
    },
    /// Clifford action of 2-forms: one form given by its upper-triangular
    /// entries, or random sampling.
    Cliff {
        #[arg(long)]
        dim: usize,
        /// Entries `ω_ij`, `i < j`, row by row.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        scalar: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Generalized scalar curvature of Kähler–Einstein curvature models.
    Rigidity {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        /// Use CP2 with the Fubini–Study metric and the anticanonical bundle.
        #[arg(long)]
        fubini_study: bool,
    },
    /// Sign class of the principal eigenvalue.
    Trichotomy {
        #[command(flatten)]
        grid: GridArgs,
        /// Number, `random:LO:HI`, or a grid-function JSON file.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// Positive weight for the sign-invariance check, same syntax.
        #[arg(long)]
        conformal_factor: Option<String>,
    },
    /// Solve `L u = κ u^α` for strictly negative `κ`.
    Prescribe {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Write the solution as a grid-function JSON file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// `‖Ω0 + da‖²` against `‖Ω0‖² + ‖da‖²` for random edge forms `a`.
    Pythagoras {
        #[command(flatten)]
        grid: GridArgs,
        /// Constant coefficients of `Ω0`, one per direction pair.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega0: Option<Vec<f64>>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

fn parse_summand(s: &str) -> Result<(i64, i64), String> {
    let (k, a) = s.split_once(':').ok_or_else(|| format!("expected k:ahat, got '{s}'"))?;
    let k = k.trim().parse().map_err(|_| format!("bad copy count '{k}'"))?;
    let a = a.trim().parse().map_err(|_| format!("bad Â-genus '{a}'"))?;
    Ok((k, a))
}

fn seed() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_VAR} must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(0),
    }
}

enum FieldSource {
    Constant(f64),
    Random(f64, f64),
    File(GridFunction),
}

fn field_source(spec: &str) -> Result<FieldSource, CliError> {
    if let Ok(v) = spec.parse::<f64>() {
        return Ok(FieldSource::Constant(v));
    }
    if let Some(range) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = range.split(':').collect();
        let bounds: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
        return match bounds.as_deref() {
            Some([lo, hi]) if lo < hi => Ok(FieldSource::Random(*lo, *hi)),
            _ => Err(CliError::Usage(format!("expected random:LO:HI with LO < HI, got '{spec}'"))),
        };
    }
    let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
    let f: GridFunction = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
    Ok(FieldSource::File(f))
}

fn resolve_grid(args: &GridArgs, sources: &[&FieldSource]) -> Result<Grid, CliError> {
    let from_file = sources.iter().find_map(|s| match s {
        FieldSource::File(f) => Some(*f.grid()),
        _ => None,
    });
    let grid = match from_file {
        Some(g) => {
            let conflicts = args.grid.is_some_and(|n| n != g.points())
                || args.dim.is_some_and(|d| d != g.dim())
                || args.spacing.is_some_and(|h| h != g.spacing());
            if conflicts {
                return Err(CliError::Usage("grid flags disagree with the grid of the input file".into()));
            }
            g
        }
        None => {
            let points = args.grid.unwrap_or(8);
            let spacing = args.spacing.unwrap_or(1.0 / points as f64);
            Grid::new(args.dim.unwrap_or(3), points, spacing).map_err(domain)?
        }
    };
    for s in sources {
        if let FieldSource::File(f) = s {
            if *f.grid() != grid {
                return Err(CliError::Usage("input files live on different grids".into()));
            }
        }
    }
    Ok(grid)
}

fn realize(src: FieldSource, grid: Grid, rng: &mut ChaCha8Rng) -> Result<GridFunction, CliError> {
    match src {
        FieldSource::Constant(v) => Ok(GridFunction::constant(grid, v)),
        FieldSource::Random(lo, hi) => {
            GridFunction::new(grid, (0..grid.len()).map(|_| rng.random_range(lo..hi)).collect()).map_err(domain)
        }
        FieldSource::File(f) => Ok(f),
    }
}

fn grid_json(g: &Grid) -> Value {
    json!({ "dim": g.dim(), "points": g.points(), "spacing": g.spacing() })
}

pub fn run(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Index { manifold, c1 } => {
            let expr = parse_manifold(&manifold)?;
            let m = expr.build()?;
            let v = index::alpha_c(&m, &LineBundleClass(c1.clone())).map_err(domain)?;
            Ok(envelope(
                "index",
                json!({
                    "manifold": expr.to_string(),
                    "dim": m.dim(),
                    "c1": c1,
                    "admissible": v.admissible,
                    "alpha_c": as_integer(&v.value),
                    "alpha_c_exact": rational(&v.value),
                    "notes": v.notes,
                }),
            ))
        }
        Command::Poly { manifold } => {
            let expr = parse_manifold(&manifold)?;
            let m = expr.build()?;
            let p = index::index_polynomial(&m).map_err(domain)?;
            let terms: Vec<Value> = p
                .terms()
                .iter()
                .map(|(e, c)| json!({ "exponents": e, "coefficient": rational(c) }))
                .collect();
            Ok(envelope(
                "poly",
                json!({
                    "manifold": expr.to_string(),
                    "dim": m.dim(),
                    "b2": m.b2(),
                    "ahat": m.ahat().to_string(),
                    "ahat_genus": rational(&m.ahat_genus()),
                    "polynomial": p.to_string(),
                    "terms": terms,
                }),
            ))
        }
        Command::Search { manifold, bound } => {
            if bound < 0 {
                return Err(CliError::Usage("--box must be nonnegative".into()));
            }
            let expr = parse_manifold(&manifold)?;
            let m = expr.build()?;
            let r = index::find_vanishing(&m, bound).map_err(domain)?;
            let roots: Vec<&Vec<i64>> = r.roots.iter().map(|c| &c.0).collect();
            let witness = r
                .witness
                .as_ref()
                .map(|(b, s)| json!({ "base": b.0, "step": s.0 }));
            Ok(envelope(
                "search",
                json!({
                    "manifold": expr.to_string(),
                    "box": bound,
                    "polynomial": r.polynomial.to_string(),
                    "classification": r.classification.to_string(),
                    "root_count": roots.len(),
                    "roots": roots,
                    "witness": witness,
                }),
            ))
        }
        Command::Inddiff { summands } => {
            let value = index::inddiff_value(&summands).map_err(domain)?;
            let s: Vec<Value> = summands.iter().map(|(k, a)| json!({ "copies": k, "ahat": a })).collect();
            Ok(envelope("inddiff", json!({ "summands": s, "value": value })))
        }
        Command::Cliff {
            dim,
            omega,
            scalar,
            samples,
        } => {
            let rep = make_rep(dim).map_err(domain)?;
            match omega {
                Some(entries) => {
                    let n_pairs = dim * (dim - 1) / 2;
                    if entries.len() != n_pairs {
                        return Err(CliError::Usage(format!(
                            "--omega needs {n_pairs} entries in dimension {dim}, got {}",
                            entries.len()
                        )));
                    }
                    let mut w = TwoForm::zero(dim);
                    let pairs = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j)));
                    for ((i, j), v) in pairs.zip(entries) {
                        w.add_entry(i, j, v).map_err(domain)?;
                    }
                    let rec = cliff::curvature_record(scalar, &rep, &w).map_err(domain)?;
                    let spectrum = cliff::action_spectrum(&rep, &w).map_err(domain)?;
                    Ok(envelope(
                        "cliff",
                        json!({
                            "dim": dim,
                            "spinor_dim": rep.spinor_dim(),
                            "omega": rec.omega,
                            "scalar": rec.scalar,
                            "op_norm": rec.op_norm,
                            "two_norm": rec.two_norm,
                            "spectrum": spectrum,
                            "twisted_min_eig": rec.min_eig,
                            "gen_scalar": rec.gen_scalar,
                            "twisted_positive": rec.tw_positive,
                        }),
                    ))
                }
                None => {
                    let seed = seed()?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let bound = (dim as f64 / 2.0).sqrt();
                    let (mut sym, mut bridge, mut r1, mut r2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
                    for _ in 0..samples {
                        let w = TwoForm::random(dim, &mut rng);
                        let ev = cliff::action_spectrum(&rep, &w).map_err(domain)?;
                        let k = ev.len();
                        for i in 0..k {
                            sym = sym.max((ev[i] + ev[k - 1 - i]).abs());
                        }
                        let r = rng.random_range(-5.0..5.0);
                        let tw = cliff::twisted_min_eig(r, &rep, &w).map_err(domain)?;
                        let gen = cliff::gen_scalar(r, &rep, &w).map_err(domain)?;
                        bridge = bridge.max((tw - gen).abs());
                        let op = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                        let two = cliff::two_norm(&w);
                        r1 = r1.max(op / two);
                        r2 = r2.max(two / op);
                    }
                    Ok(envelope(
                        "cliff",
                        json!({
                            "dim": dim,
                            "spinor_dim": rep.spinor_dim(),
                            "seed": seed,
                            "samples": samples,
                            "max_symmetry_defect": sym,
                            "max_bridge_defect": bridge,
                            "norm_bound": bound,
                            "max_op_over_two": r1,
                            "max_two_over_op": r2,
                        }),
                    ))
                }
            }
        }
        Command::Rigidity {
            dim,
            lambda,
            fubini_study,
        } => {
            let (model, n, (r, w)) = if fubini_study {
                ("fubini-study-cp2", 4, cliff::fubini_study_cp2())
            } else {
                if dim % 2 == 1 {
                    return Err(CliError::Domain(format!("Kähler models need even dimension, got {dim}")));
                }
                ("kahler-einstein", dim, cliff::kahler_einstein_model(dim, lambda))
            };
            let rep = make_rep(n).map_err(domain)?;
            let op = cliff::op_norm(&rep, &w).map_err(domain)?;
            let gen = cliff::gen_scalar(r, &rep, &w).map_err(domain)?;
            Ok(envelope(
                "rigidity",
                json!({
                    "model": model,
                    "dim": n,
                    "lambda": if fubini_study { None } else { Some(lambda) },
                    "scalar": r,
                    "op_norm": op,
                    "gen_scalar": gen,
                    "rigid": gen.abs() <= 1e-12 * r.abs().max(1.0),
                }),
            ))
        }
        Command::Trichotomy {
            grid,
            potential,
            conformal_factor,
        } => {
            let pot = field_source(&potential)?;
            let factor = conformal_factor.as_deref().map(field_source).transpose()?;
            let mut sources = vec![&pot];
            sources.extend(factor.as_ref());
            let g = resolve_grid(&grid, &sources)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
            let op = DiscreteOperator::new(realize(pot, g, &mut rng)?);
            let c = classify(&op).map_err(domain)?;
            let weighted = match factor {
                Some(f) => {
                    let u = realize(f, g, &mut rng)?;
                    let (a, b) = sign_invariance_check(&op, &u).map_err(domain)?;
                    Some(json!({ "sign": b, "agrees": a == b }))
                }
                None => None,
            };
            Ok(envelope(
                "trichotomy",
                json!({
                    "grid": grid_json(&g),
                    "coupling": op.coupling(),
                    "exponent": op.exponent(),
                    "mu1": c.mu1,
                    "tolerance": c.tolerance,
                    "class": c.class,
                    "weighted": weighted,
                }),
            ))
        }
        Command::Prescribe {
            grid,
            potential,
            kappa,
            tol,
            max_iter,
            output,
        } => {
            let pot = field_source(&potential)?;
            let kap = field_source(&kappa)?;
            let g = resolve_grid(&grid, &[&pot, &kap])?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
            let op = DiscreteOperator::new(realize(pot, g, &mut rng)?);
            let kappa = realize(kap, g, &mut rng)?;
            let r = prescribe_curvature(&op, &kappa, PrescribeOptions { tol, max_iter }).map_err(domain)?;
            let residual = *r.residuals.last().unwrap_or(&f64::NAN);
            if let Some(path) = &output {
                let text = serde_json::to_string(&r.solution).map_err(domain)?;
                std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            }
            let ic = integral_criterion(&kappa);
            Ok(envelope(
                "prescribe",
                json!({
                    "grid": grid_json(&g),
                    "mu1": r.mu1,
                    "iterations": r.iterations,
                    "residual": residual,
                    "relative_residual": residual / kappa.sup_norm(),
                    "monotone": r.monotone,
                    "bracketed": r.bracketed,
                    "upper": r.upper,
                    "epsilon": r.epsilon,
                    "solution_min": r.solution.min(),
                    "solution_max": r.solution.max(),
                    "kappa_integral": ic.integral,
                    "volume": ic.volume,
                }),
            ))
        }
        Command::Pythagoras { grid, omega0, samples } => {
            let g = resolve_grid(&grid, &[])?;
            let npairs = face_directions(g.dim()).len();
            let coeffs = omega0.unwrap_or_else(|| {
                let mut c = vec![0.0; npairs];
                c[0] = 1.0;
                c
            });
            let w = FaceForm::constant(g, &coeffs).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed()?);
            let (mut gap, mut cross) = (0.0f64, 0.0f64);
            for _ in 0..samples {
                let vals = (0..g.dim() * g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let a = EdgeForm::new(g, vals).map_err(domain)?;
                let r = harmonic_pythagoras(&w, &a).map_err(domain)?;
                gap = gap.max(r.relative_gap());
                cross = cross.max(r.cross.abs());
            }
            Ok(envelope(
                "pythagoras",
                json!({
                    "grid": grid_json(&g),
                    "omega0": coeffs,
                    "samples": samples,
                    "max_relative_gap": gap,
                    "max_abs_cross": cross,
                }),
            ))
        }
    }
}
