//! Front end for the `fbl` binary: configuration, dispatch, and report
//! emission. Reports are canonical JSON and embed the configuration that
//! produced them, so [`run`] on an embedded config reproduces the report.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use fbl_core::c_of_k::{self, SphereGrid};
use fbl_core::dual_functionals::{self, DualFunctional};
use fbl_core::experiments::{self, SliceSpec, SummaryRow};
use fbl_core::fbl_norm::{self, DualTuple, MAX_ENUMERATION_TERMS};
use fbl_core::{canonical, FblError, LatticeExpr, SpaceKind, SpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Certified bracket on the norm of one expression
    Norm,
    /// Bracket and lower bounds for a combination of point evaluations
    DualNorm,
    /// Admissibility verdict for a tuple of dual vectors
    Admissible,
    /// Octahedrality witness search over a family of unit expressions
    Octa,
    /// Diameter lower bound for a convex combination of slices
    SliceDiam,
    /// Roughness quotients at a list of scales
    Rough,
    /// Cube-sphere representation sandwich for l1 spaces
    ReprCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::DualNorm => "dual-norm",
            Command::Admissible => "admissible",
            Command::Octa => "octa",
            Command::SliceDiam => "slice-diam",
            Command::Rough => "rough",
            Command::ReprCheck => "repr-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct Options {
    /// Space descriptor file
    #[arg(long)]
    pub space: PathBuf,
    /// Expression file; repeat for families
    #[arg(long)]
    #[serde(default)]
    pub expr: Vec<PathBuf>,
    /// Tuple file: a JSON list of dual vectors
    #[arg(long)]
    pub tuple: Option<PathBuf>,
    /// Dual functional file: {"terms":[{"gamma":..,"xs":[..]},..]}
    #[arg(long)]
    pub dual: Option<PathBuf>,
    /// Tuple length of norm searches (defaults to the dimension)
    #[arg(long)]
    pub m: Option<usize>,
    /// Random restarts of the outer search
    #[arg(long, default_value_t = fbl_norm::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Random restarts of inner norm searches (octa)
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Admissibility slack
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    /// Cube-sphere grid resolution per facet edge
    #[arg(long)]
    pub grid: Option<usize>,
    /// Slice depth
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    /// Comma-separated scales for the roughness probe
    #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3])]
    pub scales: Vec<f64>,
    /// Comma-separated convex weights (default uniform)
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub lambdas: Vec<f64>,
    /// Perturbation size for slice diameters
    #[arg(long, default_value_t = experiments::DEFAULT_ETA)]
    pub eta: f64,
    /// Report file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV file, appended to
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub options: Options,
}

/// A finished run: the canonical report text and its summary row.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub summary: SummaryRow,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Engine(#[from] FblError),
}

impl CliError {
    /// 2 when a stored witness failed re-verification, else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(FblError::Verification(_)) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_expr(path: &Path) -> Result<LatticeExpr> {
    LatticeExpr::parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn validate(c: &RunConfig) -> Result<()> {
    let o = &c.options;
    if o.budget == 0 || o.restarts == 0 || o.m == Some(0) || o.grid == Some(0) {
        return Err(input("m, budget, restarts and grid must be positive"));
    }
    if !(o.tol >= 0.0) {
        return Err(input("tol must be nonnegative"));
    }
    if !(o.alpha > 0.0 && o.alpha < 1.0) {
        return Err(input("alpha must lie in (0, 1)"));
    }
    if !(o.eta > 0.0) || o.scales.iter().any(|&t| !(t > 0.0)) {
        return Err(input("eta and scales must be positive"));
    }
    let need_exprs = |k: &str, one: bool| -> Result<()> {
        if o.expr.is_empty() || (one && o.expr.len() != 1) {
            return Err(input(format!(
                "{k} needs {} --expr",
                if one { "exactly one" } else { "at least one" }
            )));
        }
        Ok(())
    };
    match c.command {
        Command::Norm | Command::Rough | Command::ReprCheck => need_exprs(c.command.name(), true),
        Command::Octa | Command::SliceDiam => need_exprs(c.command.name(), false),
        Command::Admissible if o.tuple.is_none() => Err(input("admissible needs --tuple")),
        Command::DualNorm if o.dual.is_none() => Err(input("dual-norm needs --dual")),
        _ => Ok(()),
    }
}

/// Runs one command and renders its report.
pub fn run(config: &RunConfig) -> Result<Report> {
    validate(config)?;
    let o = &config.options;
    let space: SpaceModel = read_json(&o.space)?;
    let exprs = o
        .expr
        .iter()
        .map(|p| read_expr(p))
        .collect::<Result<Vec<_>>>()?;
    let n = space.dim();
    let m = o.m.unwrap_or(n);
    let started = Instant::now();

    let (inputs, result, value) = match config.command {
        Command::Norm => {
            let f = &exprs[0];
            let mut cert = fbl_norm::norm_lower(&space, f, m, o.budget, o.seed)?;
            if let (Some(res), SpaceKind::L1) = (o.grid, space.kind()) {
                let grid = SphereGrid::new(n, res)?;
                cert = cert.with_repr_bound(c_of_k::repr_upper(f, &grid)?);
            }
            cert.verify(&space, f)?;
            let v = cert.lower;
            (
                json!({ "expr": f }),
                serde_json::to_value(&cert).expect("serializable"),
                v,
            )
        }
        Command::DualNorm => {
            let a: DualFunctional = read_json(o.dual.as_deref().expect("validated"))?;
            dual_norm(&space, &a)?
        }
        Command::Admissible => {
            let t: DualTuple = read_json(o.tuple.as_deref().expect("validated"))?;
            let mut result = serde_json::Map::new();
            if t.len() <= MAX_ENUMERATION_TERMS {
                let v = fbl_norm::is_admissible(&space, &t, o.tol)?;
                result.insert("enumeration".into(), json!(v));
            }
            if space.kind() == SpaceKind::L1 {
                let v = fbl_norm::is_admissible_l1(&space, &t, o.tol)?;
                result.insert("per_coordinate".into(), json!(v));
            }
            if result.is_empty() {
                return Err(FblError::TooManyTerms {
                    count: t.len(),
                    max: MAX_ENUMERATION_TERMS,
                }
                .into());
            }
            let g = fbl_norm::gauge(&space, &t)?;
            result.insert("gauge".into(), json!(g));
            let admissible = g <= 1.0 + o.tol;
            result.insert(
                "verdict".into(),
                json!(if admissible { "admissible" } else { "violated" }),
            );
            (json!({ "tuple": t }), Value::Object(result), g)
        }
        Command::Octa => {
            let r =
                experiments::octa_witness_search(&space, &exprs, m, o.budget, o.restarts, o.seed)?;
            let v = r.value;
            (json!({ "exprs": exprs }), json!(r), v)
        }
        Command::SliceDiam => {
            let lambdas = if o.lambdas.is_empty() {
                vec![1.0 / exprs.len() as f64; exprs.len()]
            } else {
                o.lambdas.clone()
            };
            let slices = exprs
                .iter()
                .map(|f| SliceSpec::certify(&space, f.clone(), o.alpha, m, o.budget, o.seed))
                .collect::<fbl_core::Result<Vec<_>>>()?;
            let c = experiments::cc_slice_diameter(
                &space, &slices, &lambdas, o.eta, m, o.budget, o.seed,
            )?;
            let v = c.value;
            (json!({ "slices": slices }), json!(c), v)
        }
        Command::Rough => {
            let r = experiments::rough_probe(&space, &exprs[0], &o.scales, o.budget, o.seed)?;
            let v = r.best();
            (json!({ "expr": exprs[0] }), json!(r), v)
        }
        Command::ReprCheck => {
            let grid = match o.grid {
                Some(res) => SphereGrid::new(n, res)?,
                None => SphereGrid::default_for(n)?,
            };
            let r = c_of_k::sandwich_check(&space, &exprs[0], m, o.budget, o.seed, &grid)?;
            if !r.holds() {
                return Err(FblError::Verification(format!("sandwich violated: {r:?}")).into());
            }
            let v = r.sup_lower;
            (
                json!({ "expr": exprs[0], "resolution": grid.resolution() }),
                json!(r),
                v,
            )
        }
    };

    let report = json!({
        "command": config.command.name(),
        "config": config,
        "space": space,
        "inputs": inputs,
        "result": result,
    });
    let text = canonical::to_string(&report)?;
    let summary = SummaryRow {
        experiment: config.command.name().into(),
        space: space.to_string(),
        n,
        value,
        alpha: if n >= 2 {
            space.alpha_constant()?
        } else {
            f64::NAN
        },
        seed: o.seed,
        budget: o.budget,
        wall_time: started.elapsed().as_secs_f64(),
    };
    Ok(Report { text, summary })
}

fn dual_norm(space: &SpaceModel, a: &DualFunctional) -> Result<(Value, Value, f64)> {
    let b = dual_functionals::bracket(space, a)?;
    let mut result = serde_json::Map::new();
    result.insert("bracket".into(), json!(b));
    let (d, _) = space.bm_distance_upper();
    result.insert("distance_bound".into(), json!(d));
    let mut best = b.lower;
    match dual_functionals::dirac_separation_value(space, a, d) {
        Ok(v) => {
            best = best.max(v);
            result.insert("dirac_separation".into(), json!(v));
        }
        Err(e @ FblError::ParallelPair { .. }) => {
            result.insert("dirac_separation_skipped".into(), json!(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    if space.kind() == SpaceKind::L1 {
        match dual_functionals::dual_lower_via_witness(space, a, None) {
            Ok(w) => {
                best = best.max(w.value);
                result.insert("witness".into(), json!(w));
            }
            Err(e @ (FblError::ParallelPair { .. } | FblError::InvalidArgument(_))) => {
                result.insert("witness_skipped".into(), json!(e.to_string()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    result.insert("lower".into(), json!(best));
    Ok((json!({ "dual": a }), Value::Object(result), best))
}

/// Appends one summary row, writing the header for a new file.
pub fn append_summary(path: &Path, row: &SummaryRow) -> std::io::Result<()> {
    let fresh = !path.exists() || fs::metadata(path)?.len() == 0;
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(row).map_err(std::io::Error::other)?;
    w.flush()
}

/// Extracts and re-parses the configuration embedded in a report.
pub fn embedded_config(report: &str) -> Result<RunConfig> {
    let v: Value = serde_json::from_str(report).map_err(|e| input(e.to_string()))?;
    let c = v
        .get("config")
        .cloned()
        .ok_or_else(|| input("report has no config"))?;
    serde_json::from_value(c).map_err(|e| input(e.to_string()))
}
