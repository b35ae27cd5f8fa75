//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for input or validation errors, 3 for
//! numerical or regularity failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::extrapolation::{extrapolated_gradient, richardson, ExtrapolationPlan};
use crate::gradient::{aligned_gradient, general_gradient, sample_aligned, SampleSet};
use crate::simplex::{
    integer_simplex, schoenberg_case, AlignedRegularSimplex, GeneralRegularSimplex, Orientation,
    DEFAULT_REL_TOL,
};
use crate::testbed::{h_sweep, sampled_max_curvature, Builtin, TestFunction};
use crate::textio::{format_vector, parse_list, parse_matrix, parse_vector};

#[derive(Debug, Parser)]
#[command(
    name = "simplex-gradient",
    version,
    about = "Regular simplexes, O(n) simplex gradients and Richardson extrapolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the vertices of an aligned regular simplex (one column per vertex).
    Simplex(SimplexArgs),
    /// First-order gradient on an aligned regular simplex.
    Gradient(GradientArgs),
    /// First-order gradient on an arbitrary regular simplex read from a file.
    GradientGeneral(GeneralArgs),
    /// Second-order gradient from two aligned simplexes.
    Extrapolate(ExtrapolateArgs),
    /// Regular simplex with integer coordinates.
    IntegerSimplex(IntegerArgs),
    /// Errors of g1, g2 and g12 over a list of radii, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OrientationArg {
    Plus,
    #[default]
    Minus,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Plus => Orientation::Plus,
            OrientationArg::Minus => Orientation::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Rosenbrock,
    Sphere,
    Affine,
    Expsum,
    /// Function values read from `--values`.
    Values,
}

impl FunctionArg {
    fn builtin(self) -> Option<Builtin> {
        match self {
            FunctionArg::Rosenbrock => Some(Builtin::Rosenbrock),
            FunctionArg::Sphere => Some(Builtin::Sphere),
            FunctionArg::Affine => Some(Builtin::Affine),
            FunctionArg::Expsum => Some(Builtin::ExpSum),
            FunctionArg::Values => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Dimension; inferred from --x0 when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = OrientationArg::Minus)]
    pub orientation: OrientationArg,
    /// Decimals printed; 17 or more switches to exact scientific notation.
    #[arg(long, default_value_t = 15)]
    pub precision: usize,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimplexArgs {
    /// Centroid as a comma-separated list or a vector file.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GradientArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionArg,
    /// Function values at the n+1 vertices, in vertex order (with --fn values).
    #[arg(long)]
    pub values: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GeneralArgs {
    /// n x (n+1) vertex matrix, one vertex per column.
    #[arg(long)]
    pub vertices: PathBuf,
    #[arg(long = "fn", value_enum)]
    pub function: FunctionArg,
    #[arg(long)]
    pub values: Option<PathBuf>,
    /// Known centroid; computed from the vertices when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub centroid: Option<String>,
    /// Known radius; computed from the vertices when omitted.
    #[arg(long)]
    pub h: Option<f64>,
    /// Relative tolerance on the spread of vertex distances.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionArg,
    /// 2(n+1) values: the h1 vertices, then the h2 vertices (with --fn values).
    #[arg(long)]
    pub values: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h1: f64,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "eta")]
    pub h2: Option<f64>,
    /// Ratio h2/h1 (default 0.5 when --h2 is not given).
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Also print g1 and g2.
    #[arg(long)]
    pub verbose: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct IntegerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = OrientationArg::Minus)]
    pub orientation: OrientationArg,
    /// Also report which Schoenberg condition holds for n.
    #[arg(long)]
    pub check: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionArg,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    /// Comma-separated radii h1.
    #[arg(long = "h-list")]
    pub h_list: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub eta: f64,
    /// Lipschitz constant for the bound column; estimated from sampled
    /// Hessians over the ball of the largest radius when omitted.
    #[arg(long)]
    pub lipschitz: Option<f64>,
    /// Seed for the Lipschitz sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

/// A comma-separated list, or else the path of a vector file.
fn parse_point(arg: &str) -> Result<Vec<f64>> {
    match parse_list(arg) {
        Ok(v) => Ok(v),
        Err(list_err) => {
            let path = Path::new(arg);
            if path.is_file() {
                parse_vector(&read_text(path)?)
            } else {
                Err(list_err)
            }
        }
    }
}

fn resolve_dim(n: Option<usize>, x0: Option<&[f64]>) -> Result<usize> {
    match (n, x0) {
        (Some(n), Some(x)) if n != x.len() => Err(Error::Dimension(format!(
            "--n {n} does not match --x0 of length {}",
            x.len()
        ))),
        (Some(0), _) => Err(Error::Dimension("--n must be at least 1".into())),
        (Some(n), _) => Ok(n),
        (None, Some(x)) => Ok(x.len()),
        (None, None) => Err(Error::InvalidArgument("give --x0 or --n".into())),
    }
}

fn read_values(path: Option<&Path>, expected: usize) -> Result<Vec<f64>> {
    let path =
        path.ok_or_else(|| Error::InvalidArgument("--fn values requires --values <file>".into()))?;
    let v = parse_vector(&read_text(path)?)?;
    if v.len() != expected {
        return Err(Error::Dimension(format!(
            "{} holds {} values, expected {expected}",
            path.display(),
            v.len()
        )));
    }
    Ok(v)
}

fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_simplex(a: &SimplexArgs) -> Result<String> {
    let x0 = parse_point(&a.x0)?;
    resolve_dim(a.common.n, Some(&x0))?;
    let s = AlignedRegularSimplex::new(x0, a.h, a.common.orientation.into())?;
    Ok(crate::textio::format_matrix(
        &s.vertex_matrix(),
        a.common.precision,
    ))
}

fn cmd_gradient(a: &GradientArgs) -> Result<String> {
    let x0 = a.x0.as_deref().map(parse_point).transpose()?;
    let n = resolve_dim(a.common.n, x0.as_deref())?;
    let orientation = a.common.orientation.into();
    let g = match a.function.builtin() {
        Some(f) => {
            let x0 = x0.ok_or_else(|| Error::InvalidArgument("--x0 is required".into()))?;
            let s = AlignedRegularSimplex::new(x0, a.h, orientation)?;
            aligned_gradient(&s, &sample_aligned(&s, f.evaluator())?)?
        }
        None => {
            let values = read_values(a.values.as_deref(), n + 1)?;
            // values mode never evaluates anything, so the centroid is irrelevant
            let s =
                AlignedRegularSimplex::new(x0.unwrap_or_else(|| vec![0.0; n]), a.h, orientation)?;
            aligned_gradient(&s, &SampleSet::new(values))?
        }
    };
    Ok(format_vector(&g.g, a.common.precision))
}

fn cmd_gradient_general(a: &GeneralArgs) -> Result<String> {
    let vertices = parse_matrix(&read_text(&a.vertices)?)?;
    let n = vertices.nrows();
    if let Some(want) = a.common.n {
        if want != n {
            return Err(Error::Dimension(format!(
                "--n {want} does not match the {n}-row vertex file"
            )));
        }
    }
    let centroid = a.centroid.as_deref().map(parse_point).transpose()?;
    let simplex = GeneralRegularSimplex::new(vertices, centroid, a.h, a.rel_tol)?;
    let values = match a.function.builtin() {
        Some(f) => simplex
            .vertices()
            .column_iter()
            .map(|c| f.eval(c.as_slice()))
            .collect::<Result<Vec<f64>>>()?,
        None => read_values(a.values.as_deref(), n + 1)?,
    };
    let g = general_gradient(&simplex, &SampleSet::new(values))?;
    Ok(format_vector(&g.g, a.common.precision))
}

fn cmd_extrapolate(a: &ExtrapolateArgs) -> Result<String> {
    let x0 = a.x0.as_deref().map(parse_point).transpose()?;
    let n = resolve_dim(a.common.n, x0.as_deref())?;
    let orientation = a.common.orientation.into();
    let plan = match a.h2 {
        Some(h2) => ExtrapolationPlan::new(a.h1, h2)?,
        None => ExtrapolationPlan::from_eta(a.h1, a.eta.unwrap_or(0.5))?,
    };
    let (g1, g2, g12) = match a.function.builtin() {
        Some(f) => {
            let x0 = x0.ok_or_else(|| Error::InvalidArgument("--x0 is required".into()))?;
            let e = extrapolated_gradient(f.evaluator(), &x0, plan.h1(), plan.h2(), orientation)?;
            (e.g1, e.g2, e.g12)
        }
        None => {
            let values = read_values(a.values.as_deref(), 2 * (n + 1))?;
            let s1 = AlignedRegularSimplex::new(vec![0.0; n], plan.h1(), orientation)?;
            let s2 = s1.with_radius(plan.h2())?;
            let g1 = aligned_gradient(&s1, &SampleSet::new(values[..n + 1].to_vec()))?;
            let g2 = aligned_gradient(&s2, &SampleSet::new(values[n + 1..].to_vec()))?;
            let g12 = richardson(&g1.g, plan.h1(), &g2.g, plan.h2())?;
            (g1, g2, g12)
        }
    };
    let p = a.common.precision;
    if a.verbose {
        Ok(format!(
            "# g1 (h = {})\n{}# g2 (h = {})\n{}# g12\n{}",
            plan.h1(),
            format_vector(&g1.g, p),
            plan.h2(),
            format_vector(&g2.g, p),
            format_vector(&g12.g, p)
        ))
    } else {
        Ok(format_vector(&g12.g, p))
    }
}

fn feasibility_line(n: usize) -> String {
    match schoenberg_case(n) {
        Some(case) => format!("# n = {n}: integer regular simplex exists ({case})\n"),
        None => format!("# n = {n}: no integer regular simplex exists (Schoenberg)\n"),
    }
}

fn cmd_integer_simplex(a: &IntegerArgs, stdout: &mut dyn Write) -> Result<String> {
    if a.check {
        // reported even when the construction below fails
        stdout.write_all(feasibility_line(a.n).as_bytes())?;
    }
    let m = integer_simplex(a.n, a.orientation.into())?;
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    Ok(out)
}

fn cmd_sweep(a: &SweepArgs) -> Result<String> {
    let f = a
        .function
        .builtin()
        .ok_or_else(|| Error::InvalidArgument("sweep needs a built-in function".into()))?;
    let x0 = parse_point(&a.x0)?;
    resolve_dim(a.common.n, Some(&x0))?;
    let h_values = parse_list(&a.h_list)
        .map_err(|_| Error::InvalidArgument(format!("bad --h-list `{}`", a.h_list)))?;
    let lipschitz = match a.lipschitz {
        Some(l) => l,
        None => {
            let h_max = h_values.iter().fold(0.0f64, |m, h| m.max(h.abs()));
            sampled_max_curvature(&f, &x0, h_max * a.eta.abs().max(1.0), 200, a.seed)?
        }
    };
    let rows = h_sweep(
        &f,
        &x0,
        a.common.orientation.into(),
        &h_values,
        a.eta,
        lipschitz,
    )?;
    let mut out = String::from("h1,err_g1,err_g2,err_g12,bound\n");
    // shortest representation that reads back exactly
    for r in rows {
        let cells = [r.h1, r.err_g1, r.err_g2, r.err_g12, r.bound].map(|v| format!("{v:e}"));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Runs one command, writing results to `stdout` (or `--output`) and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Simplex(a) => (cmd_simplex(a), a.common.output.as_deref()),
        Command::Gradient(a) => (cmd_gradient(a), a.common.output.as_deref()),
        Command::GradientGeneral(a) => (cmd_gradient_general(a), a.common.output.as_deref()),
        Command::Extrapolate(a) => (cmd_extrapolate(a), a.common.output.as_deref()),
        Command::IntegerSimplex(a) => (cmd_integer_simplex(a, stdout), a.output.as_deref()),
        Command::Sweep(a) => (cmd_sweep(a), a.common.output.as_deref()),
    };
    match result.and_then(|text| emit(output, &text, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
