use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qfock::states::{
    coherent, expectations, pure_squeezed, pure_squeezed_moments, squeezed_dim, squeezed_state,
    DEFAULT_STATE_TOL,
};
use qfock::{
    build_ladder, run_suite, Error, FockVector, Measure, ProtectedBlock, Quaternion, SliceAxis,
    SqueezeParams, SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "qfock",
    version,
    about = "Quaternionic squeezed states on a truncated Fock space"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every identity suite and write the ledger, slice table and quadrature reports.
    Verify(VerifyArgs),
    /// Sweep pure squeezed moments over r and theta; closed form next to the matrix value.
    Expect(ExpectArgs),
    /// Emit the Fock coefficients of a state as JSON.
    State(StateArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Defaults to 64 for verify and 128 otherwise.
    #[arg(long)]
    dim: Option<usize>,
    /// Defaults to dim/2 for verify and dim/4 otherwise.
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// i, j, k or x,y,z
    #[arg(long, default_value = "i", value_parser = parse_axis)]
    axis: SliceAxis,
    #[arg(long, value_enum, default_value_t = MeasureArg::Corrected)]
    measure: MeasureArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn dim(&self) -> usize {
        self.dim.unwrap_or(128)
    }

    fn margin(&self) -> usize {
        self.margin.unwrap_or(self.dim() / 4)
    }

    fn block(&self) -> Result<ProtectedBlock, Error> {
        ProtectedBlock::new(self.dim(), self.margin())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Paper,
    Corrected,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Paper => Measure::Paper,
            MeasureArg::Corrected => Measure::Corrected,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Truncation used for squeeze operators and squeezed states.
    #[arg(long, default_value_t = 256)]
    squeeze_dim: usize,
    #[arg(long, default_value_t = 244)]
    squeeze_margin: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
struct ExpectArgs {
    #[command(flatten)]
    common: Common,
    /// start:stop:count, or a single value
    #[arg(long, default_value = "0:1:5")]
    r: Range,
    /// start:stop:count in radians, or a single value
    #[arg(long, default_value = "0")]
    theta: Range,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Which {
    Coherent,
    PureSqueezed,
    Squeezed,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(value_enum)]
    which: Which,
    /// Squeeze parameter w,x,y,z
    #[arg(long, default_value = "0,0,0,0", value_parser = parse_quaternion)]
    p: Quaternion,
    /// Displacement parameter w,x,y,z
    #[arg(long, default_value = "0,0,0,0", value_parser = parse_quaternion)]
    q: Quaternion,
}

#[derive(Clone, Copy, Debug)]
struct Range {
    start: f64,
    stop: f64,
    count: usize,
}

impl Range {
    fn values(&self) -> Vec<f64> {
        match self.count {
            0 => vec![],
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(Range {
                    start: v,
                    stop: v,
                    count: 1,
                })
            }
            [a, b, n] => Ok(Range {
                start: num(a)?,
                stop: num(b)?,
                count: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
            }),
            _ => Err("expected start:stop:count or a single value".into()),
        }
    }
}

fn parse_axis(s: &str) -> Result<SliceAxis, String> {
    match s {
        "i" => Ok(SliceAxis::I),
        "j" => Ok(SliceAxis::J),
        "k" => Ok(SliceAxis::K),
        _ => {
            let v: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<_, _>>()?;
            match v.as_slice() {
                [x, y, z] => SliceAxis::new(*x, *y, *z).map_err(|e| e.to_string()),
                _ => Err("axis is i, j, k or x,y,z".into()),
            }
        }
    }
}

fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [w, x, y, z] => Ok(Quaternion::new(*w, *x, *y, *z)),
        _ => Err("quaternion is w,x,y,z".into()),
    }
}

/// Exit 2 for bad configuration, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidBlock { .. }
            | Error::Invalid(_)
            | Error::DegenerateAxis
            | Error::InsufficientDim { .. },
        ) => 2,
        _ => 1,
    }
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct Ledger<'a> {
    config: &'a SuiteConfig,
    entries: Vec<qfock::LedgerEntry>,
}

fn verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let c = &a.common;
    let dim = c.dim.unwrap_or(64);
    let cfg = SuiteConfig {
        dim,
        margin: c.margin.unwrap_or(dim / 2),
        squeeze_dim: a.squeeze_dim,
        squeeze_margin: a.squeeze_margin,
        tol: c.tol,
        axis: c.axis,
        measure: c.measure.into(),
        seed: a.seed,
    };
    cfg.validate()?;
    let out = c.out.clone().unwrap_or_else(|| PathBuf::from("qfock-out"));
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;

    let report = run_suite(&cfg)?;
    for s in &report.sections {
        let failed = s.failures().count();
        let mark = if failed == 0 { "ok" } else { "FAIL" };
        println!(
            "{mark:>4}  {:<40} {} checks, {} ledgered",
            s.title,
            s.checks.len(),
            s.ledger.len()
        );
        for f in s.failures() {
            println!("      {}: {:e} > {:e}", f.name, f.deviation, f.bound);
        }
    }

    write_json(
        &out.join("ledger.json"),
        &Ledger {
            config: &cfg,
            entries: report.ledger(),
        },
    )?;
    write_json(&out.join("quadrature.json"), &report.quadrature)?;
    write_json(&out.join("structure_constants.json"), &report.structure)?;
    write_json(&out.join("checks.json"), &report)?;
    let mut w = csv::Writer::from_path(out.join("slice_lab.csv"))?;
    for row in &report.slice_rows {
        w.serialize(row)?;
    }
    w.flush()?;

    let failures = report.failures().len();
    println!(
        "{} ledger entries, {failures} failing identities; reports in {}",
        report.ledger().len(),
        out.display()
    );
    Ok(failures == 0)
}

#[derive(Serialize)]
struct ExpectRow {
    r: f64,
    theta: f64,
    axis: String,
    mean_n_closed: f64,
    mean_n_numeric: f64,
    var_x_closed: f64,
    var_x_numeric: f64,
    var_y_closed: f64,
    var_y_numeric: f64,
    var_product_closed: f64,
    var_product_numeric: f64,
    mandel_q_closed: Option<f64>,
    mandel_q_numeric: Option<f64>,
}

const EXPECT_HEADER: [&str; 13] = [
    "r",
    "theta",
    "axis",
    "mean_n_closed",
    "mean_n_numeric",
    "var_x_closed",
    "var_x_numeric",
    "var_y_closed",
    "var_y_numeric",
    "var_product_closed",
    "var_product_numeric",
    "mandel_q_closed",
    "mandel_q_numeric",
];

fn expect(a: &ExpectArgs) -> anyhow::Result<bool> {
    let c = &a.common;
    let block = c.block()?;
    let l = build_ladder(c.dim(), c.axis)?;
    let tol = DEFAULT_STATE_TOL * c.tol / 1e-8;
    let mut points = Vec::new();
    for r in a.r.values() {
        for theta in a.theta.values() {
            points.push((r, theta));
        }
    }
    use rayon::prelude::*;
    let rows = points
        .par_iter()
        .map(|&(r, theta)| -> anyhow::Result<ExpectRow> {
            let sp = SqueezeParams::from_polar(r, theta, c.axis);
            let cf = pure_squeezed_moments(&sp);
            let m = expectations(&pure_squeezed(&sp, &l)?, &l, block, tol)?;
            Ok(ExpectRow {
                r,
                theta,
                axis: c.axis.to_string(),
                mean_n_closed: cf.mean_n,
                mean_n_numeric: m.mean_n.w,
                var_x_closed: cf.var_x,
                var_x_numeric: m.var_x,
                var_y_closed: cf.var_y,
                var_y_numeric: m.var_y,
                var_product_closed: cf.var_product,
                var_product_numeric: m.var_x * m.var_y,
                mandel_q_closed: cf.mandel_q,
                mandel_q_numeric: m.mandel_q,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(output(c.out.as_deref())?);
    w.write_record(EXPECT_HEADER)?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct StateOut {
    which: Which,
    p: Quaternion,
    q: Quaternion,
    margin: usize,
    norm: f64,
    tail_mass: f64,
    state: FockVector,
}

fn state(a: &StateArgs) -> anyhow::Result<bool> {
    let c = &a.common;
    let block = c.block()?;
    let tol = DEFAULT_STATE_TOL * c.tol / 1e-8;
    let l = build_ladder(c.dim(), c.axis)?;
    let sp = SqueezeParams::new(a.p);
    let v = match a.which {
        Which::Coherent => coherent(a.q, c.dim(), tol)?,
        Which::PureSqueezed => pure_squeezed(&sp, &l)?,
        Which::Squeezed => squeezed_state(&sp, a.q, &l, tol)?,
    };
    let tail = v.tail_mass(block.size());
    if tail > tol {
        let suggested = match a.which {
            Which::PureSqueezed => squeezed_dim(sp.r, tol).max(c.dim() + 1) + c.margin(),
            _ => 2 * c.dim(),
        };
        return Err(Error::InsufficientDim {
            tail,
            tol,
            suggested_dim: suggested,
        }
        .into());
    }
    let mut w = output(c.out.as_deref())?;
    serde_json::to_writer_pretty(
        &mut w,
        &StateOut {
            which: a.which,
            p: a.p,
            q: a.q,
            margin: c.margin(),
            norm: v.norm(),
            tail_mass: tail,
            state: v,
        },
    )?;
    writeln!(w)?;
    Ok(true)
}

fn threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("QFOCK_THREADS") {
        let n: usize = v.parse().with_context(|| format!("QFOCK_THREADS={v:?}"))?;
        if n == 0 {
            bail!(Error::Invalid("QFOCK_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<bool> {
        threads()?;
        match &cli.cmd {
            Cmd::Verify(a) => verify(a),
            Cmd::Expect(a) => expect(a),
            Cmd::State(a) => state(a),
        }
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
