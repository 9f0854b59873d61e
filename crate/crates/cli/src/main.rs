//! Batch front-end: parameter sweeps, figure-style presets, and oracle
//! verification runs, emitting deterministic CSV or JSON.

mod config;
mod emit;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use qdarwin_core::decoherence::ModelParams;
use qdarwin_core::info::{discord, discord_approx, mutual_information};
use qdarwin_core::redundancy::{limiting_redundancy, redundancy, scaling_hazy, scaling_misaligned};
use qdarwin_core::states::{binary_entropy_inverse_upper, EnvQubit, SystemQubit};

use config::{parse_f64_grid, parse_u32_grid, Config};
use emit::{format_float, write_output, Cell, Table};

const PI: f64 = std::f64::consts::PI;
const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Parser)]
#[command(name = "qdarwin", version, about = "Information flow from a qubit into a symmetric qubit environment: mutual information, discord, and redundancy sweeps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mutual information over a (t, nF) grid (figure presets 3a/3b/4a/4b/5a)
    MiSurface(MiSurfaceArgs),
    /// Pointer-basis discord and its small-coherence approximation
    Discord(DiscordArgs),
    /// Redundancy R_delta over a haziness or misalignment sweep (presets 5c/6c)
    Redundancy(RedundancyArgs),
    /// Closed-form redundancy scaling laws on a parameter grid
    Scaling(ScalingArgs),
    /// Check the fast paths against the dense brute-force simulator
    Verify(verify::VerifyArgs),
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomized subcommands
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file with the same keys as the long flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Csv,
    Json,
}

impl IoArgs {
    fn setup(&self, cfg: &Config) -> Result<()> {
        let threads = match self.threads {
            Some(n) => Some(n),
            None => cfg.u64("threads")?.map(|n| n as usize),
        };
        if let Some(n) = threads {
            if n == 0 {
                bail!("--threads must be positive");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("initializing thread pool")?;
        }
        Ok(())
    }

    fn emit(&self, cfg: &Config, table: &Table, spec: serde_json::Value) -> Result<()> {
        let format = match self.format {
            Some(f) => f,
            None => match cfg.string("format")?.as_deref() {
                Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => bail!("config format must be csv or json, got {other}"),
                None => Format::Csv,
            },
        };
        let text = match format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(spec)?,
        };
        write_output(self.out.as_deref(), &text)
    }
}

/// Physical parameters shared by the sweep subcommands.
#[derive(Args, Debug)]
struct PhysArgs {
    /// Pointer-basis population of the system (default 1/2)
    #[arg(long)]
    s00: Option<f64>,
    /// Coherence magnitude |s01|; omitted means a pure system
    #[arg(long)]
    s01: Option<f64>,
    /// Misalignment of each environment qubit (default 0)
    #[arg(long)]
    sigma: Option<f64>,
    /// Coherence fraction of each environment qubit (default 1: pure)
    #[arg(long, conflicts_with = "target_h")]
    zeta: Option<f64>,
    /// Choose zeta so the per-qubit haziness equals this value
    #[arg(long = "target-h")]
    target_h: Option<f64>,
    /// Environment size (default 200)
    #[arg(long = "n-env")]
    n_env: Option<u32>,
}

struct Physical {
    sys: SystemQubit,
    env: EnvQubit,
    n_env: u32,
}

impl PhysArgs {
    fn resolve(&self, cfg: &Config, preset: Option<&MiPreset>) -> Result<Physical> {
        let s00 = pick(self.s00, cfg.f64("s00")?, None, 0.5);
        let s01 = self
            .s01
            .or(cfg.f64("s01")?)
            .or(preset.and_then(|p| p.s01));
        let sys = match s01 {
            Some(mag) => SystemQubit::new(s00, Complex64::new(mag, 0.0))?,
            None => SystemQubit::pure(s00)?,
        };
        let sigma = pick(self.sigma, cfg.f64("sigma")?, preset.map(|p| p.sigma), 0.0);
        let target_h = self
            .target_h
            .or(cfg.f64("target-h")?)
            .or(preset.and_then(|p| p.target_h));
        let env = match (self.zeta.or(cfg.f64("zeta")?), target_h) {
            (Some(_), Some(_)) => bail!("give either --zeta or --target-h, not both"),
            (None, Some(h)) => EnvQubit::with_target_haziness(sigma, h)?,
            (zeta, None) => EnvQubit::from_alignment(
                sigma,
                zeta.or(preset.and_then(|p| p.zeta)).unwrap_or(1.0),
            )?,
        };
        let n_env = pick(
            self.n_env,
            cfg.u64("n-env")?.map(|n| n as u32),
            None,
            200,
        );
        Ok(Physical { sys, env, n_env })
    }
}

fn pick<T>(flag: Option<T>, cfg: Option<T>, preset: Option<T>, default: T) -> T {
    flag.or(cfg).or(preset).unwrap_or(default)
}

fn phys_spec(p: &Physical, t_grid: &[f64], n_f_grid: &[u32]) -> serde_json::Value {
    json!({
        "s00": format_float(p.sys.s00()),
        "s01": format_float(p.sys.s01().norm()),
        "sigma": format_float(p.env.sigma()),
        "zeta_r01": format_float(p.env.r01().norm()),
        "haziness": format_float(p.env.haziness()),
        "n_env": p.n_env,
        "t_grid": t_grid.iter().map(|t| format_float(*t)).collect::<Vec<_>>(),
        "nf_grid": n_f_grid,
    })
}

// ---------------------------------------------------------------- mi-surface

#[derive(Clone, Copy, ValueEnum, Debug)]
enum MiFigure {
    /// pure S, pure aligned E, full (t, nF) surface
    #[value(name = "3a")]
    F3a,
    /// partially decohered S (H_S(0) = 0.8), otherwise as 3a
    #[value(name = "3b")]
    F3b,
    /// hazy aligned E with h ~= 0.8
    #[value(name = "4a")]
    F4a,
    /// misaligned hazy E: sigma = 0.8, h/h_m ~= 0.8
    #[value(name = "4b")]
    F4b,
    /// t = pi/2 slice swept over haziness
    #[value(name = "5a")]
    F5a,
}

struct MiPreset {
    s01: Option<f64>,
    sigma: f64,
    zeta: Option<f64>,
    target_h: Option<f64>,
    h_sweep: Option<Vec<f64>>,
    t_grid: String,
    nf_grid: String,
}

impl MiFigure {
    fn preset(self) -> Result<MiPreset> {
        let surface_t = format!("0:{PI}:17");
        let base = MiPreset {
            s01: None,
            sigma: 0.0,
            zeta: Some(1.0),
            target_h: None,
            h_sweep: None,
            t_grid: surface_t,
            nf_grid: "0:200:10".into(),
        };
        Ok(match self {
            MiFigure::F3a => base,
            MiFigure::F3b => MiPreset {
                // |s01| giving an initial system entropy of 0.8 bits
                s01: Some(binary_entropy_inverse_upper(0.8)? - 0.5),
                ..base
            },
            MiFigure::F4a => MiPreset {
                zeta: None,
                target_h: Some(0.8),
                ..base
            },
            MiFigure::F4b => MiPreset {
                sigma: 0.8,
                zeta: Some(0.5),
                ..base
            },
            MiFigure::F5a => MiPreset {
                h_sweep: Some(parse_f64_grid("0:1:21")?),
                t_grid: HALF_PI.to_string(),
                ..base
            },
        })
    }
}

#[derive(Args, Debug)]
struct MiSurfaceArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    phys: PhysArgs,
    /// Reproduce the data behind a published-style figure panel
    #[arg(long, value_enum)]
    figure: Option<MiFigure>,
    /// Times: `a,b,c` or `lo:hi:count` (default pi/2)
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Fragment sizes: `a,b,c` or `lo:hi:step` (default 0:nE:nE/20)
    #[arg(long = "nf-grid")]
    nf_grid: Option<String>,
}

fn cmd_mi_surface(args: &MiSurfaceArgs) -> Result<()> {
    let cfg = Config::load(args.io.config.as_deref())?;
    args.io.setup(&cfg)?;
    let preset = args.figure.map(MiFigure::preset).transpose()?;
    let phys = args.phys.resolve(&cfg, preset.as_ref())?;

    let t_grid = parse_f64_grid(&pick(
        args.t_grid.clone(),
        cfg.grid("t-grid")?,
        preset.as_ref().map(|p| p.t_grid.clone()),
        HALF_PI.to_string(),
    ))?;
    let nf_grid = parse_u32_grid(&pick(
        args.nf_grid.clone(),
        cfg.grid("nf-grid")?,
        preset.as_ref().map(|p| p.nf_grid.clone()),
        format!("0:{}:{}", phys.n_env, (phys.n_env / 20).max(1)),
    ))?;

    // a haziness sweep (preset 5a) evaluates several environments at once
    let envs: Vec<EnvQubit> = match preset.as_ref().and_then(|p| p.h_sweep.as_ref()) {
        Some(hs) => hs
            .iter()
            .map(|&h| EnvQubit::with_target_haziness(0.0, h).map_err(Into::into))
            .collect::<Result<_>>()?,
        None => vec![phys.env],
    };

    let mut jobs: Vec<(f64, EnvQubit, u32)> = Vec::new();
    for &t in &t_grid {
        for &env in &envs {
            for &n_f in &nf_grid {
                jobs.push((t, env, n_f));
            }
        }
    }
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(t, env, n_f)| -> Result<Vec<Cell>> {
            let p = ModelParams::new(phys.sys, env, phys.n_env, t)?;
            let pt = mutual_information(&p, n_f)?;
            Ok(vec![
                Cell::Float(t),
                Cell::Int(n_f as u64),
                Cell::Float(pt.mutual_info),
                Cell::Float(pt.discord),
                Cell::Float(pt.fragment_entropy_gain),
                Cell::Float(env.haziness()),
                Cell::Float(env.sigma()),
            ])
        })
        .collect::<Result<_>>()?;

    let table = Table {
        columns: vec![
            "t",
            "nF",
            "mutual_info",
            "discord",
            "fragment_entropy_gain",
            "h",
            "sigma",
        ],
        rows,
    };
    args.io.emit(&cfg, &table, phys_spec(&phys, &t_grid, &nf_grid))
}

// ------------------------------------------------------------------ discord

#[derive(Args, Debug)]
struct DiscordArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    phys: PhysArgs,
    /// Times: `a,b,c` or `lo:hi:count` (default 0:pi:33)
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Fragment sizes (default 0:nE:nE/20)
    #[arg(long = "nf-grid")]
    nf_grid: Option<String>,
}

fn cmd_discord(args: &DiscordArgs) -> Result<()> {
    let cfg = Config::load(args.io.config.as_deref())?;
    args.io.setup(&cfg)?;
    let phys = args.phys.resolve(&cfg, None)?;
    let t_grid = parse_f64_grid(&pick(
        args.t_grid.clone(),
        cfg.grid("t-grid")?,
        None,
        format!("0:{PI}:33"),
    ))?;
    let nf_grid = parse_u32_grid(&pick(
        args.nf_grid.clone(),
        cfg.grid("nf-grid")?,
        None,
        format!("0:{}:{}", phys.n_env, (phys.n_env / 20).max(1)),
    ))?;

    let jobs: Vec<(f64, u32)> = t_grid
        .iter()
        .flat_map(|&t| nf_grid.iter().map(move |&n_f| (t, n_f)))
        .collect();
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(t, n_f)| -> Result<Vec<Cell>> {
            let p = ModelParams::new(phys.sys, phys.env, phys.n_env, t)?;
            Ok(vec![
                Cell::Float(t),
                Cell::Int(n_f as u64),
                Cell::Float(discord(&p, n_f)?),
                Cell::Float(discord_approx(&p, n_f)?),
            ])
        })
        .collect::<Result<_>>()?;

    let table = Table {
        columns: vec!["t", "nF", "discord", "discord_approx"],
        rows,
    };
    args.io.emit(&cfg, &table, phys_spec(&phys, &t_grid, &nf_grid))
}

// --------------------------------------------------------------- redundancy

#[derive(Clone, Copy, ValueEnum, Debug)]
enum RedFigure {
    /// redundancy vs haziness at t = pi/2
    #[value(name = "5c")]
    F5c,
    /// redundancy vs misalignment at t = pi/2, pure environment
    #[value(name = "6c")]
    F6c,
}

#[derive(Clone, Copy, ValueEnum, Debug, PartialEq)]
enum SweepVar {
    H,
    Sigma,
}

#[derive(Args, Debug)]
struct RedundancyArgs {
    #[command(flatten)]
    io: IoArgs,
    /// System population (default 1/2, pure system)
    #[arg(long)]
    s00: Option<f64>,
    /// Environment size (default 200)
    #[arg(long = "n-env")]
    n_env: Option<u32>,
    /// Evolution time (default pi/2)
    #[arg(long)]
    t: Option<f64>,
    /// Swept environment parameter
    #[arg(long, value_enum)]
    sweep: Option<SweepVar>,
    /// Sweep values: `a,b,c` or `lo:hi:count`
    #[arg(long)]
    grid: Option<String>,
    /// Information deficits, comma separated (default 0.1); two or more
    /// also produce the limiting redundancy
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_enum)]
    figure: Option<RedFigure>,
}

fn cmd_redundancy(args: &RedundancyArgs) -> Result<()> {
    let cfg = Config::load(args.io.config.as_deref())?;
    args.io.setup(&cfg)?;

    let (preset_sweep, preset_grid) = match args.figure {
        Some(RedFigure::F5c) => (Some(SweepVar::H), Some("0:1:21".to_string())),
        Some(RedFigure::F6c) => (Some(SweepVar::Sigma), Some("0:0.95:20".to_string())),
        None => (None, None),
    };
    let sweep = match (
        args.sweep,
        cfg.string("sweep")?.as_deref(),
        preset_sweep,
    ) {
        (Some(s), _, _) => s,
        (None, Some("h"), _) => SweepVar::H,
        (None, Some("sigma"), _) => SweepVar::Sigma,
        (None, Some(other), _) => bail!("config sweep must be h or sigma, got {other}"),
        (None, None, Some(s)) => s,
        (None, None, None) => SweepVar::H,
    };
    let grid = parse_f64_grid(&pick(
        args.grid.clone(),
        cfg.grid("grid")?,
        preset_grid,
        "0:0.9:10".to_string(),
    ))?;
    let deltas = parse_f64_grid(&pick(
        args.delta.clone(),
        cfg.grid("delta")?,
        None,
        "0.1".to_string(),
    ))?;
    if deltas.is_empty() {
        bail!("need at least one deficit");
    }
    let s00 = pick(args.s00, cfg.f64("s00")?, None, 0.5);
    let sys = SystemQubit::pure(s00)?;
    let n_env = pick(args.n_env, cfg.u64("n-env")?.map(|n| n as u32), None, 200);
    let t = pick(args.t, cfg.f64("t")?, None, HALF_PI);

    let rows: Vec<Vec<Vec<Cell>>> = grid
        .par_iter()
        .map(|&value| -> Result<Vec<Vec<Cell>>> {
            let env = match sweep {
                SweepVar::H => EnvQubit::with_target_haziness(0.0, value)?,
                SweepVar::Sigma => EnvQubit::from_alignment(value, 1.0)?,
            };
            let p = ModelParams::new(sys, env, n_env, t)?;
            let r_bar = if deltas.len() >= 2 {
                limiting_redundancy(&p, &deltas).ok().map(|l| l.r_bar)
            } else {
                None
            };
            let mut point_rows = Vec::new();
            for &delta in &deltas {
                let r = redundancy(&p, delta)?;
                let estimate = match sweep {
                    SweepVar::H => {
                        let lp = env.lambda_plus();
                        scaling_hazy(lp, 1.0 - lp, n_env, delta).ok()
                    }
                    SweepVar::Sigma => scaling_misaligned(value, t, n_env, delta).ok(),
                };
                point_rows.push(vec![
                    Cell::Text(match sweep {
                        SweepVar::H => "h".into(),
                        SweepVar::Sigma => "sigma".into(),
                    }),
                    Cell::Float(value),
                    Cell::Float(delta),
                    Cell::opt_int(r.n_f_delta),
                    Cell::Float(r.r_delta),
                    Cell::opt_float(estimate),
                    Cell::opt_float(r_bar),
                ]);
            }
            Ok(point_rows)
        })
        .collect::<Result<_>>()?;

    let table = Table {
        columns: vec![
            "sweep", "value", "delta", "nF_delta", "R_delta", "R_scaling", "R_bar",
        ],
        rows: rows.into_iter().flatten().collect(),
    };
    let spec = json!({
        "s00": format_float(s00),
        "n_env": n_env,
        "t": format_float(t),
        "sweep": match sweep { SweepVar::H => "h", SweepVar::Sigma => "sigma" },
        "grid": grid.iter().map(|v| format_float(*v)).collect::<Vec<_>>(),
        "delta": deltas.iter().map(|v| format_float(*v)).collect::<Vec<_>>(),
    });
    args.io.emit(&cfg, &table, spec)
}

// ------------------------------------------------------------------ scaling

#[derive(Clone, Copy, ValueEnum, Debug)]
enum ScalingKind {
    Hazy,
    Misaligned,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_enum)]
    kind: Option<ScalingKind>,
    /// Haziness values (hazy) or misalignments (misaligned)
    #[arg(long)]
    grid: Option<String>,
    /// Information deficits, comma separated
    #[arg(long)]
    delta: Option<String>,
    #[arg(long = "n-env")]
    n_env: Option<u32>,
    /// Evolution time, used by the misaligned law (default pi/2)
    #[arg(long)]
    t: Option<f64>,
}

fn cmd_scaling(args: &ScalingArgs) -> Result<()> {
    let cfg = Config::load(args.io.config.as_deref())?;
    args.io.setup(&cfg)?;
    let kind = match (args.kind, cfg.string("kind")?.as_deref()) {
        (Some(k), _) => k,
        (None, Some("hazy")) => ScalingKind::Hazy,
        (None, Some("misaligned")) => ScalingKind::Misaligned,
        (None, Some(other)) => bail!("config kind must be hazy or misaligned, got {other}"),
        (None, None) => ScalingKind::Hazy,
    };
    let default_grid = match kind {
        ScalingKind::Hazy => "0.1:0.9:17",
        ScalingKind::Misaligned => "0:0.9:19",
    };
    let grid = parse_f64_grid(&pick(
        args.grid.clone(),
        cfg.grid("grid")?,
        None,
        default_grid.to_string(),
    ))?;
    let deltas = parse_f64_grid(&pick(
        args.delta.clone(),
        cfg.grid("delta")?,
        None,
        "1e-2,1e-3,1e-4".to_string(),
    ))?;
    let n_env = pick(args.n_env, cfg.u64("n-env")?.map(|n| n as u32), None, 200);
    let t = pick(args.t, cfg.f64("t")?, None, HALF_PI);

    let mut rows = Vec::new();
    for &value in &grid {
        for &delta in &deltas {
            let estimate = match kind {
                ScalingKind::Hazy => {
                    let lp = binary_entropy_inverse_upper(value)?;
                    scaling_hazy(lp, 1.0 - lp, n_env, delta).ok()
                }
                ScalingKind::Misaligned => scaling_misaligned(value, t, n_env, delta).ok(),
            };
            rows.push(vec![
                Cell::Text(
                    match kind {
                        ScalingKind::Hazy => "hazy",
                        ScalingKind::Misaligned => "misaligned",
                    }
                    .into(),
                ),
                Cell::Float(value),
                Cell::Float(delta),
                Cell::opt_float(estimate),
            ]);
        }
    }

    let table = Table {
        columns: vec!["kind", "value", "delta", "R_scaling"],
        rows,
    };
    let spec = json!({
        "kind": match kind { ScalingKind::Hazy => "hazy", ScalingKind::Misaligned => "misaligned" },
        "n_env": n_env,
        "t": format_float(t),
        "grid": grid.iter().map(|v| format_float(*v)).collect::<Vec<_>>(),
        "delta": deltas.iter().map(|v| format_float(*v)).collect::<Vec<_>>(),
    });
    args.io.emit(&cfg, &table, spec)
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::MiSurface(a) => cmd_mi_surface(a).map(|()| ExitCode::SUCCESS),
        Cmd::Discord(a) => cmd_discord(a).map(|()| ExitCode::SUCCESS),
        Cmd::Redundancy(a) => cmd_redundancy(a).map(|()| ExitCode::SUCCESS),
        Cmd::Scaling(a) => cmd_scaling(a).map(|()| ExitCode::SUCCESS),
        Cmd::Verify(a) => verify::cmd_verify(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
