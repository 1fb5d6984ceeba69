mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dedekind_core::report::{Report, RunConfig, Status};
use dedekind_core::{Complex64, Error, Precision};

/// Dedekind zeta data, modular-relation and Riesz-criterion checks.
#[derive(Debug, Parser)]
#[command(name = "dedekind", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Write the command's CSV export here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Summation precision.
    #[arg(long, global = true, value_parser = parse_precision)]
    precision: Option<Precision>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field invariants and the local data of zeta_K at 0 and 1.
    Field(FieldArgs),
    /// Coefficients a_n and b_n up to N.
    Coeffs(CoeffArgs),
    /// Inverse-Mellin kernels.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Zeros on the critical line.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Check the modular relation over the zeros.
    VerifyModular(ModularArgs),
    /// Evaluate P, the main term and their envelopes on a y grid.
    RieszScan(RieszArgs),
    /// Check the Mellin transform of P against its closed form.
    MellinCheck(MellinArgs),
    /// Run the quick invariant suite.
    Selftest,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// `Q` or a squarefree integer d.
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
}

#[derive(Debug, Args)]
struct CoeffArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long = "N")]
    n: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum KernelCommand {
    /// Evaluate Z by its line integral and, when available, its closed form.
    Eval(KernelArgs),
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long)]
    r1: u32,
    #[arg(long)]
    r2: u32,
    #[arg(long)]
    x: f64,
    /// Contour abscissa.
    #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
    abscissa: f64,
    #[arg(long)]
    quad_step: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum ZerosCommand {
    /// Scan the critical line up to height T.
    Scan(ZeroArgs),
}

#[derive(Debug, Args)]
struct ZeroArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
}

#[derive(Debug, Args)]
struct ModularArgs {
    #[command(flatten)]
    zeros: ZeroArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "N")]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct RieszArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    y_min: Option<f64>,
    #[arg(long)]
    y_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Coefficient bound.
    #[arg(long = "N")]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct MellinArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// `RE,IM` or `RE`.
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    s: Complex64,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    match s {
        "standard" => Ok(Precision::Standard),
        "extended" => Ok(Precision::Extended),
        _ => Err(format!("unknown precision `{s}` (standard | extended)")),
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Cli {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut cfg.precision, self.precision);
        if self.output.is_some() {
            cfg.output.clone_from(&self.output);
        }
        if self.csv.is_some() {
            cfg.csv.clone_from(&self.csv);
        }
        let field = |cfg: &mut RunConfig, a: &FieldArgs| set(&mut cfg.field, a.field.clone());
        let zeros = |cfg: &mut RunConfig, a: &ZeroArgs| {
            field(cfg, &a.field);
            set(&mut cfg.t, a.t);
            set(&mut cfg.c0, a.c0);
        };
        match &self.command {
            Command::Field(a) => field(&mut cfg, a),
            Command::Coeffs(a) => {
                field(&mut cfg, &a.field);
                set(&mut cfg.n_terms, a.n);
            }
            Command::Kernel(KernelCommand::Eval(a)) => {
                set(&mut cfg.quad_step, a.quad_step);
                if a.t_max.is_some() {
                    cfg.t_max = a.t_max;
                }
            }
            Command::Zeros(ZerosCommand::Scan(a)) => zeros(&mut cfg, a),
            Command::VerifyModular(a) => {
                zeros(&mut cfg, &a.zeros);
                set(&mut cfg.alpha, a.alpha);
                set(&mut cfg.n_terms, a.n);
            }
            Command::RieszScan(a) => {
                field(&mut cfg, &a.field);
                set(&mut cfg.y_min, a.y_min);
                set(&mut cfg.y_max, a.y_max);
                set(&mut cfg.points, a.points);
                set(&mut cfg.eps, a.eps);
                set(&mut cfg.n_terms, a.n);
            }
            Command::MellinCheck(a) => field(&mut cfg, &a.field),
            Command::Selftest => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::Field(_) => "field",
            Command::Coeffs(_) => "coeffs",
            Command::Kernel(_) => "kernel eval",
            Command::Zeros(_) => "zeros scan",
            Command::VerifyModular(_) => "verify-modular",
            Command::RieszScan(_) => "riesz-scan",
            Command::MellinCheck(_) => "mellin-check",
            Command::Selftest => "selftest",
        }
    }
}

fn run(cli: &Cli) -> Result<Status, Error> {
    let cfg = cli.config()?;
    let out = match &cli.command {
        Command::Field(_) => commands::field(&cfg)?,
        Command::Coeffs(_) => commands::coeffs(&cfg)?,
        Command::Kernel(KernelCommand::Eval(a)) => commands::kernel_eval(&cfg, a.r1, a.r2, a.x, a.abscissa)?,
        Command::Zeros(_) => commands::zeros_scan(&cfg)?,
        Command::VerifyModular(_) => commands::verify_modular(&cfg)?,
        Command::RieszScan(_) => commands::riesz_scan(&cfg)?,
        Command::MellinCheck(a) => commands::mellin_check(&cfg, a.s)?,
        Command::Selftest => commands::selftest()?,
    };
    let report = Report::new(cli.name(), &cfg, &out.checks, &out.result);
    let json = report.to_json()?;
    match &cfg.output {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    for c in out.checks.iter().filter(|c| !c.pass) {
        log::error!("{}: achieved {:e}, tolerance {:e}", c.name, c.achieved, c.tolerance);
    }
    Ok(report.status)
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("DEDEKIND_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| format!("DEDEKIND_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        return Err("DEDEKIND_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_tolerance_failure() { 2 } else { 1 })
        }
    }
}
