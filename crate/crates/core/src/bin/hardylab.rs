use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hardylab::cli::{self, Command, FamilyFlags, Format, RunConfig, EXIT_CONFIG};
use hardylab::verify::Suite;

#[derive(Parser)]
#[command(name = "hardylab", version, about = "Truncated power series laboratory for univalent maps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a map and print its summary
    Build(Common),
    /// Taylor coefficients
    Coeffs(Common),
    /// Integral means along a radius ladder
    Means(Common),
    /// Blow-up exponent at --p, or the critical Hardy exponent
    Exponent(Common),
    /// Lower order, radial A-limit and half tangents at the first pole
    Geometry(Common),
    /// Run a check suite, or the per-function checks
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Option<String>,
    },
    /// Build, exponent, geometry and checks in one document
    Report(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Measure atoms as arg/pi:weight pairs, e.g. "0:0.5,1:0.5"
    #[arg(long)]
    atoms: Option<String>,
    #[arg(long, default_value_t = 64)]
    order: usize,
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated radii
    #[arg(long)]
    radii: Option<String>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Tolerance override as prefix=value, repeatable
    #[arg(long = "tol")]
    tolerances: Vec<String>,
}

fn config(command: Command, c: Common, suite: Option<String>) -> hardylab::Result<RunConfig> {
    let mut cfg = RunConfig::new(command);
    if let Some(family) = &c.family {
        let flags = FamilyFlags {
            alpha: c.alpha,
            t: c.t,
            r: c.r,
            eps: c.eps,
            beta: c.beta,
            atoms: c.atoms,
        };
        let (spec, target) = cli::function_from_flags(family, c.order, &flags)?;
        cfg = cfg.with_function(spec, target);
    }
    cfg.output_path = c.out;
    cfg.format = c.format.parse::<Format>()?;
    cfg.seed = c.seed;
    cfg.p = c.p;
    cfg.radii = c.radii.as_deref().map(cli::parse_radii).transpose()?;
    cfg.suite = suite.as_deref().map(str::parse::<Suite>).transpose()?;
    let mut tolerances = BTreeMap::new();
    for entry in &c.tolerances {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| hardylab::Error::BadConfig(format!("tolerance '{entry}' is not prefix=value")))?;
        let v = v.parse().map_err(|_| hardylab::Error::BadConfig(format!("bad tolerance '{v}'")))?;
        tolerances.insert(k.to_string(), v);
    }
    cfg.tolerances = tolerances;
    Ok(cfg)
}

fn main() {
    env_logger::init();
    if let Some(n) = std::env::var("HARDYLAB_THREADS").ok().and_then(|s| s.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let parsed = Cli::parse();
    let cfg = match parsed.command {
        Cmd::Build(c) => config(Command::Build, c, None),
        Cmd::Coeffs(c) => config(Command::Coeffs, c, None),
        Cmd::Means(c) => config(Command::Means, c, None),
        Cmd::Exponent(c) => config(Command::Exponent, c, None),
        Cmd::Geometry(c) => config(Command::Geometry, c, None),
        Cmd::Verify { common, suite } => config(Command::Verify, common, suite),
        Cmd::Report(c) => config(Command::Report, c, None),
    };
    let code = match cfg {
        Ok(cfg) => cli::run(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    };
    std::process::exit(code);
}
