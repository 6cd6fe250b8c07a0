//! `intcheb`: integer Chebyshev constant bounds from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.
//! `INTCHEB_THREADS` sets the worker thread count.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intcheb::bounds::ExponentConvention;
use intcheb::{IntPoly, IntervalUnion, RationalPoint};

use commands::{execute, Failure};
use config::{parse_factors, parse_points, Command, FactorArg, Format, Mode, ObjectiveKind, RunConfig};

const THREADS_VAR: &str = "INTCHEB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "intcheb", version, about = "Bounds for integer Chebyshev constants")]
struct Cli {
    /// JSON run configuration; flags given with a subcommand override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Closed-form equilibrium data for |z|^(2 alpha1) |4z-1|^alpha2 on [0, 1/4].
    Equilibrium(EquilibriumArgs),
    /// Weighted Leja sequence and its equilibrium estimates.
    Leja(LejaCmd),
    /// Upper or lower bound for a fixed or swept weight.
    Bound(BoundCmd),
    /// Lattice optimisation over the '*' exponents.
    Sweep(SweepCmd),
    /// Exponent vectors whose rational-point constraints stay below M.
    Region(RegionCmd),
    /// Exact integer Chebyshev polynomials of small degree.
    Exact(ExactCmd),
    /// Integer Chebyshev constant of the lemniscate |V(z)| = r.
    Lemniscate(LemniscateCmd),
    /// Integer polynomial with small weighted norm from a reduced lattice.
    Construct(ConstructCmd),
}

#[derive(Clone, Debug)]
struct Factors(Vec<FactorArg>);

#[derive(Clone, Debug)]
struct Points(Vec<RationalPoint>);

fn factors_arg(s: &str) -> Result<Factors, String> {
    parse_factors(s).map(Factors)
}

fn points_arg(s: &str) -> Result<Points, String> {
    parse_points(s).map(Points)
}

fn domain_arg(s: &str) -> Result<IntervalUnion<f64>, String> {
    s.parse().map_err(|e: intcheb::Error| format!("{e}; expected LO:HI[,LO:HI...]"))
}

fn poly_arg(s: &str) -> Result<IntPoly, String> {
    s.parse().map_err(|e: intcheb::Error| format!("{e}; expected \"c0,c1,...\" or e.g. \"4z-1\""))
}

fn real_arg(s: &str) -> Result<f64, String> {
    intcheb::polycore::parse_real(s).map_err(|e| e.to_string())
}

fn seed_arg(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(real_arg).collect()
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    Direct,
    UnitInterval,
}

impl From<Convention> for ExponentConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Direct => ExponentConvention::Direct,
            Convention::UnitInterval => ExponentConvention::UnitInterval,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Union of intervals, e.g. 0:1/4 or -2:-1,1:2 [default: 0:1/4]
    #[arg(long, value_parser = domain_arg, allow_hyphen_values = true)]
    domain: Option<IntervalUnion<f64>>,
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Weight factors POLY:EXP, comma separated; EXP '*' marks a swept exponent.
    #[arg(long, value_parser = factors_arg, allow_hyphen_values = true, value_name = "POLY:EXP,...")]
    factors: Option<Factors>,
    /// Meaning of swept exponents [default: unit-interval]
    #[arg(long, value_enum)]
    convention: Option<Convention>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Args, Debug)]
struct LejaArgs {
    /// Leja sequence length n [default: 2000]
    #[arg(long)]
    leja_length: Option<usize>,
    /// Candidate grid points per unit length.
    #[arg(long)]
    grid_density: Option<usize>,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Lattice step [default: 0.002]
    #[arg(long, value_parser = real_arg)]
    step: Option<f64>,
    /// Coarse lattice step; enables the coarse-to-fine search.
    #[arg(long, value_parser = real_arg)]
    coarse_step: Option<f64>,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    /// Rational points, e.g. 0,1/4 [default: roots of the linear factors]
    #[arg(long, value_parser = points_arg, allow_hyphen_values = true)]
    zetas: Option<Points>,
}

#[derive(Args, Debug)]
struct EquilibriumArgs {
    #[arg(long, value_parser = real_arg)]
    alpha1: Option<f64>,
    #[arg(long, value_parser = real_arg)]
    alpha2: Option<f64>,
    #[command(flatten)]
    zetas: ZetaArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct LejaCmd {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    leja: LejaArgs,
    #[command(flatten)]
    zetas: ZetaArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BoundCmd {
    #[arg(value_enum)]
    side: ObjectiveKind,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    leja: LejaArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    zetas: ZetaArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepCmd {
    #[arg(long, value_enum)]
    objective: Option<ObjectiveKind>,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    leja: LejaArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    zetas: ZetaArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct RegionCmd {
    /// Threshold M [default: 0.179335]
    #[arg(long = "m", visible_alias = "M", value_parser = real_arg)]
    m: Option<f64>,
    /// Flood fill from this exponent vector instead of scanning the whole lattice.
    #[arg(long, value_parser = seed_arg, value_name = "A1,A2,...")]
    seed: Option<Vec<f64>>,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    leja: LejaArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    #[command(flatten)]
    zetas: ZetaArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ExactCmd {
    /// Search degrees 1..=DEGREE.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct LemniscateCmd {
    #[arg(long, value_parser = poly_arg, allow_hyphen_values = true)]
    poly: Option<IntPoly>,
    #[arg(long, value_parser = real_arg)]
    r: Option<f64>,
    /// Assert that the polynomial is irreducible over the integers.
    #[arg(long)]
    irreducible: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ConstructCmd {
    #[arg(long)]
    degree: Option<usize>,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    out: OutputArgs,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl OutputArgs {
    fn apply(self, c: &mut RunConfig) {
        set_opt(&mut c.output, self.output);
        set_opt(&mut c.format, self.format);
    }
}

impl DomainArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.domain, self.domain);
    }
}

impl WeightArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.factors, self.factors.map(|f| f.0));
        set(&mut c.convention, self.convention.map(Into::into));
        set(&mut c.mode, self.mode);
    }
}

impl LejaArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.leja_length, self.leja_length);
        set(&mut c.grid_density, self.grid_density);
    }
}

impl LatticeArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.step, self.step);
        set_opt(&mut c.coarse_step, self.coarse_step);
    }
}

impl ZetaArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.zetas, self.zetas.map(|z| z.0));
    }
}

/// Config file (if any) overlaid with the subcommand's flags.
fn build_config(cli: Cli) -> Result<RunConfig, String> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("--config {}: {e}", path.display()))?;
            Some(RunConfig::from_json(&text)?)
        }
        None => None,
    };
    let Some(sub) = cli.command else {
        return base.ok_or_else(|| "a subcommand or --config PATH is required; see --help".to_string());
    };
    let command = match &sub {
        Sub::Equilibrium(_) => Command::Equilibrium,
        Sub::Leja(_) => Command::Leja,
        Sub::Bound(b) => match b.side {
            ObjectiveKind::Upper => Command::BoundUpper,
            ObjectiveKind::Lower => Command::BoundLower,
        },
        Sub::Sweep(_) => Command::Sweep,
        Sub::Region(_) => Command::Region,
        Sub::Exact(_) => Command::Exact,
        Sub::Lemniscate(_) => Command::Lemniscate,
        Sub::Construct(_) => Command::Construct,
    };
    let mut c = base.unwrap_or_else(|| RunConfig::new(command));
    c.command = command;
    match sub {
        Sub::Equilibrium(a) => {
            set_opt(&mut c.alpha1, a.alpha1);
            set_opt(&mut c.alpha2, a.alpha2);
            a.zetas.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Leja(a) => {
            a.domain.apply(&mut c);
            a.weight.apply(&mut c);
            a.leja.apply(&mut c);
            a.zetas.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Bound(a) => {
            a.domain.apply(&mut c);
            a.weight.apply(&mut c);
            a.leja.apply(&mut c);
            a.lattice.apply(&mut c);
            a.zetas.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Sweep(a) => {
            set(&mut c.objective, a.objective);
            a.domain.apply(&mut c);
            a.weight.apply(&mut c);
            a.leja.apply(&mut c);
            a.lattice.apply(&mut c);
            a.zetas.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Region(a) => {
            set(&mut c.m, a.m);
            set_opt(&mut c.seed, a.seed);
            a.domain.apply(&mut c);
            a.weight.apply(&mut c);
            a.leja.apply(&mut c);
            a.lattice.apply(&mut c);
            a.zetas.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Exact(a) => {
            set_opt(&mut c.degree, a.degree);
            set(&mut c.max_degree, a.max_degree);
            a.domain.apply(&mut c);
            a.out.apply(&mut c);
        }
        Sub::Lemniscate(a) => {
            set_opt(&mut c.poly, a.poly);
            set_opt(&mut c.r, a.r);
            c.irreducible |= a.irreducible;
            a.out.apply(&mut c);
        }
        Sub::Construct(a) => {
            set_opt(&mut c.degree, a.degree);
            a.domain.apply(&mut c);
            a.weight.apply(&mut c);
            a.out.apply(&mut c);
        }
    }
    Ok(c)
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or(format!("{THREADS_VAR}={v:?} must be a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// The report: JSON `{config, result}`, or CSV preceded by a `# config:` line.
fn render(cfg: &RunConfig, out: &commands::Output) -> String {
    match cfg.format.unwrap_or_default() {
        Format::Json => {
            let doc = serde_json::json!({ "config": cfg, "result": out.result });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            format!("# config: {}\n{}", serde_json::to_string(cfg).expect("config serializes"), out.csv)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads().map_err(Failure::Invalid)?;
    let cfg = build_config(cli).and_then(RunConfig::resolve).map_err(Failure::Invalid)?;
    let start = Instant::now();
    let out = execute(&cfg)?;
    let text = render(&cfg, &out);
    let elapsed = start.elapsed();
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::Numerical(format!("cannot write {}: {e}", path.display())))?;
            for line in &out.summary {
                println!("{line}");
            }
            println!("wrote {} in {:.2?}", path.display(), elapsed);
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Numerical(e.to_string()))?;
            for line in &out.summary {
                eprintln!("{line}");
            }
            eprintln!("finished in {elapsed:.2?}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
