//! Command surface of the `quasigrid` binary. Every command writes its
//! result to `--out` or stdout and reports failures through [`CliError`],
//! whose [`CliError::exit_code`] gives the process status.

pub mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use quasigrid_core::formats::{
    chain_to_string, check_report, density_csv, density_report, scheme_to_string, subadditivity_report,
    translation_report, weak_ap_report,
};
use quasigrid_core::numeric::{fmt_rational, int, parse_rational_loose};
use quasigrid_core::{
    apply_chain_with, check_translation, enumerate_model_set_with, epsilon_translations, fixtures,
    iterated_scheme, parse_chain, parse_qps, parse_scheme, qps_to_string, sample_rational_chain,
    sample_sl2_chain, subadditivity_check, translation_ladder, uniform_density, weak_ap_probe,
    CutProjectScheme, EnumerationConfig, Error, MapChain, PointSet, RVector, Rational, RngState,
    DEFAULT_BUDGET,
};

use render::{Format, RenderSpec};

pub const BUDGET_ENV: &str = "QUASIGRID_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Mismatch(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Budget { .. } => 3,
                Error::Domain { .. } | Error::EmptyDomainIntersection | Error::IncompleteDomain => 4,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Mismatch(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational_loose(s).ok_or_else(|| format!("`{s}` is not a rational of the form p or p/q"))
}

fn positive(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r > int(0) {
        Ok(r)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quasigrid",
    version,
    about = "Model sets, discretized linear maps and almost-periodicity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate point sets and fixture schemes.
    #[command(subcommand)]
    Gen(Gen),
    /// Density, translation and weak almost-periodicity reports.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Sample a random SL2 chain and compute the image of Z^2 in a ball.
    Iterate(IterateArgs),
    /// Draw a planar point set as PPM or SVG.
    Render(RenderArgs),
    /// Compare direct rounding with the model-set enumeration.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// Patch of a cut-and-project scheme.
    Model {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, value_parser = positive)]
        radius: Rational,
        /// Comma-separated centre coordinates, origin by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = rational)]
        center: Vec<Rational>,
        #[command(flatten)]
        output: Output,
    },
    /// Image of Z^n under a chain of discretized maps.
    Chain {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, value_parser = positive)]
        radius: Rational,
        #[command(flatten)]
        output: Output,
    },
    /// Integer grid patch.
    Zn {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = positive)]
        radius: Rational,
        #[command(flatten)]
        output: Output,
    },
    /// Write a built-in scheme file.
    Scheme {
        #[arg(long, value_enum)]
        fixture: Fixture,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum Fixture {
    /// Integers congruent to 0 or 1 mod 3.
    Residue,
    /// Rational approximant of the Fibonacci chain.
    Golden,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Uniform density brackets on radii rmin, 2 rmin, … up to rmax.
    Density {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = positive)]
        rmax: Rational,
        /// Smallest radius, rmax/32 by default.
        #[arg(long, value_parser = positive)]
        rmin: Option<Rational>,
        #[arg(long, default_value = "1/100", value_parser = positive)]
        eps: Rational,
        /// Emit the samples as CSV instead of a report.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Epsilon-translations among the difference vectors of the set.
    Translations {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = positive)]
        epsilon: Rational,
        #[arg(long, value_parser = positive)]
        reps: Rational,
        /// Largest candidate norm, (domain radius - 2 reps)/2 by default.
        #[arg(long, value_parser = positive)]
        vmax: Option<Rational>,
        #[command(flatten)]
        output: Output,
    },
    /// Ladder test of a single translation vector.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = rational, required = true)]
        v: Vec<Rational>,
        #[arg(long, value_parser = positive)]
        epsilon: Rational,
        #[arg(long, value_parser = positive)]
        reps: Rational,
        #[command(flatten)]
        output: Output,
    },
    /// Random probe of weak almost periodicity.
    Weakap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = positive)]
        epsilon: Rational,
        #[arg(long, value_parser = positive)]
        radius: Rational,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the density of a sum of translations with the sum of densities.
    Subadditivity {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = positive)]
        radius: Rational,
        /// One translation per flag, coordinates separated by commas.
        #[arg(long = "v", required = true, allow_hyphen_values = true)]
        vs: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = positive)]
    pub radius: Rational,
    #[command(flatten)]
    pub output: Output,
    /// Also write the sampled chain.
    #[arg(long)]
    pub chain_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub ppu: u32,
    /// Half-width of the drawn square, the domain radius by default.
    #[arg(long, value_parser = positive)]
    pub window: Option<Rational>,
    #[arg(long, default_value_t = 1)]
    pub point_px: u32,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub chain: Option<PathBuf>,
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 8)]
    pub denom: u32,
    #[arg(long, value_parser = positive)]
    pub radius: Rational,
    #[arg(long, hide = true)]
    pub corrupt_window: bool,
}

/// Enumeration budget, overridable through `QUASIGRID_BUDGET`.
pub fn config_from_env() -> CliResult<EnumerationConfig> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b > 0)
            .map(|budget| EnumerationConfig { budget })
            .ok_or_else(|| CliError::Usage(format!("{BUDGET_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(EnumerationConfig {
            budget: DEFAULT_BUDGET,
        }),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_set(path: &Path) -> CliResult<PointSet> {
    Ok(parse_qps(&read_text(path)?)?)
}

fn emit(output: &Output, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn vector(text: &str) -> CliResult<RVector> {
    text.split(',')
        .map(|t| rational(t).map_err(CliError::Usage))
        .collect::<CliResult<Vec<_>>>()
        .map(RVector::new)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let config = config_from_env()?;
    match cli.command {
        Command::Gen(g) => gen(g, &config, stdout),
        Command::Analyze(a) => analyze(a, stdout),
        Command::Iterate(args) => iterate(args, &config, stdout),
        Command::Render(args) => {
            let set = read_set(&args.input)?;
            let spec = RenderSpec {
                pixels_per_unit: args.ppu.max(1),
                window_radius: args.window.unwrap_or_else(|| set.domain().radius.clone()),
                point_px: args.point_px.max(1),
                format: args.format,
            };
            emit(&args.output, &render::render(&set, &spec)?, stdout)
        }
        Command::Verify(args) => verify(args, &config, stdout),
    }
}

fn gen(g: Gen, config: &EnumerationConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match g {
        Gen::Model {
            scheme,
            radius,
            center,
            output,
        } => {
            let scheme = parse_scheme(&read_text(&scheme)?)?;
            let center = if center.is_empty() {
                RVector::zeros(scheme.physical_dim())
            } else {
                RVector::new(center)
            };
            let patch = enumerate_model_set_with(&scheme, &center, &radius, config)?.patch;
            emit(&output, qps_to_string(&patch)?.as_bytes(), stdout)
        }
        Gen::Chain {
            chain,
            radius,
            output,
        } => {
            let chain = parse_chain(&read_text(&chain)?)?;
            let set = quasigrid_core::chain_model_set(&chain, &radius, config)?;
            emit(&output, qps_to_string(&set)?.as_bytes(), stdout)
        }
        Gen::Zn { dim, radius, output } => {
            let scheme = CutProjectScheme::integer_lattice(dim)?;
            let set = enumerate_model_set_with(&scheme, &RVector::zeros(dim), &radius, config)?.patch;
            emit(&output, qps_to_string(&set)?.as_bytes(), stdout)
        }
        Gen::Scheme { fixture, output } => {
            let scheme = match fixture {
                Fixture::Residue => fixtures::residue_scheme(),
                Fixture::Golden => fixtures::golden_scheme(),
            };
            emit(&output, scheme_to_string(&scheme).as_bytes(), stdout)
        }
    }
}

fn analyze(a: Analyze, stdout: &mut dyn Write) -> CliResult<()> {
    match a {
        Analyze::Density {
            input,
            rmax,
            rmin,
            eps,
            csv,
            output,
        } => {
            let set = read_set(&input)?;
            let rmin = rmin.unwrap_or_else(|| &rmax / int(32));
            let radii = translation_ladder(&rmin, &rmax);
            if radii.is_empty() {
                return Err(CliError::Usage("rmin must not exceed rmax".into()));
            }
            let profile = uniform_density(&set, &radii, &eps)?;
            let text = if csv {
                density_csv(&profile)
            } else {
                density_report(&profile)
            };
            emit(&output, text.as_bytes(), stdout)
        }
        Analyze::Translations {
            input,
            epsilon,
            reps,
            vmax,
            output,
        } => {
            let set = read_set(&input)?;
            let vmax = match vmax {
                Some(v) => v,
                None => {
                    let v = (&set.domain().radius - &reps * int(2)) / int(2);
                    if v <= int(0) {
                        return Err(Error::Domain {
                            message: format!(
                                "no room for translations with reps {} in a domain of radius {}",
                                fmt_rational(&reps),
                                fmt_rational(&set.domain().radius)
                            ),
                            required_radius: Some(&reps * int(2)),
                        }
                        .into());
                    }
                    v
                }
            };
            let report = epsilon_translations(&set, &epsilon, &reps, &vmax)?;
            emit(&output, translation_report(&report).as_bytes(), stdout)
        }
        Analyze::Check {
            input,
            v,
            epsilon,
            reps,
            output,
        } => {
            let set = read_set(&input)?;
            let check = check_translation(&set, &RVector::new(v), &epsilon, &reps)?;
            emit(&output, check_report(&check).as_bytes(), stdout)
        }
        Analyze::Weakap {
            input,
            epsilon,
            radius,
            pairs,
            seed,
            output,
        } => {
            let set = read_set(&input)?;
            let report = weak_ap_probe(&set, &epsilon, &radius, pairs, &mut RngState::new(seed))?;
            emit(&output, weak_ap_report(&report).as_bytes(), stdout)
        }
        Analyze::Subadditivity {
            input,
            radius,
            vs,
            output,
        } => {
            let set = read_set(&input)?;
            let vs = vs.iter().map(|v| vector(v)).collect::<CliResult<Vec<_>>>()?;
            let s = subadditivity_check(&set, &vs, &radius)?;
            emit(&output, subadditivity_report(&s).as_bytes(), stdout)
        }
    }
}

/// Samples the chain of an `iterate` run.
pub fn iterate_chain(seed: u64, k: usize) -> CliResult<MapChain> {
    Ok(sample_sl2_chain(&mut RngState::new(seed), k)?)
}

fn iterate(args: IterateArgs, config: &EnumerationConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let chain = iterate_chain(args.seed, args.k)?;
    let set = quasigrid_core::chain_model_set(&chain, &args.radius, config)?;
    if let Some(path) = &args.chain_out {
        fs::write(path, chain_to_string(&chain))?;
    }
    emit(&args.output, qps_to_string(&set)?.as_bytes(), stdout)
}

/// First point of the sorted symmetric difference, with the side it lies on.
fn first_difference<'a>(direct: &'a PointSet, model: &'a PointSet) -> Option<(&'a RVector, &'static str)> {
    let (mut a, mut b) = (direct.iter().peekable(), model.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => return None,
            (Some(p), None) => return Some((p, "direct")),
            (None, Some(q)) => return Some((q, "model")),
            (Some(p), Some(q)) => match p.cmp(q) {
                std::cmp::Ordering::Less => return Some((p, "direct")),
                std::cmp::Ordering::Greater => return Some((q, "model")),
                std::cmp::Ordering::Equal => {
                    a.next();
                    b.next();
                }
            },
        }
    }
}

fn verify_case(
    chain: &MapChain,
    radius: &Rational,
    corrupt: bool,
    config: &EnumerationConfig,
) -> CliResult<Result<usize, String>> {
    let direct = apply_chain_with(chain, radius, config)?;
    let mut scheme = iterated_scheme(chain.matrices())?;
    if corrupt {
        scheme = scheme.with_window(scheme.window().with_all_faces_closed())?;
    }
    let model = enumerate_model_set_with(&scheme, &RVector::zeros(chain.dim()), radius, config)?.patch;
    Ok(match first_difference(&direct, &model) {
        None => Ok(direct.len()),
        Some((p, side)) => Err(format!(
            "first difference ({}) only in the {side} pipeline",
            p.coords().iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
        )),
    })
}

fn verify(args: VerifyArgs, config: &EnumerationConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let chains = match &args.chain {
        Some(path) => vec![parse_chain(&read_text(path)?)?],
        None => {
            let mut rng = RngState::new(args.seed);
            (0..args.count)
                .map(|_| sample_rational_chain(&mut rng, args.k, args.dim, args.denom))
                .collect::<quasigrid_core::Result<Vec<_>>>()?
        }
    };
    let mut passed = 0;
    let mut first_failure = None;
    for (i, chain) in chains.iter().enumerate() {
        match verify_case(chain, &args.radius, args.corrupt_window, config)? {
            Ok(n) => {
                passed += 1;
                writeln!(stdout, "case {i}: pass ({n} points)")?;
            }
            Err(msg) => {
                writeln!(stdout, "case {i}: FAIL, {msg}")?;
                first_failure.get_or_insert(format!("case {i}: {msg}"));
            }
        }
    }
    writeln!(stdout, "{passed}/{} pass", chains.len())?;
    match first_failure {
        None => Ok(()),
        Some(msg) => Err(CliError::Mismatch(format!("verification failed, {msg}"))),
    }
}
