use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtoeplitz::bergman::toeplitz_matrix;
use qtoeplitz::groups::{monomial_polyhedron_group, one_dim_characters, IntMatrix};
use qtoeplitz::poly::compose_symbol;
use qtoeplitz::quotient::{compressed_toeplitz, isotypic_basis, QuotientDescriptor};
use qtoeplitz_cli::config::{load_configs, QuadratureSpec};
use qtoeplitz_cli::formats::{describe_group, operator_to_json, parse_group, write_operator_csv, DomainSpec};
use qtoeplitz_cli::{
    emit_report, run_batch, ConfigError, Expectation, ExperimentConfig, ExperimentKind, Format, RunError,
};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "qtoeplitz", version, about = "Verify Toeplitz operator identities on quotient domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group descriptors: elements, hyperplanes, characters.
    Groups {
        #[command(subcommand)]
        action: GroupsAction,
    },
    /// Isotypic projections: idempotence, orthogonality, completeness.
    Decompose(Common),
    /// Finite sections of Toeplitz operators.
    Toeplitz {
        #[command(subcommand)]
        action: ToeplitzAction,
    },
    /// `T_u T_v = T_q` on every isotypic component and the full space.
    Transfer(Common),
    /// `T_u T_v = T_v T_u` on every isotypic component and the full space.
    Commute(Common),
    /// Operator identity versus its Berezin-transform criterion.
    LemmaPr(Common),
    /// Reproducing property, series convergence and the quotient kernel identity.
    KernelCheck(Common),
    /// Berezin transforms, fixed points of harmonic symbols, range scan.
    Berezin(Common),
    /// Smith normal form of an integer matrix.
    Snf {
        /// Row-major JSON matrix, e.g. '[[2,4],[6,8]]'.
        #[arg(long)]
        matrix: Option<String>,
        /// Also build the diagonal group of the monomial polyhedron with this exponent matrix.
        #[arg(long)]
        polyhedron: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Runs every experiment of a config file.
    Report(Common),
}

#[derive(Subcommand)]
enum GroupsAction {
    Show {
        #[arg(long, default_value = "S2")]
        group: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ToeplitzAction {
    /// Writes the matrix of `T_u` (or its compression to one isotypic component).
    Dump {
        /// Character label (`trivial`, `sign`, `chi3`, ...); the symbol is then in θ-variables.
        #[arg(long)]
        character: Option<String>,
        /// Entries with modulus at or below this are omitted from CSV output.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Polydisc,
    Ball,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Pass,
    Fail,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config with one experiment or {"experiments": [...]}; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// S2, S3, Z3, Z2xZ3, symmetric:3, diagonal:2,3.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_enum)]
    domain: Option<DomainArg>,
    /// Dimension, when no group is given.
    #[arg(long)]
    dimension: Option<usize>,
    /// Weight exponents, comma separated; one value is repeated in every coordinate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[arg(short = 'n', long)]
    truncation: Option<usize>,
    #[arg(long)]
    radial_order: Option<usize>,
    #[arg(long)]
    angular_order: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum)]
    expect: Option<ExpectArg>,
    /// NAME=JSON, e.g. u='[{"exponents":[1,0],"conj_exponents":[0,1],"re":1}]'.
    #[arg(long = "symbol", value_name = "NAME=JSON")]
    symbols: Vec<String>,
    /// JSON point, e.g. '[[0.1,0],[0.2,-0.3]]'.
    #[arg(long = "point", value_name = "JSON")]
    points: Vec<String>,
    #[arg(long)]
    name: Option<String>,
    /// json, csv or md.
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl Common {
    fn overlay(&self, cfg: &mut ExperimentConfig) -> Result<(), ConfigError> {
        if let Some(g) = &self.group {
            cfg.group = Some(parse_group(g)?);
        }
        if let Some(d) = self.domain {
            cfg.domain = match d {
                DomainArg::Polydisc => DomainSpec::Polydisc,
                DomainArg::Ball => DomainSpec::Ball,
            };
        }
        if let Some(d) = self.dimension {
            cfg.dimension = Some(d);
        }
        if let Some(a) = &self.alpha {
            cfg.alpha = Some(a.clone());
        }
        if let Some(n) = self.truncation {
            cfg.truncation = Some(n);
        }
        if self.radial_order.is_some() || self.angular_order.is_some() {
            let base = cfg.quadrature.unwrap_or(QuadratureSpec { radial: 64, angular: 128 });
            cfg.quadrature = Some(QuadratureSpec {
                radial: self.radial_order.unwrap_or(base.radial),
                angular: self.angular_order.unwrap_or(base.angular),
            });
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance = Some(t);
        }
        if let Some(e) = self.expect {
            cfg.expect = match e {
                ExpectArg::Pass => Expectation::Pass,
                ExpectArg::Fail => Expectation::Fail,
            };
        }
        for s in &self.symbols {
            let (name, json) =
                s.split_once('=').ok_or_else(|| ConfigError::new(format!("--symbol expects NAME=JSON, got '{s}'")))?;
            let terms = serde_json::from_str(json)
                .map_err(|e| ConfigError::new(format!("--symbol {name}: {e}")))?;
            cfg.symbols.insert(name.trim().to_string(), terms);
        }
        if !self.points.is_empty() {
            cfg.points = self
                .points
                .iter()
                .map(|p| serde_json::from_str(p).map_err(|e| ConfigError::new(format!("--point: {e}"))))
                .collect::<Result<_, _>>()?;
        }
        if let Some(n) = &self.name {
            cfg.name = Some(n.clone());
        }
        Ok(())
    }

    /// The configs for a single-kind command: from the file (kinds must
    /// match) or a fresh one, with the flags applied on top.
    fn configs(&self, kind: Option<ExperimentKind>) -> Result<Vec<ExperimentConfig>, ConfigError> {
        let mut cfgs = match (&self.config, kind) {
            (Some(path), _) => load_configs(path)?,
            (None, Some(k)) => vec![ExperimentConfig::new(k)],
            (None, None) => return Err(ConfigError::new("report needs --config")),
        };
        for c in &mut cfgs {
            if let Some(k) = kind {
                if c.kind != k {
                    return Err(ConfigError::new(format!(
                        "config experiment '{}' has kind {}, expected {}",
                        c.label(),
                        c.kind.name(),
                        k.name()
                    )));
                }
            }
            self.overlay(c)?;
        }
        Ok(cfgs)
    }
}

enum Failure {
    Config(String),
    Checks,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<qtoeplitz::Error> for Failure {
    fn from(e: qtoeplitz::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn run_kind(common: &Common, kind: Option<ExperimentKind>) -> Result<(), Failure> {
    let cfgs = common.configs(kind)?;
    let batch = run_batch(&cfgs)?;
    let output = common.output.clone().or_else(|| cfgs.first().and_then(|c| c.output.clone()));
    emit_report(&batch, common.format, output.as_deref())?;
    if batch.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn write_text(text: &str, path: Option<&std::path::Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn toeplitz_dump(character: Option<&str>, threshold: f64, common: &Common) -> Result<(), Failure> {
    let mut cfg = match &common.config {
        Some(p) => load_configs(p)?.into_iter().next().ok_or_else(|| ConfigError::new("empty config"))?,
        None => ExperimentConfig::new(ExperimentKind::Intertwining),
    };
    common.overlay(&mut cfg)?;
    cfg.validate()?;
    let u = match cfg.symbol("u")? {
        Some(u) => u,
        None if cfg.symbols.len() == 1 => cfg.require_symbol(cfg.symbols.keys().next().expect("one symbol"))?,
        None => return Err(ConfigError::new("toeplitz dump needs --symbol u=JSON").into()),
    };
    let w = cfg.weight()?;
    let n = cfg.truncation();
    let op = match character {
        None => toeplitz_matrix(&u, &w, n)?,
        Some(label) => {
            let g = cfg.group()?;
            let chi = one_dim_characters(&g)?
                .into_iter()
                .find(|c| c.label().to_string() == label)
                .ok_or_else(|| ConfigError::new(format!("no one-dimensional character '{label}'")))?;
            let q = QuotientDescriptor::new(&g, &chi, &w)?;
            let basis = isotypic_basis(&q, n)?;
            compressed_toeplitz(&q, &compose_symbol(&u, q.theta()), &basis)?
        }
    };
    let text = match common.format {
        Format::Csv | Format::Markdown => {
            let mut buf = Vec::new();
            write_operator_csv(&op, &mut buf, threshold).map_err(|e| Failure::Config(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => serde_json::to_string_pretty(&operator_to_json(&op)).expect("operators serialize") + "\n",
    };
    write_text(&text, common.output.as_deref())
}

fn snf(matrix: Option<&str>, polyhedron: bool, common: &Common) -> Result<(), Failure> {
    let mut cfgs = common.configs(Some(ExperimentKind::Snf)).or_else(|e| match &common.config {
        Some(_) => Err(e),
        None => Ok(vec![ExperimentConfig::new(ExperimentKind::Snf)]),
    })?;
    if let Some(m) = matrix {
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(m).map_err(|e| ConfigError::new(format!("--matrix: {e}")))?;
        for c in &mut cfgs {
            c.matrix = Some(rows.clone());
        }
    }
    if polyhedron {
        for c in &cfgs {
            let rows = c.matrix.as_ref().ok_or_else(|| ConfigError::new("snf: 'matrix' is required"))?;
            let b = IntMatrix::from_rows(rows)?;
            let (g, deltas) = monomial_polyhedron_group(&b)?;
            eprintln!("monomial polyhedron group: orders {deltas:?}, |G| = {}", g.order());
        }
    }
    let batch = run_batch(&cfgs)?;
    emit_report(&batch, common.format, common.output.as_deref())?;
    if batch.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Groups { action: GroupsAction::Show { group, output } } => {
            let g = parse_group(&group)?.build()?;
            let text = serde_json::to_string_pretty(&describe_group(&g)).expect("descriptors serialize") + "\n";
            write_text(&text, output.as_deref())
        }
        Command::Decompose(c) => run_kind(&c, Some(ExperimentKind::Decompose)),
        Command::Toeplitz { action: ToeplitzAction::Dump { character, threshold, common } } => {
            toeplitz_dump(character.as_deref(), threshold, &common)
        }
        Command::Transfer(c) => run_kind(&c, Some(ExperimentKind::TransferProduct)),
        Command::Commute(c) => run_kind(&c, Some(ExperimentKind::TransferCommute)),
        Command::LemmaPr(c) => run_kind(&c, Some(ExperimentKind::LemmaPr)),
        Command::KernelCheck(c) => run_kind(&c, Some(ExperimentKind::KernelCheck)),
        Command::Berezin(c) => run_kind(&c, Some(ExperimentKind::Berezin)),
        Command::Snf { matrix, polyhedron, common } => snf(matrix.as_deref(), polyhedron, &common),
        Command::Report(c) => run_kind(&c, None),
    }
}

/// Applies `QB_THREADS` to the global thread pool.
fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("QB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("QB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| dispatch(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
