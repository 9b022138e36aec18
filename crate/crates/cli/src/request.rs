use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    GradedBranches,
    Hypersurface,
    SemigroupFnilpotent,
    SemigroupFte,
    SemigroupTightMembership,
}

impl Mode {
    pub fn command(self) -> &'static str {
        match self {
            Mode::GradedBranches => "branches",
            Mode::Hypersurface => "hypersurface",
            Mode::SemigroupFnilpotent => "fnilpotent",
            Mode::SemigroupFte => "fte",
            Mode::SemigroupTightMembership => "tight-member",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.command())
    }
}

#[derive(Debug, Parser)]
#[command(name = "fclosure", version, about = "Branch counts of graded curves and F-nilpotence of semigroup rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Read the request from a file holding one command line
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format (overrides the one in the config file)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric branches of k[x_1..x_n]/(relations) via the closure formula
    Branches(Flags),
    /// Branches of a plane curve f(x,y) = 0, against the root-count oracle
    Hypersurface(Flags),
    /// F-nilpotence of k[A] via pure inseparability of the normalization
    Fnilpotent(Flags),
    /// Frobenius test exponent of a monomial ideal of a numerical semigroup ring
    Fte(Flags),
    /// Tight closure membership of a monomial in a monomial ideal of k[A]
    TightMember(Flags),
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Characteristic
    #[arg(long)]
    pub p: Option<u64>,
    /// Base field GF(p^s)
    #[arg(long = "ext-s", default_value_t = 1)]
    pub ext_s: usize,
    /// Comma-separated variable names
    #[arg(long)]
    pub vars: Option<String>,
    /// Homogeneous relation (repeatable)
    #[arg(long = "rel")]
    pub rel: Vec<String>,
    /// Semigroup generators, e.g. "3: 2,0,0; 1,1,0" or "2,3"
    #[arg(long)]
    pub gens: Option<String>,
    /// Monomial ideal as exponent vectors separated by ';'
    #[arg(long)]
    pub ideal: Option<String>,
    /// Exponent vector of the element to test
    #[arg(long)]
    pub element: Option<String>,
    /// Largest Frobenius exponent tried (probe default 3, semigroups 12)
    #[arg(long = "e-max")]
    pub e_max: Option<u32>,
    /// Largest extension degree searched for a linear reduction
    #[arg(long = "s-max", default_value_t = fclosure_core::graded::DEFAULT_S_MAX)]
    pub s_max: usize,
    /// Largest degree p^e·n the closure probe may reach
    #[arg(long = "degree-cap", default_value_t = fclosure_core::graded::DEFAULT_DEGREE_CAP)]
    pub degree_cap: u64,
    /// Scale of the enumeration box for saturation points
    #[arg(long = "box-factor")]
    pub box_factor: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Sample a random squarefree form instead of reading --rel
    #[arg(long)]
    pub seed: Option<u64>,
    /// Degree of the sampled form
    #[arg(long)]
    pub degree: Option<u32>,
}

/// A validated request; serialized verbatim into the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRequest {
    pub mode: Mode,
    pub p: u64,
    pub ext_s: usize,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub generators: Option<String>,
    pub ideal: Option<String>,
    pub element: Option<String>,
    pub e_max: Option<u32>,
    pub s_max: usize,
    pub degree_cap: u64,
    pub box_factor: Option<i64>,
    pub seed: Option<u64>,
    pub degree: Option<u32>,
    pub format: Format,
}

impl AnalysisRequest {
    fn from_flags(mode: Mode, f: Flags) -> Result<Self, CliError> {
        let p = f.p.ok_or(CliError::Missing { flag: "p", mode })?;
        let vars = match f.vars {
            Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
            None if mode == Mode::Hypersurface => vec!["x".to_string(), "y".to_string()],
            None => Vec::new(),
        };
        Ok(AnalysisRequest {
            mode,
            p,
            ext_s: f.ext_s,
            vars,
            relations: f.rel,
            generators: f.gens,
            ideal: f.ideal,
            element: f.element,
            e_max: f.e_max,
            s_max: f.s_max,
            degree_cap: f.degree_cap,
            box_factor: f.box_factor,
            seed: f.seed,
            degree: f.degree,
            format: f.format,
        })
    }

    /// Mode-specific presence checks; content is checked by `prepare`.
    fn check_fields(&self) -> Result<(), CliError> {
        let missing = |flag| Err(CliError::Missing { flag, mode: self.mode });
        match self.mode {
            Mode::GradedBranches => {
                if self.vars.is_empty() {
                    return missing("vars");
                }
            }
            Mode::Hypersurface => {
                if self.relations.is_empty() && self.seed.is_none() {
                    return missing("rel");
                }
                if self.relations.is_empty() && self.degree.is_none() {
                    return missing("degree");
                }
                if self.relations.len() > 1 {
                    return Err(CliError::Invalid("hypersurface takes exactly one --rel".into()));
                }
                if self.vars.len() != 2 {
                    return Err(CliError::Invalid("hypersurface needs exactly two variables".into()));
                }
            }
            Mode::SemigroupFnilpotent => {
                if self.generators.is_none() {
                    return missing("gens");
                }
            }
            Mode::SemigroupFte => {
                if self.generators.is_none() {
                    return missing("gens");
                }
                if self.ideal.is_none() {
                    return missing("ideal");
                }
            }
            Mode::SemigroupTightMembership => {
                if self.generators.is_none() {
                    return missing("gens");
                }
                if self.ideal.is_none() {
                    return missing("ideal");
                }
                if self.element.is_none() {
                    return missing("element");
                }
            }
        }
        Ok(())
    }
}

fn usage(e: clap::Error) -> CliError {
    use clap::error::ErrorKind;
    let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
    CliError::Usage { text: e.render().to_string(), informational }
}

const COMMANDS: [&str; 5] = ["branches", "hypersurface", "fnilpotent", "fte", "tight-member"];

fn from_cli(cli: Cli) -> Result<AnalysisRequest, CliError> {
    let mut req = match (cli.command, cli.config) {
        (Some(_), Some(_)) => return Err(CliError::Invalid("give either a subcommand or --config, not both".into())),
        (None, None) => return Err(CliError::Invalid("no subcommand given (try --help)".into())),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
            parse_config(&text)?
        }
        (Some(cmd), None) => {
            let (mode, flags) = match cmd {
                Command::Branches(f) => (Mode::GradedBranches, f),
                Command::Hypersurface(f) => (Mode::Hypersurface, f),
                Command::Fnilpotent(f) => (Mode::SemigroupFnilpotent, f),
                Command::Fte(f) => (Mode::SemigroupFte, f),
                Command::TightMember(f) => (Mode::SemigroupTightMembership, f),
            };
            AnalysisRequest::from_flags(mode, flags)?
        }
    };
    if let Some(format) = cli.format {
        req.format = format;
    }
    req.check_fields()?;
    crate::run::prepare(&req)?;
    Ok(req)
}

/// Parses and validates a full argument vector (program name first).
pub fn parse_request<I, T>(argv: I) -> Result<AnalysisRequest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(usage)?;
    from_cli(cli)
}

/// One request written as a command line, possibly over several lines;
/// `#` starts a comment.
pub fn parse_config(text: &str) -> Result<AnalysisRequest, CliError> {
    let body: String = text
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join(" ");
    let words = shlex::split(&body).ok_or(CliError::Parse {
        field: "config".into(),
        position: body.len(),
        expected: "closing quote".into(),
    })?;
    let Some(first) = words.first() else {
        return Err(CliError::Invalid("config file holds no request".into()));
    };
    if !COMMANDS.contains(&first.as_str()) {
        return Err(CliError::UnsupportedMode(first.clone()));
    }
    let cli = Cli::try_parse_from(std::iter::once("fclosure".to_string()).chain(words))
        .map_err(usage)?;
    if cli.config.is_some() {
        return Err(CliError::Invalid("--config cannot appear inside a config file".into()));
    }
    from_cli(cli)
}
