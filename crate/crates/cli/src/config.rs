//! Command-line arguments and the validated session configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use cherednik_core::coeff::{CoeffError, ExtElem, ExtField, Field};
use cherednik_core::poly::graded_dimension;
use cherednik_core::session::{Session, SessionError};

/// Largest `dim A_d` at the socle degree that still counts as desk scale.
pub const DESK_SCALE_LIMIT: usize = 1500;

/// Pairs that finish in seconds to minutes.
pub const RECOMMENDED: [(u32, usize); 6] = [(2, 2), (2, 4), (2, 6), (3, 3), (3, 6), (5, 5)];

/// Smallest field order used for `--c random`.
pub const RANDOM_MIN_ORDER: u64 = 64;

#[derive(Debug, Parser)]
#[command(name = "cherednik", version)]
#[command(about = "Singular vectors of the rational Cherednik algebra of type A_{n-1} in characteristic p | n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build f_1..f_{n-1} and check that every Dunkl operator kills them
    Singular(Common),
    /// Hilbert series of A / I_c against ((1 - t^p) / (1 - t))^(n-1)
    Hilbert(Common),
    /// Full suite: lemmas, relations, singularity, independence, Hilbert series, I_c = J_c
    Verify(VerifyArgs),
    /// Independence and Hilbert series at each listed value of c (observational)
    Sweep(Common),
    /// Dump a truncated generating series, one line per power of z
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: usize,
    /// symbolic, an integer, `a0:a1:...` for a0 + a1 a + ... in F_{p^k}, random;
    /// for sweep, all-Fp or a comma-separated list
    #[arg(long, default_value = "symbolic", allow_hyphen_values = true)]
    pub c: String,
    /// Degree k of the extension F_{p^k} used for specialized c
    #[arg(long)]
    pub ext_degree: Option<u32>,
    /// Monic modulus for F_{p^k}, coefficients from the constant term up
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Largest degree of the graded computations
    #[arg(long)]
    pub d_max: Option<u32>,
    #[arg(long, env = "CHEREDNIK_THREADS")]
    pub threads: Option<usize>,
    /// Seed for every random choice; echoed into reports
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file, relative to $CHEREDNIK_OUT_DIR when that is set
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit wall times, so reports are reproducible byte for byte
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest monomial degree for the relation checks
    #[arg(long, default_value_t = 4)]
    pub relation_degree: u32,
    /// Compare I_c and J_c with Gram matrices over F_p(c) instead of at random points
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// F(z) = sum_m binom(c, m) (g(z) - 1)^m
    F,
    /// F_i(z) = F(z) / (1 - x_i z)
    Fi,
    /// g(z)
    G,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = SeriesKind::F)]
    pub which: SeriesKind,
    /// 1-based index i for `--which fi`
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    /// Truncation order; defaults to p
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("invalid --c value {0:?}")]
    BadC(String),
    #[error("--c {0} is not available for this command")]
    Unsupported(String),
    #[error("--ext-degree {k} disagrees with a modulus of degree {m}")]
    ModulusDegree { k: u32, m: usize },
    #[error("d_max = {d_max} is below (p-1)(n-1)+1 = {needed}")]
    DMax { d_max: u32, needed: u32 },
    #[error("--threads must be positive")]
    Threads,
    #[error("{0}")]
    Other(String),
}

/// The value of `c` requested on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CMode {
    Symbolic,
    /// Coefficients of an element of `F_{p^k}`, constant term first.
    Value(Vec<i64>),
    Random,
    AllFp,
    /// An explicit list for `sweep`.
    List(Vec<Vec<i64>>),
}

fn parse_element(s: &str) -> Option<Vec<i64>> {
    s.split(':').map(|t| t.trim().parse::<i64>().ok()).collect()
}

impl CMode {
    pub fn parse(s: &str, sweep: bool) -> Result<Self, ConfigError> {
        let t = s.trim();
        match t {
            "symbolic" => Ok(Self::Symbolic),
            "random" => Ok(Self::Random),
            "all-Fp" => Ok(Self::AllFp),
            _ if sweep => {
                if t.is_empty() {
                    return Ok(Self::List(Vec::new()));
                }
                t.split(',')
                    .map(|v| parse_element(v).ok_or_else(|| ConfigError::BadC(s.into())))
                    .collect::<Result<_, _>>()
                    .map(Self::List)
            }
            _ => parse_element(t).map(Self::Value).ok_or_else(|| ConfigError::BadC(s.into())),
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub session: Session,
    pub c: CMode,
    pub ext: ExtField,
    pub d_max: u32,
    pub threads: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl SessionConfig {
    pub fn from_args(args: &Common, sweep: bool) -> Result<Self, ConfigError> {
        let session = Session::new(args.p, args.n)?;
        let c = CMode::parse(&args.c, sweep)?;
        if args.threads == Some(0) {
            return Err(ConfigError::Threads);
        }
        let ext = build_field(args, &c)?;
        let out = args.out.as_ref().map(|path| match std::env::var_os("CHEREDNIK_OUT_DIR") {
            Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
            _ => path.clone(),
        });
        Ok(Self {
            session,
            c,
            ext,
            d_max: args.d_max.unwrap_or_else(|| session.default_d_max()),
            threads: args.threads,
            seed: args.seed,
            format: args.format,
            out,
            timing: !args.no_timing,
        })
    }

    /// Graded commands need to see one degree past the socle.
    pub fn require_d_max(&self) -> Result<(), ConfigError> {
        let needed = self.session.socle_degree() + 1;
        if self.d_max < needed {
            return Err(ConfigError::DMax {
                d_max: self.d_max,
                needed,
            });
        }
        Ok(())
    }

    /// The element `c0` for a single specialized value, drawing from the seed
    /// for `random`.
    pub fn point(&self) -> Result<Option<ExtElem>, ConfigError> {
        match &self.c {
            CMode::Symbolic => Ok(None),
            CMode::Value(v) => Ok(Some(self.element(v)?)),
            CMode::Random => Ok(Some(self.random_points(1)[0])),
            other => Err(ConfigError::Unsupported(format!("{other:?}"))),
        }
    }

    pub fn element(&self, coeffs: &[i64]) -> Result<ExtElem, ConfigError> {
        let p = self.session.p() as i64;
        let digits: Vec<u32> = coeffs.iter().map(|x| x.rem_euclid(p) as u32).collect();
        Ok(self.ext.from_coeffs(&digits)?)
    }

    /// `count` points drawn from the seed; the same seed gives the same points.
    pub fn random_points(&self, count: usize) -> Vec<ExtElem> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count).map(|_| self.ext.random(&mut rng)).collect()
    }

    /// Human-readable description of the coefficient field of a specialized run.
    pub fn field_name(&self) -> String {
        let p = self.session.p();
        if self.ext.degree() == 1 {
            return format!("F_{p}");
        }
        let terms: Vec<String> = self
            .ext
            .modulus()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| {
                let coeff = if x == 1 && i > 0 { String::new() } else { x.to_string() };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}a"),
                    _ => format!("{coeff}a^{i}"),
                }
            })
            .collect();
        format!("F_{p}[a]/({})", terms.join(" + "))
    }

    /// `dim A_d` at the socle degree, if it is beyond desk scale.
    pub fn desk_scale_excess(&self) -> Option<usize> {
        let dim = graded_dimension(self.session.n(), self.session.socle_degree());
        (dim > DESK_SCALE_LIMIT).then_some(dim)
    }

    pub fn format_elem(&self, e: &ExtElem) -> String {
        self.ext.format(e)
    }
}

fn build_field(args: &Common, c: &CMode) -> Result<ExtField, ConfigError> {
    let p = args.p;
    if let Some(m) = &args.modulus {
        if let Some(k) = args.ext_degree {
            if m.len() != k as usize + 1 {
                return Err(ConfigError::ModulusDegree { k, m: m.len().saturating_sub(1) });
            }
        }
        return Ok(ExtField::with_modulus(p, m)?);
    }
    if let Some(k) = args.ext_degree {
        return Ok(ExtField::new(p, k)?);
    }
    match c {
        // symbolic runs draw their comparison points from here too
        CMode::Random | CMode::Symbolic => Ok(ExtField::with_min_order(p, RANDOM_MIN_ORDER)?),
        CMode::Value(v) if v.len() > 1 => Ok(ExtField::new(p, v.len() as u32)?),
        _ => Ok(ExtField::new(p, 1)?),
    }
}
