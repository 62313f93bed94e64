//! Front end for the `cherednik` binary.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use config::{Cli, Command, ConfigError, SessionConfig, RECOMMENDED};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Parse `args`, run the command, write its output, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn common(cli: &Cli) -> (&config::Common, bool) {
    match &cli.command {
        Command::Singular(c) | Command::Hilbert(c) => (c, false),
        Command::Sweep(c) => (c, true),
        Command::Verify(v) => (&v.common, false),
        Command::Series(s) => (&s.common, false),
    }
}

fn execute(cli: &Cli) -> Result<i32, ConfigError> {
    let (args, sweep) = common(cli);
    let cfg = SessionConfig::from_args(args, sweep)?;
    if let Some(dim) = cfg.desk_scale_excess() {
        let pairs: Vec<String> = RECOMMENDED.iter().map(|(p, n)| format!("({p},{n})")).collect();
        eprintln!(
            "warning: dim A_d = {dim} at the socle degree is beyond desk scale; this may take a long time \
             (recommended (p,n): {})",
            pairs.join(" ")
        );
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| ConfigError::Other(e.to_string()))?;
    let out = pool.install(|| match &cli.command {
        Command::Singular(_) => commands::singular(&cfg),
        Command::Hilbert(_) => commands::hilbert(&cfg),
        Command::Verify(v) => commands::verify(&cfg, v.relation_degree, v.symbolic),
        Command::Sweep(_) => commands::sweep(&cfg),
        Command::Series(s) => commands::series(&cfg, s),
    })?;
    match &cfg.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| ConfigError::Other(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(path, &out.body).map_err(|e| ConfigError::Other(format!("{}: {e}", path.display())))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.body.as_bytes());
        }
    }
    Ok(out.exit)
}
