use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chanint::{coherence, interferometer, DensityMatrix, KrausChannel};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::channel_file::{parse_channel, parse_state, read_text, ChannelFile, FileError};
use crate::output::{write_pattern_csv, InputDigest, Metric, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "chanint",
    version,
    about = "Interference properties of quantum channels"
)]
struct Cli {
    /// Print the report as JSON instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq)]
enum RhoSpec {
    Mixed,
    Pure(PathBuf),
}

impl FromStr for RhoSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mixed" => Ok(RhoSpec::Mixed),
            _ => match s.strip_prefix("pure:") {
                Some(p) if !p.is_empty() => Ok(RhoSpec::Pure(PathBuf::from(p))),
                _ => Err("expected `mixed` or `pure:FILE`".into()),
            },
        }
    }
}

fn parse_samples(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 3 => Ok(n),
        Ok(n) => Err(format!("need at least 3 samples, got {n}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
struct Pair {
    /// Channel in the upper arm.
    #[arg(long, value_name = "CH")]
    u: PathBuf,
    /// Channel in the lower arm.
    #[arg(long, value_name = "CH")]
    v: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the output probability P0 over a uniform phase grid.
    Pattern {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "mixed", value_name = "mixed|pure:FILE")]
        rho: RhoSpec,
        #[arg(long, default_value_t = interferometer::DEFAULT_SAMPLES, value_parser = parse_samples)]
        samples: usize,
        /// Simulate the full dilated interferometer instead of the closed form.
        #[arg(long)]
        oracle: bool,
        /// CSV destination; `-` writes the CSV to standard output and skips the report.
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
    },
    /// Visibility and fringe shift of the interferometer.
    Visibility {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value = "mixed", value_name = "mixed|pure:FILE")]
        rho: RhoSpec,
    },
    /// Self-visibility of a decomposition, optionally maximized.
    #[command(name = "self")]
    SelfVisibility {
        #[arg(long, value_name = "CH")]
        ch: PathBuf,
        /// Also compute the maximum over all decompositions.
        #[arg(long)]
        maximize: bool,
        /// Where to write the maximizing decomposition.
        #[arg(
            long,
            value_name = "CH_OUT",
            requires = "maximize",
            required_if_eq("maximize", "true")
        )]
        out: Option<PathBuf>,
    },
    /// Closest unitary to the first Kraus operator.
    ClosestUnitary {
        #[arg(long, value_name = "CH")]
        ch: PathBuf,
        /// Maximize self-coherence first, then take the closest unitary.
        #[arg(long)]
        after_maximize: bool,
        #[arg(long, value_name = "CH_OUT")]
        out: PathBuf,
    },
    /// Maximum coherent fidelity between two channels.
    MaxFidelity {
        #[command(flatten)]
        pair: Pair,
    },
    /// Fidelity of the two Choi states.
    Raginsky {
        #[command(flatten)]
        pair: Pair,
    },
    /// Squared distance between two unitary channels.
    Distance {
        #[command(flatten)]
        pair: Pair,
    },
    /// Deterministic random channel.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        kraus: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "CH_OUT")]
        out: PathBuf,
    },
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<chanint::Error> for Failure {
    fn from(e: chanint::Error) -> Self {
        use chanint::Error as E;
        match e {
            E::NotPsd { .. } | E::NonFinite | E::NonUniformGrid { .. } => {
                Failure::Numeric(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn write_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Numeric(format!("cannot write {}: {e}", path.display()))
}

struct Session {
    report: RunReport,
}

impl Session {
    fn load(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, Failure> {
        let bytes = read_text(path)?;
        self.report.inputs.push(InputDigest {
            role: role.to_string(),
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
        });
        Ok(bytes)
    }

    fn channel(&mut self, role: &str, path: &Path) -> Result<KrausChannel, Failure> {
        let bytes = self.load(role, path)?;
        let text = utf8(&bytes, path)?;
        parse_channel(text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
    }

    fn pair(&mut self, pair: &Pair) -> Result<(KrausChannel, KrausChannel), Failure> {
        Ok((self.channel("u", &pair.u)?, self.channel("v", &pair.v)?))
    }

    fn state(&mut self, spec: &RhoSpec, dim: usize) -> Result<DensityMatrix, Failure> {
        match spec {
            RhoSpec::Mixed => Ok(DensityMatrix::maximally_mixed(dim)),
            RhoSpec::Pure(path) => {
                let bytes = self.load("rho", path)?;
                let text = utf8(&bytes, path)?;
                parse_state(text)
                    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
            }
        }
    }

    fn write_channel(&mut self, ch: &KrausChannel, name: &str, path: &Path) -> Result<(), Failure> {
        let text = ChannelFile::from_channel(ch, Some(name.to_string())).to_json();
        std::fs::write(path, text).map_err(|e| write_failure(path, e))?;
        self.report.outputs.push(path.display().to_string());
        Ok(())
    }

    fn metric(&mut self, key: &str, value: Metric) {
        self.report.metric(key, value);
    }
}

fn utf8<'a>(bytes: &'a [u8], path: &Path) -> Result<&'a str, Failure> {
    std::str::from_utf8(bytes)
        .map_err(|e| Failure::Validation(format!("{}: not UTF-8: {e}", path.display())))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn complex_vector(v: &[chanint::Complex]) -> Metric {
    Metric::Vector(v.iter().map(|z| (z.re, z.im)).collect())
}

/// Runs one command. Data goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut session = Session {
        report: RunReport::new(echo),
    };
    match execute(&cli.command, &mut session, stdout) {
        Ok(false) => EXIT_OK,
        Ok(true) => {
            let text = if cli.json {
                session.report.to_json()
            } else {
                session.report.to_text()
            };
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write report: {e}");
                    EXIT_NUMERIC
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

/// Returns whether the report should be printed.
fn execute(cmd: &Command, s: &mut Session, stdout: &mut dyn Write) -> Result<bool, Failure> {
    match cmd {
        Command::Pattern {
            pair,
            rho,
            samples,
            oracle,
            out,
        } => {
            let (u, v) = s.pair(pair)?;
            let rho = s.state(rho, u.dim())?;
            let pattern = if *oracle {
                interferometer::simulate_pattern_dilated(&u.dilate(), &v.dilate(), &rho, *samples)?
            } else {
                interferometer::simulate_pattern(&u, &v, &rho, *samples)?
            };
            let fringe = interferometer::extract_visibility(&pattern)?;
            if out.as_os_str() == "-" {
                write_pattern_csv(&pattern, &mut *stdout)
                    .map_err(|e| Failure::Numeric(format!("cannot write CSV: {e}")))?;
                return Ok(false);
            }
            let file = std::fs::File::create(out).map_err(|e| write_failure(out, e))?;
            write_pattern_csv(&pattern, std::io::BufWriter::new(file))
                .map_err(|e| write_failure(out, e))?;
            s.report.outputs.push(out.display().to_string());
            s.metric("samples", Metric::Count(*samples));
            s.metric("oracle", Metric::Flag(*oracle));
            s.metric("v", Metric::Real(fringe.v));
            s.metric("alpha", Metric::Real(fringe.alpha));
            s.metric("degenerate", Metric::Flag(fringe.degenerate));
        }
        Command::Visibility { pair, rho } => {
            let (u, v) = s.pair(pair)?;
            let rho = s.state(rho, u.dim())?;
            let z = interferometer::complex_visibility(&u, &v, &rho)?;
            let fringe = chanint::VisibilityEstimate::from_complex(z);
            s.metric("v", Metric::Real(fringe.v));
            s.metric("alpha", Metric::Real(fringe.alpha));
            s.metric("degenerate", Metric::Flag(fringe.degenerate));
        }
        Command::SelfVisibility { ch, maximize, out } => {
            let channel = s.channel("ch", ch)?;
            s.metric(
                "self_visibility",
                Metric::Real(coherence::self_visibility(&channel)),
            );
            if *maximize {
                let best = coherence::max_self_coherence(&channel);
                s.metric("v_max", Metric::Real(best.v_max));
                if let Some(out) = out {
                    s.write_channel(&best.realizing, "maximal self-coherence", out)?;
                }
            }
        }
        Command::ClosestUnitary {
            ch,
            after_maximize,
            out,
        } => {
            let mut channel = s.channel("ch", ch)?;
            if *after_maximize {
                let best = coherence::max_self_coherence(&channel);
                s.metric("v_max", Metric::Real(best.v_max));
                channel = best.realizing;
            }
            let closest = coherence::closest_unitary(&channel);
            let unitary = KrausChannel::unitary(closest.unitary)
                .map_err(|e| Failure::Numeric(format!("closest unitary failed validation: {e}")))?;
            s.write_channel(&unitary, "closest unitary", out)?;
            s.metric("v_closest_unitary", Metric::Real(closest.visibility));
            s.metric("degenerate", Metric::Flag(closest.degenerate));
        }
        Command::MaxFidelity { pair } => {
            let (u, v) = s.pair(pair)?;
            let best = coherence::max_coherent_fidelity(&u, &v)?;
            s.metric("max_fidelity", Metric::Real(best.max_fidelity));
            s.metric("achieved", Metric::Real(best.achieved));
            s.metric("g0", complex_vector(&best.g0));
            s.metric("h0", complex_vector(&best.h0));
            s.metric("degenerate", Metric::Flag(best.degenerate));
        }
        Command::Raginsky { pair } => {
            let (u, v) = s.pair(pair)?;
            s.metric(
                "raginsky_fidelity",
                Metric::Real(coherence::raginsky_fidelity(&u, &v)?),
            );
        }
        Command::Distance { pair } => {
            let (u, v) = s.pair(pair)?;
            for (role, ch) in [("u", &u), ("v", &v)] {
                if ch.len() != 1 {
                    return Err(Failure::Validation(format!(
                        "--{role} has {} Kraus operators; distance needs unitary channels",
                        ch.len()
                    )));
                }
            }
            let d2 = interferometer::unitary_distance(u.first(), v.first())?;
            s.metric("distance_squared", Metric::Real(d2));
        }
        Command::Random {
            dim,
            kraus,
            seed,
            out,
        } => {
            let channel = KrausChannel::random(*dim, *kraus, *seed)?;
            s.write_channel(
                &channel,
                &format!("random d={dim} k={kraus} seed={seed}"),
                out,
            )?;
            s.metric("dim", Metric::Count(*dim));
            s.metric("kraus", Metric::Count(*kraus));
            s.metric("seed", Metric::Text(seed.to_string()));
        }
    }
    Ok(true)
}
