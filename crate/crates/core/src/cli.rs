//! Command-line surface: argument parsing, run configuration, figure presets
//! and the CSV format.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{coherent_inversion_baseline, compare_series};
use crate::dynamics::{inversion_series, map_grid, JcmConfig};
use crate::error::{Error, Result};
use crate::squeezing::{q_series, reference_bs_mean, w_series, Squeezer};
use crate::states::{
    coherent_amplitudes, sbs_amplitudes, Epsilon, FieldStateSpec, FockAmplitudes, Parity,
};

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_STEPS: usize = 4000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bsjcm",
    version,
    about = "Multiphoton Jaynes-Cummings dynamics and squeezing for binomial field states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Sbs,
    Oebs,
    Coherent,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Initial field family.
    #[arg(long, value_enum, default_value = "sbs")]
    pub state: Family,
    /// Binomial size parameter M.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Binomial probability amplitude eta.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Superposition token: 0, 1, -1 or i.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub epsilon: String,
    /// Coherent amplitude (coherent family only).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Parity projection of the coherent state: none, even, odd.
    #[arg(long, default_value = "none")]
    pub parity: String,
    /// Fock cutoff for coherent states (default: tail mass below 1e-14).
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Maximum scaled time.
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    pub tmax: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for grid evaluation (1 = sequential).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Factor {
    F,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Against {
    Coherent,
    RescaledW,
    RescaledQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution P(m) of the initial field.
    Pnd {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Atomic inversion <sigma_z(T)>.
    Inversion {
        #[command(flatten)]
        state: StateArgs,
        /// Transition parameter.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Nth-order squeezing factor F_N or S_N.
    Squeezing {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Squeezing order.
        #[arg(long = "N", default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value = "f")]
        factor: Factor,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rescaled factor W_N of the orthogonal-even state (k = 1).
    RescaledW {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long = "N", default_value_t = 1)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rescaled factor Q_N of the three-photon model.
    RescaledQ {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long = "N", default_value_t = 1)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the k = 1 inversion with a reference series.
    Compare {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum)]
        against: Against,
        #[arg(long = "N", default_value_t = 1)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write every curve of a figure preset, one CSV per curve.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Directory receiving the CSV files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    Pnd,
    Inversion,
    Squeezing { order: usize, factor: Factor },
    RescaledW { order: usize },
    RescaledQ { order: usize },
    Compare { against: Against, order: usize },
}

/// A fully validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub state: FieldStateSpec,
    /// Coherent cutoff override.
    pub cutoff: Option<usize>,
    pub jcm: JcmConfig,
    pub observable: Observable,
    pub output: Option<PathBuf>,
    pub threads: usize,
}

impl StateArgs {
    pub fn to_spec(&self) -> Result<FieldStateSpec> {
        let eps = self.epsilon.parse::<Epsilon>()?;
        let need_m = || {
            self.m
                .ok_or_else(|| Error::invalid("M", "required for binomial states"))
        };
        let need_eta = || {
            self.eta
                .ok_or_else(|| Error::invalid("eta", "required for binomial states"))
        };
        let spec = match self.state {
            Family::Sbs => FieldStateSpec::Sbs {
                m: need_m()?,
                eta: need_eta()?,
                epsilon: eps,
            },
            Family::Oebs => FieldStateSpec::OrthogonalEvenBs {
                m: need_m()?,
                eta: need_eta()?,
            },
            Family::Coherent => FieldStateSpec::Coherent {
                alpha: self
                    .alpha
                    .ok_or_else(|| Error::invalid("alpha", "required for coherent states"))?,
                parity: self.parity.parse()?,
            },
        };
        Ok(spec)
    }
}

fn grid_config(k: usize, grid: &GridArgs) -> Result<JcmConfig> {
    JcmConfig::new(k, grid.tmax, grid.steps)
}

fn check_threads(threads: usize) -> Result<usize> {
    if threads == 0 {
        Err(Error::invalid("threads", "must be >= 1"))
    } else {
        Ok(threads)
    }
}

fn check_order(order: usize) -> Result<usize> {
    if order == 0 {
        Err(Error::invalid("N", "must be >= 1"))
    } else {
        Ok(order)
    }
}

impl RunConfig {
    /// Validates a single-series subcommand. `Reproduce` is expanded with
    /// [`figure_presets`] instead.
    pub fn from_command(cmd: &Command) -> Result<RunConfig> {
        let build = |state: &StateArgs,
                     k: usize,
                     grid: Option<&GridArgs>,
                     observable: Observable,
                     out: &OutputArgs|
         -> Result<RunConfig> {
            let jcm = match grid {
                Some(g) => grid_config(k, g)?,
                None => JcmConfig::new(k, DEFAULT_T_MAX, DEFAULT_STEPS)?,
            };
            Ok(RunConfig {
                state: state.to_spec()?,
                cutoff: state.cutoff,
                jcm,
                observable,
                output: out.output.clone(),
                threads: check_threads(out.threads)?,
            })
        };
        let cfg = match cmd {
            Command::Pnd { state, out } => build(state, 1, None, Observable::Pnd, out)?,
            Command::Inversion {
                state,
                k,
                grid,
                out,
            } => build(state, *k, Some(grid), Observable::Inversion, out)?,
            Command::Squeezing {
                state,
                k,
                order,
                factor,
                grid,
                out,
            } => build(
                state,
                *k,
                Some(grid),
                Observable::Squeezing {
                    order: check_order(*order)?,
                    factor: *factor,
                },
                out,
            )?,
            Command::RescaledW {
                state,
                order,
                grid,
                out,
            } => build(
                state,
                1,
                Some(grid),
                Observable::RescaledW {
                    order: check_order(*order)?,
                },
                out,
            )?,
            Command::RescaledQ {
                state,
                order,
                grid,
                out,
            } => build(
                state,
                crate::squeezing::Q_TRANSITION,
                Some(grid),
                Observable::RescaledQ {
                    order: check_order(*order)?,
                },
                out,
            )?,
            Command::Compare {
                state,
                against,
                order,
                grid,
                out,
            } => build(
                state,
                1,
                Some(grid),
                Observable::Compare {
                    against: *against,
                    order: check_order(*order)?,
                },
                out,
            )?,
            Command::Reproduce { .. } => {
                return Err(Error::invalid("command", "reproduce expands into presets"))
            }
        };
        cfg.check_observable()?;
        Ok(cfg)
    }

    fn check_observable(&self) -> Result<()> {
        let oebs = matches!(self.state, FieldStateSpec::OrthogonalEvenBs { .. });
        match self.observable {
            Observable::RescaledW { .. }
            | Observable::Compare {
                against: Against::RescaledW,
                ..
            } if !oebs => Err(Error::invalid("state", "rescaled-w requires --state oebs")),
            Observable::RescaledQ { .. }
            | Observable::Compare {
                against: Against::RescaledQ,
                ..
            } if oebs => Err(Error::invalid(
                "state",
                "rescaled-q requires an sbs or coherent state",
            )),
            Observable::Compare {
                against: Against::Coherent,
                ..
            } if self.state.binomial_params().is_none() => Err(Error::invalid(
                "state",
                "coherent comparison requires a binomial state",
            )),
            _ => Ok(()),
        }
    }

    fn build_state(&self) -> Result<FockAmplitudes> {
        match (self.state, self.cutoff) {
            (FieldStateSpec::Coherent { alpha, parity }, Some(c)) => {
                coherent_amplitudes(alpha, parity, c)
            }
            (spec, _) => spec.build(),
        }
    }
}

/// First column of a CSV row.
#[derive(Debug, Clone, PartialEq)]
pub enum Key {
    Index(usize),
    Time(f64),
    Name(&'static str),
}

/// One CSV artifact: `#` metadata lines, a two-column header, rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDocument {
    pub metadata: Vec<(String, String)>,
    pub header: (&'static str, &'static str),
    pub rows: Vec<(Key, f64)>,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl CsvDocument {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{},{}", self.header.0, self.header.1);
        for (key, v) in &self.rows {
            let first = match key {
                Key::Index(i) => i.to_string(),
                Key::Time(t) => format_real(*t),
                Key::Name(n) => (*n).to_string(),
            };
            let _ = writeln!(out, "{first},{}", format_real(*v));
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// A CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub metadata: Vec<(String, String)>,
    pub header: (String, String),
    pub rows: Vec<(String, f64)>,
}

pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let metadata = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| Error::Io(e.to_string());
    let headers = reader.headers().map_err(bad)?.clone();
    if headers.len() != 2 {
        return Err(Error::Io(format!(
            "expected two columns, got {}",
            headers.len()
        )));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(bad)?;
        let v = rec[1]
            .parse::<f64>()
            .map_err(|e| Error::Io(format!("bad value `{}`: {e}", &rec[1])))?;
        rows.push((rec[0].to_string(), v));
    }
    Ok(ParsedCsv {
        metadata,
        header: (headers[0].to_string(), headers[1].to_string()),
        rows,
    })
}

fn metadata(cfg: &RunConfig, observable: &str) -> Vec<(String, String)> {
    let mut md = vec![
        (
            "artifact".to_string(),
            format!("bsjcm {}", env!("CARGO_PKG_VERSION")),
        ),
        ("observable".to_string(), observable.to_string()),
        ("state".to_string(), cfg.state.to_string()),
    ];
    if let Some(c) = cfg.cutoff {
        md.push(("cutoff".into(), c.to_string()));
    }
    if cfg.observable != Observable::Pnd {
        md.push(("k".into(), cfg.jcm.k.to_string()));
        md.push(("tmax".into(), cfg.jcm.t_max.to_string()));
        md.push(("steps".into(), cfg.jcm.steps.to_string()));
    }
    md
}

fn time_rows(grid: &[f64], values: &[f64]) -> Vec<(Key, f64)> {
    grid.iter()
        .zip(values)
        .map(|(&t, &v)| (Key::Time(t), v))
        .collect()
}

fn reference_mean(spec: &FieldStateSpec) -> Result<(Epsilon, f64)> {
    match *spec {
        FieldStateSpec::Sbs { m, eta, epsilon } => Ok((epsilon, reference_bs_mean(m, eta)?)),
        FieldStateSpec::Coherent { alpha, parity } => {
            let eps = match parity {
                Parity::None => Epsilon::Zero,
                Parity::Even => Epsilon::Plus,
                Parity::Odd => Epsilon::Minus,
            };
            Ok((eps, alpha * alpha))
        }
        FieldStateSpec::OrthogonalEvenBs { .. } => Err(Error::invalid(
            "state",
            "rescaled-q requires an sbs or coherent state",
        )),
    }
}

fn oebs_reference(spec: &FieldStateSpec) -> Result<FockAmplitudes> {
    match *spec {
        FieldStateSpec::OrthogonalEvenBs { m, eta } => sbs_amplitudes(m, eta, Epsilon::Zero),
        _ => Err(Error::invalid("state", "rescaled-w requires --state oebs")),
    }
}

/// Computes the observable described by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<CsvDocument> {
    cfg.check_observable()?;
    let state = cfg.build_state()?;
    let grid = cfg.jcm.grid();
    let threads = cfg.threads;
    let doc = match cfg.observable {
        Observable::Pnd => CsvDocument {
            metadata: metadata(cfg, "pnd"),
            header: ("m", "P"),
            rows: state
                .photon_distribution()
                .into_iter()
                .enumerate()
                .map(|(m, p)| (Key::Index(m), p))
                .collect(),
        },
        Observable::Inversion => {
            let s = inversion_series(&state, &cfg.jcm, threads)?;
            CsvDocument {
                metadata: metadata(cfg, "inversion"),
                header: ("T", "value"),
                rows: time_rows(s.grid(), s.values()),
            }
        }
        Observable::Squeezing { order, factor } => {
            let sq = Squeezer::new(&state, cfg.jcm.k, order)?;
            let values = map_grid(&grid, threads, |t| {
                let r = sq.record(t);
                Ok(match factor {
                    Factor::F => r.f,
                    Factor::S => r.s,
                })
            })?;
            let mut md = metadata(cfg, &format!("squeezing_{factor:?}"));
            md.push(("N".into(), order.to_string()));
            CsvDocument {
                metadata: md,
                header: ("T", "value"),
                rows: time_rows(&grid, &values),
            }
        }
        Observable::RescaledW { order } => {
            let bs = oebs_reference(&cfg.state)?;
            let s = w_series(&state, &bs, &grid, order, threads)?;
            let mut md = metadata(cfg, "rescaled_w");
            md.push(("N".into(), order.to_string()));
            CsvDocument {
                metadata: md,
                header: ("T", "value"),
                rows: time_rows(s.grid(), s.values()),
            }
        }
        Observable::RescaledQ { order } => {
            let (eps, nb) = reference_mean(&cfg.state)?;
            let s = q_series(&state, &grid, order, eps, nb, threads)?;
            let mut md = metadata(cfg, "rescaled_q");
            md.push(("N".into(), order.to_string()));
            md.push(("n_bar_bs".into(), format_real(nb)));
            CsvDocument {
                metadata: md,
                header: ("T", "value"),
                rows: time_rows(s.grid(), s.values()),
            }
        }
        Observable::Compare { against, order } => {
            let inv = inversion_series(&state, &JcmConfig { k: 1, ..cfg.jcm }, threads)?;
            let other = match against {
                Against::Coherent => {
                    let (m, eta) = cfg.state.binomial_params().ok_or_else(|| {
                        Error::invalid("state", "coherent comparison requires a binomial state")
                    })?;
                    coherent_inversion_baseline((m as f64 * eta * eta).sqrt(), 1, &grid)?
                }
                Against::RescaledW => {
                    let bs = oebs_reference(&cfg.state)?;
                    w_series(&state, &bs, &grid, order, threads)?
                }
                Against::RescaledQ => {
                    let (eps, nb) = reference_mean(&cfg.state)?;
                    q_series(&state, &grid, order, eps, nb, threads)?
                }
            };
            let rep = compare_series(&inv, &other)?;
            let mut md = metadata(cfg, "compare");
            md.push(("against".into(), other.label().to_string()));
            md.push(("N".into(), order.to_string()));
            CsvDocument {
                metadata: md,
                header: ("metric", "value"),
                rows: vec![
                    (Key::Name("sup_norm"), rep.sup_norm),
                    (Key::Name("rms"), rep.rms),
                    (Key::Name("pearson"), rep.pearson),
                    (Key::Name("grid_size"), rep.grid_size as f64),
                ],
            }
        }
    };
    Ok(doc)
}

/// A named curve of a figure preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub config: RunConfig,
}

fn sbs(m: usize, eta: f64, epsilon: Epsilon) -> FieldStateSpec {
    FieldStateSpec::Sbs { m, eta, epsilon }
}

/// Parameter tuples of the published figures.
pub fn figure_presets(
    fig: Figure,
    t_max: f64,
    steps: usize,
    threads: usize,
) -> Result<Vec<Preset>> {
    use Epsilon::{Plus, Zero};
    let threads = check_threads(threads)?;
    let mk =
        |name: &str, state: FieldStateSpec, k: usize, observable: Observable| -> Result<Preset> {
            Ok(Preset {
                name: name.to_string(),
                config: RunConfig {
                    state,
                    cutoff: None,
                    jcm: JcmConfig::new(k, t_max, steps)?,
                    observable,
                    output: None,
                    threads,
                },
            })
        };
    let q = |order| Observable::RescaledQ { order };
    let k3 = crate::squeezing::Q_TRANSITION;
    let oebs = FieldStateSpec::OrthogonalEvenBs { m: 370, eta: 0.7 };
    let presets = match fig {
        Figure::Fig1a => vec![
            mk("fig1a_M50", sbs(50, 0.1, Zero), 1, Observable::Pnd)?,
            mk("fig1a_M100", sbs(100, 0.1, Zero), 1, Observable::Pnd)?,
            mk("fig1a_M370", sbs(370, 0.1, Zero), 1, Observable::Pnd)?,
        ],
        Figure::Fig1b => vec![
            mk("fig1b_eta0.3_M100", sbs(100, 0.3, Zero), 1, Observable::Pnd)?,
            mk("fig1b_eta0.3_M200", sbs(200, 0.3, Zero), 1, Observable::Pnd)?,
            mk("fig1b_eta0.6_M200", sbs(200, 0.6, Zero), 1, Observable::Pnd)?,
            mk(
                "fig1b_even_eta0.6_M200",
                sbs(200, 0.6, Plus),
                1,
                Observable::Pnd,
            )?,
        ],
        Figure::Fig2a => vec![
            mk("fig2a_A", sbs(370, 0.1, Zero), 1, Observable::Inversion)?,
            mk("fig2a_B", sbs(100, 0.3, Zero), 1, Observable::Inversion)?,
            mk("fig2a_C", oebs, 1, Observable::Inversion)?,
        ],
        Figure::Fig2b => vec![
            mk("fig2b_A", sbs(200, 0.6, Plus), 1, Observable::Inversion)?,
            mk("fig2b_B", sbs(200, 0.6, Zero), 1, Observable::Inversion)?,
            mk("fig2b_C", sbs(200, 0.3, Zero), 1, Observable::Inversion)?,
        ],
        Figure::Fig3 => vec![mk("fig3", oebs, 1, Observable::RescaledW { order: 1 })?],
        Figure::Fig4a => vec![
            mk("fig4a_A", sbs(370, 0.1, Zero), k3, q(1))?,
            mk("fig4a_B", sbs(100, 0.3, Zero), k3, q(1))?,
        ],
        Figure::Fig4b => vec![
            mk("fig4b_A", sbs(200, 0.6, Plus), k3, q(1))?,
            mk("fig4b_B", sbs(200, 0.6, Zero), k3, q(1))?,
            mk("fig4b_C", sbs(200, 0.3, Zero), k3, q(1))?,
        ],
        Figure::Fig4c => vec![
            mk("fig4c_A", sbs(200, 0.3, Zero), k3, q(2))?,
            mk("fig4c_B", sbs(370, 0.3, Zero), k3, q(2))?,
        ],
    };
    Ok(presets)
}

/// Runs a preset and writes `<out_dir>/<name>.csv` for each curve.
pub fn reproduce(
    fig: Figure,
    out_dir: &Path,
    t_max: f64,
    steps: usize,
    threads: usize,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for preset in figure_presets(fig, t_max, steps, threads)? {
        let mut doc = run(&preset.config)?;
        doc.metadata
            .insert(1, ("preset".into(), preset.name.clone()));
        let path = out_dir.join(format!("{}.csv", preset.name));
        doc.write_to(&path)?;
        written.push(path);
    }
    Ok(written)
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_bad_argument() {
        EXIT_BAD_ARGS
    } else {
        EXIT_NUMERICAL
    }
}

/// Executes a parsed command line, writing CSV to the requested sink.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Reproduce {
            figure,
            out_dir,
            grid,
            threads,
        } => {
            for p in reproduce(*figure, out_dir, grid.tmax, grid.steps, *threads)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        cmd => {
            let cfg = RunConfig::from_command(cmd)?;
            let doc = run(&cfg)?;
            match &cfg.output {
                Some(path) => doc.write_to(path),
                None => {
                    print!("{}", doc.render());
                    Ok(())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bsjcm").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_negative_epsilon() {
        let cli = parse(&[
            "inversion",
            "--M",
            "200",
            "--eta",
            "0.6",
            "--epsilon",
            "-1",
            "--steps",
            "10",
        ]);
        let cfg = RunConfig::from_command(&cli.command).unwrap();
        assert_eq!(
            cfg.state,
            FieldStateSpec::Sbs {
                m: 200,
                eta: 0.6,
                epsilon: Epsilon::Minus
            }
        );
        assert_eq!(cfg.jcm.steps, 10);
        assert_eq!(cfg.jcm.t_max, DEFAULT_T_MAX);
    }

    #[test]
    fn missing_and_bad_fields_are_named() {
        let cli = parse(&["pnd", "--eta", "0.5"]);
        match RunConfig::from_command(&cli.command) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "M"),
            other => panic!("{other:?}"),
        }
        let cli = parse(&["pnd", "--M", "5", "--eta", "0.5", "--epsilon", "2"]);
        let err = RunConfig::from_command(&cli.command).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                field: "epsilon",
                ..
            }
        ));
        assert_eq!(exit_code(&err), EXIT_BAD_ARGS);
        let cli = parse(&["rescaled-w", "--M", "40", "--eta", "0.5"]);
        assert!(RunConfig::from_command(&cli.command).is_err());
        assert!(Cli::try_parse_from(["bsjcm", "pnd", "-M", "5"]).is_err());
    }

    #[test]
    fn numerical_failures_map_to_exit_three() {
        let e = Error::Truncation {
            cutoff: 5,
            tail: 1e-3,
            limit: 1e-14,
        };
        assert_eq!(exit_code(&e), EXIT_NUMERICAL);
        let cli = parse(&[
            "pnd", "--state", "coherent", "--alpha", "3", "--cutoff", "10",
        ]);
        let cfg = RunConfig::from_command(&cli.command).unwrap();
        assert_eq!(exit_code(&run(&cfg).unwrap_err()), EXIT_NUMERICAL);
    }

    #[test]
    fn pnd_document_layout() {
        let cli = parse(&["pnd", "--M", "2", "--eta", "1"]);
        let doc = run(&RunConfig::from_command(&cli.command).unwrap()).unwrap();
        let text = doc.render();
        assert!(text.starts_with("# artifact: bsjcm "));
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "m,P");
        assert_eq!(body[3], "2,1.0000000000000000e0");
    }

    #[test]
    fn presets_encode_captions() {
        let p = figure_presets(Figure::Fig3, 50.0, 100, 1).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(
            p[0].config.state,
            FieldStateSpec::OrthogonalEvenBs { m: 370, eta: 0.7 }
        );
        assert_eq!(p[0].config.observable, Observable::RescaledW { order: 1 });
        let p = figure_presets(Figure::Fig4c, 50.0, 100, 1).unwrap();
        assert!(p
            .iter()
            .all(|p| p.config.observable == Observable::RescaledQ { order: 2 }));
        assert!(p.iter().all(|p| p.config.jcm.k == 3));
        let p = figure_presets(Figure::Fig2b, 50.0, 100, 1).unwrap();
        assert_eq!(
            p[0].config.state,
            FieldStateSpec::Sbs {
                m: 200,
                eta: 0.6,
                epsilon: Epsilon::Plus
            }
        );
    }
}
