use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kerr_mzi::estimation::{qcr_bound, qfi_for_state, BoundSet, SensitivityReport};
use kerr_mzi::io::{
    emit, parse_config, run_figure, run_sweep, FigureId, FigureOverrides, FigureTable, OutputFormat, SweepConfig,
};
use kerr_mzi::{Error, InputStateSpec, Result};

/// Parity signals, Fisher information and sensitivity limits for Kerr phase
/// estimation in a Mach-Zehnder interferometer.
#[derive(Parser)]
#[command(name = "kerr-mzi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parity signal and its slope on a phase grid.
    Signal {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        phi: PhiArgs,
        /// TOML sweep config used as the base; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Quantum Fisher information and the Cramer-Rao bound.
    Qfi {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Parity sensitivity next to every limit it is compared with.
    Sensitivity {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scaling limits and the fourth moment of the photon number.
    Bounds {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regenerate a figure table (fig2a, fig2b, fig3, fig4).
    Figure {
        id: String,
        /// Replace the curve parameters or the photon-number grid.
        #[arg(long, value_delimiter = ',')]
        nbar: Option<Vec<f64>>,
        #[arg(long)]
        phi_steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a sweep described by a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Tf,
    Tmsv,
    Ec,
    Noon,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_enum)]
    state: Option<Family>,
    /// Photon count: pairs for tf, N for noon.
    #[arg(long)]
    n: Option<u32>,
    /// Mean total photon number; a comma-separated list gives one result each.
    #[arg(long, value_delimiter = ',')]
    nbar: Option<Vec<f64>>,
    /// Coherent amplitude of an ec state.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct PhiArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi_max: Option<f64>,
    #[arg(long)]
    phi_steps: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    /// Repetitions of the measurement.
    #[arg(long)]
    nu: Option<u32>,
    #[arg(long)]
    tail_eps: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

impl OutputArgs {
    fn nu(&self) -> u32 {
        self.nu.unwrap_or(1)
    }

    fn tail_eps(&self) -> Result<f64> {
        let eps = self.tail_eps.unwrap_or(SweepConfig::DEFAULT_TAIL_EPSILON);
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid("tail_epsilon", format!("must lie in (0, 1), got {eps}")));
        }
        Ok(eps)
    }

    fn format(&self) -> OutputFormat {
        self.format.map_or(OutputFormat::Csv, OutputFormat::from)
    }

    /// Flags given on the command line take precedence over the config file.
    fn apply(&self, sweep: &mut SweepConfig) {
        if let Some(nu) = self.nu {
            sweep.nu = nu;
        }
        if let Some(eps) = self.tail_eps {
            sweep.tail_epsilon = eps;
        }
        if let Some(format) = self.format {
            sweep.format = format.into();
        }
        if let Some(out) = &self.out {
            sweep.output_path = Some(out.clone());
        }
    }
}

impl StateArgs {
    /// The base state and, when `--nbar` is given, the photon numbers to map it to.
    fn resolve(&self) -> Result<(InputStateSpec, Option<Vec<f64>>)> {
        let family = self
            .state
            .ok_or_else(|| Error::invalid("state", "required: tf, tmsv, ec or noon"))?;
        if let Some(list) = &self.nbar {
            let base = match family {
                Family::Tf => InputStateSpec::TwinFock { n: 0 },
                Family::Noon => InputStateSpec::Noon { n: 0 },
                Family::Tmsv => InputStateSpec::Tmsv { nbar: list[0] },
                Family::Ec => InputStateSpec::EntangledCoherent { alpha: 1.0 },
            };
            return Ok((base, Some(list.clone())));
        }
        let spec = match family {
            Family::Tf => InputStateSpec::TwinFock {
                n: self
                    .n
                    .ok_or_else(|| Error::invalid("n", "required for tf (or give --nbar)"))?,
            },
            Family::Noon => InputStateSpec::Noon {
                n: self
                    .n
                    .ok_or_else(|| Error::invalid("n", "required for noon (or give --nbar)"))?,
            },
            Family::Tmsv => return Err(Error::invalid("nbar", "required for tmsv")),
            Family::Ec => InputStateSpec::EntangledCoherent {
                alpha: self
                    .alpha
                    .ok_or_else(|| Error::invalid("alpha", "required for ec (or give --nbar)"))?,
            },
        };
        spec.validate()?;
        Ok((spec, None))
    }

    fn instances(&self) -> Result<Vec<InputStateSpec>> {
        match self.resolve()? {
            (spec, None) => Ok(vec![spec]),
            (base, Some(list)) => list.iter().map(|&nbar| base.with_mean_photon_number(nbar)).collect(),
        }
    }
}

fn per_state<const K: usize>(
    id: &str,
    specs: &[InputStateSpec],
    columns: [(&str, &str); K],
    row: impl Fn(&InputStateSpec) -> Result<[f64; K]> + Sync,
) -> Result<FigureTable> {
    let rows = specs.par_iter().map(&row).collect::<Result<Vec<_>>>()?;
    let mut table = FigureTable::new(id);
    for (k, (name, provenance)) in columns.into_iter().enumerate() {
        table.push(name, provenance, rows.iter().map(|r| r[k]).collect())?;
    }
    Ok(table)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Signal {
            state,
            phi,
            config,
            output,
        } => {
            let mut sweep = match &config {
                Some(path) => parse_config(path)?,
                None => SweepConfig::new(InputStateSpec::TwinFock { n: 0 }, 0.0, std::f64::consts::FRAC_PI_2),
            };
            if config.is_none() || state.state.is_some() {
                (sweep.state, sweep.nbar_list) = state.resolve()?;
            }
            if let Some(x) = phi.phi_min {
                sweep.phi_min = x;
            }
            if let Some(x) = phi.phi_max {
                sweep.phi_max = x;
            }
            if let Some(steps) = phi.phi_steps {
                sweep.phi_steps = steps;
            }
            output.apply(&mut sweep);
            let table = run_sweep(&sweep)?;
            emit(&table, sweep.output_path.as_deref(), sweep.format)
        }
        Command::Sweep { config, output } => {
            let mut sweep = parse_config(&config)?;
            output.apply(&mut sweep);
            let table = run_sweep(&sweep)?;
            emit(&table, sweep.output_path.as_deref(), sweep.format)
        }
        Command::Qfi { state, output } => {
            let (nu, eps) = (output.nu(), output.tail_eps()?);
            let table = per_state(
                "qfi",
                &state.instances()?,
                [
                    ("nbar", "mean_photon_number"),
                    ("qfi", "qfi_for_state"),
                    ("qcr_bound", "qcr_bound(qfi_for_state)"),
                ],
                |spec| {
                    let fisher = qfi_for_state(spec, eps)?;
                    Ok([spec.mean_photon_number(), fisher, qcr_bound(fisher, nu)?])
                },
            )?;
            emit(&table, output.out.as_deref(), output.format())
        }
        Command::Sensitivity { state, output } => {
            let (nu, eps) = (output.nu(), output.tail_eps()?);
            let table = per_state(
                "sensitivity",
                &state.instances()?,
                [
                    ("nbar", "SensitivityReport.nbar"),
                    ("delta_phi_parity", "SensitivityReport.delta_phi_parity"),
                    ("qcr_bound", "SensitivityReport.qcr_bound"),
                    ("bgsl", "SensitivityReport.bgsl"),
                    ("generalized_limit", "SensitivityReport.generalized_limit"),
                    ("gain_db", "SensitivityReport.gain_db"),
                ],
                |spec| {
                    let r = SensitivityReport::compute(spec, nu, eps)?;
                    Ok([
                        r.nbar,
                        r.delta_phi_parity,
                        r.qcr_bound,
                        r.bgsl,
                        r.generalized_limit,
                        r.gain_db,
                    ])
                },
            )?;
            emit(&table, output.out.as_deref(), output.format())
        }
        Command::Bounds { state, output } => {
            let (nu, eps) = (output.nu(), output.tail_eps()?);
            let table = per_state(
                "bounds",
                &state.instances()?,
                [
                    ("nbar", "mean_photon_number"),
                    ("bgsl", "BoundSet.bgsl_value"),
                    ("generalized_limit", "BoundSet.generalized_value"),
                    ("fourth_moment", "BoundSet.fourth_moment"),
                ],
                |spec| {
                    let b = BoundSet::new(spec, nu, eps)?;
                    Ok([
                        spec.mean_photon_number(),
                        b.bgsl_value,
                        b.generalized_value,
                        b.fourth_moment,
                    ])
                },
            )?;
            emit(&table, output.out.as_deref(), output.format())
        }
        Command::Figure {
            id,
            nbar,
            phi_steps,
            output,
        } => {
            let id: FigureId = id.parse()?;
            let overrides = FigureOverrides {
                phi_steps,
                nbar_list: nbar,
                nu: output.nu,
                tail_epsilon: output.tail_eps,
            };
            let table = run_figure(id, &overrides)?;
            emit(&table, output.out.as_deref(), output.format())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
