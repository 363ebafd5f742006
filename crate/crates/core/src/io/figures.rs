//! The tables behind the signal, sensitivity and gain figures. Defaults live
//! in the embedded `figures.toml` manifest.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use super::config::phi_grid;
use super::table::FigureTable;
use crate::error::{Error, Result};
use crate::estimation::{
    bgsl, fourth_moment_total_photon, generalized_limit, power_law_limit, qcr_bound, qfi_ec_asymptotic, qfi_for_state,
    qfi_tf, qfi_tmsv_closed, sensitivity_gain, tmsv_gain_asymptote, zero_phase_sensitivity_limit,
};
use crate::signals::{parity_series, tf_parity_series};
use crate::special::TruncationPolicy;
use crate::states::InputStateSpec;

const MANIFEST: &str = include_str!("figures.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig2a, FigureId::Fig2b, FigureId::Fig3, FigureId::Fig4];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Manifest values that can be replaced for a single run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub phi_steps: Option<usize>,
    /// Replaces the curve parameters (fig2a, fig2b) or the photon-number grid (fig3, fig4).
    pub nbar_list: Option<Vec<f64>>,
    pub nu: Option<u32>,
    pub tail_epsilon: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub fig2a: SignalFigure<u32>,
    pub fig2b: SignalFigure<f64>,
    pub fig3: LinearGrid,
    pub fig4: LogGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalFigure<T> {
    #[serde(alias = "tf_n", alias = "tmsv_nbar")]
    pub curves: Vec<T>,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub nbar_start: u32,
    pub nbar_stop: u32,
    pub nbar_step: u32,
}

impl LinearGrid {
    fn values(&self) -> Vec<f64> {
        (self.nbar_start..=self.nbar_stop)
            .step_by(self.nbar_step as usize)
            .map(f64::from)
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub log10_min: i32,
    pub log10_max: i32,
    pub points_per_decade: u32,
}

impl LogGrid {
    /// Decade points are exact powers of ten.
    fn values(&self) -> Vec<f64> {
        let ppd = self.points_per_decade as i32;
        (self.log10_min * ppd..=self.log10_max * ppd)
            .map(|i| {
                if i % ppd == 0 {
                    10f64.powi(i / ppd)
                } else {
                    10f64.powf(f64::from(i) / f64::from(ppd))
                }
            })
            .collect()
    }
}

pub fn manifest() -> Manifest {
    toml::from_str(MANIFEST).expect("embedded figure manifest is valid")
}

struct Settings {
    phi_steps: Option<usize>,
    nu: u32,
    tail_epsilon: f64,
}

impl Settings {
    fn new(overrides: &FigureOverrides) -> Result<Self> {
        let nu = overrides.nu.unwrap_or(1);
        if nu == 0 {
            return Err(Error::invalid("nu", "must be >= 1"));
        }
        let tail_epsilon = overrides.tail_epsilon.unwrap_or(1e-12);
        if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
            return Err(Error::invalid(
                "tail_epsilon",
                format!("must lie in (0, 1), got {tail_epsilon}"),
            ));
        }
        if let Some(steps) = overrides.phi_steps {
            if steps < 2 {
                return Err(Error::invalid("phi_steps", format!("must be >= 2, got {steps}")));
            }
        }
        if let Some(list) = &overrides.nbar_list {
            if list.is_empty() {
                return Err(Error::invalid("nbar_list", "must not be empty"));
            }
        }
        Ok(Self {
            phi_steps: overrides.phi_steps,
            nu,
            tail_epsilon,
        })
    }
}

pub fn run_figure(id: FigureId, overrides: &FigureOverrides) -> Result<FigureTable> {
    let manifest = manifest();
    let settings = Settings::new(overrides)?;
    let nbar_list = overrides.nbar_list.clone();
    match id {
        FigureId::Fig2a => {
            let curves = match nbar_list {
                Some(list) => list
                    .iter()
                    .map(|&nbar| twin_fock_pairs(nbar))
                    .collect::<Result<Vec<u32>>>()?,
                None => manifest.fig2a.curves.clone(),
            };
            let specs: Vec<InputStateSpec> = curves.iter().map(|&n| InputStateSpec::TwinFock { n }).collect();
            signal_table(id, &manifest.fig2a, &specs, &settings)
        }
        FigureId::Fig2b => {
            let curves = nbar_list.unwrap_or_else(|| manifest.fig2b.curves.clone());
            let specs: Vec<InputStateSpec> = curves.iter().map(|&nbar| InputStateSpec::Tmsv { nbar }).collect();
            signal_table(id, &manifest.fig2b, &specs, &settings)
        }
        FigureId::Fig3 => sensitivity_table(&nbar_list.unwrap_or_else(|| manifest.fig3.values()), &settings),
        FigureId::Fig4 => gain_table(&nbar_list.unwrap_or_else(|| manifest.fig4.values()), &settings),
    }
}

fn signal_table<T>(
    id: FigureId,
    figure: &SignalFigure<T>,
    specs: &[InputStateSpec],
    settings: &Settings,
) -> Result<FigureTable> {
    let phis = phi_grid(
        figure.phi_min,
        figure.phi_max,
        settings.phi_steps.unwrap_or(figure.phi_steps),
    );
    let mut table = FigureTable::new(id.as_str());
    table.push("phi", "phi grid", phis.clone())?;
    for spec in specs {
        spec.validate()?;
        let series = parity_series(spec, settings.tail_epsilon)?;
        let values = phis.par_iter().map(|&phi| series.evaluate(phi)).collect();
        table.push(format!("S[{spec}]"), format!("parity_series({spec}).evaluate"), values)?;
    }
    Ok(table)
}

/// `n` of the twin-Fock state `|n, n>` with `2n = nbar`.
fn twin_fock_pairs(nbar: f64) -> Result<u32> {
    match (InputStateSpec::TwinFock { n: 0 }).with_mean_photon_number(nbar)? {
        InputStateSpec::TwinFock { n } => Ok(n),
        other => unreachable!("family changed to {other}"),
    }
}

fn check_grid(nbar_grid: &[f64]) -> Result<()> {
    match nbar_grid.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        Some(bad) => Err(Error::invalid(
            "nbar_list",
            format!("entries must be finite and > 0, got {bad}"),
        )),
        None => Ok(()),
    }
}

fn transpose<const K: usize>(rows: Vec<[f64; K]>) -> [Vec<f64>; K] {
    std::array::from_fn(|k| rows.iter().map(|row| row[k]).collect())
}

fn sensitivity_table(nbar_grid: &[f64], settings: &Settings) -> Result<FigureTable> {
    check_grid(nbar_grid)?;
    let (nu, eps) = (settings.nu, settings.tail_epsilon);
    let rows = nbar_grid
        .par_iter()
        .map(|&nbar| -> Result<[f64; 10]> {
            let n = twin_fock_pairs(nbar)?;
            let tmsv = InputStateSpec::Tmsv { nbar };
            let ec = InputStateSpec::EntangledCoherent { alpha: 1.0 }.with_mean_photon_number(nbar)?;
            let tmsv_moment = fourth_moment_total_photon(&tmsv, &TruncationPolicy::for_state(&tmsv, eps)?)?;
            Ok([
                nbar,
                zero_phase_sensitivity_limit(&tf_parity_series(u64::from(n)), nu, eps)?,
                qcr_bound(qfi_tf(u64::from(n)), nu)?,
                zero_phase_sensitivity_limit(&parity_series(&tmsv, eps)?, nu, eps)?,
                qcr_bound(qfi_tmsv_closed(nbar), nu)?,
                zero_phase_sensitivity_limit(&parity_series(&ec, eps)?, nu, eps)?,
                qcr_bound(qfi_for_state(&ec, eps)?, nu)?,
                power_law_limit(nbar, 1.5, nu)?,
                bgsl(nbar, 2, nu)?,
                generalized_limit(tmsv_moment, nu)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = transpose(rows);
    let labels = [
        ("nbar", "mean total photon number"),
        ("parity[tf]", "zero_phase_sensitivity_limit(tf_parity_series(nbar/2))"),
        ("qcr[tf]", "qcr_bound(qfi_tf(nbar/2))"),
        ("parity[tmsv]", "zero_phase_sensitivity_limit(tmsv_parity_series(nbar))"),
        ("qcr[tmsv]", "qcr_bound(qfi_tmsv_closed(nbar))"),
        (
            "parity[ec]",
            "zero_phase_sensitivity_limit(ec_parity_series(alpha(nbar)))",
        ),
        ("qcr[ec]", "qcr_bound(qfi_ec_series(alpha(nbar)))"),
        ("nbar^-3/2", "power_law_limit(nbar, 3/2)"),
        ("nbar^-2", "bgsl(nbar, 2)"),
        (
            "generalized[tmsv]",
            "generalized_limit(fourth_moment_total_photon(tmsv(nbar)))",
        ),
    ];
    let mut table = FigureTable::new(FigureId::Fig3.as_str());
    for ((name, provenance), values) in labels.into_iter().zip(columns) {
        table.push(name, provenance, values)?;
    }
    Ok(table)
}

fn gain_table(nbar_grid: &[f64], settings: &Settings) -> Result<FigureTable> {
    check_grid(nbar_grid)?;
    let eps = settings.tail_epsilon;
    let asymptote = tmsv_gain_asymptote();
    let rows = nbar_grid
        .par_iter()
        .map(|&nbar| -> Result<[f64; 5]> {
            let ec = InputStateSpec::EntangledCoherent { alpha: 1.0 }.with_mean_photon_number(nbar)?;
            Ok([
                nbar,
                sensitivity_gain(qfi_tmsv_closed(nbar), nbar)?,
                sensitivity_gain(qfi_for_state(&ec, eps)?, nbar)?,
                sensitivity_gain(qfi_ec_asymptotic(nbar), nbar)?,
                asymptote,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = transpose(rows);
    let labels = [
        ("nbar", "mean total photon number"),
        ("gain_db[tmsv]", "sensitivity_gain(qfi_tmsv_closed(nbar), nbar)"),
        ("gain_db[ec]", "sensitivity_gain(qfi_ec_series(alpha(nbar)), nbar)"),
        (
            "gain_db[ec asymptotic]",
            "sensitivity_gain(qfi_ec_asymptotic(nbar), nbar)",
        ),
        ("asymptote_db[tmsv]", "tmsv_gain_asymptote()"),
    ];
    let mut table = FigureTable::new(FigureId::Fig4.as_str());
    for ((name, provenance), values) in labels.into_iter().zip(columns) {
        table.push(name, provenance, values)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(nbar: &[f64]) -> FigureOverrides {
        FigureOverrides {
            nbar_list: Some(nbar.to_vec()),
            ..FigureOverrides::default()
        }
    }

    #[test]
    fn manifest_parses() {
        let m = manifest();
        assert_eq!(m.version, 1);
        assert_eq!(m.fig2a.curves, vec![1, 2, 3]);
        assert_eq!(m.fig2a.phi_max, std::f64::consts::FRAC_PI_2);
        assert_eq!(m.fig3.values().len(), 50);
        let gains = m.fig4.values();
        assert_eq!(gains[0], 1.0);
        assert_eq!(*gains.last().unwrap(), 1000.0);
    }

    #[test]
    fn figure_ids() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
        assert!(matches!("fig5".parse::<FigureId>(), Err(Error::UnknownFigure(s)) if s == "fig5"));
    }

    #[test]
    fn signal_figures_start_at_one() {
        for id in [FigureId::Fig2a, FigureId::Fig2b] {
            let table = run_figure(id, &FigureOverrides::default()).unwrap();
            assert_eq!(table.rows(), 201);
            assert_eq!(table.columns().len(), 4);
            for column in &table.columns()[1..] {
                assert!((column.values[0] - 1.0).abs() <= 1e-11, "{}", column.name);
            }
        }
    }

    #[test]
    fn sensitivity_ordering_holds_row_wise() {
        let table = run_figure(FigureId::Fig3, &quick(&[2.0, 10.0, 40.0])).unwrap();
        let col = |name| table.column(name).unwrap();
        for row in 0..table.rows() {
            assert!(col("parity[tmsv]")[row] >= col("qcr[tmsv]")[row]);
            assert!(col("qcr[tmsv]")[row] >= col("generalized[tmsv]")[row]);
        }
    }

    #[test]
    fn odd_photon_numbers_cannot_make_twin_fock_rows() {
        assert!(run_figure(FigureId::Fig3, &quick(&[3.0])).is_err());
        assert!(run_figure(FigureId::Fig4, &quick(&[0.0])).is_err());
        assert!(run_figure(FigureId::Fig4, &quick(&[])).is_err());
    }

    #[test]
    fn gain_near_asymptote() {
        let table = run_figure(FigureId::Fig4, &quick(&[1000.0])).unwrap();
        let gain = table.column("gain_db[tmsv]").unwrap()[0];
        assert!((5.50..=5.55).contains(&gain));
    }
}
