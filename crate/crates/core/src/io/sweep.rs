use rayon::prelude::*;

use super::config::SweepConfig;
use super::table::FigureTable;
use crate::error::Result;
use crate::signals::parity_series;

/// Parity signal and its slope on the configured phase grid, one pair of
/// columns per state instance.
pub fn run_sweep(config: &SweepConfig) -> Result<FigureTable> {
    config.validate()?;
    let phis = config.phi_grid();
    let mut table = FigureTable::new("sweep");
    table.push("phi", "phi grid", phis.clone())?;
    for spec in config.instances()? {
        let series = parity_series(&spec, config.tail_epsilon)?;
        let (values, slopes): (Vec<f64>, Vec<f64>) = phis
            .par_iter()
            .map(|&phi| (series.evaluate(phi), series.derivative(phi)))
            .unzip();
        table.push(format!("S[{spec}]"), format!("parity_series({spec}).evaluate"), values)?;
        table.push(
            format!("dS[{spec}]"),
            format!("parity_series({spec}).derivative"),
            slopes,
        )?;
    }
    Ok(table)
}
