//! CSV tables for simulation results. Failed cells are skipped; callers
//! report them separately.

use std::io::Write;

use crate::error::Result;
use crate::estimators::EstimatorKind;

use super::{GridCell, Mode, ScenarioResult};

pub const MSE_HEADER: [&str; 8] = [
    "n",
    "rho_xz",
    "estimator",
    "mse_empirical",
    "mse_theoretical",
    "pre_empirical",
    "pre_theoretical",
    "faults",
];

pub const DIAGNOSTICS_HEADER: [&str; 6] = ["n", "rho_xz", "vif", "ci", "eig1", "eig2"];

/// Shortest round-trip decimal, or an empty field for a missing value.
pub fn format_value(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn ok_cells(cells: &[GridCell]) -> impl Iterator<Item = &ScenarioResult> {
    cells.iter().filter_map(|c| c.outcome.as_ref().ok())
}

/// Long format: one row per cell and estimator.
pub fn write_mse_csv<W: Write>(out: W, cells: &[GridCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MSE_HEADER)?;
    for r in ok_cells(cells) {
        for e in &r.estimators {
            w.write_record([
                r.n.to_string(),
                r.rho_xz.to_string(),
                e.kind.label().to_string(),
                format_value(e.mse_empirical),
                format_value(e.mse_theoretical),
                format_value(e.pre_empirical),
                format_value(e.pre_theoretical),
                e.faults.to_string(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Wide format: one row per cell and mode, one PRE column per estimator.
pub fn write_pre_csv<W: Write>(out: W, cells: &[GridCell], mode: Mode) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n", "rho_xz", "mode"];
    header.extend(EstimatorKind::ALL.iter().map(|k| k.label()));
    w.write_record(&header)?;
    let modes: Vec<Mode> = [Mode::Empirical, Mode::Theoretical]
        .into_iter()
        .filter(|m| match m {
            Mode::Empirical => mode.empirical(),
            _ => mode.theoretical(),
        })
        .collect();
    for r in ok_cells(cells) {
        for &m in &modes {
            let mut row = vec![r.n.to_string(), r.rho_xz.to_string(), m.to_string()];
            row.extend(r.estimators.iter().map(|e| {
                format_value(if m == Mode::Empirical {
                    e.pre_empirical
                } else {
                    e.pre_theoretical
                })
            }));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_diagnostics_csv<W: Write>(out: W, cells: &[GridCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DIAGNOSTICS_HEADER)?;
    for r in ok_cells(cells) {
        let d = &r.diagnostics;
        w.write_record([
            r.n.to_string(),
            r.rho_xz.to_string(),
            d.vif.to_string(),
            d.ci.to_string(),
            d.lambda1.to_string(),
            d.lambda2.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::{run_grid, SimulationConfig};

    fn cells() -> Vec<GridCell> {
        run_grid(&SimulationConfig {
            population_size: 100,
            sample_sizes: vec![10, 20],
            rho_xz_grid: vec![0.3, 0.7],
            replications: 50,
            ..SimulationConfig::default()
        })
    }

    #[test]
    fn mse_table_round_trips() {
        let cells = cells();
        let mut buf = Vec::new();
        write_mse_csv(&mut buf, &cells).unwrap();
        let mut rdr = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), MSE_HEADER);
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 4 * EstimatorKind::ALL.len());
        let first = cells[0].outcome.as_ref().unwrap();
        let parsed: f64 = rows[1][3].parse().unwrap();
        assert_eq!(Some(parsed), first.estimators[1].mse_empirical);
        assert_eq!(&rows[0][2], "t0");
    }

    #[test]
    fn pre_and_diagnostics_tables() {
        let cells = cells();
        let mut buf = Vec::new();
        write_pre_csv(&mut buf, &cells, Mode::Both).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,rho_xz,mode,t0,t1,t2,t3,t4,t5,t_star,t_pca"
        );
        assert_eq!(lines.count(), 8);
        assert!(text.contains("10,0.3,empirical,100,"));

        let mut buf = Vec::new();
        write_pre_csv(&mut buf, &cells, Mode::Theoretical).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);

        let mut buf = Vec::new();
        write_diagnostics_csv(&mut buf, &cells).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "n,rho_xz,vif,ci,eig1,eig2");
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn missing_values_are_empty() {
        assert_eq!(format_value(None), "");
        assert_eq!(format_value(Some(0.1)), "0.1");
    }
}
