//! Monte Carlo comparison of the estimators on simulated populations.
//!
//! For each correlation `ρ_xz` in the grid a population of `N` tri-variate
//! normal units is drawn, the first principal component of `(x, z)` is
//! attached, and for each sample size `n` the estimators are evaluated on
//! repeated SRSWOR samples. Each cell reports the empirical MSE (mean of
//! squared errors over replications), the first-order theoretical MSE on
//! the realized population, their PREs, and multicollinearity diagnostics.
//!
//! Randomness is fully determined by the configured seed. The population
//! for `ρ_xz` uses its own ChaCha key; replication `r` of cell `(ρ_xz, n)`
//! uses the cell key with ChaCha stream `r`. Cells and replications can
//! therefore run in any order, on any number of threads, with identical
//! output.

mod config;
mod output;

pub use config::{Mode, SimulationConfig, DEFAULT_SEED};
pub use output::{
    format_value, write_diagnostics_csv, write_mse_csv, write_pre_csv, DIAGNOSTICS_HEADER,
    MSE_HEADER,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::diagnostics::{report_from_correlations, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::estimators::{
    point_estimate, pre, theoretical_mse, Constants, EstimatorKind,
};
use crate::moments::CompensatedSum;
use crate::population::{summarize, FinitePopulation, PopulationSummary, SampleMeans, SrsworSampler};

/// Identity of the random number machinery, recorded in run metadata.
pub const GENERATOR: &str =
    "ChaCha8Rng (rand_chacha 0.9) with StandardNormal ziggurat sampling (rand_distr 0.5)";

pub type Matrix3 = [[f64; 3]; 3];

/// Lower-triangular `L` with `L Lᵀ = sigma`.
pub fn cholesky3(sigma: &Matrix3) -> Result<Matrix3> {
    for r in 0..3 {
        for c in (r + 1)..3 {
            if (sigma[r][c] - sigma[c][r]).abs() > 1e-12 {
                return Err(Error::NotSymmetric { row: r, col: c });
            }
        }
    }
    let mut l = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut d = sigma[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let pivot = d.sqrt();
        l[j][j] = pivot;
        for i in (j + 1)..3 {
            let mut s = sigma[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / pivot;
        }
    }
    Ok(l)
}

fn mix64(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Key of the population drawn for `rho_xz` (and `n`, if populations are
/// regenerated per sample size).
pub fn population_seed(seed: u64, rho_xz: f64, n: Option<usize>) -> u64 {
    let base = mix64(seed ^ mix64(rho_xz.to_bits()));
    match n {
        Some(n) => mix64(base ^ mix64(n as u64).rotate_left(23)),
        None => base,
    }
}

/// Key of the replication streams for cell `(rho_xz, n)`.
pub fn replication_seed(seed: u64, rho_xz: f64, n: usize) -> u64 {
    mix64(!seed ^ mix64(rho_xz.to_bits()) ^ mix64(n as u64).rotate_left(41))
}

/// `N` draws of `(Y, X, Z) = μ + L ξ`, with first-component scores attached.
pub fn generate_population(
    cfg: &SimulationConfig,
    rho_xz: f64,
    seed: u64,
) -> Result<FinitePopulation> {
    let l = cholesky3(&cfg.covariance(rho_xz))?;
    let mu = cfg.mean_vector();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big_n = cfg.population_size;
    let mut cols = [
        Vec::with_capacity(big_n),
        Vec::with_capacity(big_n),
        Vec::with_capacity(big_n),
    ];
    for _ in 0..big_n {
        let xi: [f64; 3] = [
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        ];
        for (i, col) in cols.iter_mut().enumerate() {
            let mut v = mu[i];
            for (k, &e) in xi.iter().enumerate().take(i + 1) {
                v += l[i][k] * e;
            }
            col.push(v);
        }
    }
    let [y, x, z] = cols;
    FinitePopulation::new(y, x, z)?.with_fitted_component()
}

/// One estimator's numbers in one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub kind: EstimatorKind,
    pub mse_empirical: Option<f64>,
    pub mse_theoretical: Option<f64>,
    pub pre_empirical: Option<f64>,
    pub pre_theoretical: Option<f64>,
    /// Replications whose point estimate could not be evaluated.
    pub faults: usize,
    /// Why the theoretical MSE is missing, when it was requested.
    pub theory_error: Option<Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub rho_xz: f64,
    pub n: usize,
    pub diagnostics: DiagnosticsReport,
    /// Moments of the realized population at this `n`.
    pub summary: PopulationSummary,
    /// One entry per kind, in [`EstimatorKind::ALL`] order.
    pub estimators: Vec<EstimatorResult>,
}

impl ScenarioResult {
    pub fn get(&self, kind: EstimatorKind) -> &EstimatorResult {
        &self.estimators[EstimatorKind::ALL.iter().position(|&k| k == kind).unwrap()]
    }
}

const KINDS: usize = EstimatorKind::ALL.len();

fn empirical_mse(
    cfg: &SimulationConfig,
    pop: &FinitePopulation,
    summary: &PopulationSummary,
    rho_xz: f64,
    n: usize,
) -> Result<[(Option<f64>, usize); KINDS]> {
    let psi = cfg.psi.resolve(summary)?;
    let constants = Constants::optimal(summary, &psi);
    let key = replication_seed(cfg.seed, rho_xz, n);
    let (y, x, z) = (pop.y(), pop.x(), pop.z());
    let w = pop
        .w()
        .ok_or_else(|| Error::IncompleteSummary(vec!["w"]))?;
    let inv_n = 1.0 / n as f64;

    let squared_errors: Vec<[f64; KINDS]> = (0..cfg.replications)
        .into_par_iter()
        .map_init(
            || SrsworSampler::new(pop.len()),
            |sampler, r| {
                let mut rng = ChaCha8Rng::seed_from_u64(key);
                rng.set_stream(r as u64);
                let idx = sampler.draw(n, &mut rng).expect("validated sample size");
                let mut sums = [0.0; 4];
                for &i in idx {
                    sums[0] += y[i];
                    sums[1] += x[i];
                    sums[2] += z[i];
                    sums[3] += w[i];
                }
                let means = SampleMeans {
                    y: sums[0] * inv_n,
                    x: sums[1] * inv_n,
                    z: sums[2] * inv_n,
                    w: Some(sums[3] * inv_n),
                };
                let mut out = [f64::NAN; KINDS];
                for (slot, kind) in out.iter_mut().zip(EstimatorKind::ALL) {
                    if let Ok(v) = point_estimate(kind, &means, summary, &psi, &constants) {
                        *slot = (v - summary.y_bar).powi(2);
                    }
                }
                out
            },
        )
        .collect();

    let mut result = [(None, 0); KINDS];
    for (k, slot) in result.iter_mut().enumerate() {
        let mut acc = CompensatedSum::new();
        let mut faults = 0;
        for row in &squared_errors {
            if row[k].is_finite() {
                acc.add(row[k]);
            } else {
                faults += 1;
            }
        }
        let used = cfg.replications - faults;
        *slot = ((used > 0).then(|| acc.total() / used as f64), faults);
    }
    Ok(result)
}

fn ratio(base: Option<f64>, mse: Option<f64>) -> Option<f64> {
    pre(base?, mse?).ok()
}

/// Runs one `(ρ_xz, n)` cell on an existing population.
pub fn run_cell(
    cfg: &SimulationConfig,
    pop: &FinitePopulation,
    rho_xz: f64,
    n: usize,
) -> Result<ScenarioResult> {
    let summary = summarize(pop, n)?;
    let diagnostics = report_from_correlations(rho_xz, summary.rho_xz)?;

    let empirical = if cfg.mode.empirical() {
        Some(empirical_mse(cfg, pop, &summary, rho_xz, n)?)
    } else {
        None
    };
    let theory: Option<Vec<Result<f64>>> = if cfg.mode.theoretical() {
        let psi = cfg.psi.resolve(&summary);
        Some(
            EstimatorKind::ALL
                .iter()
                .map(|&k| psi.clone().and_then(|p| theoretical_mse(k, &summary, &p)))
                .collect(),
        )
    } else {
        None
    };

    let mut estimators: Vec<EstimatorResult> = EstimatorKind::ALL
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            let (mse_empirical, faults) = empirical.map_or((None, 0), |e| e[i]);
            let (mse_theoretical, theory_error) = match theory.as_ref().map(|t| &t[i]) {
                Some(Ok(v)) => (Some(*v), None),
                Some(Err(e)) => (None, Some(e.clone())),
                None => (None, None),
            };
            EstimatorResult {
                kind,
                mse_empirical,
                mse_theoretical,
                pre_empirical: None,
                pre_theoretical: None,
                faults,
                theory_error,
            }
        })
        .collect();
    let base_emp = estimators[0].mse_empirical;
    let base_theory = estimators[0].mse_theoretical;
    for e in &mut estimators {
        e.pre_empirical = ratio(base_emp, e.mse_empirical);
        e.pre_theoretical = ratio(base_theory, e.mse_theoretical);
    }

    Ok(ScenarioResult {
        rho_xz,
        n,
        diagnostics,
        summary,
        estimators,
    })
}

/// Generates the population for `rho_xz` and runs the `(rho_xz, n)` cell.
pub fn run_scenario(cfg: &SimulationConfig, rho_xz: f64, n: usize) -> Result<ScenarioResult> {
    cfg.validate_cell(rho_xz, n)?;
    let per_n = cfg.regenerate_per_n.then_some(n);
    let pop = generate_population(cfg, rho_xz, population_seed(cfg.seed, rho_xz, per_n))?;
    run_cell(cfg, &pop, rho_xz, n)
}

/// Outcome of one grid cell; failures are kept rather than aborting the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub rho_xz: f64,
    pub n: usize,
    pub outcome: Result<ScenarioResult>,
}

/// Every `(n, ρ_xz)` cell, ordered by sample size then correlation as listed
/// in the config.
pub fn run_grid(cfg: &SimulationConfig) -> Vec<GridCell> {
    let shared: Vec<Option<Result<FinitePopulation>>> = cfg
        .rho_xz_grid
        .par_iter()
        .map(|&rho| {
            (!cfg.regenerate_per_n)
                .then(|| generate_population(cfg, rho, population_seed(cfg.seed, rho, None)))
        })
        .collect();

    let cells: Vec<(usize, usize)> = cfg
        .sample_sizes
        .iter()
        .flat_map(|&n| (0..cfg.rho_xz_grid.len()).map(move |j| (n, j)))
        .collect();

    cells
        .into_iter()
        .map(|(n, j)| {
            let rho = cfg.rho_xz_grid[j];
            let outcome = cfg.validate_cell(rho, n).and_then(|_| match &shared[j] {
                Some(Ok(pop)) => run_cell(cfg, pop, rho, n),
                Some(Err(e)) => Err(e.clone()),
                None => run_scenario(cfg, rho, n),
            });
            GridCell {
                rho_xz: rho,
                n,
                outcome,
            }
        })
        .collect()
}

impl SimulationConfig {
    fn validate_cell(&self, rho_xz: f64, n: usize) -> Result<()> {
        if n == 0 || n > self.population_size {
            return Err(Error::SampleSize {
                n,
                population: self.population_size,
            });
        }
        if self.replications == 0 && self.mode.empirical() {
            return Err(Error::Config {
                line: 0,
                message: "replications must be at least 1".into(),
            });
        }
        if !(-1.0..=1.0).contains(&rho_xz) {
            return Err(Error::Correlation(rho_xz));
        }
        Ok(())
    }
}
