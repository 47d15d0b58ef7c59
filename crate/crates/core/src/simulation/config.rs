use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{PsiChoice, PsiConfig};

use super::cholesky3;

/// Which MSE columns a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Empirical,
    Theoretical,
    Both,
}

impl Mode {
    pub fn empirical(self) -> bool {
        matches!(self, Mode::Empirical | Mode::Both)
    }

    pub fn theoretical(self) -> bool {
        matches!(self, Mode::Theoretical | Mode::Both)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Empirical => "empirical",
            Mode::Theoretical => "theoretical",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "empirical" => Ok(Mode::Empirical),
            "theoretical" => Ok(Mode::Theoretical),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "mode must be empirical, theoretical or both, got `{other}`"
            )),
        }
    }
}

/// Parameters of the tri-variate normal simulation and its scenario grid.
///
/// Defaults: `N = 1000`,
/// `n ∈ {50, 100, 150}`, `ρ_xz ∈ {0.3, …, 0.9}`, `ρ_yx = 0.75`,
/// `ρ_yz = 0.76`, variances `(σ_y², σ_x², σ_z²) = (16, 36, 9)`,
/// means `(μ_y, μ_x, μ_z) = (12, 15, 19)` and 25 000 replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub population_size: usize,
    pub sample_sizes: Vec<usize>,
    pub rho_xz_grid: Vec<f64>,
    pub rho_yx: f64,
    pub rho_yz: f64,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
    pub var_y: f64,
    pub var_x: f64,
    pub var_z: f64,
    pub replications: usize,
    pub seed: u64,
    pub mode: Mode,
    pub psi: PsiConfig,
    /// Draw a fresh population for every `(ρ_xz, n)` cell instead of one per `ρ_xz`.
    pub regenerate_per_n: bool,
}

pub const DEFAULT_SEED: u64 = 20251015;

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            population_size: 1000,
            sample_sizes: vec![50, 100, 150],
            rho_xz_grid: vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            rho_yx: 0.75,
            rho_yz: 0.76,
            mean_y: 12.0,
            mean_x: 15.0,
            mean_z: 19.0,
            var_y: 16.0,
            var_x: 36.0,
            var_z: 9.0,
            replications: 25_000,
            seed: DEFAULT_SEED,
            mode: Mode::Both,
            psi: PsiConfig::default(),
            regenerate_per_n: false,
        }
    }
}

fn parse_list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| format!("bad list element `{}`", s.trim()))
        })
        .collect()
}

fn parse_one<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse::<T>().map_err(|_| format!("cannot parse `{v}`"))
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

impl SimulationConfig {
    /// Reads `key = value` lines over the defaults. Lists are comma-separated
    /// and may be empty; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: i + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            cfg.set(k.trim(), v.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "population_size" => self.population_size = parse_one(v)?,
            "sample_sizes" => self.sample_sizes = parse_list(v)?,
            "rho_xz_grid" => self.rho_xz_grid = parse_list(v)?,
            "rho_yx" => self.rho_yx = parse_one(v)?,
            "rho_yz" => self.rho_yz = parse_one(v)?,
            "mean_y" => self.mean_y = parse_one(v)?,
            "mean_x" => self.mean_x = parse_one(v)?,
            "mean_z" => self.mean_z = parse_one(v)?,
            "var_y" => self.var_y = parse_one(v)?,
            "var_x" => self.var_x = parse_one(v)?,
            "var_z" => self.var_z = parse_one(v)?,
            "replications" => self.replications = parse_one(v)?,
            "seed" => self.seed = parse_one(v)?,
            "mode" => self.mode = v.parse()?,
            "psi_x" => self.psi.x = v.parse::<PsiChoice>()?,
            "psi_z" => self.psi.z = v.parse::<PsiChoice>()?,
            "psi_w" => self.psi.w = v.parse::<PsiChoice>()?,
            "regenerate_per_n" => self.regenerate_per_n = parse_one(v)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Text that [`SimulationConfig::parse`] reads back to an equal config.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "population_size = {}", self.population_size);
        let _ = writeln!(s, "sample_sizes = {}", join(&self.sample_sizes));
        let _ = writeln!(s, "rho_xz_grid = {}", join(&self.rho_xz_grid));
        let _ = writeln!(s, "rho_yx = {}", self.rho_yx);
        let _ = writeln!(s, "rho_yz = {}", self.rho_yz);
        let _ = writeln!(s, "mean_y = {}", self.mean_y);
        let _ = writeln!(s, "mean_x = {}", self.mean_x);
        let _ = writeln!(s, "mean_z = {}", self.mean_z);
        let _ = writeln!(s, "var_y = {}", self.var_y);
        let _ = writeln!(s, "var_x = {}", self.var_x);
        let _ = writeln!(s, "var_z = {}", self.var_z);
        let _ = writeln!(s, "replications = {}", self.replications);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "mode = {}", self.mode);
        let _ = writeln!(s, "psi_x = {}", self.psi.x);
        let _ = writeln!(s, "psi_z = {}", self.psi.z);
        let _ = writeln!(s, "psi_w = {}", self.psi.w);
        let _ = writeln!(s, "regenerate_per_n = {}", self.regenerate_per_n);
        s
    }

    /// Covariance matrix in `(Y, X, Z)` order.
    pub fn covariance(&self, rho_xz: f64) -> [[f64; 3]; 3] {
        let (sy, sx, sz) = (self.var_y.sqrt(), self.var_x.sqrt(), self.var_z.sqrt());
        let yx = self.rho_yx * sy * sx;
        let yz = self.rho_yz * sy * sz;
        let xz = rho_xz * sx * sz;
        [
            [self.var_y, yx, yz],
            [yx, self.var_x, xz],
            [yz, xz, self.var_z],
        ]
    }

    pub fn mean_vector(&self) -> [f64; 3] {
        [self.mean_y, self.mean_x, self.mean_z]
    }

    /// Structural checks plus positive definiteness at every grid point.
    pub fn validate(&self) -> Result<()> {
        let bad = |message: String| Error::Config { line: 0, message };
        if self.population_size < 2 {
            return Err(bad(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            )));
        }
        if let Some(&n) = self
            .sample_sizes
            .iter()
            .find(|&&n| n == 0 || n > self.population_size)
        {
            return Err(Error::SampleSize {
                n,
                population: self.population_size,
            });
        }
        if self.replications == 0 {
            return Err(bad("replications must be at least 1".into()));
        }
        for (name, v) in [
            ("var_y", self.var_y),
            ("var_x", self.var_x),
            ("var_z", self.var_z),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("mean_y", self.mean_y),
            ("mean_x", self.mean_x),
            ("mean_z", self.mean_z),
        ] {
            if !v.is_finite() {
                return Err(bad(format!("{name} must be finite")));
            }
        }
        for &r in [self.rho_yx, self.rho_yz].iter().chain(&self.rho_xz_grid) {
            if !(r.is_finite() && (-1.0..=1.0).contains(&r)) {
                return Err(Error::Correlation(r));
            }
        }
        for &rho in &self.rho_xz_grid {
            cholesky3(&self.covariance(rho))?;
        }
        Ok(())
    }
}
