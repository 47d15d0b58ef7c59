//! Point estimators of the population mean and their first-order theory.
//!
//! Eight estimators are covered: the sample mean `t0`, ratio/product
//! combinations `t1`–`t3`, the exponential ratio-cum-product `t4`, the
//! two-variable regression estimator `t5`, the logarithmic estimator `t*`
//! on both auxiliaries, and the logarithmic estimator `t_PCA` on the first
//! principal component.
//!
//! Every MSE below is a closed form in `θ`, the means, the coefficients of
//! variation and the correlations held by a [`PopulationSummary`]. The two
//! logarithmic estimators have a free constant (`K`, `α`); their MSE is a
//! quadratic in it, and the reported MSE is the quadratic's minimum.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::population::{PopulationSummary, SampleMeans};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    /// Sample mean.
    T0,
    /// Ratio in `x`, ratio in `z`.
    T1,
    /// Ratio in `x`, product in `z`.
    T2,
    /// Product in both.
    T3,
    /// Exponential ratio in `x`, exponential product in `z`.
    T4,
    /// Regression on `x` and `z`.
    T5,
    /// Logarithmic estimator on both auxiliaries.
    TStar,
    /// Logarithmic estimator on the first principal component.
    TPca,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 8] = [
        EstimatorKind::T0,
        EstimatorKind::T1,
        EstimatorKind::T2,
        EstimatorKind::T3,
        EstimatorKind::T4,
        EstimatorKind::T5,
        EstimatorKind::TStar,
        EstimatorKind::TPca,
    ];

    /// Identifier used in CSV files and on the command line.
    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::T0 => "t0",
            EstimatorKind::T1 => "t1",
            EstimatorKind::T2 => "t2",
            EstimatorKind::T3 => "t3",
            EstimatorKind::T4 => "t4",
            EstimatorKind::T5 => "t5",
            EstimatorKind::TStar => "t_star",
            EstimatorKind::TPca => "t_pca",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| format!("unknown estimator `{s}`"))
    }
}

/// Which auxiliary a ψ is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Auxiliary {
    X,
    Z,
    W,
}

impl Auxiliary {
    fn name(self) -> &'static str {
        match self {
            Auxiliary::X => "x",
            Auxiliary::Z => "z",
            Auxiliary::W => "w",
        }
    }
}

/// How the shift ψ of a logarithmic estimator is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiChoice {
    Constant(f64),
    CoefficientOfVariation,
    StandardDeviation,
    Kurtosis,
    CorrelationWithY,
}

impl PsiChoice {
    pub fn resolve(&self, aux: Auxiliary, summary: &PopulationSummary) -> Result<f64> {
        let which = aux.name();
        let value = match (self, aux) {
            (PsiChoice::Constant(v), _) => *v,
            (PsiChoice::CoefficientOfVariation, Auxiliary::X) => summary.c_x,
            (PsiChoice::CoefficientOfVariation, Auxiliary::Z) => summary.c_z,
            (PsiChoice::CoefficientOfVariation, Auxiliary::W) => summary.require_component()?.c_w,
            (PsiChoice::StandardDeviation, Auxiliary::X) => summary.s_x,
            (PsiChoice::StandardDeviation, Auxiliary::Z) => summary.s_z,
            (PsiChoice::StandardDeviation, Auxiliary::W) => summary.require_component()?.s_w,
            (PsiChoice::CorrelationWithY, Auxiliary::X) => summary.rho_yx,
            (PsiChoice::CorrelationWithY, Auxiliary::Z) => summary.rho_yz,
            (PsiChoice::CorrelationWithY, Auxiliary::W) => summary.require_component()?.rho_yw,
            (PsiChoice::Kurtosis, aux) => {
                let k = match aux {
                    Auxiliary::X => summary.kurtosis.x,
                    Auxiliary::Z => summary.kurtosis.z,
                    Auxiliary::W => summary.kurtosis.w,
                };
                k.ok_or_else(|| {
                    Error::IncompleteSummary(vec![match aux {
                        Auxiliary::X => "beta2_x",
                        Auxiliary::Z => "beta2_z",
                        Auxiliary::W => "beta2_w",
                    }])
                })?
            }
        };
        // C_w is +inf when the component mean is exactly zero; t_PCA then
        // takes its limiting form.
        if value == f64::INFINITY && aux == Auxiliary::W {
            return Ok(value);
        }
        if !value.is_finite() {
            return Err(Error::NonFinitePsi { which });
        }
        Ok(value)
    }
}

impl fmt::Display for PsiChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiChoice::Constant(v) => write!(f, "{v}"),
            PsiChoice::CoefficientOfVariation => f.write_str("cv"),
            PsiChoice::StandardDeviation => f.write_str("sd"),
            PsiChoice::Kurtosis => f.write_str("kurtosis"),
            PsiChoice::CorrelationWithY => f.write_str("rho"),
        }
    }
}

impl FromStr for PsiChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "cv" => Ok(PsiChoice::CoefficientOfVariation),
            "sd" => Ok(PsiChoice::StandardDeviation),
            "kurtosis" => Ok(PsiChoice::Kurtosis),
            "rho" => Ok(PsiChoice::CorrelationWithY),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(PsiChoice::Constant)
                .ok_or_else(|| {
                    format!("psi must be cv, sd, kurtosis, rho or a number, got `{other}`")
                }),
        }
    }
}

/// ψ choices for `t*` (`x`, `z`) and `t_PCA` (`w`). Defaults to CVs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiConfig {
    pub x: PsiChoice,
    pub z: PsiChoice,
    pub w: PsiChoice,
}

impl Default for PsiConfig {
    fn default() -> Self {
        Self {
            x: PsiChoice::CoefficientOfVariation,
            z: PsiChoice::CoefficientOfVariation,
            w: PsiChoice::CoefficientOfVariation,
        }
    }
}

impl PsiConfig {
    /// Resolves every choice; `w` stays `None` when the summary has no component.
    pub fn resolve(&self, summary: &PopulationSummary) -> Result<Psi> {
        Ok(Psi {
            psi1: self.x.resolve(Auxiliary::X, summary)?,
            psi2: self.z.resolve(Auxiliary::Z, summary)?,
            psi_w: match summary.component {
                Some(_) => Some(self.w.resolve(Auxiliary::W, summary)?),
                None => None,
            },
        })
    }
}

/// Resolved ψ values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psi {
    pub psi1: f64,
    pub psi2: f64,
    pub psi_w: Option<f64>,
}

impl Psi {
    pub fn new(psi1: f64, psi2: f64, psi_w: f64) -> Self {
        Self {
            psi1,
            psi2,
            psi_w: Some(psi_w),
        }
    }

    fn require_w(&self) -> Result<f64> {
        self.psi_w
            .ok_or_else(|| Error::IncompleteSummary(vec!["psi_w"]))
    }
}

/// Pieces of `MSE(t*) = A + B K² − 2 K C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStarComponents {
    pub eta1: f64,
    pub eta2: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k_opt: f64,
    theta: f64,
    c_x: f64,
    c_z: f64,
}

impl TStarComponents {
    pub fn mse_at(&self, k: f64) -> f64 {
        self.a + self.b * k * k - 2.0 * k * self.c
    }

    pub fn min_mse(&self) -> f64 {
        if self.theta == 0.0 {
            return 0.0;
        }
        self.a - self.c * self.c / self.b
    }

    pub fn bias_at(&self, k: f64) -> f64 {
        k * (self.eta1 * self.eta1 / 2.0 * self.theta * self.c_x * self.c_x)
            - (1.0 - k) * (self.eta2 * self.eta2 / 2.0 * self.theta * self.c_z * self.c_z)
    }
}

fn shifted(which: &'static str, mean: f64, psi: f64) -> Result<f64> {
    let v = mean + psi;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::LogDomain { which, value: v })
    }
}

pub fn tstar_components(s: &PopulationSummary, psi1: f64, psi2: f64) -> Result<TStarComponents> {
    let eta1 = s.x_bar / shifted("x", s.x_bar, psi1)?;
    let eta2 = s.z_bar / shifted("z", s.z_bar, psi2)?;
    let (cy, cx, cz) = (s.c_y, s.c_x, s.c_z);
    let y = s.y_bar;
    // Coefficients per unit θ; θ cancels in K_opt.
    let a0 = y * y * cy * cy + eta2 * eta2 * cz * cz + 2.0 * y * eta2 * s.rho_yz * cy * cz;
    let b0 = eta1 * eta1 * cx * cx + eta2 * eta2 * cz * cz + 2.0 * eta1 * eta2 * s.rho_xz * cx * cz;
    let c0 = eta2 * eta2 * cz * cz
        + y * eta1 * s.rho_yx * cy * cx
        + y * eta2 * s.rho_yz * cy * cz
        + eta1 * eta2 * s.rho_xz * cx * cz;
    if !(b0 > 0.0) {
        return Err(Error::DegenerateQuadratic("B"));
    }
    Ok(TStarComponents {
        eta1,
        eta2,
        a: s.theta * a0,
        b: s.theta * b0,
        c: s.theta * c0,
        k_opt: c0 / b0,
        theta: s.theta,
        c_x: cx,
        c_z: cz,
    })
}

/// Pieces of `MSE(t_PCA) = A₁ + B₁ α² − 2 α C₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TPcaComponents {
    pub eta3: f64,
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    /// Infinite when `ψ = +∞`.
    pub alpha_opt: f64,
    theta: f64,
    /// `η₃ C_w`, evaluated as `S_w / (W̄ + ψ)`.
    eta_cw: f64,
    min: f64,
}

impl TPcaComponents {
    pub fn mse_at(&self, alpha: f64) -> f64 {
        self.a1 + self.b1 * alpha * alpha - 2.0 * alpha * self.c1
    }

    pub fn min_mse(&self) -> f64 {
        if self.theta == 0.0 {
            return 0.0;
        }
        self.min
    }

    pub fn bias_at(&self, alpha: f64) -> f64 {
        if self.eta_cw == 0.0 {
            return 0.0;
        }
        alpha * (self.eta_cw * self.eta_cw / 2.0 * self.theta)
    }
}

/// `η₃ = W̄/(W̄+ψ)` and the `t_PCA` quadratic.
///
/// The products `η₃ C_w` are formed as `S_w/(W̄+ψ)`, which equals
/// `(W̄/(W̄+ψ))·(S_w/W̄)` but stays finite when the component mean is zero,
/// as it is for scores of population-standardized auxiliaries.
///
/// `ψ = +∞` gives the limit `B₁ = C₁ = 0`, `α_opt = ∞`, with the minimum
/// `θȲ²C_y²(1 − ρ_yw²)`; the point estimate is then the regression on `w`.
pub fn tpca_components(s: &PopulationSummary, psi: f64) -> Result<TPcaComponents> {
    let comp = s.require_component()?;
    let a0 = s.y_bar * s.y_bar * s.c_y * s.c_y;
    if psi == f64::INFINITY {
        return Ok(TPcaComponents {
            eta3: 0.0,
            a1: s.theta * a0,
            b1: 0.0,
            c1: 0.0,
            alpha_opt: f64::INFINITY,
            theta: s.theta,
            eta_cw: 0.0,
            min: s.theta * a0 * (1.0 - comp.rho_yw * comp.rho_yw),
        });
    }
    let denom = shifted("w", comp.w_bar, psi)?;
    let eta3 = comp.w_bar / denom;
    let eta_cw = comp.s_w / denom;
    let b0 = eta_cw * eta_cw;
    if !(b0 > 0.0) {
        return Err(Error::DegenerateQuadratic("B1"));
    }
    let c0 = s.y_bar * comp.rho_yw * s.c_y * eta_cw;
    Ok(TPcaComponents {
        eta3,
        a1: s.theta * a0,
        b1: s.theta * b0,
        c1: s.theta * c0,
        alpha_opt: c0 / b0,
        theta: s.theta,
        eta_cw,
        min: s.theta * (a0 - c0 * c0 / b0),
    })
}

/// Population-optimal slopes of the regression estimator `t5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionCoefficients {
    pub beta1: f64,
    pub beta2: f64,
}

pub fn regression_coefficients(s: &PopulationSummary) -> Result<RegressionCoefficients> {
    let denom = 1.0 - s.rho_xz * s.rho_xz;
    if !(denom > 0.0) {
        return Err(Error::Collinear(s.rho_xz.abs()));
    }
    let scale = s.y_bar * s.c_y;
    Ok(RegressionCoefficients {
        beta1: scale * (s.rho_yx - s.rho_xz * s.rho_yz) / (s.x_bar * s.c_x * denom),
        beta2: scale * (s.rho_yz - s.rho_xz * s.rho_yx) / (s.z_bar * s.c_z * denom),
    })
}

/// Squared multiple correlation of `y` on `x` and `z`.
pub fn multiple_correlation_sq(s: &PopulationSummary) -> Result<f64> {
    let denom = 1.0 - s.rho_xz * s.rho_xz;
    if !(denom > 0.0) {
        return Err(Error::Collinear(s.rho_xz.abs()));
    }
    Ok((s.rho_yx * s.rho_yx + s.rho_yz * s.rho_yz - 2.0 * s.rho_yx * s.rho_yz * s.rho_xz) / denom)
}

/// Constants used by `t5`, `t*` and `t_PCA`. `None` means "use the optimum".
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constants {
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<RegressionCoefficients>,
}

impl Constants {
    /// Every optimum the summary supports; unavailable ones stay `None`.
    pub fn optimal(s: &PopulationSummary, psi: &Psi) -> Self {
        Self {
            k: tstar_components(s, psi.psi1, psi.psi2).ok().map(|c| c.k_opt),
            alpha: psi
                .psi_w
                .and_then(|p| tpca_components(s, p).ok())
                .map(|c| c.alpha_opt),
            beta: regression_coefficients(s).ok(),
        }
    }
}

fn nonzero(which: &'static str, v: f64) -> Result<f64> {
    if v == 0.0 {
        Err(Error::SingularSample(which))
    } else {
        Ok(v)
    }
}

/// `log((M+ψ)/(m+ψ))` as `-ln_1p((m-M)/(M+ψ))`, exact even for huge ψ.
fn log_ratio(which: &'static str, pop_mean: f64, sample_mean: f64, psi: f64) -> Result<f64> {
    let denom = shifted(which, pop_mean, psi)?;
    shifted(which, sample_mean, psi)?;
    Ok(-((sample_mean - pop_mean) / denom).ln_1p())
}

/// Value of one estimator on a sample.
///
/// `t*` is evaluated as
/// `ȳ + K log[(X̄+ψ₁)/(x̄+ψ₁)] + (1−K) log[(z̄+ψ₂)/(Z̄+ψ₂)]`,
/// the orientation whose first-order expansion yields its bias and MSE.
pub fn point_estimate(
    kind: EstimatorKind,
    m: &SampleMeans,
    s: &PopulationSummary,
    psi: &Psi,
    constants: &Constants,
) -> Result<f64> {
    let (yb, xb, zb) = (m.y, m.x, m.z);
    let (xbar, zbar) = (s.x_bar, s.z_bar);
    Ok(match kind {
        EstimatorKind::T0 => yb,
        EstimatorKind::T1 => yb * (xbar / nonzero("x", xb)?) * (zbar / nonzero("z", zb)?),
        EstimatorKind::T2 => yb * (xbar / nonzero("x", xb)?) * (zb / zbar),
        EstimatorKind::T3 => yb * (xb / xbar) * (zb / zbar),
        EstimatorKind::T4 => {
            let ex = (xbar - xb) / nonzero("x", xbar + xb)?;
            let ez = (zb - zbar) / nonzero("z", zb + zbar)?;
            yb * ex.exp() * ez.exp()
        }
        EstimatorKind::T5 => {
            let beta = match constants.beta {
                Some(b) => b,
                None => regression_coefficients(s)?,
            };
            yb + beta.beta1 * (xbar - xb) + beta.beta2 * (zbar - zb)
        }
        EstimatorKind::TStar => {
            let k = match constants.k {
                Some(k) => k,
                None => tstar_components(s, psi.psi1, psi.psi2)?.k_opt,
            };
            let lx = log_ratio("x", xbar, xb, psi.psi1)?;
            // Sample mean over population mean for z.
            let lz = -log_ratio("z", zbar, zb, psi.psi2)?;
            yb + k * lx + (1.0 - k) * lz
        }
        EstimatorKind::TPca => {
            let comp = s.require_component()?;
            let wb = m
                .w
                .ok_or_else(|| Error::IncompleteSummary(vec!["sample w"]))?;
            let psi_w = psi.require_w()?;
            let alpha = match constants.alpha {
                Some(a) => a,
                None => tpca_components(s, psi_w)?.alpha_opt,
            };
            if psi_w == f64::INFINITY {
                if alpha.is_infinite() {
                    yb + s.y_bar * comp.rho_yw * s.c_y * (comp.w_bar - wb) / comp.s_w
                } else {
                    yb
                }
            } else {
                yb + alpha * log_ratio("w", comp.w_bar, wb, psi_w)?
            }
        }
    })
}

/// First-order bias at the optimal constants.
///
/// `t0` is exactly unbiased and `t5` has no closed form here; both return 0.
pub fn theoretical_bias(kind: EstimatorKind, s: &PopulationSummary, psi: &Psi) -> Result<f64> {
    if kind == EstimatorKind::TPca {
        s.require_component()?;
    }
    if s.theta == 0.0 {
        return Ok(0.0);
    }
    let (cy, cx, cz) = (s.c_y, s.c_x, s.c_z);
    let (yx, yz, xz) = (
        s.rho_yx * cy * cx,
        s.rho_yz * cy * cz,
        s.rho_xz * cx * cz,
    );
    let scale = s.y_bar * s.theta;
    Ok(match kind {
        EstimatorKind::T0 | EstimatorKind::T5 => 0.0,
        EstimatorKind::T1 => scale * (cy * cy + cz * cz - yx - yz + xz),
        EstimatorKind::T2 => scale * (cx * cx - yx - yz + xz),
        EstimatorKind::T3 => scale * (yx + yz + xz),
        EstimatorKind::T4 => {
            scale * (0.375 * cx * cx - 0.25 * cz * cz - 0.25 * yx + 0.5 * yz - 0.25 * xz)
        }
        EstimatorKind::TStar => {
            let c = tstar_components(s, psi.psi1, psi.psi2)?;
            c.bias_at(c.k_opt)
        }
        EstimatorKind::TPca => {
            let c = tpca_components(s, psi.require_w()?)?;
            c.bias_at(c.alpha_opt)
        }
    })
}

/// First-order MSE; minimized over `K` / `α` for the logarithmic estimators.
///
/// ```
/// use pcamean::{estimators::{theoretical_mse, EstimatorKind, PsiConfig}, presets};
/// let s = presets::maddala_lahiri();
/// let psi = PsiConfig::default().resolve(&s).unwrap();
/// let t0 = theoretical_mse(EstimatorKind::T0, &s, &psi).unwrap();
/// assert!((t0 - 6.5390).abs() / 6.5390 < 0.005);
/// ```
pub fn theoretical_mse(kind: EstimatorKind, s: &PopulationSummary, psi: &Psi) -> Result<f64> {
    if kind == EstimatorKind::TPca {
        s.require_component()?;
    }
    if kind == EstimatorKind::T5 {
        multiple_correlation_sq(s)?;
    }
    if s.theta == 0.0 {
        return Ok(0.0);
    }
    let (cy, cx, cz) = (s.c_y, s.c_x, s.c_z);
    let (cy2, cx2, cz2) = (cy * cy, cx * cx, cz * cz);
    let (yx, yz, xz) = (
        s.rho_yx * cy * cx,
        s.rho_yz * cy * cz,
        s.rho_xz * cx * cz,
    );
    let scale = s.y_bar * s.y_bar * s.theta;
    let mse = match kind {
        EstimatorKind::T0 => scale * cy2,
        EstimatorKind::T1 => scale * (cx2 + cy2 + cz2 - 2.0 * yx - 2.0 * yz + 2.0 * xz),
        EstimatorKind::T2 => scale * (cx2 + cy2 + cz2 - 2.0 * yx + 2.0 * yz - 2.0 * xz),
        EstimatorKind::T3 => scale * (cx2 + cy2 + cz2 + 2.0 * yx + 2.0 * yz + 2.0 * xz),
        EstimatorKind::T4 => {
            scale * (0.25 * cx2 + cy2 + 0.25 * cz2 - 2.0 * yx + 2.0 * yz - 0.5 * xz)
        }
        EstimatorKind::T5 => scale * cy2 * (1.0 - multiple_correlation_sq(s)?),
        EstimatorKind::TStar => tstar_components(s, psi.psi1, psi.psi2)?.min_mse(),
        EstimatorKind::TPca => tpca_components(s, psi.require_w()?)?.min_mse(),
    };
    if mse < 0.0 {
        return Err(Error::NegativeMse { kind, value: mse });
    }
    Ok(mse)
}

/// Percent relative efficiency against a baseline MSE.
///
/// ```
/// let p = pcamean::estimators::pre(6.5390, 0.6337).unwrap();
/// assert!((p - 1031.8763).abs() < 1e-4);
/// ```
pub fn pre(mse_baseline: f64, mse: f64) -> Result<f64> {
    if !(mse > 0.0) {
        return Err(Error::ZeroMse(mse));
    }
    Ok(mse_baseline / mse * 100.0)
}

/// One row of a theoretical comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub kind: EstimatorKind,
    pub point: Option<f64>,
    pub bias: f64,
    pub mse: f64,
    /// `None` only in the census case, where every MSE is zero.
    pub pre: Option<f64>,
}

/// Bias, MSE and PRE for every estimator, in [`EstimatorKind::ALL`] order.
pub fn evaluate_all(s: &PopulationSummary, psi: &Psi) -> Result<Vec<EstimateReport>> {
    let baseline = theoretical_mse(EstimatorKind::T0, s, psi)?;
    EstimatorKind::ALL
        .into_iter()
        .map(|kind| {
            let mse = theoretical_mse(kind, s, psi)?;
            Ok(EstimateReport {
                kind,
                point: None,
                bias: theoretical_bias(kind, s, psi)?,
                mse,
                pre: if s.theta == 0.0 {
                    None
                } else {
                    Some(pre(baseline, mse)?)
                },
            })
        })
        .collect()
}
