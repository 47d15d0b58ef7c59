//! Two-variable principal component analysis.
//!
//! Both auxiliaries are standardized (centered, scaled by their `N - 1`
//! standard deviation) and the 2×2 correlation matrix is eigendecomposed in
//! closed form. Only the first component is used by the estimators; the
//! second is exposed for orthogonality and reconstruction checks.

use crate::error::{Error, Result};
use crate::moments;

/// Eigen-decomposition of a symmetric 2×2 matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEigen2 {
    /// Larger eigenvalue.
    pub lambda1: f64,
    pub lambda2: f64,
    /// Unit eigenvector for `lambda1`, first nonzero coordinate nonnegative.
    pub v1: [f64; 2],
    /// Unit eigenvector for `lambda2`, equal to `v1` rotated by +90°.
    pub v2: [f64; 2],
}

/// Closed-form eigenvalues and eigenvectors of `[[a, b], [b, c]]`.
///
/// For an isotropic matrix (`b = 0`, `a = c`) every direction is an
/// eigenvector; the diagonal `(1, 1)/√2` is returned so the result is
/// continuous with the `b → 0⁺` limit of a correlation matrix.
pub fn symmetric_eigen2(a: f64, b: f64, c: f64) -> SymmetricEigen2 {
    let half_trace = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let radius = half_diff.hypot(b);
    let lambda1 = half_trace + radius;
    let lambda2 = half_trace - radius;

    let (mut u, mut v) = if b == 0.0 && half_diff == 0.0 {
        (1.0, 1.0)
    } else if half_diff >= 0.0 {
        // (lambda1 - c, b) avoids cancellation when a >= c.
        (half_diff + radius, b)
    } else {
        (b, radius - half_diff)
    };
    let norm = u.hypot(v);
    u /= norm;
    v /= norm;
    if u < 0.0 || (u == 0.0 && v < 0.0) {
        u = -u;
        v = -v;
    }
    SymmetricEigen2 {
        lambda1,
        lambda2,
        v1: [u, v],
        v2: [-v, u],
    }
}

/// Standardization parameters, loadings and spectrum of a fitted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaModel {
    pub mean_x: f64,
    pub mean_z: f64,
    pub sd_x: f64,
    pub sd_z: f64,
    /// Sample correlation of the inputs.
    pub rho: f64,
    /// First-component loadings.
    pub p1: f64,
    pub p2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub variance_explained: f64,
}

/// Fits the model on paired observations.
///
/// ```
/// let x = [1.0, 2.0, 3.0, 4.0, 5.0];
/// let z = [2.0, 1.0, 4.0, 3.0, 5.0];
/// let m = pcamean::pca::fit_pca(&x, &z).unwrap();
/// let s = std::f64::consts::FRAC_1_SQRT_2;
/// assert!((m.p1 - s).abs() < 1e-12 && (m.p2 - s).abs() < 1e-12);
/// assert!((m.lambda1 + m.lambda2 - 2.0).abs() < 1e-12);
/// ```
pub fn fit_pca(x: &[f64], z: &[f64]) -> Result<PcaModel> {
    if x.len() != z.len() {
        return Err(Error::LengthMismatch {
            what: "z",
            expected: x.len(),
            got: z.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewUnits(x.len()));
    }
    for (name, v) in [("x", x), ("z", z)] {
        if let Some(index) = v.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite {
                variable: name,
                index,
            });
        }
    }
    let sd_x = moments::std_dev(x);
    let sd_z = moments::std_dev(z);
    if sd_x <= 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if sd_z <= 0.0 {
        return Err(Error::ZeroVariance("z"));
    }
    let rho = moments::correlation(x, z);
    let eig = symmetric_eigen2(1.0, rho, 1.0);
    Ok(PcaModel {
        mean_x: moments::mean(x),
        mean_z: moments::mean(z),
        sd_x,
        sd_z,
        rho,
        p1: eig.v1[0],
        p2: eig.v1[1],
        lambda1: eig.lambda1,
        lambda2: eig.lambda2,
        variance_explained: eig.lambda1 / (eig.lambda1 + eig.lambda2),
    })
}

impl PcaModel {
    pub fn standardize(&self, x_i: f64, z_i: f64) -> (f64, f64) {
        ((x_i - self.mean_x) / self.sd_x, (z_i - self.mean_z) / self.sd_z)
    }

    /// First-component score of one unit.
    pub fn transform(&self, x_i: f64, z_i: f64) -> f64 {
        let (u, v) = self.standardize(x_i, z_i);
        self.p1 * u + self.p2 * v
    }

    /// Loadings of the second component, orthogonal to `(p1, p2)`.
    pub fn second_loadings(&self) -> (f64, f64) {
        (-self.p2, self.p1)
    }

    pub fn transform_second(&self, x_i: f64, z_i: f64) -> f64 {
        let (u, v) = self.standardize(x_i, z_i);
        let (q1, q2) = self.second_loadings();
        q1 * u + q2 * v
    }

    pub fn scores(&self, x: &[f64], z: &[f64]) -> Vec<f64> {
        x.iter().zip(z).map(|(&a, &b)| self.transform(a, b)).collect()
    }

    pub fn second_scores(&self, x: &[f64], z: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(z)
            .map(|(&a, &b)| self.transform_second(a, b))
            .collect()
    }

    /// Standardized `(x, z)` rebuilt from both component scores.
    pub fn reconstruct(&self, w1: f64, w2: f64) -> (f64, f64) {
        let (q1, q2) = self.second_loadings();
        (self.p1 * w1 + q1 * w2, self.p2 * w1 + q2 * w2)
    }
}

/// Free-function form of [`PcaModel::transform`].
pub fn transform(model: &PcaModel, x_i: f64, z_i: f64) -> f64 {
    model.transform(x_i, z_i)
}

/// Moments of the component and its correlation with the study variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentSummary {
    pub w_bar: f64,
    pub s_w: f64,
    /// `s_w / |w_bar|`; infinite when `w_bar` is exactly zero.
    pub c_w: f64,
    pub rho_yw: f64,
}

impl ComponentSummary {
    /// From a reported mean, coefficient of variation and correlation.
    pub fn from_cv(w_bar: f64, c_w: f64, rho_yw: f64) -> Self {
        Self {
            w_bar,
            s_w: c_w * w_bar.abs(),
            c_w,
            rho_yw,
        }
    }

    /// True when the mean is too close to zero for `c_w` to carry information.
    pub fn cv_ill_conditioned(&self) -> bool {
        self.w_bar.abs() < 1e-8 * self.s_w
    }
}

pub fn component_summary(y: &[f64], w: &[f64]) -> Result<ComponentSummary> {
    if y.len() != w.len() {
        return Err(Error::LengthMismatch {
            what: "w",
            expected: y.len(),
            got: w.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::TooFewUnits(y.len()));
    }
    let s_w = moments::std_dev(w);
    if s_w <= 0.0 {
        return Err(Error::ZeroVariance("w"));
    }
    if moments::std_dev(y) <= 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    let w_bar = moments::mean(w);
    Ok(ComponentSummary {
        w_bar,
        s_w,
        c_w: s_w / w_bar.abs(),
        rho_yw: moments::correlation(y, w),
    })
}
