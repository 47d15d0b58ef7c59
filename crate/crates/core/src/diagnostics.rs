//! Multicollinearity diagnostics for the pair of auxiliaries.

use crate::error::{Error, Result};
use crate::moments;
use crate::pca::symmetric_eigen2;

/// Variance inflation factor `1/(1 − ρ²)`.
///
/// ```
/// assert!((pcamean::diagnostics::vif(0.9).unwrap() - 5.2632).abs() < 1e-4);
/// ```
pub fn vif(rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Correlation(rho));
    }
    let d = 1.0 - rho * rho;
    if d <= 0.0 {
        return Err(Error::InfiniteVif);
    }
    Ok(1.0 / d)
}

/// Spectrum `(1 + |ρ|, 1 − |ρ|)` of the correlation matrix `[[1, ρ], [ρ, 1]]`.
pub fn correlation_eigenvalues(rho: f64) -> Result<(f64, f64)> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Correlation(rho));
    }
    let e = symmetric_eigen2(1.0, rho, 1.0);
    Ok((e.lambda1, e.lambda2.max(0.0)))
}

/// `sqrt(λ_max / λ_min)`.
pub fn condition_index(lambda1: f64, lambda2: f64) -> Result<f64> {
    if lambda2 < 0.0 || lambda1 < lambda2 || !lambda1.is_finite() {
        return Err(Error::Eigenvalues(lambda1, lambda2));
    }
    if lambda2 == 0.0 {
        return Err(Error::InfiniteConditionIndex);
    }
    Ok((lambda1 / lambda2).sqrt())
}

/// VIF from a nominal correlation; spectrum and condition index from the
/// correlation realized in the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsReport {
    pub rho_nominal: f64,
    pub rho_realized: f64,
    pub vif: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub ci: f64,
}

/// Builds a report from a nominal and a realized correlation.
pub fn report_from_correlations(rho_nominal: f64, rho_realized: f64) -> Result<DiagnosticsReport> {
    let vif = vif(rho_nominal)?;
    let (lambda1, lambda2) = correlation_eigenvalues(rho_realized)?;
    Ok(DiagnosticsReport {
        rho_nominal,
        rho_realized,
        vif,
        lambda1,
        lambda2,
        ci: condition_index(lambda1, lambda2)?,
    })
}

pub fn diagnostics_report(x: &[f64], z: &[f64], rho_nominal: f64) -> Result<DiagnosticsReport> {
    let rho_realized = realized_correlation(x, z)?;
    report_from_correlations(rho_nominal, rho_realized)
}

/// Sample correlation of two auxiliaries, validating the inputs first.
pub fn realized_correlation(x: &[f64], z: &[f64]) -> Result<f64> {
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
        if moments::std_dev(v) <= 0.0 {
            return Err(Error::ZeroVariance(name));
        }
    }
    let r = moments::correlation(x, z);
    // Identical or exactly proportional columns land a few ulps short of ±1.
    if 1.0 - r.abs() <= 1e-14 {
        return Ok(r.signum());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vif_values() {
        assert_eq!(vif(0.0).unwrap(), 1.0);
        assert!((vif(0.9).unwrap() - 5.2632).abs() < 1e-4);
        assert!((vif(0.7).unwrap() - 1.9608).abs() < 1e-4);
        assert!((vif(0.9989).unwrap() - 454.7956).abs() < 1e-4);
        assert_eq!(vif(1.0), Err(Error::InfiniteVif));
        assert_eq!(vif(-1.0), Err(Error::InfiniteVif));
        assert!(vif(1.5).is_err());
    }

    #[test]
    fn eigenvalue_values() {
        let (a, b) = correlation_eigenvalues(0.2345).unwrap();
        assert!((a - 1.2345).abs() < 1e-12 && (b - 0.7655).abs() < 1e-12);
        assert_eq!(correlation_eigenvalues(0.0).unwrap(), (1.0, 1.0));
        assert_eq!(correlation_eigenvalues(1.0).unwrap(), (2.0, 0.0));
        assert_eq!(correlation_eigenvalues(-1.0).unwrap(), (2.0, 0.0));
    }

    #[test]
    fn condition_index_values() {
        assert!((condition_index(1.2345, 0.7655).unwrap() - 1.2699).abs() < 1e-4);
        assert!((condition_index(1.8951, 0.1049).unwrap() - 4.2504).abs() < 1e-4);
        assert_eq!(condition_index(1.3, 1.3).unwrap(), 1.0);
        assert_eq!(condition_index(2.0, 0.0), Err(Error::InfiniteConditionIndex));
        assert!(matches!(condition_index(1.0, -0.1), Err(Error::Eigenvalues(..))));
        assert!(matches!(condition_index(0.5, 1.0), Err(Error::Eigenvalues(..))));
    }

    #[test]
    fn ci_closed_form() {
        for i in 0..100 {
            let r = i as f64 / 100.0;
            let (a, b) = correlation_eigenvalues(r).unwrap();
            let ci = condition_index(a, b).unwrap();
            assert!((ci - ((1.0 + r) / (1.0 - r)).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn report_from_table_row() {
        let r = report_from_correlations(0.3, 0.2345).unwrap();
        assert!((r.vif - 1.0989).abs() < 1e-4);
        assert!((r.ci - 1.2699).abs() < 1e-4);
        assert!((r.lambda1 - 1.2345).abs() < 1e-12);
    }

    #[test]
    fn report_from_data() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(diagnostics_report(&x, &x, 0.5), Err(Error::InfiniteConditionIndex));
        assert_eq!(diagnostics_report(&x, &x, 1.0), Err(Error::InfiniteVif));
        let z = [1.0, -1.0, -1.0, 1.0];
        let r = diagnostics_report(&x, &z, 0.0).unwrap();
        assert_eq!(r.rho_realized, 0.0);
        assert_eq!((r.vif, r.ci), (1.0, 1.0));
        assert_eq!(
            diagnostics_report(&x, &[1.0; 4], 0.0),
            Err(Error::ZeroVariance("z"))
        );
    }
}
