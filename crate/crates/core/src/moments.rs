//! Plain descriptive moments over slices.
//!
//! Variances and covariances use the finite-population divisor `N - 1`.
//! Sums are Neumaier-compensated so that results do not depend on how a
//! long vector happens to be accumulated.

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<CompensatedSum>().total()
}

/// Arithmetic mean. Returns NaN for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    sum(values) / values.len() as f64
}

/// Covariance with divisor `len - 1`.
pub fn covariance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let (ma, mb) = (mean(a), mean(b));
    let s: CompensatedSum = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    s.total() / (a.len() as f64 - 1.0)
}

pub fn variance(values: &[f64]) -> f64 {
    covariance(values, values)
}

pub fn std_dev(values: &[f64]) -> f64 {
    variance(values).sqrt()
}

/// Pearson correlation, clamped to `[-1, 1]` against rounding overshoot.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let r = covariance(a, b) / (std_dev(a) * std_dev(b));
    r.clamp(-1.0, 1.0)
}

/// Moment-ratio kurtosis `m4 / m2^2` with population (divisor `N`) moments.
pub fn kurtosis(values: &[f64]) -> f64 {
    let m = mean(values);
    let n = values.len() as f64;
    let m2: CompensatedSum = values.iter().map(|v| (v - m).powi(2)).collect();
    let m4: CompensatedSum = values.iter().map(|v| (v - m).powi(4)).collect();
    let m2 = m2.total() / n;
    (m4.total() / n) / (m2 * m2)
}
