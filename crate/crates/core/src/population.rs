//! Finite populations, their summary moments, and simple random sampling
//! without replacement (SRSWOR).

use std::io::Read;

use rand::Rng;

use crate::error::{Error, Result};
use crate::moments;
use crate::pca::{self, ComponentSummary};

/// Finite-population correction `1/n - 1/N`.
///
/// ```
/// let t = pcamean::theta(10, 18).unwrap();
/// assert!((t - 4.0 / 90.0).abs() < 1e-15);
/// assert_eq!(pcamean::theta(18, 18).unwrap(), 0.0);
/// ```
pub fn theta(n: usize, population_size: usize) -> Result<f64> {
    if n == 0 || n > population_size {
        return Err(Error::SampleSize {
            n,
            population: population_size,
        });
    }
    if n == population_size {
        return Ok(0.0);
    }
    Ok(1.0 / n as f64 - 1.0 / population_size as f64)
}

/// Study variable `y`, auxiliaries `x` and `z`, and optionally the
/// first-principal-component scores `w`, all over the same `N` units.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePopulation {
    y: Vec<f64>,
    x: Vec<f64>,
    z: Vec<f64>,
    w: Option<Vec<f64>>,
}

fn check_finite(name: &'static str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            variable: name,
            index,
        }),
        None => Ok(()),
    }
}

impl FinitePopulation {
    pub fn new(y: Vec<f64>, x: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n < 2 {
            return Err(Error::TooFewUnits(n));
        }
        for (what, v) in [("x", &x), ("z", &z)] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    what,
                    expected: n,
                    got: v.len(),
                });
            }
        }
        check_finite("y", &y)?;
        check_finite("x", &x)?;
        check_finite("z", &z)?;
        Ok(Self { y, x, z, w: None })
    }

    /// Attaches component scores computed elsewhere.
    pub fn with_component(mut self, w: Vec<f64>) -> Result<Self> {
        if w.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "w",
                expected: self.len(),
                got: w.len(),
            });
        }
        check_finite("w", &w)?;
        self.w = Some(w);
        Ok(self)
    }

    /// Fits the two-variable PCA on `x`, `z` and attaches first-component scores.
    pub fn with_fitted_component(self) -> Result<Self> {
        let model = pca::fit_pca(&self.x, &self.z)?;
        let w = model.scores(&self.x, &self.z);
        self.with_component(w)
    }

    /// Reads a CSV with a header naming `y`, `x` and `z`. Other columns are ignored.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let table = read_columns(reader, &["y", "x", "z"])?;
        let mut cols = table.into_iter();
        let (y, x, z) = (
            cols.next().unwrap(),
            cols.next().unwrap(),
            cols.next().unwrap(),
        );
        Self::new(y, x, z)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn w(&self) -> Option<&[f64]> {
        self.w.as_deref()
    }

    pub fn means(&self) -> SampleMeans {
        SampleMeans {
            y: moments::mean(&self.y),
            x: moments::mean(&self.x),
            z: moments::mean(&self.z),
            w: self.w.as_deref().map(moments::mean),
        }
    }
}

/// Reads the named numeric columns from a headed CSV, in the order requested.
pub fn read_columns<R: Read>(reader: R, names: &[&'static str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let positions = names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or(Error::MissingColumn(name))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::new(); names.len()];
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (col, &pos) in positions.iter().enumerate() {
            let field = record.get(pos).unwrap_or("");
            let v: f64 = field.parse().map_err(|_| {
                Error::Csv(format!(
                    "row {}: column `{}`: cannot parse {:?}",
                    row + 2,
                    names[col],
                    field
                ))
            })?;
            out[col].push(v);
        }
    }
    Ok(out)
}

/// Kurtosis (`m4 / m2^2`) of each variable, when raw data were available.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Kurtosis {
    pub x: Option<f64>,
    pub z: Option<f64>,
    pub w: Option<f64>,
}

/// Every population quantity the closed-form bias and MSE expressions need.
///
/// Standard deviations use divisor `N - 1`; coefficients of variation are
/// `s / |mean|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSummary {
    pub population_size: usize,
    pub sample_size: usize,
    pub theta: f64,
    pub y_bar: f64,
    pub x_bar: f64,
    pub z_bar: f64,
    pub s_y: f64,
    pub s_x: f64,
    pub s_z: f64,
    pub c_y: f64,
    pub c_x: f64,
    pub c_z: f64,
    pub rho_yx: f64,
    pub rho_yz: f64,
    pub rho_xz: f64,
    pub component: Option<ComponentSummary>,
    pub kurtosis: Kurtosis,
}

/// Summary statistics only: means, CVs and correlations, no raw data.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStatistics {
    pub population_size: usize,
    pub sample_size: usize,
    pub y_bar: f64,
    pub x_bar: f64,
    pub z_bar: f64,
    pub c_y: f64,
    pub c_x: f64,
    pub c_z: f64,
    pub rho_yx: f64,
    pub rho_yz: f64,
    pub rho_xz: f64,
    pub component: Option<ComponentSummary>,
}

fn check_rho(r: f64) -> Result<f64> {
    if r.is_finite() && (-1.0..=1.0).contains(&r) {
        Ok(r)
    } else {
        Err(Error::Correlation(r))
    }
}

fn cv(name: &'static str, sd: f64, mean: f64) -> Result<f64> {
    if sd <= 0.0 {
        return Err(Error::ZeroVariance(name));
    }
    if mean == 0.0 {
        return Err(Error::ZeroMean(name));
    }
    Ok(sd / mean.abs())
}

impl PopulationSummary {
    /// Builds a summary from means, CVs and correlations alone.
    pub fn from_statistics(stats: &SummaryStatistics) -> Result<Self> {
        let theta = theta(stats.sample_size, stats.population_size)?;
        for (name, mean, c) in [
            ("y", stats.y_bar, stats.c_y),
            ("x", stats.x_bar, stats.c_x),
            ("z", stats.z_bar, stats.c_z),
        ] {
            if !(mean.is_finite() && c.is_finite()) {
                return Err(Error::NonFinite {
                    variable: name,
                    index: 0,
                });
            }
            if mean == 0.0 {
                return Err(Error::ZeroMean(name));
            }
            if c <= 0.0 {
                return Err(Error::ZeroVariance(name));
            }
        }
        if let Some(c) = &stats.component {
            check_rho(c.rho_yw)?;
        }
        Ok(Self {
            population_size: stats.population_size,
            sample_size: stats.sample_size,
            theta,
            y_bar: stats.y_bar,
            x_bar: stats.x_bar,
            z_bar: stats.z_bar,
            s_y: stats.c_y * stats.y_bar.abs(),
            s_x: stats.c_x * stats.x_bar.abs(),
            s_z: stats.c_z * stats.z_bar.abs(),
            c_y: stats.c_y,
            c_x: stats.c_x,
            c_z: stats.c_z,
            rho_yx: check_rho(stats.rho_yx)?,
            rho_yz: check_rho(stats.rho_yz)?,
            rho_xz: check_rho(stats.rho_xz)?,
            component: stats.component,
            kurtosis: Kurtosis::default(),
        })
    }

    /// Same population, different sample size.
    pub fn with_sample_size(&self, n: usize) -> Result<Self> {
        Ok(Self {
            sample_size: n,
            theta: theta(n, self.population_size)?,
            ..self.clone()
        })
    }

    pub fn require_component(&self) -> Result<&ComponentSummary> {
        self.component
            .as_ref()
            .ok_or_else(|| Error::IncompleteSummary(vec!["w_bar", "c_w", "rho_yw"]))
    }
}

/// Population moments of `pop` for samples of size `n`.
///
/// Component fields are filled only when `pop` carries scores.
pub fn summarize(pop: &FinitePopulation, n: usize) -> Result<PopulationSummary> {
    let big_n = pop.len();
    let theta = theta(n, big_n)?;
    let (y, x, z) = (pop.y(), pop.x(), pop.z());
    let (y_bar, x_bar, z_bar) = (moments::mean(y), moments::mean(x), moments::mean(z));
    let (s_y, s_x, s_z) = (moments::std_dev(y), moments::std_dev(x), moments::std_dev(z));
    let c_y = cv("y", s_y, y_bar)?;
    let c_x = cv("x", s_x, x_bar)?;
    let c_z = cv("z", s_z, z_bar)?;
    let component = pop
        .w()
        .map(|w| pca::component_summary(y, w))
        .transpose()?;
    Ok(PopulationSummary {
        population_size: big_n,
        sample_size: n,
        theta,
        y_bar,
        x_bar,
        z_bar,
        s_y,
        s_x,
        s_z,
        c_y,
        c_x,
        c_z,
        rho_yx: moments::correlation(y, x),
        rho_yz: moments::correlation(y, z),
        rho_xz: moments::correlation(x, z),
        component,
        kurtosis: Kurtosis {
            x: Some(moments::kurtosis(x)),
            z: Some(moments::kurtosis(z)),
            w: pop.w().map(moments::kurtosis),
        },
    })
}

/// Units selected by SRSWOR together with their values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub indices: Vec<usize>,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Option<Vec<f64>>,
}

impl Sample {
    pub fn from_indices(pop: &FinitePopulation, indices: Vec<usize>) -> Self {
        let pick = |v: &[f64]| indices.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Sample {
            y: pick(pop.y()),
            x: pick(pop.x()),
            z: pick(pop.z()),
            w: pop.w().map(pick),
            indices,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Sample means of every variable present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMeans {
    pub y: f64,
    pub x: f64,
    pub z: f64,
    pub w: Option<f64>,
}

pub fn sample_means(s: &Sample) -> Result<SampleMeans> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(SampleMeans {
        y: moments::mean(&s.y),
        x: moments::mean(&s.x),
        z: moments::mean(&s.z),
        w: s.w.as_deref().map(moments::mean),
    })
}

/// Draws a simple random sample of `n` distinct units.
pub fn draw_srswor<R: Rng + ?Sized>(
    pop: &FinitePopulation,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    let mut sampler = SrsworSampler::new(pop.len());
    let indices = sampler.draw(n, rng)?.to_vec();
    Ok(Sample::from_indices(pop, indices))
}

/// Reusable partial Fisher–Yates index selector.
///
/// The internal permutation is restored after every draw, so the indices
/// returned depend only on the random stream, never on earlier draws.
#[derive(Debug, Clone)]
pub struct SrsworSampler {
    perm: Vec<usize>,
    swaps: Vec<usize>,
    drawn: usize,
}

impl SrsworSampler {
    pub fn new(population_size: usize) -> Self {
        Self {
            perm: (0..population_size).collect(),
            swaps: Vec::new(),
            drawn: 0,
        }
    }

    fn restore(&mut self) {
        for i in (0..self.drawn).rev() {
            self.perm.swap(i, self.swaps[i]);
        }
        self.swaps.clear();
        self.drawn = 0;
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, n: usize, rng: &mut R) -> Result<&[usize]> {
        let big_n = self.perm.len();
        if n == 0 || n > big_n {
            return Err(Error::SampleSize {
                n,
                population: big_n,
            });
        }
        self.restore();
        for i in 0..n {
            let j = rng.random_range(i..big_n);
            self.perm.swap(i, j);
            self.swaps.push(j);
        }
        self.drawn = n;
        Ok(&self.perm[..n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn six() -> FinitePopulation {
        FinitePopulation::new(
            vec![3.0, 5.0, 4.0, 8.0, 6.0, 10.0],
            vec![10.0, 14.0, 11.0, 20.0, 15.0, 26.0],
            vec![7.0, 6.0, 9.0, 12.0, 8.0, 14.0],
        )
        .unwrap()
    }

    #[test]
    fn theta_values_and_errors() {
        assert!((theta(10, 18).unwrap() - 0.044_444_444_444_444_44).abs() < 1e-15);
        assert!((theta(50, 1000).unwrap() - 0.019).abs() < 1e-15);
        assert_eq!(theta(7, 7).unwrap(), 0.0);
        assert!(matches!(theta(0, 5), Err(Error::SampleSize { .. })));
        assert!(matches!(theta(6, 5), Err(Error::SampleSize { .. })));
    }

    #[test]
    fn construction_rejects_bad_vectors() {
        assert!(matches!(
            FinitePopulation::new(vec![1.0], vec![1.0], vec![1.0]),
            Err(Error::TooFewUnits(1))
        ));
        assert!(matches!(
            FinitePopulation::new(vec![1.0, 2.0], vec![1.0], vec![1.0, 2.0]),
            Err(Error::LengthMismatch { what: "x", .. })
        ));
        assert!(matches!(
            FinitePopulation::new(vec![1.0, f64::NAN], vec![1.0, 2.0], vec![1.0, 2.0]),
            Err(Error::NonFinite {
                variable: "y",
                index: 1
            })
        ));
        assert!(matches!(
            FinitePopulation::new(vec![1.0, 2.0], vec![1.0, f64::INFINITY], vec![1.0, 2.0]),
            Err(Error::NonFinite { variable: "x", .. })
        ));
    }

    // Hand computation for the six-unit population, done column by column:
    // y: sum 36, mean 6, deviations -3,-1,-2,2,0,4 -> SS 34, S^2 = 6.8
    // x: sum 96, mean 16, deviations -6,-2,-5,4,-1,10 -> SS 182, S^2 = 36.4
    // z: sum 56, mean 28/3; SS = sum z^2 - 56^2/6 = 570 - 522.667 = 47.333.., S^2 = 9.4666..
    // S_yx = (18+2+10+8+0+40)/5 = 78/5 = 15.6
    // S_yz: sum y*z = 21+30+36+96+48+140 = 371, 371 - 6*56 = 35, /5 = 7
    // S_xz: sum x*z = 70+84+99+240+120+364 = 977, 977 - 16*56 = 81, /5 = 16.2
    #[test]
    fn summarize_matches_hand_computation() {
        let s = summarize(&six(), 2).unwrap();
        let sz2: f64 = (570.0 - 56.0 * 56.0 / 6.0) / 5.0;
        assert_eq!(s.population_size, 6);
        assert!((s.theta - (0.5 - 1.0 / 6.0)).abs() < 1e-15);
        assert!((s.y_bar - 6.0).abs() < 1e-14);
        assert!((s.x_bar - 16.0).abs() < 1e-14);
        assert!((s.z_bar - 28.0 / 3.0).abs() < 1e-14);
        assert!((s.s_y - 6.8f64.sqrt()).abs() < 1e-14);
        assert!((s.s_x - 36.4f64.sqrt()).abs() < 1e-14);
        assert!((s.s_z - sz2.sqrt()).abs() < 1e-14);
        assert!((s.c_y - 6.8f64.sqrt() / 6.0).abs() < 1e-14);
        assert!((s.rho_yx - 15.6 / (6.8f64 * 36.4).sqrt()).abs() < 1e-14);
        assert!((s.rho_yz - 7.0 / (6.8 * sz2).sqrt()).abs() < 1e-14);
        assert!((s.rho_xz - 16.2 / (36.4 * sz2).sqrt()).abs() < 1e-14);
        assert!(s.component.is_none());
        assert!(s.kurtosis.x.is_some() && s.kurtosis.w.is_none());
    }

    #[test]
    fn summarize_rejects_degenerate() {
        let pop = FinitePopulation::new(vec![2.0; 4], vec![1.0, 2.0, 3.0, 4.0], vec![4.0, 1.0, 2.0, 3.0])
            .unwrap();
        assert_eq!(summarize(&pop, 2), Err(Error::ZeroVariance("y")));
        let pop = FinitePopulation::new(
            vec![1.0, 2.0, 3.0, 4.0],
            vec![-1.0, 1.0, -2.0, 2.0],
            vec![4.0, 1.0, 2.0, 3.0],
        )
        .unwrap();
        assert_eq!(summarize(&pop, 2), Err(Error::ZeroMean("x")));
    }

    #[test]
    fn summarize_with_component() {
        let pop = six().with_fitted_component().unwrap();
        let s = summarize(&pop, 3).unwrap();
        let c = s.component.unwrap();
        assert!(c.w_bar.abs() < 1e-12);
        assert!(c.cv_ill_conditioned());
        assert!(s.kurtosis.w.is_some());
    }

    #[test]
    fn csv_ingestion_ignores_extra_columns() {
        let text = "id,z,y,x,note\n1,7,3,10,a\n2,6,5,14,b\n3,9,4,11,c\n";
        let pop = FinitePopulation::from_csv(text.as_bytes()).unwrap();
        assert_eq!(pop.y(), &[3.0, 5.0, 4.0]);
        assert_eq!(pop.x(), &[10.0, 14.0, 11.0]);
        assert_eq!(pop.z(), &[7.0, 6.0, 9.0]);
        assert_eq!(
            FinitePopulation::from_csv("y,x\n1,2\n".as_bytes()),
            Err(Error::MissingColumn("z"))
        );
        assert!(matches!(
            FinitePopulation::from_csv("y,x,z\n1,2,abc\n3,4,5\n".as_bytes()),
            Err(Error::Csv(_))
        ));
    }

    #[test]
    fn census_sample_means_equal_population_means() {
        let pop = six().with_fitted_component().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = draw_srswor(&pop, 6, &mut rng).unwrap();
        let mut idx = s.indices.clone();
        idx.sort_unstable();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, 5]);
        let sm = sample_means(&s).unwrap();
        let pm = pop.means();
        assert!((sm.y - pm.y).abs() < 1e-14);
        assert!((sm.x - pm.x).abs() < 1e-14);
        assert!((sm.z - pm.z).abs() < 1e-14);
        assert!((sm.w.unwrap() - pm.w.unwrap()).abs() < 1e-14);
    }

    #[test]
    fn sample_means_simple() {
        let s = Sample {
            indices: vec![0, 1, 2],
            y: vec![1.0, 2.0, 3.0],
            x: vec![1.0, 2.0, 3.0],
            z: vec![1.0, 2.0, 3.0],
            w: None,
        };
        let m = sample_means(&s).unwrap();
        assert_eq!((m.y, m.x, m.z, m.w), (2.0, 2.0, 2.0, None));
        let empty = Sample {
            indices: vec![],
            y: vec![],
            x: vec![],
            z: vec![],
            w: None,
        };
        assert_eq!(sample_means(&empty), Err(Error::EmptySample));
    }

    #[test]
    fn draw_is_deterministic_and_distinct() {
        let pop = six();
        let a = draw_srswor(&pop, 4, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = draw_srswor(&pop, 4, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
        let mut idx = a.indices.clone();
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 4);
        assert!(draw_srswor(&pop, 7, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
        assert!(draw_srswor(&pop, 0, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn sampler_restores_permutation_between_draws() {
        let mut sampler = SrsworSampler::new(20);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let first = sampler.draw(7, &mut rng).unwrap().to_vec();
        sampler.draw(13, &mut rng).unwrap();
        sampler.draw(3, &mut rng).unwrap();
        // A fresh sampler fed the same stream agrees with the reused one.
        let mut fresh = SrsworSampler::new(20);
        let mut rng2 = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(fresh.draw(7, &mut rng2).unwrap(), &first[..]);
        let mut rng3 = ChaCha8Rng::seed_from_u64(99);
        let mut rng4 = ChaCha8Rng::seed_from_u64(99);
        assert_eq!(
            sampler.draw(5, &mut rng3).unwrap().to_vec(),
            SrsworSampler::new(20).draw(5, &mut rng4).unwrap().to_vec()
        );
    }
}
