//! Degree-distribution models and the closed forms used to size and check
//! generated graphs.
//!
//! Continuous models are discretized by CDF differences,
//! `P{x = d} = F(d) - F(d - 1)`, then restricted to `0..=cap` and
//! renormalized. Poisson is used directly. All logarithms are natural.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Which family a [`DegreeModel`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Poisson,
    Uniform,
    Normal,
    Exponential,
    Gamma,
    Pareto,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Poisson,
        ModelKind::Uniform,
        ModelKind::Normal,
        ModelKind::Exponential,
        ModelKind::Gamma,
        ModelKind::Pareto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Poisson => "poisson",
            ModelKind::Uniform => "uniform",
            ModelKind::Normal => "normal",
            ModelKind::Exponential => "exponential",
            ModelKind::Gamma => "gamma",
            ModelKind::Pareto => "pareto",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown degree model `{s}`")))
    }
}

/// A degree distribution with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DegreeModel {
    Poisson { lambda: f64 },
    /// Equiprobable integers in `a..=b`.
    Uniform { a: f64, b: f64 },
    Normal { mean: f64, std_dev: f64 },
    Exponential { rate: f64 },
    /// Shape `alpha`, rate `beta`.
    Gamma { alpha: f64, beta: f64 },
    /// Tail index `k`, scale `x_min`.
    Pareto { k: f64, x_min: f64 },
}

impl DegreeModel {
    /// Default parameterization for a target average degree.
    ///
    /// Poisson and Exponential use `avg_degree` as their rate, Normal is
    /// centred on it with unit spread, Gamma takes shape `avg_degree` and
    /// rate `sparsity`, Pareto takes tail index `avg_degree` with
    /// `x_min = 1`, Uniform spans `0..=d_max`.
    pub fn default_for(kind: ModelKind, avg_degree: f64, sparsity: f64, d_max: usize) -> Self {
        match kind {
            ModelKind::Poisson => DegreeModel::Poisson { lambda: avg_degree },
            ModelKind::Uniform => DegreeModel::Uniform {
                a: 0.0,
                b: d_max.max(1) as f64,
            },
            ModelKind::Normal => DegreeModel::Normal {
                mean: avg_degree,
                std_dev: 1.0,
            },
            ModelKind::Exponential => DegreeModel::Exponential { rate: avg_degree },
            ModelKind::Gamma => DegreeModel::Gamma {
                alpha: avg_degree,
                beta: sparsity,
            },
            ModelKind::Pareto => DegreeModel::Pareto {
                k: avg_degree,
                x_min: 1.0,
            },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            DegreeModel::Poisson { .. } => ModelKind::Poisson,
            DegreeModel::Uniform { .. } => ModelKind::Uniform,
            DegreeModel::Normal { .. } => ModelKind::Normal,
            DegreeModel::Exponential { .. } => ModelKind::Exponential,
            DegreeModel::Gamma { .. } => ModelKind::Gamma,
            DegreeModel::Pareto { .. } => ModelKind::Pareto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{} {name} must be positive and finite, got {x}",
                    self.kind().name()
                )))
            }
        };
        match *self {
            DegreeModel::Poisson { lambda } => positive("lambda", lambda),
            DegreeModel::Uniform { a, b } => {
                if a.is_finite() && b.is_finite() && a < b {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "uniform requires a < b, got a={a}, b={b}"
                    )))
                }
            }
            DegreeModel::Normal { mean, std_dev } => {
                if !mean.is_finite() {
                    return Err(Error::InvalidParameter(format!("normal mean {mean}")));
                }
                positive("std_dev", std_dev)
            }
            DegreeModel::Exponential { rate } => positive("rate", rate),
            DegreeModel::Gamma { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
            DegreeModel::Pareto { k, x_min } => {
                positive("k", k)?;
                positive("x_min", x_min)
            }
        }
    }

    /// `(F(x), 1 - F(x))` of the continuous families, each computed
    /// without cancellation.
    fn cdf_sf(&self, x: f64) -> (f64, f64) {
        match *self {
            DegreeModel::Normal { mean, std_dev } => {
                let dist = Normal::new(mean, std_dev).expect("validated");
                (dist.cdf(x), dist.sf(x))
            }
            DegreeModel::Exponential { rate } => {
                if x <= 0.0 {
                    (0.0, 1.0)
                } else {
                    (-(-rate * x).exp_m1(), (-rate * x).exp())
                }
            }
            DegreeModel::Gamma { alpha, beta } => {
                if x <= 0.0 {
                    (0.0, 1.0)
                } else {
                    let dist = Gamma::new(alpha, beta).expect("validated");
                    (dist.cdf(x), dist.sf(x))
                }
            }
            DegreeModel::Pareto { k, x_min } => {
                if x < x_min {
                    (0.0, 1.0)
                } else {
                    let tail = (x_min / x).powf(k);
                    (1.0 - tail, tail)
                }
            }
            DegreeModel::Poisson { .. } | DegreeModel::Uniform { .. } => {
                unreachable!("discrete families have no continuous cdf")
            }
        }
    }

    fn ln_density(&self, x: f64) -> f64 {
        match *self {
            DegreeModel::Normal { mean, std_dev } => {
                let z = (x - mean) / std_dev;
                -0.5 * z * z - std_dev.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
            }
            DegreeModel::Exponential { rate } if x >= 0.0 => rate.ln() - rate * x,
            DegreeModel::Gamma { alpha, beta } if x > 0.0 => {
                alpha * beta.ln() + (alpha - 1.0) * x.ln() - beta * x - ln_gamma(alpha)
            }
            DegreeModel::Pareto { k, x_min } if x >= x_min => {
                k.ln() + k * x_min.ln() - (k + 1.0) * x.ln()
            }
            _ => f64::NEG_INFINITY,
        }
    }

    /// Natural log of the (unrenormalized) probability mass at degree `d`.
    ///
    /// When a CDF difference underflows, the log-density at the bin
    /// midpoint stands in so far tails still order correctly.
    pub fn ln_mass(&self, d: usize) -> f64 {
        match *self {
            DegreeModel::Poisson { lambda } => ln_poisson_pmf(d, lambda),
            DegreeModel::Uniform { a, b } => {
                let lo = a.ceil().max(0.0);
                let hi = b.floor();
                let x = d as f64;
                if x >= lo && x <= hi {
                    -(hi - lo + 1.0).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            _ => {
                let x = d as f64;
                let (lo_cdf, lo_sf) = self.cdf_sf(x - 1.0);
                let (hi_cdf, hi_sf) = self.cdf_sf(x);
                let mass = if lo_cdf < 0.5 {
                    hi_cdf - lo_cdf
                } else {
                    lo_sf - hi_sf
                };
                if mass > 1e-300 {
                    mass.ln()
                } else {
                    self.ln_density(x - 0.5)
                }
            }
        }
    }

    pub fn mass(&self, d: usize) -> f64 {
        self.ln_mass(d).exp()
    }
}

fn ln_poisson_pmf(d: usize, lambda: f64) -> f64 {
    let d = d as f64;
    d * lambda.ln() - lambda - ln_gamma(d + 1.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "poisson lambda must be positive, got {lambda}"
        )))
    }
}

/// `e^{-lambda} lambda^d / d!`, evaluated in log space.
pub fn poisson_pmf(d: usize, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(ln_poisson_pmf(d, lambda).exp())
}

/// Smallest `k >= 1` with `P(k | lambda) < P(0 | lambda)`.
pub fn truncation_k(lambda: f64) -> Result<usize> {
    check_lambda(lambda)?;
    let ln_p0 = -lambda;
    // ln P(k) - ln P(0) = k ln(lambda) - ln(k!): eventually decreasing, so
    // the loop always terminates.
    let mut k = 1;
    loop {
        if ln_poisson_pmf(k, lambda) < ln_p0 {
            return Ok(k);
        }
        k += 1;
    }
}

/// A model restricted to `0..=cap`, ready for repeated draws.
#[derive(Clone, Debug)]
pub struct DegreeSampler {
    cumulative: Vec<f64>,
}

impl DegreeSampler {
    pub fn new(model: &DegreeModel, cap: usize) -> Result<Self> {
        model.validate()?;
        if cap == 0 {
            return Err(Error::InvalidParameter("support cap must be at least 1".into()));
        }
        let ln: Vec<f64> = (0..=cap).map(|d| model.ln_mass(d)).collect();
        let top = ln.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::DegenerateSupport { cap });
        }
        let mut acc = 0.0;
        let cumulative = ln
            .iter()
            .map(|&l| {
                acc += (l - top).exp();
                acc
            })
            .collect();
        Ok(DegreeSampler { cumulative })
    }

    pub fn cap(&self) -> usize {
        self.cumulative.len() - 1
    }

    /// Renormalized probability of `d` on the capped support.
    pub fn probability(&self, d: usize) -> f64 {
        if d > self.cap() {
            return 0.0;
        }
        let total = *self.cumulative.last().expect("non-empty");
        let prev = if d == 0 { 0.0 } else { self.cumulative[d - 1] };
        (self.cumulative[d] - prev) / total
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let r = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= r)
            .min(self.cap())
    }
}

/// One draw from `model` restricted to `0..=support_cap`.
pub fn sample_degree<R: Rng + ?Sized>(
    model: &DegreeModel,
    rng: &mut R,
    support_cap: usize,
) -> Result<usize> {
    Ok(DegreeSampler::new(model, support_cap)?.sample(rng))
}

/// `[N ln N / 2 + epsilon N]`, the edge count above which a random graph is
/// connected with high probability.
pub fn connectivity_edge_count(n: usize, epsilon: f64) -> usize {
    let n = n as f64;
    let m = 0.5 * n * n.ln() + epsilon * n;
    if m <= 0.0 {
        0
    } else {
        m.floor() as usize
    }
}

/// Edge-probability thresholds `(D/(N-1), ln N/(N-1), 2 ln N/(N-1))`.
pub fn edge_probability_thresholds(n: usize, avg_degree: f64) -> (f64, f64, f64) {
    let denom = (n as f64 - 1.0).max(1.0);
    let p3 = (n as f64).ln() / denom;
    (avg_degree / denom, p3, 2.0 * p3)
}

/// Expected per-node selection probability
/// `e^{-D} (D + 1) D^D / (N Gamma(D + 1))`.
pub fn expected_node_probability(n: usize, avg_degree: f64) -> f64 {
    let d = avg_degree;
    let ln = -d + (d + 1.0).ln() + d * d.ln() - (n as f64).ln() - ln_gamma(d + 1.0);
    ln.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn pmf_examples() {
        assert!((poisson_pmf(0, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert!((poisson_pmf(2, 2.0).unwrap() - 0.270_670_566_473_225_4).abs() < 1e-14);
        let tail = poisson_pmf(150, 2.0).unwrap();
        assert!(tail > 0.0 && tail < 1e-200, "{tail}");
        assert!(poisson_pmf(1, 0.0).is_err());
        assert!(poisson_pmf(1, -1.0).is_err());
    }

    #[test]
    fn pmf_tail_matches_high_precision() {
        // mpmath: exp(-2) * 2**150 / factorial(150), 50 digits
        let expected = 3.380_780_500_901_621_4e-219;
        let got = poisson_pmf(150, 2.0).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-9, "{got}");
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_k(1.0).unwrap(), 2);
        assert_eq!(truncation_k(2.0).unwrap(), 4);
        assert_eq!(truncation_k(0.5).unwrap(), 1);
        assert!(truncation_k(0.0).is_err());
    }

    #[test]
    fn truncation_monotone() {
        let mut last = 0;
        for i in 1..=200 {
            let k = truncation_k(i as f64 * 0.1).unwrap();
            assert!(k >= last, "lambda={}", i as f64 * 0.1);
            last = k;
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for lambda in [0.1, 1.0, 2.5, 7.0, 13.3, 20.0] {
            let s: f64 = (0..=200).map(|d| poisson_pmf(d, lambda).unwrap()).sum();
            assert!((1.0 - 1e-9..=1.0 + 1e-12).contains(&s), "{lambda}: {s}");
        }
    }

    #[test]
    fn connectivity_edge_examples() {
        assert_eq!(connectivity_edge_count(100, 0.0), 230);
        assert_eq!(connectivity_edge_count(2, 0.0), 0);
        assert_eq!(connectivity_edge_count(1000, 0.5), 3953);
    }

    #[test]
    fn threshold_examples() {
        let (p2, p3, p4) = edge_probability_thresholds(101, 5.0);
        assert!((p2 - 0.05).abs() < 1e-15);
        assert!((p3 - 101f64.ln() / 100.0).abs() < 1e-15);
        assert!((p3 - 0.046_151_2).abs() < 1e-6);
        assert!((p4 - 2.0 * p3).abs() < 1e-15);
    }

    #[test]
    fn node_probability_integer_degree_matches_factorial_form() {
        let closed = (-2.0f64).exp() * 3.0 * 4.0 / (20.0 * 2.0);
        assert!((expected_node_probability(20, 2.0) - closed).abs() < 1e-15);
        assert!((expected_node_probability(20, 2.0) - 0.040_600_6).abs() < 1e-6);
        for d in 1..=12u32 {
            let fact: f64 = (1..=d).map(f64::from).product();
            let df = f64::from(d);
            let direct = (-df).exp() * (df + 1.0) * df.powi(d as i32) / (37.0 * fact);
            let got = expected_node_probability(37, df);
            assert!(((got - direct) / direct).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn capped_poisson_frequencies() {
        let model = DegreeModel::Poisson { lambda: 2.0 };
        let sampler = DegreeSampler::new(&model, 3).unwrap();
        let mut rng = seeded(11);
        let draws = 100_000;
        let mut hist = [0usize; 4];
        for _ in 0..draws {
            hist[sampler.sample(&mut rng)] += 1;
        }
        let z: f64 = (0..4).map(|d| poisson_pmf(d, 2.0).unwrap()).sum();
        for (d, &count) in hist.iter().enumerate() {
            let p = poisson_pmf(d, 2.0).unwrap() / z;
            let mean = p * draws as f64;
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((count as f64 - mean).abs() < 3.0 * sd, "d={d}: {count} vs {mean}");
            assert!((sampler.probability(d) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_equiprobable() {
        let cap = 6;
        let model = DegreeModel::default_for(ModelKind::Uniform, 3.0, 0.1, cap);
        let sampler = DegreeSampler::new(&model, cap).unwrap();
        let mut rng = seeded(5);
        let draws = 70_000;
        let mut hist = vec![0usize; cap + 1];
        for _ in 0..draws {
            hist[sampler.sample(&mut rng)] += 1;
        }
        let p = 1.0 / (cap + 1) as f64;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for &c in &hist {
            assert!((c as f64 - p * draws as f64).abs() < 3.0 * sd);
        }
    }

    #[test]
    fn pareto_respects_cap() {
        let model = DegreeModel::Pareto { k: 1.2, x_min: 1.0 };
        let mut rng = seeded(3);
        let sampler = DegreeSampler::new(&model, 7).unwrap();
        assert!((0..10_000).all(|_| sampler.sample(&mut rng) <= 7));
        assert_eq!(sampler.probability(0), 0.0);
    }

    #[test]
    fn degenerate_support_is_an_error() {
        let model = DegreeModel::Pareto { k: 2.0, x_min: 50.0 };
        assert!(matches!(
            DegreeSampler::new(&model, 10),
            Err(Error::DegenerateSupport { cap: 10 })
        ));
        let model = DegreeModel::Uniform { a: 20.0, b: 30.0 };
        assert!(sample_degree(&model, &mut seeded(0), 5).is_err());
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(DegreeModel::Uniform { a: 3.0, b: 3.0 }.validate().is_err());
        assert!(DegreeModel::Normal { mean: 1.0, std_dev: 0.0 }.validate().is_err());
        assert!(DegreeModel::Gamma { alpha: 1.0, beta: -1.0 }.validate().is_err());
        assert!(DegreeModel::Exponential { rate: f64::NAN }.validate().is_err());
    }

    #[test]
    fn continuous_masses_are_cdf_differences() {
        let model = DegreeModel::Exponential { rate: 0.5 };
        let expected = (-0.5f64 * 2.0).exp() - (-0.5f64 * 3.0).exp();
        assert!((model.mass(3) - expected).abs() < 1e-14);
        assert_eq!(model.mass(0), 0.0);
        let normal = DegreeModel::Normal { mean: 4.0, std_dev: 1.0 };
        // far tail falls back to the density and stays finite and ordered
        assert!(normal.ln_mass(80).is_finite());
        assert!(normal.ln_mass(80) > normal.ln_mass(90));
    }

    #[test]
    fn model_kind_parsing() {
        assert_eq!("Normal".parse::<ModelKind>().unwrap(), ModelKind::Normal);
        assert!("zipf".parse::<ModelKind>().is_err());
    }
}
