use std::time::{Duration, Instant};

use hisgen::hsg::{generate_observed, Observer, Phase};
use hisgen::{GeneratorConfig, Result};
use serde::Serialize;

#[derive(Default)]
struct PhaseClock {
    started: Option<Instant>,
    elapsed: [Duration; 3],
}

fn slot(phase: Phase) -> usize {
    match phase {
        Phase::Parse => 0,
        Phase::Connect => 1,
        Phase::Densify => 2,
    }
}

impl Observer for PhaseClock {
    fn phase_started(&mut self, _phase: Phase) {
        self.started = Some(Instant::now());
    }

    fn phase_finished(&mut self, phase: Phase) {
        if let Some(start) = self.started.take() {
            self.elapsed[slot(phase)] += start.elapsed();
        }
    }
}

/// Wall-clock time of the three generation phases of one run, in seconds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub run: usize,
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
    pub seed: u64,
    pub t1_parse: f64,
    pub t2_connect: f64,
    pub t3_densify: f64,
}

impl PhaseTimings {
    pub fn total(&self) -> f64 {
        self.t1_parse + self.t2_connect + self.t3_densify
    }

    /// Share of the total spent in each phase.
    pub fn fractions(&self) -> [f64; 3] {
        let total = self.total();
        if total <= 0.0 {
            return [0.0; 3];
        }
        [self.t1_parse / total, self.t2_connect / total, self.t3_densify / total]
    }

    /// Times one run of `cfg`.
    pub fn measure(cfg: &GeneratorConfig, run: usize) -> Result<Self> {
        let mut clock = PhaseClock::default();
        generate_observed(cfg, &mut clock)?;
        let [t1, t2, t3] = clock.elapsed.map(|d| d.as_secs_f64());
        Ok(PhaseTimings {
            run,
            n: cfg.n,
            m: cfg.m,
            d_max: cfg.d_max,
            seed: cfg.seed,
            t1_parse: t1,
            t2_connect: t2,
            t3_densify: t3,
        })
    }
}

/// Edge count for sparsity `c`, kept within what a connected simple graph
/// on `n` nodes can hold.
pub fn edges_for_sparsity(n: usize, c: f64) -> usize {
    let max = n * (n - 1) / 2;
    ((c * max as f64).round() as usize).clamp(n - 1, max)
}

/// Mean timings over the runs of one size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingSummary {
    pub n: usize,
    pub m: usize,
    pub runs: usize,
    pub t1_parse: f64,
    pub t2_connect: f64,
    pub t3_densify: f64,
    pub total: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl TimingSummary {
    pub fn of(rows: &[PhaseTimings]) -> Self {
        let k = rows.len().max(1) as f64;
        let mean = |f: fn(&PhaseTimings) -> f64| rows.iter().map(f).sum::<f64>() / k;
        let (t1, t2, t3) = (mean(|r| r.t1_parse), mean(|r| r.t2_connect), mean(|r| r.t3_densify));
        let total = t1 + t2 + t3;
        let share = |t: f64| if total > 0.0 { t / total } else { 0.0 };
        TimingSummary {
            n: rows.first().map_or(0, |r| r.n),
            m: rows.first().map_or(0, |r| r.m),
            runs: rows.len(),
            t1_parse: t1,
            t2_connect: t2,
            t3_densify: t3,
            total,
            f1: share(t1),
            f2: share(t2),
            f3: share(t3),
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((loglog_slope(&pts) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fractions_sum_to_one() {
        let t = PhaseTimings::measure(&GeneratorConfig::new(300, 2000, 40).with_seed(1), 0).unwrap();
        let f = t.fractions();
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        assert_eq!(edges_for_sparsity(100, 0.05), 248);
        assert_eq!(edges_for_sparsity(10, 0.0), 9);
    }
}
