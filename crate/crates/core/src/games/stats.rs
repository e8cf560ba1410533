use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(wins: u64, trials: u64) -> (f64, f64) {
    assert!(wins <= trials, "wins ({wins}) exceed trials ({trials})");
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = wins as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if wins == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if wins == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

/// Empirical event rate with its Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        RateEstimate {
            successes,
            trials,
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }

    /// Standard error of the estimate under the binomial model.
    pub fn std_error(&self) -> f64 {
        binomial_sigma(self.estimate, self.trials)
    }
}

/// `sqrt(p(1-p)/n)`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Distinguisher advantage `|Pr[b = b'] - 1/2|`, clamped to `[0, 1/2]`.
///
/// The interval is the Wilson interval of the win rate folded around 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageEstimate {
    pub advantage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub wins: u64,
}

impl AdvantageEstimate {
    pub fn from_wins(wins: u64, trials: u64) -> Self {
        let rate = if trials == 0 { 0.5 } else { wins as f64 / trials as f64 };
        let (lo, hi) = wilson_interval(wins, trials);
        let (ci_low, ci_high) = if lo > 0.5 {
            (lo - 0.5, hi - 0.5)
        } else if hi < 0.5 {
            (0.5 - hi, 0.5 - lo)
        } else {
            (0.0, (hi - 0.5).max(0.5 - lo))
        };
        AdvantageEstimate {
            advantage: (rate - 0.5).abs().clamp(0.0, 0.5),
            ci_low: ci_low.clamp(0.0, 0.5),
            ci_high: ci_high.clamp(0.0, 0.5),
            trials,
            wins,
        }
    }

    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.trials.max(1) as f64
    }

    /// Standard error of the advantage (equal to that of the win rate).
    pub fn std_error(&self) -> f64 {
        binomial_sigma(self.win_rate(), self.trials)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}


/// Pearson χ² statistic of `counts` against the uniform distribution.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if counts.is_empty() || total == 0 {
        return 0.0;
    }
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Plug-in mutual information, in bits, of a joint count table.
pub fn mutual_information_bits(joint: &[Vec<u64>]) -> f64 {
    let total: u64 = joint.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let cols = joint.iter().map(Vec::len).max().unwrap_or(0);
    let row_sum: Vec<f64> = joint.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sum: Vec<f64> = (0..cols)
        .map(|j| joint.iter().map(|r| r.get(j).copied().unwrap_or(0)).sum::<u64>() as f64)
        .collect();
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (row_sum[i] * col_sum[j])).log2();
            }
        }
    }
    mi.max(0.0)
}
