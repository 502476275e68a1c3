//! Small statistical helpers for the Monte-Carlo experiment drivers.

/// Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson interval at `z` standard deviations for `hits` out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> WilsonInterval {
    assert!(trials > 0);
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * ((p * (1.0 - p) / n) + z2 / (4.0 * n * n)).sqrt();
    WilsonInterval {
        lo: (center - half).max(0.0),
        hi: (center + half).min(1.0),
    }
}

impl WilsonInterval {
    pub fn overlaps(&self, other: &WilsonInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Chi-square statistic against exact cell probabilities.
/// Cells with zero expectation must have zero observations.
pub fn chi_square_statistic(observed: &[u64], probs: &[f64], trials: u64) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let n = trials as f64;
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = n * p;
        if e == 0.0 {
            assert_eq!(o, 0, "observation in a zero-probability cell");
            continue;
        }
        let d = o as f64 - e;
        stat += d * d / e;
    }
    stat
}

/// Wilson-Hilferty approximation to the chi-square quantile at the upper
/// tail probability matching `z` normal standard deviations (two-sided).
pub fn chi_square_quantile(df: usize, z: f64) -> f64 {
    let k = df as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}
