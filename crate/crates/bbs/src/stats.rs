//! Chi-square tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

fn upper_tail(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let d = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    1.0 - d.cdf(statistic)
}

/// Homogeneity of two count vectors over the same categories. Empty
/// categories are dropped.
pub fn homogeneity(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let n = (na + nb) as f64;
    let mut statistic = 0.0;
    let mut cols = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let c = (x + y) as f64;
        if c == 0.0 {
            continue;
        }
        cols += 1;
        for (obs, row) in [(x, na), (y, nb)] {
            let e = row as f64 * c / n;
            if e > 0.0 {
                statistic += (obs as f64 - e).powi(2) / e;
            }
        }
    }
    let dof = if na > 0 && nb > 0 {
        cols.saturating_sub(1)
    } else {
        0
    };
    ChiSquare {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// Goodness of fit of `observed` against cell probabilities `probs`.
/// Cells with expected count below `min_expected` are pooled from the right
/// into their left neighbour; `fitted` parameters reduce the degrees of
/// freedom.
pub fn goodness_of_fit(
    observed: &[u64],
    probs: &[f64],
    min_expected: f64,
    fitted: usize,
) -> ChiSquare {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| (o as f64, p * n as f64))
        .collect();
    while cells.len() > 1 && cells[cells.len() - 1].1 < min_expected {
        let (o, e) = cells.pop().unwrap();
        let last = cells.last_mut().unwrap();
        last.0 += o;
        last.1 += e;
    }
    let mut statistic = 0.0;
    for &(o, e) in &cells {
        if e > 0.0 {
            statistic += (o - e).powi(2) / e;
        } else if o > 0.0 {
            statistic = f64::INFINITY;
        }
    }
    let dof = cells.len().saturating_sub(1 + fitted);
    ChiSquare {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// Probability of each three-site pattern `abc` (index `4a + 2b + c`) under
/// independent bits of density `lambda`.
pub fn bernoulli_block_probs(lambda: f64) -> [f64; 8] {
    let mut p = [0.0; 8];
    for (i, v) in p.iter_mut().enumerate() {
        let ones = (i as u32).count_ones() as i32;
        *v = lambda.powi(ones) * (1.0 - lambda).powi(3 - ones);
    }
    p
}
