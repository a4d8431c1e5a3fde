//! Chi-square tests for the sampler checks.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn finish(statistic: f64, dof: usize) -> ChiSquare {
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    ChiSquare { statistic, dof, p_value }
}

/// Goodness of fit of `observed` counts against cell probabilities `probs`.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), probs.len(), "one probability per cell");
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    finish(statistic, observed.len().saturating_sub(1))
}

pub fn chi_square_uniform(observed: &[u64]) -> ChiSquare {
    let k = observed.len();
    chi_square_gof(observed, &vec![1.0 / k as f64; k])
}

/// Homogeneity test of two count vectors over the same cells.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len(), "same cells");
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (obs, row) in [(x as f64, na), (y as f64, nb)] {
            let e = row * col / total;
            statistic += (obs - e).powi(2) / e;
        }
    }
    finish(statistic, cells.saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let r = chi_square_uniform(&[100, 100, 100]);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert!(chi_square_uniform(&[300, 0, 0]).p_value < 1e-10);
        assert!(chi_square_two_sample(&[10, 20, 30], &[20, 40, 60]).statistic.abs() < 1e-12);
    }

    #[test]
    fn known_statistic() {
        // dof 2: sf(x) = exp(-x/2)
        let r = chi_square_gof(&[60, 40, 50], &[1.0 / 3.0; 3]);
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert!((r.p_value - (-2f64).exp()).abs() < 1e-12);
    }
}
