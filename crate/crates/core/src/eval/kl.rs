use super::EvalError;

/// Pseudo-count added to every label before normalizing.
pub const DEFAULT_SMOOTHING: f64 = 0.5;

const SUM_TOLERANCE: f64 = 1e-9;

/// Normalizes `counts + alpha` into a distribution.
pub fn smoothed_distribution(counts: &[f64], alpha: f64) -> Result<Vec<f64>, EvalError> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(EvalError::InvalidDistribution(format!(
            "smoothing {alpha} must be a nonnegative number"
        )));
    }
    if let Some(c) = counts.iter().find(|c| **c < 0.0 || !c.is_finite()) {
        return Err(EvalError::InvalidDistribution(format!(
            "count {c} is negative or not finite"
        )));
    }
    let total: f64 = counts.iter().map(|c| c + alpha).sum();
    if total <= 0.0 {
        return Err(EvalError::InvalidDistribution("no mass".into()));
    }
    Ok(counts.iter().map(|c| (c + alpha) / total).collect())
}

/// Sum of `p_i ln(p_i / q_i)` in nats. Terms with `p_i = 0` contribute 0; a
/// positive `p_i` against `q_i = 0` gives infinity.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, EvalError> {
    if p.len() != q.len() {
        return Err(EvalError::InvalidDistribution(format!(
            "{} labels against {}",
            p.len(),
            q.len()
        )));
    }
    for (name, d) in [("p", p), ("q", q)] {
        if d.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(EvalError::InvalidDistribution(format!("{name} has negative mass")));
        }
        let sum: f64 = d.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(EvalError::InvalidDistribution(format!("{name} sums to {sum}")));
        }
    }
    Ok(p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| if *qi == 0.0 { f64::INFINITY } else { pi * (pi / qi).ln() })
        .sum())
}

/// Distance between two label count vectors after smoothing both.
pub fn kl_from_counts(p: &[f64], q: &[f64], alpha: f64) -> Result<f64, EvalError> {
    kl_divergence(&smoothed_distribution(p, alpha)?, &smoothed_distribution(q, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_value() {
        let d = kl_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        // 0.5 ln 2 + 0.5 ln (2/3)
        assert!((d - 0.143_841).abs() < 1e-3);
    }

    #[test]
    fn equal_inputs_are_zero() {
        assert_eq!(kl_divergence(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert_eq!(kl_from_counts(&[3.0, 0.0, 7.0], &[3.0, 0.0, 7.0], 0.5).unwrap(), 0.0);
    }

    #[test]
    fn smoothing_removes_infinities() {
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), f64::INFINITY);
        assert!(kl_from_counts(&[5.0, 5.0], &[10.0, 0.0], 0.5).unwrap().is_finite());
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), 2f64.ln());
    }

    #[test]
    fn invalid_inputs() {
        assert!(kl_divergence(&[1.2, -0.2], &[0.5, 0.5]).is_err());
        assert!(kl_divergence(&[0.5, 0.4], &[0.5, 0.5]).is_err());
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
        assert!(smoothed_distribution(&[-1.0, 2.0], 0.5).is_err());
        assert!(smoothed_distribution(&[0.0, 0.0], 0.0).is_err());
    }
}
