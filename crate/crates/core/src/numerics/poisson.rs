//! Poisson point masses, tails and the truncated Poisson law.

use statrs::function::factorial::ln_factorial;

use crate::error::NumericsError;

/// Relative cutoff for tail summation.
const TAIL_EPS: f64 = 1e-17;

fn check_rate(lambda: f64) -> Result<(), NumericsError> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(NumericsError::Domain(format!(
            "Poisson rate must be finite and nonnegative, got {lambda}"
        )))
    }
}

/// A Poisson law with rate `lambda`: point masses and both tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonTail {
    lambda: f64,
}

impl PoissonTail {
    pub fn new(lambda: f64) -> Result<Self, NumericsError> {
        check_rate(lambda)?;
        Ok(Self { lambda })
    }

    /// Caller guarantees a finite nonnegative rate.
    pub(crate) fn unchecked(lambda: f64) -> Self {
        debug_assert!(lambda.is_finite() && lambda >= 0.0, "bad rate {lambda}");
        Self { lambda: lambda.max(0.0) }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn mode(&self) -> usize {
        self.lambda.floor() as usize
    }

    /// `Pr[Poisson(lambda) = j]`.
    pub fn pmf(&self, j: usize) -> f64 {
        if self.lambda == 0.0 {
            return if j == 0 { 1.0 } else { 0.0 };
        }
        let j_f = j as f64;
        (-self.lambda + j_f * self.lambda.ln() - ln_factorial(j as u64)).exp()
    }

    /// Sum of point masses from `from` upward. Requires `from > mode`, so the
    /// terms decrease monotonically.
    fn upper_sum(&self, from: usize) -> f64 {
        let mut term = self.pmf(from);
        let mut sum = 0.0;
        let mut i = from;
        while term > 0.0 {
            sum += term;
            i += 1;
            term *= self.lambda / i as f64;
            if term < TAIL_EPS * sum {
                break;
            }
        }
        sum
    }

    /// Sum of point masses from `to` down to 0. Requires `to <= mode`.
    fn lower_sum(&self, to: usize) -> f64 {
        let mut term = self.pmf(to);
        let mut sum = 0.0;
        let mut i = to;
        loop {
            sum += term;
            if i == 0 {
                break;
            }
            term *= i as f64 / self.lambda;
            i -= 1;
            if term < TAIL_EPS * sum {
                break;
            }
        }
        sum
    }

    /// `Pr[Poisson(lambda) >= j]`.
    pub fn ge(&self, j: usize) -> f64 {
        if j == 0 {
            return 1.0;
        }
        if self.lambda == 0.0 {
            return 0.0;
        }
        if j > self.mode() {
            self.upper_sum(j)
        } else {
            (1.0 - self.lower_sum(j - 1)).max(0.0)
        }
    }

    /// `Pr[Poisson(lambda) >= j]` for a possibly nonpositive threshold.
    pub fn ge_signed(&self, j: i64) -> f64 {
        if j <= 0 {
            1.0
        } else {
            self.ge(j as usize)
        }
    }

    /// `Pr[Poisson(lambda) < j]`.
    pub fn lt(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        if self.lambda == 0.0 {
            return 1.0;
        }
        if j - 1 <= self.mode() {
            self.lower_sum(j - 1)
        } else {
            (1.0 - self.upper_sum(j)).max(0.0)
        }
    }
}

/// `Pr[Poisson(lambda) = j]`.
pub fn psi(j: usize, lambda: f64) -> Result<f64, NumericsError> {
    Ok(PoissonTail::new(lambda)?.pmf(j))
}

/// `Pr[Poisson(lambda) >= j]`.
pub fn psi_ge(j: usize, lambda: f64) -> Result<f64, NumericsError> {
    Ok(PoissonTail::new(lambda)?.ge(j))
}

/// `Pr[Poisson(lambda) < j]`.
pub fn psi_lt(j: usize, lambda: f64) -> Result<f64, NumericsError> {
    Ok(PoissonTail::new(lambda)?.lt(j))
}

/// Falling factorial `[j]_l = j (j-1) ... (j-l+1)`, zero when `j < l`.
pub fn falling_factorial(j: usize, l: usize) -> f64 {
    if j < l {
        return 0.0;
    }
    (0..l).map(|i| (j - i) as f64).product()
}

/// Poisson(lambda) conditioned on being at least `ell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedPoisson {
    ell: usize,
    lambda: f64,
}

impl TruncatedPoisson {
    pub fn new(ell: usize, lambda: f64) -> Result<Self, NumericsError> {
        if ell == 0 {
            return Err(NumericsError::Domain("truncation point must be >= 1".into()));
        }
        check_rate(lambda)?;
        if lambda == 0.0 {
            return Err(NumericsError::Domain(
                "truncated Poisson needs a positive rate".into(),
            ));
        }
        Ok(Self { ell, lambda })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pmf(&self, j: usize) -> f64 {
        if j < self.ell {
            return 0.0;
        }
        let p = PoissonTail::unchecked(self.lambda);
        p.pmf(j) / p.ge(self.ell)
    }

    /// `E[Z] = lambda * Psi_{>=ell-1}(lambda) / Psi_{>=ell}(lambda)`.
    pub fn mean(&self) -> f64 {
        let p = PoissonTail::unchecked(self.lambda);
        self.lambda * p.ge(self.ell - 1) / p.ge(self.ell)
    }

    /// Cumulative table `Pr[Z <= ell + i]` up to where the tail is negligible.
    pub fn cdf_table(&self) -> Vec<f64> {
        let p = PoissonTail::unchecked(self.lambda);
        let norm = p.ge(self.ell);
        let mut table = Vec::new();
        let mut acc = 0.0;
        let mut j = self.ell;
        loop {
            acc += p.pmf(j) / norm;
            table.push(acc.min(1.0));
            if (j as f64) > self.lambda && 1.0 - acc < 1e-16 {
                break;
            }
            if table.len() > 100_000 {
                break;
            }
            j += 1;
        }
        if let Some(last) = table.last_mut() {
            *last = 1.0;
        }
        table
    }
}

/// `Pr[Z_ell(lambda) = j]`.
pub fn truncated_poisson_pmf(ell: usize, lambda: f64, j: usize) -> Result<f64, NumericsError> {
    Ok(TruncatedPoisson::new(ell, lambda)?.pmf(j))
}

/// `E[Z_ell(lambda)]`.
pub fn truncated_poisson_mean(ell: usize, lambda: f64) -> Result<f64, NumericsError> {
    Ok(TruncatedPoisson::new(ell, lambda)?.mean())
}

/// Finds the rate whose `ell`-truncated mean equals `target_mean`.
///
/// The truncated mean increases from `ell` (as the rate goes to zero) and
/// always exceeds the rate, so `[0, target_mean]` brackets the root.
pub fn truncated_poisson_solve_lambda(ell: usize, target_mean: f64) -> Result<f64, NumericsError> {
    if ell == 0 {
        return Err(NumericsError::Domain("truncation point must be >= 1".into()));
    }
    if !target_mean.is_finite() || target_mean <= ell as f64 {
        return Err(NumericsError::Domain(format!(
            "target mean {target_mean} must exceed the truncation point {ell}"
        )));
    }
    let mean_at = |lambda: f64| TruncatedPoisson { ell, lambda }.mean();
    let (mut lo, mut hi) = (0.0_f64, target_mean);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        if mid <= 0.0 {
            lo = f64::MIN_POSITIVE;
            continue;
        }
        let f = mean_at(mid) - target_mean;
        if f.abs() <= 1e-12 || hi - lo < 1e-15 * target_mean {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive forward summation of point masses, fifty terms.
    fn series_ge(j: usize, lambda: f64) -> f64 {
        let mut term = (-lambda).exp();
        let mut below = 0.0;
        for i in 0..j {
            below += term;
            term *= lambda / (i + 1) as f64;
        }
        let mut total = below;
        let mut t = term;
        let mut above = 0.0;
        for i in j..j + 50 {
            above += t;
            t *= lambda / (i + 1) as f64;
        }
        total += above;
        debug_assert!((total - 1.0).abs() < 1e-9);
        above
    }

    #[test]
    fn point_values() {
        assert_eq!(psi(0, 0.0).unwrap(), 1.0);
        assert_eq!(psi(3, 0.0).unwrap(), 0.0);
        assert!((psi_ge(1, 2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        let expected = series_ge(2, 3.0);
        assert!((expected - (1.0 - 4.0 * (-3.0f64).exp())).abs() < 1e-14);
        assert!((psi_ge(2, 3.0).unwrap() - expected).abs() < 1e-14);
        assert!((psi_ge(2, 3.0).unwrap() - 0.800852).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(psi(1, -0.5).is_err());
        assert!(psi_ge(1, f64::NAN).is_err());
        assert!(psi_lt(1, f64::INFINITY).is_err());
        assert!(TruncatedPoisson::new(0, 1.0).is_err());
        assert!(TruncatedPoisson::new(2, 0.0).is_err());
    }

    #[test]
    fn tails_match_series_up_to_large_rates() {
        for &lambda in &[0.01, 0.5, 3.0, 7.5, 20.0, 60.0, 100.0] {
            let p = PoissonTail::new(lambda).unwrap();
            for j in [0usize, 1, 2, 5, 10, 30, 80, 120] {
                // fifty forward terms only cover the mass for modest rates
                if lambda <= 7.5 {
                    let s = series_ge(j, lambda);
                    assert!((p.ge(j) - s).abs() < 1e-12, "lambda={lambda} j={j}");
                }
                assert!((p.ge(j) + p.lt(j) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(truncated_poisson_pmf(3, 1.0, 2).unwrap(), 0.0);
        assert!((truncated_poisson_mean(3, 1e-6).unwrap() - 3.0).abs() < 1e-4);
        let lam = truncated_poisson_solve_lambda(3, 3.5).unwrap();
        assert!((truncated_poisson_mean(3, lam).unwrap() - 3.5).abs() <= 1e-10);
        assert!(truncated_poisson_solve_lambda(3, 3.0).is_err());
        assert!(truncated_poisson_solve_lambda(3, 2.0).is_err());
    }

    #[test]
    fn truncated_pmf_sums_to_one() {
        for &(ell, lambda) in &[(1usize, 0.3), (3, 2.7), (4, 10.0), (7, 1.0)] {
            let z = TruncatedPoisson::new(ell, lambda).unwrap();
            let total: f64 = (0..200).map(|j| z.pmf(j)).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let mean: f64 = (0..200).map(|j| j as f64 * z.pmf(j)).sum();
            assert!((mean - z.mean()).abs() < 1e-9);
            assert!(z.mean() >= ell as f64);
            assert_eq!(*z.cdf_table().last().unwrap(), 1.0);
        }
    }

    #[test]
    fn falling_factorial_identity() {
        // [j]_l Psi_j(lambda) = lambda^l Psi_{j-l}(lambda)
        let p = PoissonTail::new(2.5).unwrap();
        for j in 0..20 {
            for l in 0..=j {
                let lhs = falling_factorial(j, l) * p.pmf(j);
                let rhs = 2.5f64.powi(l as i32) * p.pmf(j - l);
                assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0));
            }
        }
        assert_eq!(falling_factorial(2, 3), 0.0);
        assert_eq!(falling_factorial(5, 0), 1.0);
    }
}
