use crate::error::{Error, Result};

/// Regularization weights and ADMM schedule for LRDLSR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    /// Weight of the `‖T − (H + B⊙M)‖²` fit term.
    pub alpha: f64,
    /// Weight of the class-wise nuclear norm on `T`.
    pub beta: f64,
    /// Weight of the target energy `‖T‖²`.
    pub gamma: f64,
    /// Ridge weight on `Q`.
    pub lambda: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            alpha: 1.0,
            beta: 0.01,
            gamma: 0.01,
            lambda: 0.01,
            mu0: 1e-5,
            rho: 1.1,
            mu_max: 1e8,
            tol: 1e-6,
            max_iters: 500,
        }
    }
}

impl Hyperparams {
    pub fn with_weights(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> Self {
        Hyperparams {
            alpha,
            beta,
            gamma,
            lambda,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be finite and >= 0, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        non_negative("beta", self.beta)?;
        non_negative("gamma", self.gamma)?;
        positive("lambda", self.lambda)?;
        positive("mu0", self.mu0)?;
        positive("tol", self.tol)?;
        if !(self.rho > 1.0) || !self.rho.is_finite() {
            return Err(Error::Parameter(format!("rho must be > 1, got {}", self.rho)));
        }
        if !(self.mu_max >= self.mu0) || !self.mu_max.is_finite() {
            return Err(Error::Parameter(format!(
                "mu_max must be finite and >= mu0, got {}",
                self.mu_max
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be >= 1".into()));
        }
        Ok(())
    }

    /// Penalty after `k` schedule updates: `min(mu_max, mu0·ρᵏ)`.
    pub fn mu_after(&self, k: usize) -> f64 {
        let mut mu = self.mu0;
        for _ in 0..k {
            mu = (self.rho * mu).min(self.mu_max);
        }
        mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let hp = Hyperparams::default();
        hp.validate().unwrap();
        assert_eq!((hp.mu0, hp.rho, hp.mu_max, hp.tol), (1e-5, 1.1, 1e8, 1e-6));
    }

    #[test]
    fn rejects_out_of_range() {
        let base = Hyperparams::default();
        for hp in [
            Hyperparams { alpha: 0.0, ..base },
            Hyperparams { beta: -1.0, ..base },
            Hyperparams { gamma: f64::NAN, ..base },
            Hyperparams { lambda: 0.0, ..base },
            Hyperparams { rho: 1.0, ..base },
            Hyperparams { tol: 0.0, ..base },
            Hyperparams { max_iters: 0, ..base },
            Hyperparams { mu_max: 1e-6, ..base },
        ] {
            assert!(matches!(hp.validate(), Err(Error::Parameter(_))), "{hp:?}");
        }
        Hyperparams { beta: 0.0, gamma: 0.0, ..base }.validate().unwrap();
    }
}
