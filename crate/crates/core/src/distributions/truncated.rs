use crate::error::{ensure_finite, Error, Result};

use super::normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf};

/// Normal(mu, sigma) restricted and renormalised to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    mu: f64,
    sigma: f64,
    lo: f64,
    hi: f64,
    // standardised bounds
    alpha: f64,
    beta: f64,
    cdf_alpha: f64,
    cdf_beta: f64,
    sf_alpha: f64,
    sf_beta: f64,
    mass: f64,
}

impl TruncatedNormal {
    pub fn new(mu: f64, sigma: f64, lo: f64, hi: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        ensure_finite("sigma", sigma)?;
        ensure_finite("lo", lo)?;
        ensure_finite("hi", hi)?;
        if sigma <= 0.0 {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {sigma}"),
            ));
        }
        if lo >= hi {
            return Err(Error::param(
                "lo",
                format!("lower bound {lo} must be below upper bound {hi}"),
            ));
        }
        let alpha = (lo - mu) / sigma;
        let beta = (hi - mu) / sigma;
        let cdf_alpha = std_normal_cdf(alpha);
        let cdf_beta = std_normal_cdf(beta);
        let sf_alpha = std_normal_sf(alpha);
        let sf_beta = std_normal_sf(beta);
        // Use whichever tail keeps the normaliser free of cancellation.
        let mass = if alpha > 0.0 {
            sf_alpha - sf_beta
        } else {
            cdf_beta - cdf_alpha
        };
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::param(
                "sigma",
                format!("interval [{lo}, {hi}] carries no probability mass under N({mu}, {sigma})"),
            ));
        }
        Ok(Self {
            mu,
            sigma,
            lo,
            hi,
            alpha,
            beta,
            cdf_alpha,
            cdf_beta,
            sf_alpha,
            sf_beta,
            mass,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Inverse-CDF draw from a single uniform `u` in (0, 1).
    ///
    /// The target probability is interpolated on whichever side of the
    /// median it falls, using Φ below and 1 − Φ above, so draws near either
    /// truncation limit keep full relative precision.
    pub fn sample(&self, u: f64) -> f64 {
        let p = self.cdf_alpha + u * (self.cdf_beta - self.cdf_alpha);
        let z = if p <= 0.5 {
            std_normal_quantile(p)
        } else {
            let q = self.sf_beta + (1.0 - u) * (self.sf_alpha - self.sf_beta);
            -std_normal_quantile(q)
        };
        (self.mu + self.sigma * z).clamp(self.lo, self.hi)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            return 0.0;
        }
        std_normal_pdf((x - self.mu) / self.sigma) / (self.sigma * self.mass)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        let z = (x - self.mu) / self.sigma;
        let c = if self.alpha > 0.0 {
            (self.sf_alpha - std_normal_sf(z)) / self.mass
        } else {
            (std_normal_cdf(z) - self.cdf_alpha) / self.mass
        };
        c.clamp(0.0, 1.0)
    }

    /// E|X − mu| for a truncation interval symmetric about mu.
    pub(crate) fn symmetric_mean_abs_deviation(&self) -> f64 {
        debug_assert!((self.alpha + self.beta).abs() < 1e-12);
        2.0 * self.sigma * (std_normal_pdf(0.0) - std_normal_pdf(self.beta)) / self.mass
    }
}

/// One inverse-CDF draw from N(mu, sigma) truncated to `[lo, hi]`.
pub fn truncated_normal_sample(mu: f64, sigma: f64, lo: f64, hi: f64, u: f64) -> Result<f64> {
    ensure_finite("u", u)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::param(
            "u",
            format!("must lie in the open unit interval, got {u}"),
        ));
    }
    Ok(TruncatedNormal::new(mu, sigma, lo, hi)?.sample(u))
}
