use crate::error::{ensure_finite, Error, Result};

use super::{RatioBounds, ReferenceDistribution, TruncatedNormal};

/// The JC(β) family over log-ratios on `[-log_span, +log_span]`.
///
/// * β > 0: normal with σ = log_span / β, truncated to the support;
/// * β = 0: uniform on the support;
/// * β < 0: JC(|β|) with each half reflected about ∓log_span / 2, which
///   pushes mass from the centre to the edges.
///
/// Smaller β means larger typical |log-ratio|, i.e. harder positive pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcDistribution {
    beta: f64,
    bounds: RatioBounds,
    // JC(|β|) for β ≠ 0
    kernel: Option<TruncatedNormal>,
}

impl JcDistribution {
    pub fn new(beta: f64, bounds: RatioBounds) -> Result<Self> {
        ensure_finite("beta", beta)?;
        let span = bounds.log_span();
        let kernel = if beta == 0.0 {
            None
        } else {
            let sigma = span / beta.abs();
            Some(
                TruncatedNormal::new(0.0, sigma, -span, span).map_err(|e| match e {
                    Error::Parameter { reason, .. } => Error::param("beta", reason),
                    other => other,
                })?,
            )
        };
        Ok(Self {
            beta,
            bounds,
            kernel,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn bounds(&self) -> RatioBounds {
        self.bounds
    }

    pub fn log_span(&self) -> f64 {
        self.bounds.log_span()
    }

    /// One draw from a single uniform `u` in (0, 1).
    ///
    /// For β < 0 the flip is applied to the JC(|β|) draw from the same `u`,
    /// so every β consumes exactly one uniform.
    pub fn sample(&self, u: f64) -> f64 {
        let span = self.log_span();
        match self.kernel {
            None => (-span + 2.0 * span * u).clamp(-span, span),
            Some(ref tn) if self.beta > 0.0 => tn.sample(u),
            Some(ref tn) => reflect_halves(tn.sample(u), span),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let span = self.log_span();
        if !(-span..=span).contains(&x) {
            return 0.0;
        }
        match self.kernel {
            None => 0.5 / span,
            Some(ref tn) if self.beta > 0.0 => tn.pdf(x),
            // the reflection is its own inverse on each half
            Some(ref tn) => tn.pdf(reflect_halves(x, span)),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let span = self.log_span();
        if x <= -span {
            return 0.0;
        }
        if x >= span {
            return 1.0;
        }
        match self.kernel {
            None => (x + span) / (2.0 * span),
            Some(ref tn) if self.beta > 0.0 => tn.cdf(x),
            Some(ref tn) => {
                // P(flip(Y) ≤ x) split by half: the left half maps
                // [-span, 0) onto (-span, 0], the right [0, span] onto [0, span].
                if x < 0.0 {
                    (0.5 - tn.cdf(-span - x)).max(0.0)
                } else {
                    (1.5 - tn.cdf(span - x)).min(1.0)
                }
            }
        }
    }

    /// E|log-ratio| in closed form.
    pub fn mean_abs(&self) -> f64 {
        let span = self.log_span();
        match self.kernel {
            None => 0.5 * span,
            Some(ref tn) if self.beta > 0.0 => tn.symmetric_mean_abs_deviation(),
            Some(ref tn) => span - tn.symmetric_mean_abs_deviation(),
        }
    }
}

/// y < 0 ⇒ −span − y; y ≥ 0 ⇒ span − y.
#[inline]
pub(crate) fn reflect_halves(y: f64, span: f64) -> f64 {
    if y < 0.0 {
        -span - y
    } else {
        span - y
    }
}

/// Checked single draw; rejects `u` outside (0, 1).
pub fn jc_sample(dist: &JcDistribution, u: f64) -> Result<f64> {
    ensure_finite("u", u)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::param(
            "u",
            format!("must lie in the open unit interval, got {u}"),
        ));
    }
    Ok(dist.sample(u))
}

pub fn jc_pdf(dist: &JcDistribution, x: f64) -> f64 {
    dist.pdf(x)
}

impl ReferenceDistribution for JcDistribution {
    fn cdf(&self, x: f64) -> f64 {
        JcDistribution::cdf(self, x)
    }

    fn pdf(&self, x: f64) -> f64 {
        JcDistribution::pdf(self, x)
    }

    fn support(&self) -> (f64, f64) {
        (-self.log_span(), self.log_span())
    }

    fn describe(&self) -> String {
        format!("JC(beta={}) over +/-{:.6}", self.beta, self.log_span())
    }
}
