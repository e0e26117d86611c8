//! Hypergeometric point probabilities and the Poisson mode bound.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::combin::binomial_big;
use crate::error::{invalid, Result};
use crate::exact::{ratio_big, to_f64};

/// Draw `draws` balls without replacement from `population` balls of which `special`
/// are marked; `I` counts marked balls drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergeomSpec {
    pub population: u64,
    pub special: u64,
    pub draws: u64,
}

impl HypergeomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.special > self.population || self.draws > self.population {
            return Err(invalid(format!(
                "hypergeometric spec needs special <= population and draws <= population, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.draws as f64 * self.special as f64 / self.population as f64
    }

    /// Expected number of unmarked balls drawn.
    pub fn mean_unmarked(&self) -> f64 {
        self.draws as f64 - self.mean()
    }

    pub fn variance(&self) -> f64 {
        let (n, t, m) = (self.population as f64, self.special as f64, self.draws as f64);
        if self.population < 2 {
            return 0.0;
        }
        m * (t / n) * (1.0 - t / n) * (n - m) / (n - 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergeomPmf {
    pub spec: HypergeomSpec,
    /// Smallest value in the support, `max(0, m - (N - t))`.
    pub min: u64,
    /// `probs[j] = Pr[I = min + j]`.
    pub probs: Vec<BigRational>,
    /// Smallest mode.
    pub argmax: u64,
    pub max: BigRational,
}

impl HypergeomPmf {
    pub fn prob(&self, i: u64) -> BigRational {
        i.checked_sub(self.min)
            .and_then(|j| self.probs.get(j as usize))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |a, p| a + p)
    }

    /// Non-decreasing up to the mode, non-increasing after it.
    pub fn is_unimodal(&self) -> bool {
        let peak = (self.argmax - self.min) as usize;
        self.probs[..=peak].windows(2).all(|w| w[0] <= w[1]) && self.probs[peak..].windows(2).all(|w| w[0] >= w[1])
    }
}

/// Exact hypergeometric law `Pr[I = i] = C(t, i) C(N - t, m - i) / C(N, m)`.
pub fn hypergeom_pmf(spec: HypergeomSpec) -> Result<HypergeomPmf> {
    spec.validate()?;
    let HypergeomSpec {
        population: n,
        special: t,
        draws: m,
    } = spec;
    let lo = m.saturating_sub(n - t);
    let hi = m.min(t);
    let total = binomial_big(n, m);
    // walk the numerators C(t, i) C(N - t, m - i) by ratio updates
    let mut a = binomial_big(t, lo);
    let mut b = binomial_big(n - t, m - lo);
    let mut counts: Vec<BigUint> = Vec::with_capacity((hi - lo + 1) as usize);
    for i in lo..=hi {
        counts.push(&a * &b);
        if i < hi {
            a = a * (t - i) / (i + 1);
            let j = m - i; // current second index, moving to j - 1
            b = b * j / (n - t - j + 1);
        }
    }
    let (best, _) = counts
        .iter()
        .enumerate()
        .fold((0usize, &counts[0]), |(bi, bc), (i, c)| if c > bc { (i, c) } else { (bi, bc) });
    let probs: Vec<BigRational> = counts.iter().map(|c| ratio_big(c, &total)).collect();
    Ok(HypergeomPmf {
        spec,
        min: lo,
        argmax: lo + best as u64,
        max: probs[best].clone(),
        probs,
    })
}

/// `max_i Pr[I = i]` against the local-limit value `1 / sqrt(2 pi sigma^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiConcentration {
    pub spec: HypergeomSpec,
    pub max_prob: f64,
    pub local_limit: f64,
    /// `max_prob / local_limit`.
    pub ratio: f64,
}

pub fn anti_concentration(spec: HypergeomSpec) -> Result<AntiConcentration> {
    let pmf = hypergeom_pmf(spec)?;
    let var = spec.variance();
    let local_limit = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
    let max_prob = to_f64(&pmf.max);
    Ok(AntiConcentration {
        spec,
        max_prob,
        local_limit,
        ratio: max_prob / local_limit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonModeBound {
    pub d: u64,
    /// `d^d e^(-d) / d!`.
    pub value: f64,
    pub ln_value: f64,
    /// Whether `lambda -> lambda^d e^(-lambda) / d!` is no larger at `d ± eps` than at `d`.
    pub maximized_at_d: bool,
}

fn ln_poisson(d: u64, lambda: f64) -> f64 {
    d as f64 * lambda.ln() - lambda - ln_gamma(d as f64 + 1.0)
}

/// The largest value a Poisson point probability `Pr[Po(lambda) = d]` can take over
/// `lambda > 0`, computed in log space.
pub fn poisson_mode_bound(d: u64) -> Result<PoissonModeBound> {
    if d == 0 {
        return Err(invalid("the Poisson mode bound needs d >= 1"));
    }
    let ln_value = ln_poisson(d, d as f64);
    let eps = 1e-3 * (d as f64).max(1.0);
    let maximized_at_d = ln_poisson(d, d as f64 - eps) <= ln_value && ln_poisson(d, d as f64 + eps) <= ln_value;
    Ok(PoissonModeBound {
        d,
        value: ln_value.exp(),
        ln_value,
        maximized_at_d,
    })
}

/// `Pr[Po(lambda) = d]` for reporting alongside the bound.
pub fn poisson_point(d: u64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    ln_poisson(d, lambda).exp()
}
