use super::{absorption_law, expected, AbsorptionLaw};
use crate::combinatorics::ExactValue;
use crate::error::Result;
use crate::schemes::{Scheme, SystemParams};

/// How [`variance_approx`] obtained its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarianceMethod {
    /// A single requested file under the local scheme: the draw count is
    /// exactly a sum of independent geometric waits with success
    /// probabilities `(n - i) / mn`, so the variance is their sum.
    IndependentGeometricSum,
    /// `E[ν²] ≈ Σ_b Pr[b] (Var T(b) + E[T(b)]²)` over the absorption law.
    /// This ignores how conditioning on the stopping level reshapes `T(b)`;
    /// it is an input to the normal approximation, not the true variance.
    GeometricMixtureSubstitution,
}

impl VarianceMethod {
    pub fn label(&self) -> &'static str {
        match self {
            VarianceMethod::IndependentGeometricSum => "independent geometric sum",
            VarianceMethod::GeometricMixtureSubstitution => "geometric-mixture substitution",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianceApprox {
    pub value: ExactValue,
    pub method: VarianceMethod,
}

/// Variance fed to the normal approximation of the draw count.
pub fn variance_approx(scheme: &Scheme, params: &SystemParams, budget: u64) -> Result<VarianceApprox> {
    scheme.validate(params)?;
    if matches!(scheme, Scheme::LocalMds) && params.a == 1 {
        let SystemParams { n, k, m, .. } = *params;
        let pool = u64::from(m * n);
        let value = (0..u64::from(k))
            .map(|i| {
                let left = u64::from(n) - i;
                ExactValue::new(pool * (pool - left), left * left)
            })
            .sum::<Result<ExactValue>>()?;
        return Ok(VarianceApprox { value, method: VarianceMethod::IndependentGeometricSum });
    }
    let law = absorption_law(scheme, params, budget)?;
    let mean = expected(scheme, params, budget)?;
    Ok(VarianceApprox { value: mixture_variance(&law, &mean)?, method: VarianceMethod::GeometricMixtureSubstitution })
}

fn mixture_variance(law: &AbsorptionLaw, mean: &ExactValue) -> Result<ExactValue> {
    Ok(law.second_moment_approx()? - mean * mean)
}
