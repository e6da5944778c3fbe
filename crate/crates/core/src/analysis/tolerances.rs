use serde::{Deserialize, Serialize};

/// Every threshold used by classification and verification, in one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSet {
    /// Relative spread counted as constant for closed-form profiles.
    pub analytic_spread: f64,
    /// Relative spread counted as constant for estimated apparatus.
    pub estimated_spread: f64,
    /// |τ − τ_G| at or below this is a zero.
    pub zero: f64,
    /// Minimum |slope| of H for a rectifying verdict.
    pub rectifying_slope: f64,
    /// |H′| at or below this makes σ singular.
    pub sigma_singular: f64,
    /// Samples with |τ − τ_G| below this fraction of its maximum are left
    /// out of residuals that divide by τ − τ_G twice.
    pub zero_band: f64,
    /// Residual bound for theorem checks on closed-form profiles.
    pub theorem_analytic: f64,
    /// Residual bound for theorem checks on integrated and estimated curves.
    pub theorem_estimated: f64,
    /// Bound for the rectifying-curve identity a κ² − (τ̄ − τ_G) κ̄² = 0.
    pub rectifying_identity: f64,
    /// Estimated mate tangent against the parent's N or B.
    pub tangent_match: f64,
    /// Estimated conjugate-mate normal against ±N.
    pub bertrand: f64,
    /// Pairwise inner products of the three tangents.
    pub orthogonality: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            analytic_spread: 1e-6,
            estimated_spread: 1e-3,
            zero: 1e-9,
            rectifying_slope: 1e-6,
            sigma_singular: 1e-12,
            zero_band: 1e-2,
            theorem_analytic: 1e-8,
            theorem_estimated: 1e-3,
            rectifying_identity: 1e-9,
            tangent_match: 1e-5,
            bertrand: 1e-4,
            orthogonality: 1e-5,
        }
    }
}

impl ToleranceSet {
    /// Names and values in declaration order.
    pub fn entries(&self) -> [(&'static str, f64); 12] {
        [
            ("analytic_spread", self.analytic_spread),
            ("estimated_spread", self.estimated_spread),
            ("zero", self.zero),
            ("rectifying_slope", self.rectifying_slope),
            ("sigma_singular", self.sigma_singular),
            ("zero_band", self.zero_band),
            ("theorem_analytic", self.theorem_analytic),
            ("theorem_estimated", self.theorem_estimated),
            ("rectifying_identity", self.rectifying_identity),
            ("tangent_match", self.tangent_match),
            ("bertrand", self.bertrand),
            ("orthogonality", self.orthogonality),
        ]
    }

    /// Set one entry by name; `false` if the name is unknown.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "analytic_spread" => &mut self.analytic_spread,
            "estimated_spread" => &mut self.estimated_spread,
            "zero" => &mut self.zero,
            "rectifying_slope" => &mut self.rectifying_slope,
            "sigma_singular" => &mut self.sigma_singular,
            "zero_band" => &mut self.zero_band,
            "theorem_analytic" => &mut self.theorem_analytic,
            "theorem_estimated" => &mut self.theorem_estimated,
            "rectifying_identity" => &mut self.rectifying_identity,
            "tangent_match" => &mut self.tangent_match,
            "bertrand" => &mut self.bertrand,
            "orthogonality" => &mut self.orthogonality,
            _ => return false,
        };
        *slot = value;
        true
    }
}

/// (max − min) / max|x|, or 0 for constant input.
pub fn relative_spread(values: &[f64]) -> f64 {
    let (lo, hi, mag) = values.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64),
        |(lo, hi, mag), &v| (lo.min(v), hi.max(v), mag.max(v.abs())),
    );
    if values.is_empty() || hi == lo {
        0.0
    } else {
        (hi - lo) / mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_of_constants_and_ranges() {
        assert_eq!(relative_spread(&[3.0, 3.0, 3.0]), 0.0);
        assert_eq!(relative_spread(&[0.0, 0.0]), 0.0);
        assert_eq!(relative_spread(&[1.0, 2.0, 4.0]), 0.75);
        assert_eq!(relative_spread(&[-2.0, 1.0]), 1.5);
    }

    #[test]
    fn set_by_name() {
        let mut t = ToleranceSet::default();
        for (name, _) in ToleranceSet::default().entries() {
            assert!(t.set(name, 0.5));
        }
        assert!(t.entries().iter().all(|(_, v)| *v == 0.5));
        assert!(!t.set("nope", 1.0));
    }
}
