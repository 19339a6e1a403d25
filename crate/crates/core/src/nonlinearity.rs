//! Componentwise nonlinearity families with first and second derivatives.
//!
//! Only closed-form families are constructible so that instances can be
//! serialized into benchmark configs and the analytic hypotheses stay
//! decidable:
//!
//! * `cubic(k)`: `f_i(t) = k_i t^3`
//! * `power(k, p)`: `f_i(t) = k_i t^{p_i}` with `p_i > 2`, so that
//!   `f''(t) = k p (p-1) t^{p-2} > 0` on all of `(0, inf)`; `p = 3`
//!   reproduces the cubic.
//!
//! Both satisfy, for `t > 0`: `f(t)/t -> 0` as `t -> 0`, `f(t)/t -> inf` as
//! `t -> inf`, and `f''(t) > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coefficient that is either one scalar broadcast to every component or
/// an explicit per-component array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Scalar(f64),
    PerComponent(Vec<f64>),
}

impl Param {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        match self {
            Param::Scalar(v) => *v,
            Param::PerComponent(vs) => vs[i],
        }
    }

    fn explicit_len(&self) -> Option<usize> {
        match self {
            Param::Scalar(_) => None,
            Param::PerComponent(vs) => Some(vs.len()),
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            Param::Scalar(v) => std::slice::from_ref(v),
            Param::PerComponent(vs) => vs,
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Scalar(v)
    }
}

impl From<Vec<f64>> for Param {
    fn from(vs: Vec<f64>) -> Self {
        Param::PerComponent(vs)
    }
}

/// Componentwise nonlinearity `F(x) = (f_1(x_1), ..., f_n(x_n))`.
///
/// Serialized as `{"kind":"cubic","k":1.0}` or
/// `{"kind":"power","k":1.0,"p":3.0}`; values deserialized from configs must
/// be checked with [`Nonlinearity::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Nonlinearity {
    Cubic { k: Param },
    Power { k: Param, p: Param },
}

impl Nonlinearity {
    /// `f(t) = k t^3` with scalar `k > 0`.
    pub fn cubic(k: impl Into<Param>) -> Result<Self> {
        let nl = Nonlinearity::Cubic { k: k.into() };
        nl.validate()?;
        Ok(nl)
    }

    /// `f(t) = k t^p` with `k > 0` and `p > 2`.
    pub fn power(k: impl Into<Param>, p: impl Into<Param>) -> Result<Self> {
        let nl = Nonlinearity::Power {
            k: k.into(),
            p: p.into(),
        };
        nl.validate()?;
        Ok(nl)
    }

    /// Checks the family invariants (`k > 0`, and `p > 2` for the power
    /// family). Needed after deserialization, which bypasses constructors.
    pub fn validate(&self) -> Result<()> {
        let check_positive = |param: &Param, name: &str| -> Result<()> {
            if param.values().is_empty() {
                return Err(Error::InvalidParameter(format!("{name} must be nonempty")));
            }
            for &v in param.values() {
                // rejects NaN along with nonpositive values
                if v <= 0.0 || v.is_nan() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must be positive, got {v}"
                    )));
                }
            }
            Ok(())
        };
        match self {
            Nonlinearity::Cubic { k } => check_positive(k, "cubic coefficient k"),
            Nonlinearity::Power { k, p } => {
                check_positive(k, "power coefficient k")?;
                for &v in p.values() {
                    if v <= 2.0 || v.is_nan() {
                        return Err(Error::InvalidParameter(format!(
                            "power exponent p must exceed 2 so that f'' > 0 on (0, inf), got {v}"
                        )));
                    }
                }
                if let (Some(a), Some(b)) = (k.explicit_len(), p.explicit_len()) {
                    if a != b {
                        return Err(Error::DimensionMismatch {
                            expected: a,
                            got: b,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Errors unless per-component parameter arrays have length `n`.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        let params: &[&Param] = match self {
            Nonlinearity::Cubic { k } => &[k],
            Nonlinearity::Power { k, p } => &[k, p],
        };
        for param in params {
            if let Some(len) = param.explicit_len() {
                if len != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: len,
                    });
                }
            }
        }
        Ok(())
    }

    /// Number of distinct component functions (1 for scalar parameters).
    fn component_count(&self) -> usize {
        match self {
            Nonlinearity::Cubic { k } => k.explicit_len().unwrap_or(1),
            Nonlinearity::Power { k, p } => k
                .explicit_len()
                .or(p.explicit_len())
                .unwrap_or(1),
        }
    }

    #[inline]
    fn value_at(&self, i: usize, t: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { k } => k.get(i) * t * t * t,
            Nonlinearity::Power { k, p } => k.get(i) * t.powf(p.get(i)),
        }
    }

    #[inline]
    fn derivative_at(&self, i: usize, t: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { k } => 3.0 * k.get(i) * t * t,
            Nonlinearity::Power { k, p } => {
                let pi = p.get(i);
                k.get(i) * pi * t.powf(pi - 1.0)
            }
        }
    }

    #[inline]
    fn second_derivative_at(&self, i: usize, t: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { k } => 6.0 * k.get(i) * t,
            Nonlinearity::Power { k, p } => {
                let pi = p.get(i);
                k.get(i) * pi * (pi - 1.0) * t.powf(pi - 2.0)
            }
        }
    }

    /// Componentwise `f_i(x_i)`.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.assert_dim(x.len());
        x.iter()
            .enumerate()
            .map(|(i, &t)| self.value_at(i, t))
            .collect()
    }

    /// Componentwise `f_i'(x_i)`.
    pub fn derivative(&self, x: &[f64]) -> Vec<f64> {
        self.assert_dim(x.len());
        x.iter()
            .enumerate()
            .map(|(i, &t)| self.derivative_at(i, t))
            .collect()
    }

    /// Componentwise `f_i''(x_i)`.
    pub fn second_derivative(&self, x: &[f64]) -> Vec<f64> {
        self.assert_dim(x.len());
        x.iter()
            .enumerate()
            .map(|(i, &t)| self.second_derivative_at(i, t))
            .collect()
    }

    /// Second directional derivative `f''(x) .* y .* z`, the bilinear form
    /// of the residual map applied to directions `y` and `z`.
    pub fn second_directional_derivative(
        &self,
        x: &[f64],
        y: &[f64],
        z: &[f64],
    ) -> Result<Vec<f64>> {
        if y.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if z.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: z.len(),
            });
        }
        // f2 * (y * z): grouping the direction product keeps the result
        // bitwise symmetric in (y, z)
        Ok(self
            .second_derivative(x)
            .iter()
            .zip(y)
            .zip(z)
            .map(|((&f2, &yi), &zi)| f2 * (yi * zi))
            .collect())
    }

    fn assert_dim(&self, n: usize) {
        if let Some(len) = match self {
            Nonlinearity::Cubic { k } => k.explicit_len(),
            Nonlinearity::Power { k, p } => k.explicit_len().or(p.explicit_len()),
        } {
            assert_eq!(
                len, n,
                "per-component parameter length {len} does not match input length {n}"
            );
        }
    }
}

/// Finite-sample stand-in for the vanishing-ratio limit at the origin.
pub const RATIO_FLOOR: f64 = 1e-4;

/// Finite-sample stand-in for the unbounded-ratio limit at infinity.
pub const RATIO_CEILING: f64 = 1e4;

/// Per-sample record of the analytic hypotheses the convergence theory
/// needs.
///
/// The two limit conditions are asymptotic and not finitely checkable; the
/// `ratio_vanishes_at_origin` / `ratio_grows_unbounded` fields are explicit
/// finite-sample surrogates (thresholds [`RATIO_FLOOR`] and
/// [`RATIO_CEILING`]), heuristics rather than proofs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub samples: Vec<f64>,
    /// Pairwise strict increase of `f(t)/t` between consecutive samples,
    /// for every component.
    pub ratio_strictly_increasing: Vec<bool>,
    /// `f'(t) > f(t)/t` at each sample, for every component.
    pub derivative_exceeds_ratio: Vec<bool>,
    /// `f''(t) > 0` at each sample, for every component.
    pub second_derivative_positive: Vec<bool>,
    /// `f(t_min)/t_min < RATIO_FLOOR` for every component.
    pub ratio_vanishes_at_origin: bool,
    /// `f(t_max)/t_max > RATIO_CEILING` for every component.
    pub ratio_grows_unbounded: bool,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.ratio_strictly_increasing.iter().all(|&b| b)
            && self.derivative_exceeds_ratio.iter().all(|&b| b)
            && self.second_derivative_positive.iter().all(|&b| b)
            && self.ratio_vanishes_at_origin
            && self.ratio_grows_unbounded
    }
}

/// Evaluates the analytic hypotheses at the given sample points.
///
/// `t_samples` must be strictly positive and sorted ascending.
pub fn validate_hypotheses(nl: &Nonlinearity, t_samples: &[f64]) -> HypothesisReport {
    assert!(!t_samples.is_empty(), "need at least one sample");
    assert!(
        t_samples.iter().all(|&t| t > 0.0),
        "samples must be strictly positive"
    );
    assert!(
        t_samples.windows(2).all(|w| w[0] < w[1]),
        "samples must be sorted strictly ascending"
    );

    let m = nl.component_count();
    let ratio = |i: usize, t: f64| nl.value_at(i, t) / t;

    let ratio_strictly_increasing = t_samples
        .windows(2)
        .map(|w| (0..m).all(|i| ratio(i, w[0]) < ratio(i, w[1])))
        .collect();
    let derivative_exceeds_ratio = t_samples
        .iter()
        .map(|&t| (0..m).all(|i| nl.derivative_at(i, t) > ratio(i, t)))
        .collect();
    let second_derivative_positive = t_samples
        .iter()
        .map(|&t| (0..m).all(|i| nl.second_derivative_at(i, t) > 0.0))
        .collect();
    let t_min = t_samples[0];
    let t_max = t_samples[t_samples.len() - 1];
    HypothesisReport {
        samples: t_samples.to_vec(),
        ratio_strictly_increasing,
        derivative_exceeds_ratio,
        second_derivative_positive,
        ratio_vanishes_at_origin: (0..m).all(|i| ratio(i, t_min) < RATIO_FLOOR),
        ratio_grows_unbounded: (0..m).all(|i| ratio(i, t_max) > RATIO_CEILING),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_values_and_derivatives() {
        let nl = Nonlinearity::cubic(1.0).unwrap();
        assert_eq!(nl.eval(&[1.0, 2.0]), vec![1.0, 8.0]);
        assert_eq!(nl.eval(&[0.0]), vec![0.0]);
        assert_eq!(nl.derivative(&[2.0]), vec![12.0]);
        assert_eq!(nl.derivative(&[0.0]), vec![0.0]);
        assert_eq!(nl.second_derivative(&[1.0]), vec![6.0]);
        assert_eq!(nl.second_derivative(&[0.0]), vec![0.0]);
    }

    #[test]
    fn power_values_and_derivatives() {
        let nl = Nonlinearity::power(2.0, 4.0).unwrap();
        assert_eq!(nl.eval(&[1.0]), vec![2.0]);
        // p = 3 matches the cubic
        let p3 = Nonlinearity::power(1.0, 3.0).unwrap();
        assert_eq!(p3.derivative(&[1.0, 1.0]), vec![3.0, 3.0]);
        // f''(t) = k p (p-1) t^{p-2} = 12 t^2 for k=1, p=4
        let p4 = Nonlinearity::power(1.0, 4.0).unwrap();
        assert_eq!(p4.second_derivative(&[2.0]), vec![48.0]);
    }

    #[test]
    fn second_directional_derivative_examples() {
        let nl = Nonlinearity::cubic(1.0).unwrap();
        let e = vec![1.0, 1.0];
        assert_eq!(
            nl.second_directional_derivative(&e, &e, &e).unwrap(),
            vec![6.0, 6.0]
        );
        assert_eq!(
            nl.second_directional_derivative(&e, &e, &[0.0, 0.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            nl.second_directional_derivative(&[1.0, 1.0], &[2.0, 0.0], &[1.0, 3.0])
                .unwrap(),
            vec![12.0, 0.0]
        );
        assert!(nl
            .second_directional_derivative(&e, &[1.0], &[1.0, 1.0])
            .is_err());
    }

    #[test]
    fn construction_enforces_hypotheses() {
        assert!(Nonlinearity::cubic(0.0).is_err());
        assert!(Nonlinearity::cubic(-1.0).is_err());
        assert!(Nonlinearity::power(1.0, 2.0).is_err());
        assert!(Nonlinearity::power(1.0, 1.0).is_err());
        assert!(Nonlinearity::power(vec![1.0, 2.0], vec![3.0]).is_err());
        assert!(Nonlinearity::cubic(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn per_component_broadcast() {
        let nl = Nonlinearity::cubic(vec![1.0, 2.0]).unwrap();
        assert_eq!(nl.eval(&[1.0, 1.0]), vec![1.0, 2.0]);
        assert!(nl.check_dim(2).is_ok());
        assert!(nl.check_dim(3).is_err());
    }

    #[test]
    fn hypothesis_report_for_cubic() {
        let nl = Nonlinearity::cubic(1.0).unwrap();
        let report = validate_hypotheses(&nl, &[0.001, 1.0, 1000.0]);
        assert!(report.all_pass());
        // p = 3 power gives the identical report
        let p3 = Nonlinearity::power(1.0, 3.0).unwrap();
        assert_eq!(validate_hypotheses(&p3, &[0.001, 1.0, 1000.0]), report);
    }

    #[test]
    fn hypothesis_report_flags_narrow_sampling() {
        let nl = Nonlinearity::cubic(1.0).unwrap();
        let report = validate_hypotheses(&nl, &[1.0, 2.0]);
        assert!(report.ratio_strictly_increasing.iter().all(|&b| b));
        assert!(!report.ratio_vanishes_at_origin);
        assert!(!report.ratio_grows_unbounded);
        assert!(!report.all_pass());
    }

    #[test]
    fn config_serialization_round_trip() {
        let nl = Nonlinearity::cubic(1.0).unwrap();
        let json = serde_json::to_string(&nl).unwrap();
        assert_eq!(json, r#"{"kind":"cubic","k":1.0}"#);
        assert_eq!(serde_json::from_str::<Nonlinearity>(&json).unwrap(), nl);

        let nl = Nonlinearity::power(1.0, 3.0).unwrap();
        let json = serde_json::to_string(&nl).unwrap();
        assert_eq!(json, r#"{"kind":"power","k":1.0,"p":3.0}"#);
        assert_eq!(serde_json::from_str::<Nonlinearity>(&json).unwrap(), nl);

        // deserialization bypasses the constructors; validate() catches it
        let bad: Nonlinearity =
            serde_json::from_str(r#"{"kind":"power","k":1.0,"p":2.0}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
