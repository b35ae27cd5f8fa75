//! Richardson extrapolation of two first-order simplex gradients.

use crate::error::{Error, Result};
use crate::gradient::{aligned_gradient, sample_aligned, GradientEstimate};
use crate::simplex::{AlignedRegularSimplex, Orientation};

/// Pair of radii `h1`, `h2 = ηh1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolationPlan {
    h1: f64,
    h2: f64,
    eta: f64,
}

impl ExtrapolationPlan {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if h1 == 0.0 || h2 == 0.0 || !h1.is_finite() || !h2.is_finite() {
            return Err(Error::DegenerateExtrapolation(format!(
                "radii must be finite and nonzero, got h1 = {h1}, h2 = {h2}"
            )));
        }
        if h1 == h2 {
            return Err(Error::DegenerateExtrapolation(format!(
                "h1 and h2 must differ (both {h1})"
            )));
        }
        Ok(Self {
            h1,
            h2,
            eta: h2 / h1,
        })
    }

    /// `h2 = eta·h1`; `eta` must not be 0 or 1.
    pub fn from_eta(h1: f64, eta: f64) -> Result<Self> {
        if eta == 1.0 {
            return Err(Error::DegenerateExtrapolation("eta must not be 1".into()));
        }
        Self::new(h1, eta * h1)
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Weights `(h2/(h2−h1), −h1/(h2−h1))` applied to `g1` and `g2`.
    ///
    /// Equal to `(η/(η−1), −1/(η−1))`; they sum to one.
    pub fn weights(&self) -> (f64, f64) {
        let d = self.h2 - self.h1;
        (self.h2 / d, -self.h1 / d)
    }
}

/// `g12 = (h2·g1 − h1·g2)/(h2 − h1)`.
pub fn richardson(g1: &[f64], h1: f64, g2: &[f64], h2: f64) -> Result<GradientEstimate> {
    if g1.len() != g2.len() {
        return Err(Error::Dimension(format!(
            "gradients have lengths {} and {}",
            g1.len(),
            g2.len()
        )));
    }
    let plan = ExtrapolationPlan::new(h1, h2)?;
    let (w1, w2) = plan.weights();
    let g = g1.iter().zip(g2).map(|(a, b)| w1 * a + w2 * b).collect();
    Ok(GradientEstimate::second_order(g, h1, h2))
}

/// Result of [`extrapolated_gradient`] with the two first-order stages kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub g1: GradientEstimate,
    pub g2: GradientEstimate,
    pub g12: GradientEstimate,
}

/// Second-order gradient at `x0` from aligned simplexes of radius `h1` and `h2`.
///
/// Evaluates `f` at the `n+1` vertices for `h1`, then the `n+1` vertices for
/// `h2`, each in index order, for `2(n+1)` evaluations in total. A negative
/// `h2` uses the simplex rotated by 180° about `x0`.
pub fn extrapolated_gradient<F, E>(
    mut f: F,
    x0: &[f64],
    h1: f64,
    h2: f64,
    orientation: Orientation,
) -> Result<Extrapolation>
where
    F: FnMut(&[f64]) -> std::result::Result<f64, E>,
    E: Into<Box<dyn std::error::Error + Send + Sync>>,
{
    let plan = ExtrapolationPlan::new(h1, h2)?;
    let s1 = AlignedRegularSimplex::new(x0.to_vec(), plan.h1(), orientation)?;
    let g1 = aligned_gradient(&s1, &sample_aligned(&s1, &mut f)?)?;
    let s2 = s1.with_radius(plan.h2())?;
    let g2 = aligned_gradient(&s2, &sample_aligned(&s2, &mut f)?)?;
    let g12 = richardson(&g1.g, plan.h1(), &g2.g, plan.h2())?;
    Ok(Extrapolation { g1, g2, g12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradient::Order;
    use crate::testbed::rosenbrock;
    use std::convert::Infallible;

    fn rosen(x: &[f64]) -> std::result::Result<f64, Infallible> {
        Ok(rosenbrock(x).unwrap())
    }

    #[test]
    fn combination_halved_radius() {
        let g1 = [-0.095750884326868, -0.017496117072893];
        let g2 = [0.049842074409398, -0.007735568480143];
        let g12 = richardson(&g1, 1e-3, &g2, 5e-4).unwrap();
        assert_eq!(g12.order, Order::SecondOrder);
        assert_eq!(g12.h_used, vec![1e-3, 5e-4]);
        assert!((g12.g[0] - 0.195435033145664).abs() < 1e-12);
        assert!((g12.g[1] - 0.002024980112607).abs() < 1e-12);
    }

    #[test]
    fn combination_reversed_radius() {
        let g1 = [-0.200206828472801, -0.000047729764447];
        let g2 = [-0.199896585549141, 0.000023864840841];
        let g12 = richardson(&g1, 1e-6, &g2, -5e-7).unwrap();
        assert!((g12.g[0] - -0.199999999857027).abs() < 1e-12);
        assert!((g12.g[1] - -0.000000000027588).abs() < 1e-12);
    }

    #[test]
    fn constant_gradients_are_preserved() {
        let c = [3.5, -1.25, 1e-7];
        for (h1, h2) in [(1e-3, 5e-4), (1.0, -0.5), (0.1, 0.3)] {
            let g = richardson(&c, h1, &c, h2).unwrap().g;
            for (a, b) in g.iter().zip(&c) {
                assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs());
            }
        }
    }

    #[test]
    fn weights_sum_to_one() {
        for (h1, eta) in [
            (1e-3, 0.5),
            (1e-6, -0.5),
            (0.2, 3.0),
            (7.0, 1e-3),
            (1.0, -10.0),
        ] {
            let p = ExtrapolationPlan::from_eta(h1, eta).unwrap();
            let (w1, w2) = p.weights();
            assert!((w1 + w2 - 1.0).abs() <= 1e-15);
            assert!((w1 - eta / (eta - 1.0)).abs() <= 1e-14 * w1.abs().max(1.0));
            assert!((p.eta() * p.h1() - p.h2()).abs() <= f64::EPSILON * p.h2().abs());
        }
    }

    #[test]
    fn degenerate_plans() {
        assert!(matches!(
            ExtrapolationPlan::from_eta(1e-3, 1.0),
            Err(Error::DegenerateExtrapolation(_))
        ));
        assert!(matches!(
            richardson(&[1.0], 0.1, &[2.0], 0.1),
            Err(Error::DegenerateExtrapolation(_))
        ));
        assert!(ExtrapolationPlan::new(0.0, 1.0).is_err());
        assert!(ExtrapolationPlan::from_eta(1.0, 0.0).is_err());
        assert!(matches!(
            richardson(&[1.0], 0.1, &[2.0, 3.0], 0.2),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn swap_symmetry() {
        let g1 = [0.3, -2.0, 11.0];
        let g2 = [0.1, 4.0, -1.0];
        for (h1, h2) in [(1e-3, 5e-4), (1e-6, -5e-7), (0.25, 2.0)] {
            assert_eq!(
                richardson(&g1, h1, &g2, h2).unwrap().g,
                richardson(&g2, h2, &g1, h1).unwrap().g
            );
        }
    }

    #[test]
    fn full_algorithm_reference_values() {
        let x0 = [1.1, 1.1f64.powi(2) + 1e-5];
        let e = extrapolated_gradient(rosen, &x0, 1e-3, 5e-4, Orientation::Plus).unwrap();
        assert!((e.g12.g[0] - 0.195435033145664).abs() < 1e-9);
        assert!((e.g12.g[1] - 0.002024980112607).abs() < 1e-9);

        let e = extrapolated_gradient(rosen, &[0.9, 0.81], 1e-6, -5e-7, Orientation::Plus).unwrap();
        assert!((e.g2.g[0] - -0.199896585549141).abs() < 1e-9);
        assert!((e.g2.g[1] - 0.000023864840841).abs() < 1e-9);
        assert!((e.g12.g[0] - -0.199999999857027).abs() < 1e-9);
        assert!((e.g12.g[1] - -0.000000000027588).abs() < 1e-9);
    }

    #[test]
    fn evaluation_count_and_order() {
        let n = 6;
        let x0: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        let s1 = AlignedRegularSimplex::new(x0.clone(), 0.02, Orientation::Minus).unwrap();
        let s2 = s1.with_radius(0.01).unwrap();
        let mut expected = Vec::new();
        for s in [&s1, &s2] {
            for j in 1..=n + 1 {
                expected.push(s.vertex(j).unwrap());
            }
        }
        let mut seen = Vec::new();
        extrapolated_gradient(
            |x: &[f64]| {
                seen.push(x.to_vec());
                Ok::<_, Infallible>(x.iter().map(|v| v.exp()).sum())
            },
            &x0,
            0.02,
            0.01,
            Orientation::Minus,
        )
        .unwrap();
        assert_eq!(seen.len(), 2 * (n + 1));
        assert_eq!(seen, expected);
    }

    #[test]
    fn negative_radius_uses_reversed_arms() {
        let x0 = [0.9, 0.81, -0.2];
        let mut seen = Vec::new();
        extrapolated_gradient(
            |x: &[f64]| {
                seen.push(x.to_vec());
                Ok::<_, Infallible>(x.iter().sum())
            },
            &x0,
            1e-2,
            -5e-3,
            Orientation::Plus,
        )
        .unwrap();
        for j in 0..4 {
            let arm = crate::simplex::arm(3, Orientation::Plus, j + 1).unwrap();
            for i in 0..3 {
                let want = x0[i] + (-5e-3) * arm[i];
                assert_eq!(seen[4 + j][i], want);
                // opposite side of x0 from the h1 vertex
                assert!((seen[4 + j][i] - x0[i]) * (seen[j][i] - x0[i]) <= 0.0);
            }
        }
    }

    #[test]
    fn evaluator_failure_is_propagated() {
        let mut calls = 0;
        let err = extrapolated_gradient(
            |_x: &[f64]| {
                calls += 1;
                if calls > 4 {
                    Err(format!("call {calls} failed"))
                } else {
                    Ok(0.0)
                }
            },
            &[0.0, 0.0],
            0.1,
            0.05,
            Orientation::Minus,
        )
        .unwrap_err();
        // second stage, its second vertex
        assert!(matches!(err, Error::Evaluation { vertex: 2, .. }));
    }

    #[test]
    fn quadratic_is_exact() {
        // f = xᵀAx + bᵀx with symmetric A
        let a = [[2.0, 0.5, -0.3], [0.5, 1.0, 0.2], [-0.3, 0.2, 3.0]];
        let b = [1.0, -2.0, 0.5];
        let f = |x: &[f64]| {
            let mut v = 0.0;
            for i in 0..3 {
                v += b[i] * x[i];
                for j in 0..3 {
                    v += x[i] * a[i][j] * x[j];
                }
            }
            Ok::<_, Infallible>(v)
        };
        let x0 = [0.4, -1.1, 0.8];
        for o in [Orientation::Minus, Orientation::Plus] {
            let e = extrapolated_gradient(f, &x0, 1e-2, 5e-3, o).unwrap();
            for i in 0..3 {
                let grad: f64 = b[i] + 2.0 * (0..3).map(|j| a[i][j] * x0[j]).sum::<f64>();
                assert!((e.g12.g[i] - grad).abs() <= 1e-7 * grad.abs(), "{o} {i}");
            }
        }
    }
}
