//! Test functions, seeded rotated simplexes, Lipschitz estimates and h-sweeps.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extrapolation::{richardson, ExtrapolationPlan};
use crate::gradient::{aligned_gradient, error_bound_centroid, sample_aligned, ErrorBoundInput};
use crate::simplex::{basis_matrix, AlignedRegularSimplex, GeneralRegularSimplex, Orientation};

/// A smooth function with a known gradient.
pub trait TestFunction {
    fn name(&self) -> &str;

    /// Fixed dimension, or `None` for any.
    fn dimension(&self) -> Option<usize>;

    fn eval(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn check_dimension(&self, x: &[f64]) -> Result<()> {
        match self.dimension() {
            Some(d) if d != x.len() => Err(Error::Dimension(format!(
                "{} is defined on R^{d}, got a point in R^{}",
                self.name(),
                x.len()
            ))),
            _ if x.is_empty() => Err(Error::Dimension("empty point".into())),
            _ => Ok(()),
        }
    }
}

fn check_rosenbrock_dim(y: &[f64]) -> Result<()> {
    if y.len() != 2 {
        return Err(Error::Dimension(format!(
            "rosenbrock takes 2 variables, got {}",
            y.len()
        )));
    }
    Ok(())
}

/// `(1 − y₁)² + 100(y₂ − y₁²)²`
pub fn rosenbrock(y: &[f64]) -> Result<f64> {
    check_rosenbrock_dim(y)?;
    Ok((1.0 - y[0]).powi(2) + 100.0 * (y[1] - y[0] * y[0]).powi(2))
}

pub fn rosenbrock_grad(y: &[f64]) -> Result<Vec<f64>> {
    check_rosenbrock_dim(y)?;
    let t = y[1] - y[0] * y[0];
    Ok(vec![-2.0 * (1.0 - y[0]) - 400.0 * y[0] * t, 200.0 * t])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Two-dimensional Rosenbrock function.
    Rosenbrock,
    /// `‖x‖²`
    Sphere,
    /// `Σ i·x_i + 1` (1-based `i`).
    Affine,
    /// `Σ exp(x_i / i)` (1-based `i`).
    ExpSum,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Rosenbrock,
        Builtin::Sphere,
        Builtin::Affine,
        Builtin::ExpSum,
    ];

    /// Infallible evaluator for use with the sampling routines.
    pub fn evaluator(self) -> impl FnMut(&[f64]) -> std::result::Result<f64, Error> {
        move |x| self.eval(x)
    }
}

impl TestFunction for Builtin {
    fn name(&self) -> &str {
        match self {
            Builtin::Rosenbrock => "rosenbrock",
            Builtin::Sphere => "sphere",
            Builtin::Affine => "affine",
            Builtin::ExpSum => "expsum",
        }
    }

    fn dimension(&self) -> Option<usize> {
        match self {
            Builtin::Rosenbrock => Some(2),
            _ => None,
        }
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dimension(x)?;
        Ok(match self {
            Builtin::Rosenbrock => rosenbrock(x)?,
            Builtin::Sphere => x.iter().map(|v| v * v).sum(),
            Builtin::Affine => {
                1.0 + x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * v)
                    .sum::<f64>()
            }
            Builtin::ExpSum => x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / (i + 1) as f64).exp())
                .sum(),
        })
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dimension(x)?;
        Ok(match self {
            Builtin::Rosenbrock => rosenbrock_grad(x)?,
            Builtin::Sphere => x.iter().map(|v| 2.0 * v).collect(),
            Builtin::Affine => (1..=x.len()).map(|i| i as f64).collect(),
            Builtin::ExpSum => x
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let k = (i + 1) as f64;
                    (v / k).exp() / k
                })
                .collect(),
        })
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown test function `{s}`")))
    }
}

/// Central differences of `f.eval` with per-coordinate step `rel_step·(1 + |x_i|)`.
pub fn central_difference_gradient(
    f: &dyn TestFunction,
    x: &[f64],
    rel_step: f64,
) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let step = rel_step * (1.0 + x[i].abs());
        y[i] = x[i] + step;
        let fp = f.eval(&y)?;
        y[i] = x[i] - step;
        let fm = f.eval(&y)?;
        y[i] = x[i];
        g.push((fp - fm) / (2.0 * step));
    }
    Ok(g)
}

/// Hessian by forward differences of the analytic gradient, step `1e-4·(1 + |x_j|)`.
pub fn finite_difference_hessian(f: &dyn TestFunction, x: &[f64]) -> Result<DMatrix<f64>> {
    let n = x.len();
    let g0 = f.gradient(x)?;
    let mut y = x.to_vec();
    let mut hess = DMatrix::zeros(n, n);
    for j in 0..n {
        let step = 1e-4 * (1.0 + x[j].abs());
        y[j] = x[j] + step;
        let gj = f.gradient(&y)?;
        y[j] = x[j];
        for i in 0..n {
            hess[(i, j)] = (gj[i] - g0[i]) / step;
        }
    }
    Ok(hess)
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().max()
}

/// `‖∇²f(x0) − ∇²f(x1)‖₂ / ‖x0 − x1‖₂` with finite-difference Hessians.
pub fn estimate_lipschitz(f: &dyn TestFunction, x0: &[f64], x1: &[f64]) -> Result<f64> {
    if x0.len() != x1.len() {
        return Err(Error::Dimension(format!(
            "points have lengths {} and {}",
            x0.len(),
            x1.len()
        )));
    }
    let dist = DVector::from_iterator(x0.len(), x0.iter().zip(x1).map(|(a, b)| a - b)).norm();
    if dist == 0.0 {
        return Err(Error::InvalidArgument("x0 and x1 must differ".into()));
    }
    let h0 = finite_difference_hessian(f, x0)?;
    let h1 = finite_difference_hessian(f, x1)?;
    Ok(spectral_norm(&(h0 - h1)) / dist)
}

/// Largest Hessian spectral norm over `samples` seeded points in the ball `B(x0; radius)`,
/// plus the centre itself. A brute-force Lipschitz constant for `∇f` on that ball.
pub fn sampled_max_curvature(
    f: &dyn TestFunction,
    x0: &[f64],
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let n = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = spectral_norm(&finite_difference_hessian(f, x0)?);
    let mut y = vec![0.0; n];
    for _ in 0..samples {
        // rejection sampling in the unit cube
        let dir = loop {
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if d.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                break d;
            }
        };
        for i in 0..n {
            y[i] = x0[i] + radius * dir[i];
        }
        best = best.max(spectral_norm(&finite_difference_hessian(f, &y)?));
    }
    Ok(best)
}

/// Seeded orthogonal matrix as a product of `reflections` Householder reflections,
/// applied to the columns of `m` in place.
///
/// Reflection vectors have entries drawn uniformly from `[-1, 1)` by
/// `ChaCha8Rng::seed_from_u64(seed)`, in row order; vectors shorter than
/// `1e-3` are redrawn.
pub fn apply_random_reflections(m: &mut DMatrix<f64>, reflections: usize, seed: u64) {
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..reflections {
        let u = loop {
            let u = DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
            if u.norm() >= 1e-3 {
                break u;
            }
        };
        let w = (m.transpose() * &u) * (2.0 / u.norm_squared());
        *m -= &u * w.transpose();
    }
}

/// Regular simplex `x0eᵀ + h·Q·V₊` with `Q` a product of `n` seeded reflections.
pub fn rotated_regular_simplex(
    x0: &[f64],
    h: f64,
    orientation: Orientation,
    seed: u64,
) -> Result<GeneralRegularSimplex> {
    rotated_regular_simplex_with(x0, h, orientation, seed, x0.len())
}

/// As [`rotated_regular_simplex`] with an explicit reflection count (`0` is no rotation).
///
/// Regularity is validated at `1e-10`, or at the rounding floor of storing
/// the vertices (`64·ε·(1 + ‖x0‖∞)/h`) when that is larger.
pub fn rotated_regular_simplex_with(
    x0: &[f64],
    h: f64,
    orientation: Orientation,
    seed: u64,
    reflections: usize,
) -> Result<GeneralRegularSimplex> {
    let n = x0.len();
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive and finite, got {h}"
        )));
    }
    let mut arms = basis_matrix(n, orientation)?;
    apply_random_reflections(&mut arms, reflections, seed);
    let mut z = arms * h;
    for (i, c) in x0.iter().enumerate() {
        z.row_mut(i).add_scalar_mut(*c);
    }
    let x_max = x0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10f64.max(64.0 * f64::EPSILON * (1.0 + x_max) / h);
    GeneralRegularSimplex::new(z, Some(x0.to_vec()), Some(h), tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub h1: f64,
    pub err_g1: f64,
    pub err_g2: f64,
    pub err_g12: f64,
    /// `½·L·h1·√n`
    pub bound: f64,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// For each `h1`: first-order gradients at `h1` and `η·h1`, their
/// extrapolation, and the 2-norm error of each against the analytic gradient.
pub fn h_sweep(
    f: &dyn TestFunction,
    x0: &[f64],
    orientation: Orientation,
    h_values: &[f64],
    eta: f64,
    lipschitz: f64,
) -> Result<Vec<SweepRow>> {
    if h_values.is_empty() {
        return Err(Error::InvalidArgument("h_values must not be empty".into()));
    }
    f.check_dimension(x0)?;
    let truth = f.gradient(x0)?;
    let n = x0.len();
    let mut eval = |x: &[f64]| f.eval(x);
    h_values
        .iter()
        .map(|&h1| {
            if !(h1 > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "h values must be positive, got {h1}"
                )));
            }
            let plan = ExtrapolationPlan::from_eta(h1, eta)?;
            let s1 = AlignedRegularSimplex::new(x0.to_vec(), plan.h1(), orientation)?;
            let g1 = aligned_gradient(&s1, &sample_aligned(&s1, &mut eval)?)?;
            let s2 = s1.with_radius(plan.h2())?;
            let g2 = aligned_gradient(&s2, &sample_aligned(&s2, &mut eval)?)?;
            let g12 = richardson(&g1.g, plan.h1(), &g2.g, plan.h2())?;
            let bound = error_bound_centroid(&ErrorBoundInput::new(lipschitz, h1, n)?);
            Ok(SweepRow {
                h1,
                err_g1: distance(&truth, &g1.g),
                err_g2: distance(&truth, &g2.g),
                err_g12: distance(&truth, &g12.g),
                bound,
            })
        })
        .collect()
}

/// Least-squares slope of `log10(err)` against `log10(h)`.
pub fn log_log_slope(h: &[f64], err: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|v| v.log10()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.log10()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Wraps a closure so it can be passed where a fallible evaluator is expected.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradient::general_gradient;
    use crate::simplex::validate_regular;

    #[test]
    fn rosenbrock_values() {
        let g = rosenbrock_grad(&[1.1, 1.1f64.powi(2) + 1e-5]).unwrap();
        assert!((g[0] - 0.195599999999971).abs() < 1e-12);
        assert!((g[1] - 0.002000000000013).abs() < 1e-12);
        let g = rosenbrock_grad(&[0.9, 0.81]).unwrap();
        assert!((g[0] - -0.2).abs() < 1e-14);
        assert!(g[1].abs() < 1e-14);
        assert_eq!(rosenbrock(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(rosenbrock_grad(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(rosenbrock(&[1.0]), Err(Error::Dimension(_))));
        assert!(matches!(
            rosenbrock_grad(&[1.0, 2.0, 3.0]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn builtins_by_name() {
        for b in Builtin::ALL {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert!("values".parse::<Builtin>().is_err());
        assert!(Builtin::Rosenbrock.eval(&[1.0, 2.0, 3.0]).is_err());
        assert!(Builtin::Sphere.eval(&[]).is_err());
    }

    #[test]
    fn analytic_gradients_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for b in Builtin::ALL {
            for k in 0..10 {
                let n = b.dimension().unwrap_or(1 + k % 6);
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let fd = central_difference_gradient(&b, &x, 1e-6).unwrap();
                let an = b.gradient(&x).unwrap();
                for i in 0..n {
                    let scale = an[i].abs().max(1.0);
                    assert!(
                        (fd[i] - an[i]).abs() <= 1e-6 * scale,
                        "{} at {x:?}: {} vs {}",
                        b.name(),
                        fd[i],
                        an[i]
                    );
                }
            }
        }
    }

    #[test]
    fn lipschitz_near_rosenbrock_valley() {
        let x0 = [1.1, 1.1f64.powi(2) + 1e-5];
        let s = AlignedRegularSimplex::new(x0.to_vec(), 1e-3, Orientation::Plus).unwrap();
        let x1 = s.vertex(1).unwrap();
        let l = estimate_lipschitz(&Builtin::Rosenbrock, &x0, &x1).unwrap();
        assert!((l - 1.0769e3).abs() <= 0.01 * 1.0769e3, "L = {l}");
    }

    #[test]
    fn lipschitz_of_flat_curvature() {
        let x0 = [0.3, -0.7, 1.2];
        let x1 = [0.31, -0.69, 1.25];
        assert!(estimate_lipschitz(&Builtin::Affine, &x0, &x1).unwrap() <= 1e-6);
        assert!(estimate_lipschitz(&Builtin::Sphere, &x0, &x1).unwrap() <= 1e-6);
        assert!(estimate_lipschitz(&Builtin::Sphere, &x0, &x0).is_err());
    }

    #[test]
    fn zero_reflections_reproduce_aligned_vertices() {
        let x0 = [0.2, -0.4, 1.5];
        for o in [Orientation::Minus, Orientation::Plus] {
            let z = rotated_regular_simplex_with(&x0, 0.3, o, 99, 0).unwrap();
            let a = AlignedRegularSimplex::new(x0.to_vec(), 0.3, o).unwrap();
            assert_eq!(z.vertices(), &a.vertex_matrix());
        }
    }

    #[test]
    fn rotated_simplexes_are_regular_and_seeded() {
        for seed in 0..20 {
            let n = 1 + (seed as usize % 9);
            let x0: Vec<f64> = (0..n).map(|i| (i as f64 - 2.0) * 0.37).collect();
            let z = rotated_regular_simplex(&x0, 0.05, Orientation::Minus, seed).unwrap();
            let r = validate_regular(z.vertices(), 1e-10).unwrap();
            assert!(r.is_regular, "seed {seed}: {}", r.max_distance_spread);
            assert!((r.h - 0.05).abs() <= 1e-10 * 0.05);
            let again = rotated_regular_simplex(&x0, 0.05, Orientation::Minus, seed).unwrap();
            assert_eq!(z, again);
        }
        let a = rotated_regular_simplex(&[0.0; 4], 1.0, Orientation::Plus, 1).unwrap();
        let b = rotated_regular_simplex(&[0.0; 4], 1.0, Orientation::Plus, 2).unwrap();
        assert_ne!(a.vertices(), b.vertices());
    }

    #[test]
    fn rotated_affine_gradient_is_exact() {
        for seed in 0..10u64 {
            let n = 2 + seed as usize;
            let x0: Vec<f64> = (0..n).map(|i| 0.1 * i as f64).collect();
            let z = rotated_regular_simplex(&x0, 0.01, Orientation::Minus, seed).unwrap();
            let values: Vec<f64> = z
                .vertices()
                .column_iter()
                .map(|c| Builtin::Affine.eval(c.as_slice()).unwrap())
                .collect();
            let g = general_gradient(&z, &crate::gradient::SampleSet::new(values))
                .unwrap()
                .g;
            for (i, gi) in g.iter().enumerate() {
                let a = (i + 1) as f64;
                assert!((gi - a).abs() <= 1e-9 * a, "seed {seed}: {gi} vs {a}");
            }
        }
    }

    #[test]
    fn sweep_on_affine_is_exact() {
        let rows = h_sweep(
            &Builtin::Affine,
            &[0.5, -1.0, 2.0],
            Orientation::Minus,
            &[1e-1, 1e-2, 1e-3],
            0.5,
            1.0,
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert!(
                r.err_g1 <= 1e-9 && r.err_g2 <= 1e-9 && r.err_g12 <= 1e-9,
                "{r:?}"
            );
        }
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let f = Builtin::Sphere;
        assert!(h_sweep(&f, &[1.0], Orientation::Minus, &[], 0.5, 1.0).is_err());
        assert!(h_sweep(&f, &[1.0], Orientation::Minus, &[0.1], 1.0, 1.0).is_err());
        assert!(h_sweep(&f, &[1.0], Orientation::Minus, &[-0.1], 0.5, 1.0).is_err());
        assert!(h_sweep(
            &Builtin::Rosenbrock,
            &[1.0],
            Orientation::Minus,
            &[0.1],
            0.5,
            1.0
        )
        .is_err());
    }

    #[test]
    fn sweep_is_reproducible() {
        let x0 = [1.1, 1.1f64.powi(2) + 1e-5];
        let hs = [1e-1, 1e-2, 1e-3, 1e-4];
        let a = h_sweep(
            &Builtin::Rosenbrock,
            &x0,
            Orientation::Plus,
            &hs,
            0.5,
            2000.0,
        )
        .unwrap();
        let b = h_sweep(
            &Builtin::Rosenbrock,
            &x0,
            Orientation::Plus,
            &hs,
            0.5,
            2000.0,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slope_fit() {
        let h = [1e-1, 1e-2, 1e-3];
        let e: Vec<f64> = h.iter().map(|v| 3.0 * v * v).collect();
        assert!((log_log_slope(&h, &e) - 2.0).abs() < 1e-12);
    }
}
