//! Simplex gradients.
//!
//! Three routes to the same least-squares gradient:
//!
//! * [`aligned_gradient`]: O(n) closed form for an [`AlignedRegularSimplex`].
//! * [`general_gradient`]: O(n²) form for any [`GeneralRegularSimplex`].
//! * [`ls_oracle_gradient`] and [`determined_system_gradient`]: dense
//!   O(n³) reference solves used for verification only.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::simplex::{AlignedRegularSimplex, GeneralRegularSimplex};

/// Function values at the vertices, in vertex-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    f0: Option<f64>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, f0: None }
    }

    /// Also records the value at the centroid. No gradient path reads it.
    pub fn with_centroid_value(values: Vec<f64>, f0: f64) -> Self {
        Self {
            values,
            f0: Some(f0),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn f0(&self) -> Option<f64> {
        self.f0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f_j − f_0` for every vertex, when `f0` is known.
    pub fn delta_f_plus(&self) -> Option<Vec<f64>> {
        self.f0
            .map(|f0| self.values.iter().map(|f| f - f0).collect())
    }

    /// Multiplies every value (and `f0`) by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
            f0: self.f0.map(|v| c * v),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n + 1 {
            return Err(Error::Dimension(format!(
                "expected {} function values for a simplex in dimension {n}, got {}",
                n + 1,
                self.values.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Error O(h).
    FirstOrder,
    /// Error O(h²), from extrapolating two first-order estimates.
    SecondOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub g: Vec<f64>,
    pub order: Order,
    /// One radius for first-order estimates, two for second-order ones.
    pub h_used: Vec<f64>,
}

impl GradientEstimate {
    pub(crate) fn first_order(g: Vec<f64>, h: f64) -> Self {
        Self {
            g,
            order: Order::FirstOrder,
            h_used: vec![h],
        }
    }

    pub(crate) fn second_order(g: Vec<f64>, h1: f64, h2: f64) -> Self {
        Self {
            g,
            order: Order::SecondOrder,
            h_used: vec![h1, h2],
        }
    }
}

/// Evaluates `f` at every vertex of `simplex`, in index order `1..=n+1`.
///
/// A single O(n) buffer is reused for the vertices.
pub fn sample_aligned<F, E>(simplex: &AlignedRegularSimplex, mut f: F) -> Result<SampleSet>
where
    F: FnMut(&[f64]) -> std::result::Result<f64, E>,
    E: Into<Box<dyn std::error::Error + Send + Sync>>,
{
    let n = simplex.dim();
    let mut x = vec![0.0; n];
    let mut values = Vec::with_capacity(n + 1);
    for j in 1..=n + 1 {
        simplex.vertex_into(j, &mut x)?;
        let v = f(&x).map_err(|e| Error::Evaluation {
            vertex: j,
            source: e.into(),
        })?;
        if !v.is_finite() {
            return Err(Error::NonFinite {
                vertex: j,
                value: v,
            });
        }
        values.push(v);
    }
    Ok(SampleSet::new(values))
}

/// Aligned regular simplex gradient `g = c₁f + c₂e` in O(n) time and memory.
///
/// `c₁ = 1/(hα)` and `c₂ = c₁((γn − 1)f_{n+1} − γeᵀf)` with `f = (f_1..f_n)`.
/// The sum is taken over `f − f_{n+1}e`, which leaves `g` unchanged and
/// keeps rounding proportional to the spread of the values rather than to
/// their magnitude.
pub fn aligned_gradient(
    simplex: &AlignedRegularSimplex,
    samples: &SampleSet,
) -> Result<GradientEstimate> {
    let n = simplex.dim();
    samples.check_len(n)?;
    let c = simplex.constants();
    let h = simplex.h();

    let f = samples.values();
    let f_last = f[n];
    let c1 = 1.0 / (h * c.alpha);
    let shifted_sum: f64 = f[..n].iter().map(|&v| v - f_last).sum();
    // c₂ + c₁f_{n+1}, i.e. c₂ expressed on the shifted values
    let c2 = -c1 * c.gamma * shifted_sum;
    let g = f[..n].iter().map(|&v| c1 * (v - f_last) + c2).collect();
    Ok(GradientEstimate::first_order(g, h))
}

/// Gradient over an arbitrarily oriented regular simplex in O(n²).
///
/// `u = (f − f_{n+1}e)/(α²h²)` and `g = Zu − (eᵀu)z₀`, where `Z` holds the
/// first `n` vertices. Evaluated as `(Z − z₀eᵀ)u`, which is the same product
/// without the cancellation between `Zu` and `(eᵀu)z₀`.
pub fn general_gradient(
    simplex: &GeneralRegularSimplex,
    samples: &SampleSet,
) -> Result<GradientEstimate> {
    let n = simplex.dim();
    samples.check_len(n)?;
    let h = simplex.h();
    if h == 0.0 {
        return Err(Error::DegenerateSimplex("radius is zero".into()));
    }
    let alpha_sq = (n as f64 + 1.0) / n as f64;
    let scale = 1.0 / (alpha_sq * h * h);
    let f = samples.values();
    let f_last = f[n];
    let u: Vec<f64> = f[..n].iter().map(|&v| scale * (v - f_last)).collect();

    let z = simplex.vertices();
    let z0 = simplex.centroid();
    let mut g = vec![0.0; n];
    for (j, &uj) in u.iter().enumerate() {
        for (i, gi) in g.iter_mut().enumerate() {
            *gi += (z[(i, j)] - z0[i]) * uj;
        }
    }
    Ok(GradientEstimate::first_order(g, h))
}

/// Dense least-squares reference: solves `(V₊V₊ᵀ)g = V₊δf₊/h` by Cholesky.
///
/// `arms` holds the columns `(x_j − x₀)/h`. Nothing about the structure of
/// `V₊` is assumed.
pub fn ls_oracle_gradient(arms: &DMatrix<f64>, delta_f_plus: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = arms.nrows();
    if n == 0 || arms.ncols() != delta_f_plus.len() {
        return Err(Error::Dimension(format!(
            "arms are {}x{} but {} function differences were given",
            n,
            arms.ncols(),
            delta_f_plus.len()
        )));
    }
    if h == 0.0 {
        return Err(Error::DegenerateSimplex("radius h must be nonzero".into()));
    }
    let normal = arms * arms.transpose();
    let rhs = arms * DVector::from_column_slice(delta_f_plus) / h;
    let max_diag = normal.diagonal().max();
    let chol = normal
        .cholesky()
        .ok_or_else(|| Error::Singular("normal matrix is not positive definite".into()))?;
    let min_pivot = chol
        .l_dirty()
        .diagonal()
        .iter()
        .fold(f64::INFINITY, |m, &d| m.min(d * d));
    if !(min_pivot > 1e-14 * max_diag) {
        return Err(Error::Singular(format!(
            "arms are rank deficient (pivot ratio {:.3e})",
            min_pivot / max_diag
        )));
    }
    Ok(chol.solve(&rhs).iter().copied().collect())
}

/// Interpolation gradient from the square system `(x_j − x_{n+1})ᵀg = f_j − f_{n+1}`.
///
/// Takes vertices as the columns of an `n × (n+1)` matrix; solved by LU.
pub fn determined_system_gradient(vertices: &DMatrix<f64>, values: &[f64]) -> Result<Vec<f64>> {
    let n = vertices.nrows();
    if n == 0 || vertices.ncols() != n + 1 || values.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "need an n x (n+1) vertex matrix and n+1 values, got {}x{} and {}",
            n,
            vertices.ncols(),
            values.len()
        )));
    }
    let last = vertices.column(n);
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        let d = vertices.column(j) - last;
        a.row_mut(j).copy_from(&d.transpose());
    }
    let b = DVector::from_iterator(n, values[..n].iter().map(|&f| f - values[n]));
    a.lu()
        .solve(&b)
        .map(|g| g.iter().copied().collect())
        .ok_or_else(|| Error::Singular("vertices are affinely dependent".into()))
}

/// Inputs to the Lipschitz error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundInput {
    /// Lipschitz constant of ∇f.
    pub lipschitz: f64,
    pub h: f64,
    pub n: usize,
}

impl ErrorBoundInput {
    /// Zero is accepted for `lipschitz` and `h` (the bounds then vanish).
    pub fn new(lipschitz: f64, h: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("dimension n must be at least 1".into()));
        }
        if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Lipschitz constant must be finite and nonnegative, got {lipschitz}"
            )));
        }
        if !(h >= 0.0) || !h.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "radius must be finite and nonnegative, got {h}"
            )));
        }
        Ok(Self { lipschitz, h, n })
    }
}

/// `‖∇f(x₀) − g‖₂ ≤ ½Lh√n` at the centroid.
pub fn error_bound_centroid(b: &ErrorBoundInput) -> f64 {
    0.5 * b.lipschitz * b.h * (b.n as f64).sqrt()
}

/// `‖∇f(x_j) − g‖₂ ≤ (1 + ½√n)Lh` at any vertex.
pub fn error_bound_vertex(b: &ErrorBoundInput) -> f64 {
    (1.0 + 0.5 * (b.n as f64).sqrt()) * b.lipschitz * b.h
}
