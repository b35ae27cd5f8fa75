//! Regular simplex construction.
//!
//! The aligned simplex is generated from the symmetric square root
//! `V = α(I − γeeᵀ)` of the uniform-angle Gram matrix, extended with the
//! arm `−Ve`. Its vertices are produced on demand from the centroid and the
//! radius, so nothing of size `n × (n+1)` is ever stored on that path.

mod aligned;
mod general;
mod integer;

pub use aligned::AlignedRegularSimplex;
pub use general::{validate_regular, GeneralRegularSimplex, RegularityReport};
pub use integer::{
    integer_simplex, schoenberg_case, schoenberg_feasible, IntegerSimplex, SchoenbergCase,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default relative tolerance on the spread of vertex distances.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Selects one of the two roots `γ = (1 ∓ 1/√(n+1))/n`.
///
/// `Minus` gives the positive definite `V`, whose aligned arm `Ve` points
/// along `+e` (so the last vertex sits on the `−e` side of the centroid).
/// `Plus` is its reflection through the hyperplane normal to `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    #[default]
    Minus,
    Plus,
}

impl Orientation {
    /// `+1.0` for `Plus`, `-1.0` for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Minus => -1.0,
            Orientation::Plus => 1.0,
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::Minus => "minus",
            Orientation::Plus => "plus",
        })
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minus" | "-" => Ok(Orientation::Minus),
            "plus" | "+" => Ok(Orientation::Plus),
            other => Err(Error::Parse(format!("unknown orientation `{other}`"))),
        }
    }
}

/// The scalars `α`, `β`, `γ` that define the aligned basis in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexConstants {
    pub n: usize,
    pub orientation: Orientation,
    /// `√((n+1)/n)`
    pub alpha: f64,
    /// `1/(n+1)`
    pub beta: f64,
    /// Root of `nγ² − 2γ + β = 0` picked by `orientation`.
    pub gamma: f64,
}

impl SimplexConstants {
    pub fn new(n: usize, orientation: Orientation) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("dimension n must be at least 1".into()));
        }
        let nf = n as f64;
        let alpha = ((nf + 1.0) / nf).sqrt();
        let beta = 1.0 / (nf + 1.0);
        let gamma = (1.0 + orientation.sign() / (nf + 1.0).sqrt()) / nf;
        Ok(Self {
            n,
            orientation,
            alpha,
            beta,
            gamma,
        })
    }

    /// Diagonal entry `α(1 − γ)` of `V`.
    pub fn arm_diagonal(&self) -> f64 {
        self.alpha * (1.0 - self.gamma)
    }

    /// Off-diagonal entry `−αγ` of `V`.
    pub fn arm_off_diagonal(&self) -> f64 {
        -(self.alpha * self.gamma)
    }

    /// Common entry of the last arm `v_{n+1} = −Ve`, i.e. `∓1/√n`.
    pub fn last_arm_entry(&self) -> f64 {
        self.orientation.sign() / (self.n as f64).sqrt()
    }

    /// Residual of the defining quadratic `nγ² − 2γ + β`.
    pub fn quadratic_residual(&self) -> f64 {
        self.n as f64 * self.gamma * self.gamma - 2.0 * self.gamma + self.beta
    }
}

pub fn constants(n: usize, orientation: Orientation) -> Result<SimplexConstants> {
    SimplexConstants::new(n, orientation)
}

/// Unit arm `v_j` (1-based `j`) of the aligned basis `V₊ = [V, −Ve]`.
pub fn arm(n: usize, orientation: Orientation, j: usize) -> Result<Vec<f64>> {
    let c = SimplexConstants::new(n, orientation)?;
    let mut out = vec![0.0; n];
    write_arm(&c, j, &mut out)?;
    Ok(out)
}

pub(crate) fn write_arm(c: &SimplexConstants, j: usize, out: &mut [f64]) -> Result<()> {
    check_index(c.n, j)?;
    if j <= c.n {
        out.fill(c.arm_off_diagonal());
        out[j - 1] = c.arm_diagonal();
    } else {
        out.fill(c.last_arm_entry());
    }
    Ok(())
}

pub(crate) fn check_index(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n + 1 {
        Err(Error::Index {
            index: j,
            max: n + 1,
        })
    } else {
        Ok(())
    }
}

/// Dense `n × (n+1)` basis `V₊` with the arms as columns.
///
/// Only meant for checks and small `n`; the production paths use [`arm`]
/// and [`AlignedRegularSimplex::vertex`].
pub fn basis_matrix(n: usize, orientation: Orientation) -> Result<DMatrix<f64>> {
    let c = SimplexConstants::new(n, orientation)?;
    let mut m = DMatrix::zeros(n, n + 1);
    let mut col = vec![0.0; n];
    for j in 1..=n + 1 {
        write_arm(&c, j, &mut col)?;
        m.column_mut(j - 1).copy_from_slice(&col);
    }
    Ok(m)
}

/// Edge length `s = h√(2 + 2/n)` of a regular simplex with radius `h`.
pub fn edge_length(h: f64, n: usize) -> f64 {
    h * (2.0 + 2.0 / n as f64).sqrt()
}

/// Radius of a regular simplex with edge length `s`.
pub fn arm_from_edge(s: f64, n: usize) -> f64 {
    s / (2.0 + 2.0 / n as f64).sqrt()
}
