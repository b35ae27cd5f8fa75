use nalgebra::DMatrix;

use super::{check_index, write_arm, Orientation, SimplexConstants};
use crate::error::{Error, Result};

/// Regular simplex with centroid `x0`, radius `h` and one arm parallel to `e`.
///
/// Only the centroid is stored. Vertex `j` is the constant vector
/// `x0 − hαγe` with component `j` raised by `hα`, and vertex `n+1` is
/// `x0 + h·v_{n+1}`. A negative `h` gives the same simplex rotated by 180°
/// about `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedRegularSimplex {
    x0: Vec<f64>,
    h: f64,
    constants: SimplexConstants,
}

impl AlignedRegularSimplex {
    pub fn new(x0: Vec<f64>, h: f64, orientation: Orientation) -> Result<Self> {
        let constants = SimplexConstants::new(x0.len(), orientation)?;
        if h == 0.0 {
            return Err(Error::DegenerateSimplex("radius h must be nonzero".into()));
        }
        if !h.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "radius h must be finite, got {h}"
            )));
        }
        if let Some(bad) = x0.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "centroid has non-finite entry {bad}"
            )));
        }
        Ok(Self { x0, h, constants })
    }

    /// Same centroid and orientation, different radius.
    pub fn with_radius(&self, h: f64) -> Result<Self> {
        Self::new(self.x0.clone(), h, self.constants.orientation)
    }

    pub fn dim(&self) -> usize {
        self.constants.n
    }

    pub fn centroid(&self) -> &[f64] {
        &self.x0
    }

    /// Signed radius as supplied.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Geometric radius `|h|`.
    pub fn radius(&self) -> f64 {
        self.h.abs()
    }

    pub fn orientation(&self) -> Orientation {
        self.constants.orientation
    }

    pub fn constants(&self) -> &SimplexConstants {
        &self.constants
    }

    /// Vertex `x_j` for 1-based `j`.
    pub fn vertex(&self, j: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.vertex_into(j, &mut out)?;
        Ok(out)
    }

    /// Writes vertex `x_j` into `out` in O(n) without allocating.
    pub fn vertex_into(&self, j: usize, out: &mut [f64]) -> Result<()> {
        let n = self.dim();
        check_index(n, j)?;
        if out.len() != n {
            return Err(Error::Dimension(format!(
                "vertex buffer has length {}, expected {n}",
                out.len()
            )));
        }
        write_arm(&self.constants, j, out)?;
        for (o, &c) in out.iter_mut().zip(&self.x0) {
            *o = c + self.h * *o;
        }
        Ok(())
    }

    /// All vertices as the columns of an `n × (n+1)` matrix.
    ///
    /// This materializes O(n²) storage and exists for output and checks.
    pub fn vertex_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n + 1);
        let mut buf = vec![0.0; n];
        for j in 1..=n + 1 {
            self.vertex_into(j, &mut buf).expect("index in range");
            m.column_mut(j - 1).copy_from_slice(&buf);
        }
        m
    }
}
