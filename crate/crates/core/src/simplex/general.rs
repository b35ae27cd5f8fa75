use nalgebra::{DMatrix, DVector};

use super::DEFAULT_REL_TOL;
use crate::error::{Error, Result};

/// Relative tolerance for cross-checking a caller-supplied centroid or radius.
const SUPPLIED_GEOMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub is_regular: bool,
    /// Column mean of the vertices.
    pub centroid: Vec<f64>,
    /// Mean distance from the centroid to the vertices.
    pub h: f64,
    /// Largest relative spread `(max − min)/mean`, taken over both the
    /// pairwise vertex distances and the centroid distances.
    pub max_distance_spread: f64,
}

fn relative_spread(values: &[f64]) -> f64 {
    let (lo, hi, sum) = values.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0),
        |(lo, hi, s), &v| (lo.min(v), hi.max(v), s + v),
    );
    let mean = sum / values.len() as f64;
    if mean > 0.0 {
        (hi - lo) / mean
    } else {
        f64::INFINITY
    }
}

/// Checks that the columns of `vertices` (`n × (n+1)`) form a regular simplex.
///
/// Costs O(n³) because every pairwise distance is measured.
pub fn validate_regular(vertices: &DMatrix<f64>, rel_tol: f64) -> Result<RegularityReport> {
    let n = vertices.nrows();
    if n == 0 || vertices.ncols() != n + 1 {
        return Err(Error::Dimension(format!(
            "vertex matrix must be n x (n+1) with n >= 1, got {} x {}",
            n,
            vertices.ncols()
        )));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    if vertices.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "vertex matrix has non-finite entries".into(),
        ));
    }

    let centroid: DVector<f64> = vertices.column_mean();
    let radii: Vec<f64> = vertices
        .column_iter()
        .map(|z| (z - &centroid).norm())
        .collect();
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..=n {
        for j in i + 1..=n {
            edges.push((vertices.column(i) - vertices.column(j)).norm());
        }
    }
    let spread = relative_spread(&radii).max(relative_spread(&edges));
    let h = radii.iter().sum::<f64>() / radii.len() as f64;
    Ok(RegularityReport {
        is_regular: spread <= rel_tol,
        centroid: centroid.iter().copied().collect(),
        h,
        max_distance_spread: spread,
    })
}

/// Regular simplex given by explicit vertices (the columns of an `n × (n+1)` matrix).
///
/// Regularity is checked once, on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralRegularSimplex {
    vertices: DMatrix<f64>,
    centroid: Vec<f64>,
    h: f64,
}

impl GeneralRegularSimplex {
    /// Validates `vertices` at `rel_tol`.
    ///
    /// A supplied centroid or radius is used as given after an O(n) check
    /// against the first vertex; a missing one is computed from the vertices.
    pub fn new(
        vertices: DMatrix<f64>,
        centroid: Option<Vec<f64>>,
        h: Option<f64>,
        rel_tol: f64,
    ) -> Result<Self> {
        let report = validate_regular(&vertices, rel_tol)?;
        if report.h == 0.0 {
            return Err(Error::DegenerateSimplex("all vertices coincide".into()));
        }
        if !report.is_regular {
            return Err(Error::NotRegular {
                spread: report.max_distance_spread,
                tolerance: rel_tol,
            });
        }

        let n = vertices.nrows();
        let centroid = match centroid {
            Some(c) => {
                if c.len() != n {
                    return Err(Error::Dimension(format!(
                        "centroid has length {}, expected {n}",
                        c.len()
                    )));
                }
                let offset = c
                    .iter()
                    .zip(&report.centroid)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let mismatch = offset / report.h;
                if !(mismatch <= SUPPLIED_GEOMETRY_TOL) {
                    return Err(Error::InconsistentGeometry {
                        what: "centroid",
                        mismatch,
                    });
                }
                c
            }
            None => report.centroid,
        };

        let first_radius = vertices
            .column(0)
            .iter()
            .zip(&centroid)
            .map(|(z, c)| (z - c) * (z - c))
            .sum::<f64>()
            .sqrt();
        let h = match h {
            Some(h) => {
                if !(h > 0.0) || !h.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "radius must be positive and finite, got {h}"
                    )));
                }
                let mismatch = (h - first_radius).abs() / h;
                if !(mismatch <= SUPPLIED_GEOMETRY_TOL) {
                    return Err(Error::InconsistentGeometry {
                        what: "radius",
                        mismatch,
                    });
                }
                h
            }
            None => first_radius,
        };

        Ok(Self {
            vertices,
            centroid,
            h,
        })
    }

    /// Validates at [`DEFAULT_REL_TOL`] and derives centroid and radius.
    pub fn from_vertices(vertices: DMatrix<f64>) -> Result<Self> {
        Self::new(vertices, None, None, DEFAULT_REL_TOL)
    }

    pub fn dim(&self) -> usize {
        self.vertices.nrows()
    }

    pub fn vertices(&self) -> &DMatrix<f64> {
        &self.vertices
    }

    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{AlignedRegularSimplex, Orientation};

    fn integer_n3() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            3,
            4,
            &[
                5.0, -1.0, -1.0, -3.0, //
                -1.0, 5.0, -1.0, -3.0, //
                -1.0, -1.0, 5.0, -3.0,
            ],
        )
    }

    #[test]
    fn aligned_vertices_validate() {
        for o in [Orientation::Minus, Orientation::Plus] {
            for (x0, h) in [
                (vec![0.3, -2.0, 5.0], 1e-3),
                (vec![1.0; 6], -4.0),
                (vec![2.5], 0.1),
            ] {
                let s = AlignedRegularSimplex::new(x0.clone(), h, o).unwrap();
                let r = validate_regular(&s.vertex_matrix(), 1e-10).unwrap();
                assert!(r.is_regular, "{o} h={h}: spread {}", r.max_distance_spread);
                assert!((r.h - h.abs()).abs() <= 1e-12 * h.abs());
                for (c, x) in r.centroid.iter().zip(&x0) {
                    assert!((c - x).abs() <= 1e-12 * (1.0 + x.abs()));
                }
            }
        }
    }

    #[test]
    fn integer_simplex_is_regular_about_origin() {
        let r = validate_regular(&integer_n3(), 1e-12).unwrap();
        assert!(r.is_regular);
        assert_eq!(r.centroid, vec![0.0, 0.0, 0.0]);
        assert!((r.h - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn perturbed_vertex_fails() {
        let tol = 1e-8;
        let s =
            AlignedRegularSimplex::new(vec![0.5, 0.5, 0.5, 0.5], 2.0, Orientation::Minus).unwrap();
        let mut m = s.vertex_matrix();
        // push vertex 2 outward along its own arm
        let bump = 10.0 * tol * s.radius();
        let arm: Vec<f64> = (0..4).map(|i| (m[(i, 1)] - 0.5) / 2.0).collect();
        for i in 0..4 {
            m[(i, 1)] += bump * arm[i];
        }
        let r = validate_regular(&m, tol).unwrap();
        assert!(!r.is_regular, "spread {}", r.max_distance_spread);
        assert!(r.max_distance_spread > tol);
        assert!(matches!(
            GeneralRegularSimplex::new(m, None, None, tol),
            Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn wrong_shape_is_dimension_error() {
        let m = DMatrix::<f64>::zeros(2, 2);
        assert!(matches!(
            validate_regular(&m, 1e-8),
            Err(Error::Dimension(_))
        ));
        let m = DMatrix::<f64>::zeros(0, 1);
        assert!(matches!(
            validate_regular(&m, 1e-8),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn coincident_vertices_are_degenerate() {
        let m = DMatrix::from_element(2, 3, 1.5);
        let r = validate_regular(&m, 1e-8).unwrap();
        assert!(!r.is_regular);
        assert!(matches!(
            GeneralRegularSimplex::from_vertices(m),
            Err(Error::DegenerateSimplex(_))
        ));
    }

    #[test]
    fn supplied_geometry_is_cross_checked() {
        let m = integer_n3();
        let h = 27f64.sqrt();
        let s = GeneralRegularSimplex::new(m.clone(), Some(vec![0.0; 3]), Some(h), 1e-10).unwrap();
        assert_eq!(s.h(), h);
        assert!(matches!(
            GeneralRegularSimplex::new(m.clone(), Some(vec![0.1, 0.0, 0.0]), None, 1e-10),
            Err(Error::InconsistentGeometry {
                what: "centroid",
                ..
            })
        ));
        assert!(matches!(
            GeneralRegularSimplex::new(m.clone(), None, Some(h * 1.01), 1e-10),
            Err(Error::InconsistentGeometry { what: "radius", .. })
        ));
        assert!(matches!(
            GeneralRegularSimplex::new(m, None, Some(-1.0), 1e-10),
            Err(Error::InvalidArgument(_))
        ));
    }
}
