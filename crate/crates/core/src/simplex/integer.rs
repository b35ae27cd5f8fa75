use nalgebra::DMatrix;

use super::Orientation;
use crate::error::{Error, Result};

fn is_square(m: usize) -> bool {
    let r = m.isqrt();
    r * r == m
}

fn is_sum_of_two_squares(m: usize) -> bool {
    (0..=m.isqrt()).any(|a| is_square(m - a * a))
}

/// Which of Schoenberg's conditions admits integer coordinates in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchoenbergCase {
    /// `n` even and `n + 1` a perfect square.
    EvenSquare,
    /// `n ≡ 3 (mod 4)`.
    ThreeModFour,
    /// `n ≡ 1 (mod 4)` and `n + 1` a sum of two squares.
    OneModFourTwoSquares,
}

impl std::fmt::Display for SchoenbergCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchoenbergCase::EvenSquare => "n even and n+1 a perfect square",
            SchoenbergCase::ThreeModFour => "n = 3 mod 4",
            SchoenbergCase::OneModFourTwoSquares => "n = 1 mod 4 and n+1 a sum of two squares",
        })
    }
}

pub fn schoenberg_case(n: usize) -> Option<SchoenbergCase> {
    if n == 0 {
        return None;
    }
    match n % 4 {
        3 => Some(SchoenbergCase::ThreeModFour),
        1 if is_sum_of_two_squares(n + 1) => Some(SchoenbergCase::OneModFourTwoSquares),
        0 | 2 if is_square(n + 1) => Some(SchoenbergCase::EvenSquare),
        _ => None,
    }
}

/// Whether a regular `n`-simplex with integer vertex coordinates exists.
pub fn schoenberg_feasible(n: usize) -> bool {
    schoenberg_case(n).is_some()
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Regular simplex with integer vertices and centroid at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSimplex {
    n: usize,
    /// Row-major `n × (n+1)`; columns are vertices.
    entries: Vec<i64>,
    scale: i64,
}

impl IntegerSimplex {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Factor `k` with vertices `= k · (1/α)V₊`.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * (self.n + 1) + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.n + 1)
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, col)).collect()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.n, self.n + 1, self.entries.iter().map(|&v| v as f64))
    }

    /// Squared distance from the origin to each vertex, if they all agree.
    pub fn squared_radius(&self) -> Option<i128> {
        let mut norms = (0..=self.n).map(|j| {
            self.column(j)
                .iter()
                .map(|&v| (v as i128) * (v as i128))
                .sum::<i128>()
        });
        let first = norms.next()?;
        norms.all(|v| v == first).then_some(first)
    }

    /// Squared edge length, if all pairwise squared distances agree.
    pub fn squared_edge(&self) -> Option<i128> {
        let cols: Vec<Vec<i64>> = (0..=self.n).map(|j| self.column(j)).collect();
        let mut edge = None;
        for i in 0..=self.n {
            for j in i + 1..=self.n {
                let d: i128 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(&a, &b)| {
                        let t = (a - b) as i128;
                        t * t
                    })
                    .sum();
                match edge {
                    None => edge = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        edge
    }

    pub fn centered(&self) -> bool {
        self.rows()
            .all(|r| r.iter().map(|&v| v as i128).sum::<i128>() == 0)
    }

    /// Exact check: zero column sum, equal column norms, equal edges.
    pub fn is_regular(&self) -> bool {
        self.centered() && self.squared_radius().is_some() && self.squared_edge().is_some()
    }
}

/// Integer simplex proportional to `(1/α)V₊`, for `n + 1` a perfect square.
///
/// With `s = √(n+1)` the rational matrix `(1/α)V₊` has diagonal `1 − γ`,
/// off-diagonal `−γ` and last column `∓1/s`. Scaling by `n·s` clears the
/// denominators; the result is then divided by the gcd of its entries.
pub fn integer_simplex(n: usize, orientation: Orientation) -> Result<IntegerSimplex> {
    if n == 0 {
        return Err(Error::Dimension("dimension n must be at least 1".into()));
    }
    let s = (n + 1).isqrt();
    if s * s != n + 1 {
        return Err(Error::InfeasibleInteger {
            n,
            schoenberg_feasible: schoenberg_feasible(n),
        });
    }
    let (n_i, s_i) = (n as i64, s as i64);
    // n·s·γ = s ± 1
    let gamma_scaled = s_i + orientation.sign() as i64;
    let diag = n_i * s_i - gamma_scaled;
    let off = -gamma_scaled;
    let last = orientation.sign() as i64 * n_i;
    let g = gcd(gcd(diag, off), last);

    let (diag, off, last) = (diag / g, off / g, last / g);
    let mut entries = Vec::with_capacity(n * (n + 1));
    for i in 0..n {
        entries.extend((0..n).map(|j| if i == j { diag } else { off }));
        entries.push(last);
    }
    Ok(IntegerSimplex {
        n,
        entries,
        scale: n_i * s_i / g,
    })
}
