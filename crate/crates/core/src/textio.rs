//! Plain-text matrices and vectors.
//!
//! One row per line, entries separated by whitespace, `#` starts a comment
//! line. A vector is a single row or a single column.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{tok}` is not a number")))
}

/// Rows of numbers, skipping blank and `#` lines.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_number(t, i + 1))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let rows = parse_rows(text)?;
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() {
        return Err(Error::Parse("no numeric rows found".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(Error::Parse(format!(
            "row {} has {} entries, expected {ncols}",
            i + 1,
            r.len()
        )));
    }
    Ok(DMatrix::from_row_iterator(
        rows.len(),
        ncols,
        rows.into_iter().flatten(),
    ))
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let m = parse_matrix(text)?;
    if m.nrows() == 1 || m.ncols() == 1 {
        Ok(m.iter().copied().collect())
    } else {
        Err(Error::Parse(format!(
            "expected a single row or column, got a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Comma-separated list such as `1.1,1.21001`.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(Error::Parse(format!("malformed list `{text}`")));
    }
    items.into_iter().map(|t| parse_number(t, 1)).collect()
}

/// Fixed notation with `precision` decimals; at 17 or more, scientific with
/// `precision` significant digits so the value reads back exactly.
pub fn format_number(x: f64, precision: usize) -> String {
    if precision >= 17 {
        format!("{:.*e}", precision - 1, x)
    } else {
        format!("{:.*}", precision, x)
    }
}

pub fn format_vector(v: &[f64], precision: usize) -> String {
    let mut out = String::new();
    for x in v {
        out.push_str(&format_number(*x, precision));
        out.push('\n');
    }
    out
}

pub fn format_matrix(m: &DMatrix<f64>, precision: usize) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| format_number(*x, precision)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_matrix_with_comments() {
        let text = "# vertices\n 1 2 3\n\n4.5 -1e-3 6\n# end\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 1)], -1e-3);
    }

    #[test]
    fn ragged_and_bad_tokens() {
        assert!(parse_matrix("1 2\n3\n").is_err());
        assert!(parse_matrix("1 x\n").is_err());
        assert!(parse_matrix("# nothing\n").is_err());
    }

    #[test]
    fn vectors_as_row_or_column() {
        assert_eq!(parse_vector("1 2 3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_vector("1\n2\n3\n").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_vector("1 2\n3 4\n").is_err());
    }

    #[test]
    fn comma_lists() {
        assert_eq!(parse_list("1.1, 1.21001").unwrap(), vec![1.1, 1.21001]);
        assert_eq!(parse_list("-3").unwrap(), vec![-3.0]);
        assert!(parse_list("1,,2").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn fixed_precision() {
        assert_eq!(format_number(0.195435033145664, 15), "0.195435033145664");
        assert_eq!(format_number(1.10026, 4), "1.1003");
    }

    proptest! {
        #[test]
        fn precision_17_reads_back_exactly(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_number(x, 17);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        }

        #[test]
        fn matrix_text_round_trip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let m = DMatrix::from_fn(rows, cols, |i, j| ((seed >> ((i * 5 + j) % 60)) as f64).sin() * 1e3);
            let back = parse_matrix(&format_matrix(&m, 17)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
