//! Two-column text tables: `q` in Å⁻¹ and a value, `#` comments.

use std::path::Path;

use bosepair_core::{Extrapolation, QGrid, TabulatedFunction};

use crate::error::{CliError, Result};

/// Fewest rows accepted for a tabulated function.
pub const MIN_ROWS: usize = 8;

/// Parse `(line, q, value)` rows, enforcing strictly increasing `q > 0`.
pub fn parse_table(text: &str, path: &Path) -> Result<Vec<(usize, f64, f64)>> {
    let data = |line: usize, reason: String| CliError::Data {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = body.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        if cols.len() != 2 {
            return Err(data(line, format!("expected 2 columns, found {}", cols.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| data(line, format!("`{s}` is not a finite number")))
        };
        let (q, v) = (num(cols[0])?, num(cols[1])?);
        if !(q > 0.0) {
            return Err(data(line, format!("q = {q} must be > 0")));
        }
        if let Some(&(prev_line, prev_q, _)) = rows.last() {
            if !(q > prev_q) {
                return Err(data(
                    line,
                    format!("q = {q} is not greater than q = {prev_q} on line {prev_line}"),
                ));
            }
        }
        rows.push((line, q, v));
    }
    if rows.len() < MIN_ROWS {
        return Err(data(
            text.lines().count(),
            format!("{} data rows, at least {MIN_ROWS} required", rows.len()),
        ));
    }
    Ok(rows)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn table(rows: &[(usize, f64, f64)], low: Extrapolation, high: Extrapolation) -> Result<TabulatedFunction> {
    let nodes: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let q_max = *nodes.last().expect("row count checked");
    let grid = QGrid::from_nodes(nodes, q_max)?;
    Ok(TabulatedFunction::new(grid, rows.iter().map(|r| r.2).collect(), low, high)?)
}

/// Structure factor from text; held constant below the first node and equal
/// to 1 above the last.
pub fn sq_from_str(text: &str, path: &Path) -> Result<TabulatedFunction> {
    let rows = parse_table(text, path)?;
    if let Some(&(line, q, s)) = rows.iter().find(|r| !(r.2 > 0.0)) {
        return Err(CliError::Data {
            path: path.to_path_buf(),
            line,
            reason: format!("S(q = {q}) = {s} must be > 0"),
        });
    }
    table(&rows, Extrapolation::Hold, Extrapolation::Constant(1.0))
}

pub fn ingest_sq(path: &Path) -> Result<TabulatedFunction> {
    sq_from_str(&read(path)?, path)
}

/// Bundled representative ⁴He structure factor near 2 K.
pub const HE4_SQ: &str = include_str!("../data/he4_sq.dat");

pub fn he4_sq() -> Result<TabulatedFunction> {
    sq_from_str(HE4_SQ, Path::new("data/he4_sq.dat"))
}

/// Pair potential `ν_q` in K·Å³; held below the first node and zero above
/// the last.
pub fn ingest_nu(path: &Path) -> Result<TabulatedFunction> {
    let rows = parse_table(&read(path)?, path)?;
    table(&rows, Extrapolation::Hold, Extrapolation::Constant(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> &'static Path {
        Path::new("s.dat")
    }

    fn rows(n: usize, s: f64) -> String {
        (1..=n).map(|i| format!("{} {s}\n", 0.5 * i as f64)).collect()
    }

    fn line_of(e: CliError) -> usize {
        match e {
            CliError::Data { line, .. } => line,
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bundled_table_loads() {
        let t = he4_sq().unwrap();
        assert_eq!(t.values().len(), 160);
        assert!(t.values().iter().all(|&s| s > 0.0));
    }

    #[test]
    fn unit_structure_factor_loads() {
        let t = sq_from_str(&format!("# header\n\n{}", rows(10, 1.0)), p()).unwrap();
        assert_eq!(t.values().len(), 10);
        assert_eq!(t.eval(100.0), 1.0);
        assert_eq!(t.eval(0.01), 1.0);
    }

    #[test]
    fn out_of_order_row_is_named() {
        let mut text = rows(9, 1.0);
        text.push_str("2.0 1.0\n");
        assert_eq!(line_of(sq_from_str(&text, p()).unwrap_err()), 10);
        let dup = "# c\n0.1 1\n0.1 1\n".to_string() + &rows(8, 1.0);
        assert_eq!(line_of(sq_from_str(&dup, p()).unwrap_err()), 3);
    }

    #[test]
    fn non_positive_structure_factor_is_named() {
        let text = rows(8, 1.0).replace("2 1", "2 0");
        assert_eq!(line_of(sq_from_str(&text, p()).unwrap_err()), 4);
    }

    #[test]
    fn short_and_malformed_tables_rejected() {
        assert!(sq_from_str(&rows(7, 1.0), p()).is_err());
        assert_eq!(line_of(sq_from_str("0.1 1 3\n", p()).unwrap_err()), 1);
        assert_eq!(line_of(sq_from_str("0.1 x\n", p()).unwrap_err()), 1);
        assert_eq!(line_of(sq_from_str("-0.1 1\n", p()).unwrap_err()), 1);
    }

    proptest! {
        #[test]
        fn increasing_tables_round_trip(
            steps in prop::collection::vec(1e-3f64..1.0, MIN_ROWS..40),
            values in prop::collection::vec(1e-3f64..3.0, 40),
        ) {
            let mut q = 0.0;
            let mut text = String::from("# generated\n");
            let mut want = Vec::new();
            for (dq, s) in steps.iter().zip(&values) {
                q += dq;
                text.push_str(&format!("{q} {s}\n"));
                want.push((q, *s));
            }
            let t = sq_from_str(&text, p()).unwrap();
            prop_assert_eq!(t.nodes().len(), want.len());
            for (i, (q, s)) in want.iter().enumerate() {
                prop_assert_eq!(t.nodes()[i], *q);
                prop_assert_eq!(t.values()[i], *s);
            }
        }
    }
}
