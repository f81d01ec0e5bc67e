//! Table rendering and CSV emission.
//!
//! Printed tables use 3 decimal places; CSV files carry full precision (17
//! significant digits) and are byte-stable across runs with the same
//! configuration. NaN or infinite values are rejected rather than emitted.

use crate::engine::{EvaluationResult, SweepPoint};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Full-precision, locale-independent decimal rendering.
fn full(value: f64) -> Result<String> {
    if !value.is_finite() {
        return Err(Error::numerical(format!(
            "refusing to emit non-finite value {value}"
        )));
    }
    Ok(format!("{value:.16e}"))
}

/// `table1.csv` body for the evaluated (handler, use case) rows.
pub fn table_csv(results: &[EvaluationResult]) -> Result<String> {
    let mut out = String::from("handler,use_case,expected_distance_m,expected_mu\n");
    for r in results {
        writeln!(
            out,
            "{},{},{},{}",
            r.handler.label(),
            r.use_case,
            full(r.expected_distance)?,
            full(r.expected_mu)?
        )
        .expect("writing to String cannot fail");
    }
    Ok(out)
}

/// `sweep.csv` body.
pub fn sweep_csv(points: &[SweepPoint]) -> Result<String> {
    let mut out = String::from("handler,mu,sigma,u_acceptable,mu_safe,distance_m\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.handler.label(),
            full(p.mu)?,
            full(p.sigma)?,
            full(p.u_acceptable)?,
            full(p.mu_safe)?,
            full(p.distance)?
        )
        .expect("writing to String cannot fail");
    }
    Ok(out)
}

/// Human-readable expected-distance table, 3 decimals.
pub fn render_table(results: &[EvaluationResult]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<26} {:>8} {:>22} {:>14}",
        "handler", "use_case", "expected_distance [m]", "expected_mu"
    )
    .unwrap();
    for r in results {
        writeln!(
            out,
            "{:<26} {:>8} {:>22.3} {:>14.3}",
            r.handler.label(),
            r.use_case,
            r.expected_distance,
            r.expected_mu
        )
        .unwrap();
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handlers::HandlerKind;

    fn sample() -> EvaluationResult {
        EvaluationResult {
            handler: HandlerKind::WorstCase,
            use_case: "A".into(),
            expected_distance: 14.670000000000001,
            expected_mu: 1.1,
            rows: vec![],
        }
    }

    #[test]
    fn csv_has_header_and_parses_back_finite() {
        let csv = table_csv(&[sample()]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "handler,use_case,expected_distance_m,expected_mu"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "worst_case");
        let parsed: f64 = row[2].parse().unwrap();
        assert!(parsed.is_finite());
        assert!((parsed - 14.670000000000001).abs() < 1e-15);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let mut bad = sample();
        bad.expected_mu = f64::NAN;
        assert!(table_csv(&[bad]).is_err());
    }

    #[test]
    fn rendered_table_uses_three_decimals() {
        let text = render_table(&[sample()]);
        assert!(text.contains("14.670"));
        assert!(text.contains("1.100"));
    }
}
