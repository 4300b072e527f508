//! FER curves and their CSV representation.
//!
//! Floats are written with 17 significant digits, so `parse(emit(x)) == x`
//! bit-exactly.

use crate::errors::AppError;

/// One labelled FER-vs-SNR curve; `ci95` is zero for analytic curves.
#[derive(Debug, Clone, PartialEq)]
pub struct FerCurve {
    pub label: String,
    /// `(snr_db, fer, ci95)`, sorted by `snr_db`.
    pub points: Vec<(f64, f64, f64)>,
}

impl FerCurve {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

/// Format a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Emit a family of curves sharing one SNR grid as CSV.
pub fn emit_curves(curves: &[FerCurve]) -> Result<String, AppError> {
    let first = curves
        .first()
        .ok_or_else(|| AppError::Invalid("no curves to emit".into()))?;
    let grid = first.grid();
    for c in curves {
        if c.grid() != grid {
            return Err(AppError::Invalid(format!(
                "grid mismatch between curves {} and {}",
                first.label, c.label
            )));
        }
    }
    let mut out = String::from("snr_db");
    for c in curves {
        out.push(',');
        out.push_str(&c.label);
        out.push(',');
        out.push_str(&c.label);
        out.push_str("_ci95");
    }
    out.push('\n');
    for (i, &snr) in grid.iter().enumerate() {
        out.push_str(&fmt_f64(snr));
        for c in curves {
            out.push(',');
            out.push_str(&fmt_f64(c.points[i].1));
            out.push(',');
            out.push_str(&fmt_f64(c.points[i].2));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parse CSV produced by [`emit_curves`].
pub fn parse_curves(text: &str) -> Result<Vec<FerCurve>, AppError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| AppError::Invalid("empty CSV".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"snr_db") || cols.len() < 3 || !(cols.len() - 1).is_multiple_of(2) {
        return Err(AppError::Invalid("CSV header is not a curve family".into()));
    }
    let mut curves: Vec<FerCurve> = Vec::new();
    for pair in cols[1..].chunks(2) {
        let expect_ci = format!("{}_ci95", pair[0]);
        if pair[1] != expect_ci {
            return Err(AppError::Invalid(format!(
                "expected column {expect_ci}, found {}",
                pair[1]
            )));
        }
        curves.push(FerCurve {
            label: pair[0].to_string(),
            points: Vec::new(),
        });
    }
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(AppError::Invalid(format!(
                "row {}: expected {} fields, found {}",
                lineno + 2,
                cols.len(),
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, AppError> {
            s.parse()
                .map_err(|_| AppError::Invalid(format!("row {}: bad number {s}", lineno + 2)))
        };
        let snr = parse(fields[0])?;
        for (k, curve) in curves.iter_mut().enumerate() {
            let fer = parse(fields[1 + 2 * k])?;
            let ci = parse(fields[2 + 2 * k])?;
            curve.points.push((snr, fer, ci));
        }
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let curves = vec![
            FerCurve {
                label: "closed_form".into(),
                points: vec![(0.0, 0.123456789012345678, 0.0), (2.0, 1e-7 / 3.0, 0.0)],
            },
            FerCurve {
                label: "sim_semi".into(),
                points: vec![(0.0, 0.11, 1e-3), (2.0, 3.3e-8, 2.0e-9)],
            },
        ];
        let text = emit_curves(&curves).unwrap();
        let back = parse_curves(&text).unwrap();
        assert_eq!(curves, back);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = FerCurve {
            label: "a".into(),
            points: vec![(0.0, 0.1, 0.0)],
        };
        let b = FerCurve {
            label: "b".into(),
            points: vec![(1.0, 0.1, 0.0)],
        };
        assert!(emit_curves(&[a, b]).is_err());
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(parse_curves("").is_err());
        assert!(parse_curves("snr_db,a\n").is_err());
        assert!(parse_curves("snr_db,a,b_ci95\n").is_err());
        assert!(parse_curves("snr_db,a,a_ci95\n1.0,2.0\n").is_err());
    }
}
