//! Curve comparison: per-point log10 gaps, fitted high-SNR slopes, and
//! pass/fail verdicts against supplied tolerances.

use crate::csvio::{fmt_f64, FerCurve};
use crate::errors::AppError;

#[derive(Debug, Clone, Copy)]
pub struct ReportSpec {
    /// Maximum allowed |log10 gap| between each curve pair, if checked.
    pub gap_tol: Option<f64>,
    /// dB window for the slope fit.
    pub slope_window: (f64, f64),
    /// Expected log10(FER)-per-decade-of-SNR slope, if checked.
    pub expected_slope: Option<f64>,
    pub slope_tol: f64,
}

impl Default for ReportSpec {
    fn default() -> Self {
        ReportSpec {
            gap_tol: None,
            slope_window: (25.0, 35.0),
            expected_slope: None,
            slope_tol: 0.3,
        }
    }
}

/// Least-squares slope of `log10(fer)` against `snr_db/10` (decades of FER
/// per decade of SNR) over the window; `None` with fewer than two usable
/// points.
pub fn fit_slope(curve: &FerCurve, window: (f64, f64)) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.0 >= window.0 && p.0 <= window.1 && p.1 > 0.0)
        .map(|p| (p.0 / 10.0, p.1.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Compare curves sharing one grid. Emits CSV rows:
/// `metric,label_a,label_b,snr_db,value,verdict` with metrics `gap`
/// (per point), `max_gap` (per pair) and `slope` (per curve). The verdict
/// column holds `pass`/`fail` when a tolerance applies, otherwise is empty.
pub fn compare_report(curves: &[FerCurve], spec: &ReportSpec) -> Result<String, AppError> {
    let first = curves
        .first()
        .ok_or_else(|| AppError::Invalid("no curves to compare".into()))?;
    let grid = first.grid();
    for c in curves {
        if c.grid() != grid {
            return Err(AppError::Invalid(format!(
                "grid mismatch between curves {} and {}",
                first.label, c.label
            )));
        }
    }
    let mut out = String::from("metric,label_a,label_b,snr_db,value,verdict\n");
    for (i, a) in curves.iter().enumerate() {
        for b in curves.iter().skip(i + 1) {
            let mut max_gap: f64 = 0.0;
            let mut any = false;
            for (pa, pb) in a.points.iter().zip(&b.points) {
                if pa.1 > 0.0 && pb.1 > 0.0 {
                    let gap = (pa.1.log10() - pb.1.log10()).abs();
                    max_gap = max_gap.max(gap);
                    any = true;
                    out.push_str(&format!(
                        "gap,{},{},{},{},{}\n",
                        a.label,
                        b.label,
                        fmt_f64(pa.0),
                        fmt_f64(gap),
                        verdict(spec.gap_tol.map(|t| gap <= t)),
                    ));
                }
            }
            if any {
                out.push_str(&format!(
                    "max_gap,{},{},,{},{}\n",
                    a.label,
                    b.label,
                    fmt_f64(max_gap),
                    verdict(spec.gap_tol.map(|t| max_gap <= t)),
                ));
            }
        }
    }
    for c in curves {
        if let Some(slope) = fit_slope(c, spec.slope_window) {
            out.push_str(&format!(
                "slope,{},,,{},{}\n",
                c.label,
                fmt_f64(slope),
                verdict(
                    spec.expected_slope
                        .map(|s| (slope - s).abs() <= spec.slope_tol)
                ),
            ));
        }
    }
    Ok(out)
}

fn verdict(checked: Option<bool>) -> &'static str {
    match checked {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(label: &str, scale: f64) -> FerCurve {
        // fer = scale · γ^{-3} on a 20–40 dB grid
        FerCurve {
            label: label.into(),
            points: (0..5)
                .map(|i| {
                    let db = 20.0 + 5.0 * i as f64;
                    (db, scale * 10f64.powf(-3.0 * db / 10.0), 0.0)
                })
                .collect(),
        }
    }

    #[test]
    fn identical_curves_have_zero_gap_and_slope_gap() {
        let a = curve("a", 2.0);
        let b = curve("b", 2.0);
        let spec = ReportSpec {
            gap_tol: Some(1e-12),
            expected_slope: Some(-3.0),
            slope_tol: 1e-9,
            ..ReportSpec::default()
        };
        let report = compare_report(&[a, b], &spec).unwrap();
        assert!(!report.contains("fail"), "{report}");
        assert!(report.contains("max_gap,a,b"));
    }

    #[test]
    fn fitted_slope_recovers_monomial_order() {
        let c = curve("c", 5.0);
        let s = fit_slope(&c, (20.0, 40.0)).unwrap();
        assert!((s - -3.0).abs() < 1e-9);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let a = curve("a", 1.0);
        let mut b = curve("b", 1.0);
        b.points[0].0 = 19.0;
        assert!(compare_report(&[a, b], &ReportSpec::default()).is_err());
    }

    #[test]
    fn constant_offset_reports_its_gap() {
        let a = curve("a", 1.0);
        let b = curve("b", 10.0);
        let spec = ReportSpec {
            gap_tol: Some(0.5),
            ..ReportSpec::default()
        };
        let report = compare_report(&[a, b], &spec).unwrap();
        assert!(report.contains("fail"));
        for line in report.lines().filter(|l| l.starts_with("max_gap")) {
            let val: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
            assert!((val - 1.0).abs() < 1e-9);
        }
    }
}
