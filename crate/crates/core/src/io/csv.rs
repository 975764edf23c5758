//! Diagnostics table as CSV.

use std::fmt::Write as _;

use crate::simulator::{DiagnosticsRecord, DiagnosticsSeries};

use super::IoError;

pub const CSV_HEADER: &str = "t,lq_norm,l2_norm,recip_norm,du_beta,dissipation,work,energy_residual,iters";

/// 17 significant digits, with `inf`, `-inf` and `nan` spelled out.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_diagnostics(series: &DiagnosticsSeries) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &series.records {
        let reals = [r.t, r.lq_norm, r.l2_norm, r.recip_norm, r.du_beta, r.dissipation, r.work, r.energy_residual];
        for v in reals {
            out.push_str(&format_real(v));
            out.push(',');
        }
        writeln!(out, "{}", r.iters).expect("writing to a String");
    }
    out
}

pub fn parse_diagnostics(text: &str) -> Result<DiagnosticsSeries, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(IoError::Csv { line: 1, message: format!("expected header `{CSV_HEADER}`") }),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| IoError::Csv { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(bad(format!("expected 9 fields, found {}", fields.len())));
        }
        let mut reals = [0.0; 8];
        for (slot, f) in reals.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| bad(format!("not a number: `{f}`")))?;
        }
        let iters = fields[8].parse().map_err(|_| bad(format!("not a count: `{}`", fields[8])))?;
        let [t, lq_norm, l2_norm, recip_norm, du_beta, dissipation, work, energy_residual] = reals;
        records.push(DiagnosticsRecord {
            t,
            lq_norm,
            l2_norm,
            recip_norm,
            du_beta,
            dissipation,
            work,
            energy_residual,
            iters,
        });
    }
    Ok(DiagnosticsSeries { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            lq_norm: 0.1 + t,
            l2_norm: std::f64::consts::PI,
            recip_norm: f64::INFINITY,
            du_beta: 1e-300,
            dissipation: 2.0 / 3.0,
            work: -0.0,
            energy_residual: 5e-324,
            iters: 17,
        }
    }

    #[test]
    fn empty_series_is_header_only() {
        assert_eq!(write_diagnostics(&DiagnosticsSeries::default()), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_record() {
        let text = write_diagnostics(&DiagnosticsSeries { records: vec![rec(0.5)] });
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 9);
        assert_eq!(lines[1].split(',').nth(3), Some("inf"));
        assert!(lines[1].starts_with("5.0000000000000000e-1,"));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let series = DiagnosticsSeries { records: (0..5).map(|i| rec(0.1 * i as f64)).collect() };
        let back = parse_diagnostics(&write_diagnostics(&series)).unwrap();
        for (a, b) in series.records.iter().zip(&back.records) {
            assert_eq!(a.t.to_bits(), b.t.to_bits());
            assert_eq!(a.lq_norm.to_bits(), b.lq_norm.to_bits());
            assert_eq!(a.work.to_bits(), b.work.to_bits());
            assert_eq!(a.energy_residual.to_bits(), b.energy_residual.to_bits());
        }
        assert_eq!(back, series);
    }

    #[test]
    fn malformed_rows() {
        assert!(parse_diagnostics("t,x\n").is_err());
        let bad = format!("{CSV_HEADER}\n1,2,3\n");
        assert!(matches!(parse_diagnostics(&bad), Err(IoError::Csv { line: 2, .. })));
    }
}
