//! CSV serialization of solve results.
//!
//! One row per result: `status,sigma,c1..c_{k-1},residual,
//! tangent_mismatch,margin,method` — k+5 columns for a k-arc result. All
//! numbers use Rust's default float formatting (shortest round-trip,
//! locale independent), so identical results are identical bytes.

use curveclose_core::solver::{SolveResult, SolveStatus};

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Success => "SUCCESS",
        SolveStatus::Degenerate => "DEGENERATE",
        SolveStatus::Rejected => "REJECTED",
        SolveStatus::Inconclusive => "INCONCLUSIVE",
    }
}

pub fn header(k: usize) -> String {
    let mut cols = vec!["status".to_string(), "sigma".to_string()];
    for i in 1..k {
        cols.push(format!("c{i}"));
    }
    cols.extend(
        ["residual", "tangent_mismatch", "margin", "method"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols.join(",")
}

pub fn row(result: &SolveResult) -> String {
    let mut cols = vec![
        status_name(result.status).to_string(),
        format!("\"{}\"", result.sigma),
    ];
    for c in result.cuts.values() {
        cols.push(format!("{c}"));
    }
    cols.push(format!("{}", result.residual));
    cols.push(format!("{}", result.tangent_mismatch));
    cols.push(format!("{}", result.margin));
    cols.push(result.method.name().to_string());
    cols.join(",")
}

pub fn render(results: &[SolveResult], k: usize) -> String {
    let mut out = header(k);
    out.push('\n');
    for r in results {
        out.push_str(&row(r));
        out.push('\n');
    }
    out
}
