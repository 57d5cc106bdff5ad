//! Parallel sweep evaluation.
//!
//! Cells are independent, so they are farmed out to the rayon pool and
//! gathered back in row-major order. The result is cell-for-cell
//! identical to the sequential library sweep: scheduling can only change
//! evaluation order, never values.

use biexciton_core::explorer::{eval_cell, SweepCell, SweepResult, SweepSpec};
use rayon::prelude::*;

/// Row-major parallel equivalent of the library's sequential sweep.
pub fn par_sweep(spec: &SweepSpec) -> SweepResult {
    let v1 = spec.axis1.values();
    let mut jobs = Vec::new();
    match spec.axis2 {
        None => {
            for &a in &v1 {
                jobs.push((a, f64::NAN, vec![(spec.axis1.param, a)]));
            }
        }
        Some(axis2) => {
            let v2 = axis2.values();
            for &a in &v1 {
                for &b in &v2 {
                    jobs.push((a, b, vec![(spec.axis1.param, a), (axis2.param, b)]));
                }
            }
        }
    }
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|(a, b, overrides)| SweepCell {
            value1: *a,
            value2: *b,
            result: eval_cell(
                &spec.base,
                overrides,
                spec.window_width,
                spec.pair_mode,
                spec.tol,
            ),
        })
        .collect();
    SweepResult { spec: *spec, cells }
}
