//! Bounded Nelder-Mead simplex minimization.
//!
//! Derivative-free local refinement used after coarse grid scans. Box
//! bounds are enforced by coordinate projection before every function
//! evaluation. The implementation is deterministic: the initial simplex
//! is built from fixed per-coordinate steps and ordering ties keep
//! insertion order.

use alloc::vec::Vec;

/// Standard reflection/expansion/contraction/shrink coefficients.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// Iteration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Maximum number of iterations (reflect/expand/contract cycles).
    pub max_iter: usize,
    /// Terminate when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Terminate when the value spread falls below this.
    pub f_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 200,
            x_tol: 1e-9,
            f_tol: 1e-12,
        }
    }
}

/// Minimization outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    /// Best point found (inside bounds).
    pub x: Vec<f64>,
    /// Function value at `x`.
    pub value: f64,
    /// Iterations used.
    pub iterations: usize,
    /// Function evaluations used.
    pub evaluations: usize,
    /// Whether a tolerance (rather than the iteration cap) stopped the
    /// search.
    pub converged: bool,
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        if *xi < lo {
            *xi = lo;
        }
        if *xi > hi {
            *xi = hi;
        }
    }
}

/// Minimize `f` from `start` with initial per-coordinate displacements
/// `step`, keeping every evaluation inside `bounds`.
///
/// `start`, `step` and `bounds` must share one length `n >= 1`. A step
/// that would leave the box flips direction; a zero step falls back to
/// a small fraction of the box width.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    bounds: &[(f64, f64)],
    opts: SimplexOptions,
) -> SimplexResult {
    let n = start.len();
    debug_assert!(n >= 1 && step.len() == n && bounds.len() == n);

    let mut evaluations = 0usize;
    let mut eval = |x: &mut Vec<f64>| -> f64 {
        clamp(x, bounds);
        evaluations += 1;
        f(x)
    };

    // Initial simplex: start plus one displaced vertex per coordinate.
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0, bounds);
    points.push(x0.clone());
    for i in 0..n {
        let (lo, hi) = bounds[i];
        let mut s = step[i];
        if s == 0.0 {
            s = 0.05 * (hi - lo);
        }
        if s == 0.0 {
            s = 1e-6;
        }
        let mut v = x0.clone();
        if v[i] + s > hi || v[i] + s < lo {
            v[i] -= s;
        } else {
            v[i] += s;
        }
        points.push(v);
    }
    let mut values: Vec<f64> = points.iter_mut().map(|p| eval(p)).collect();

    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < opts.max_iter {
        // Order ascending by value; stable sort keeps insertion order on
        // ties, so the walk is deterministic.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(core::cmp::Ordering::Equal));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| points[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        points = reordered;
        values = revalues;

        // Convergence: diameter and value spread.
        let mut diam = 0.0f64;
        for p in &points[1..] {
            for (a, b) in p.iter().zip(&points[0]) {
                let d = (a - b).abs();
                if d > diam {
                    diam = d;
                }
            }
        }
        let spread = values[n] - values[0];
        if diam <= opts.x_tol && spread.abs() <= opts.f_tol {
            converged = true;
            break;
        }

        iterations += 1;

        // Centroid of all but the worst.
        let mut centroid = alloc::vec![0.0; n];
        for p in &points[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }

        let worst = values[n];
        let second_worst = values[n - 1];
        let best = values[0];

        let mut reflected: Vec<f64> = centroid
            .iter()
            .zip(&points[n])
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let f_r = eval(&mut reflected);

        if f_r < best {
            let mut expanded: Vec<f64> = centroid
                .iter()
                .zip(&points[n])
                .map(|(c, w)| c + GAMMA * ALPHA * (c - w))
                .collect();
            let f_e = eval(&mut expanded);
            if f_e < f_r {
                points[n] = expanded;
                values[n] = f_e;
            } else {
                points[n] = reflected;
                values[n] = f_r;
            }
        } else if f_r < second_worst {
            points[n] = reflected;
            values[n] = f_r;
        } else {
            // Contract toward the better of worst/reflected.
            let (toward, f_t) = if f_r < worst {
                (&reflected, f_r)
            } else {
                (&points[n].clone(), worst)
            };
            let mut contracted: Vec<f64> = centroid
                .iter()
                .zip(toward.iter())
                .map(|(c, w)| c + RHO * (w - c))
                .collect();
            let f_c = eval(&mut contracted);
            if f_c < f_t {
                points[n] = contracted;
                values[n] = f_c;
            } else {
                // Shrink toward the best vertex.
                let best_point = points[0].clone();
                for i in 1..=n {
                    let mut v: Vec<f64> = best_point
                        .iter()
                        .zip(&points[i])
                        .map(|(b, p)| b + SIGMA * (p - b))
                        .collect();
                    values[i] = eval(&mut v);
                    points[i] = v;
                }
            }
        }
    }

    // Final ordering to report the best vertex.
    let mut best_idx = 0;
    for i in 1..=n {
        if values[i] < values[best_idx] {
            best_idx = i;
        }
    }
    SimplexResult {
        x: points[best_idx].clone(),
        value: values[best_idx],
        iterations,
        evaluations,
        converged,
    }
}
