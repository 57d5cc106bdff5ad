//! Parameter sweeps, cavity-detuning optimization, and filter-width
//! scans of the entanglement degree.
//!
//! Every grid cell evaluates the same pipeline: rebuild the system with
//! the swept values, build channels, select the degenerate pair, place
//! the default window, and compute `gamma'` plus the quantum efficiency.
//! Cells where the pipeline fails (dark configuration, non-converged
//! integral) are recorded as failed rather than aborting the sweep.
//!
//! Sweep semantics: `delta_c` opens the cavity splitting symmetrically
//! about the fixed cavity mean, `delta_cx` shifts both cavity modes
//! rigidly, couplings and `window_width` replace their scalar values.

use crate::cascade::build_channels;
use crate::entanglement::{
    default_window, gamma_prime, gamma_prime_unfiltered, quantum_efficiency,
    select_degenerate_pair, DegeneratePair, PairMode,
};
use crate::error::{CoreError, Result};
use crate::model::{Branch, SystemParams};
use crate::quadrature::Tolerance;
use crate::simplex::{minimize, SimplexOptions};
use alloc::vec::Vec;
use num_complex::Complex64;

/// Parameter a sweep axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Rigid cavity-exciton detuning (meV).
    DeltaCX,
    /// Cavity splitting about its mean (meV).
    DeltaC,
    /// H coupling (meV).
    OmegaH,
    /// V coupling (meV).
    OmegaV,
    /// Detection window width (meV).
    WindowWidth,
}

impl SweepParam {
    /// Stable identifier used in file output.
    pub fn id(self) -> &'static str {
        match self {
            SweepParam::DeltaCX => "delta_cx",
            SweepParam::DeltaC => "delta_c",
            SweepParam::OmegaH => "omega_h",
            SweepParam::OmegaV => "omega_v",
            SweepParam::WindowWidth => "window_width",
        }
    }
}

/// One sweep axis: `steps` evenly spaced values over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    /// Swept parameter.
    pub param: SweepParam,
    /// First value.
    pub min: f64,
    /// Last value.
    pub max: f64,
    /// Number of grid points (>= 1; a single point sits at `min`).
    pub steps: usize,
}

impl SweepAxis {
    /// The grid values of this axis.
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return alloc::vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.min + h * i as f64).collect()
    }

    /// Grid spacing (zero for a single point).
    pub fn step(&self) -> f64 {
        if self.steps <= 1 {
            0.0
        } else {
            (self.max - self.min) / (self.steps - 1) as f64
        }
    }
}

/// Sweep description: one or two axes over a base system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    /// Base parameters; swept values override their counterparts.
    pub base: SystemParams,
    /// Outer axis.
    pub axis1: SweepAxis,
    /// Optional inner axis.
    pub axis2: Option<SweepAxis>,
    /// Detection window width unless swept (meV).
    pub window_width: f64,
    /// Pair selection mode for every cell.
    pub pair_mode: PairMode,
    /// Quadrature tolerance.
    pub tol: Tolerance,
}

/// Evaluation of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellResult {
    /// Entanglement degree (NaN components when failed).
    pub gamma: Complex64,
    /// `|gamma'|` (NaN when failed).
    pub gamma_abs: f64,
    /// Quantum efficiency of the window (NaN when failed).
    pub quantum_efficiency: f64,
    /// Selected pair branches `(H, V)`.
    pub pair: (Branch, Branch),
    /// Pair energy mismatch (meV).
    pub mismatch: f64,
    /// False when the pipeline failed on this cell.
    pub converged: bool,
}

impl CellResult {
    fn failed() -> Self {
        CellResult {
            gamma: Complex64::new(f64::NAN, f64::NAN),
            gamma_abs: f64::NAN,
            quantum_efficiency: f64::NAN,
            pair: (Branch::Lower, Branch::Upper),
            mismatch: f64::NAN,
            converged: false,
        }
    }
}

/// One sweep grid cell with its axis values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    /// Axis-1 value.
    pub value1: f64,
    /// Axis-2 value (NaN for 1D sweeps).
    pub value2: f64,
    /// Evaluation outcome.
    pub result: CellResult,
}

/// Completed sweep, cells in row-major order (axis 1 outer).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// The sweep that produced this result.
    pub spec: SweepSpec,
    /// Row-major cells.
    pub cells: Vec<SweepCell>,
}

/// Apply one swept value to `(params, window_width)`.
pub fn apply_param(params: &mut SystemParams, width: &mut f64, param: SweepParam, value: f64) {
    match param {
        SweepParam::DeltaCX => {
            let mut d = params.detunings();
            d.delta_cx = value;
            *params = params.with_detunings(d);
        }
        SweepParam::DeltaC => {
            let mut d = params.detunings();
            d.delta_c = value;
            *params = params.with_detunings(d);
        }
        SweepParam::OmegaH => params.omega_h = value,
        SweepParam::OmegaV => params.omega_v = value,
        SweepParam::WindowWidth => *width = value,
    }
}

/// Evaluate one configuration: channels, pair, default window, gamma',
/// quantum efficiency. Failures map onto [`CellResult::failed`].
pub fn eval_cell(
    base: &SystemParams,
    overrides: &[(SweepParam, f64)],
    window_width: f64,
    pair_mode: PairMode,
    tol: Tolerance,
) -> CellResult {
    let mut params = *base;
    let mut width = window_width;
    for &(param, value) in overrides {
        apply_param(&mut params, &mut width, param, value);
    }
    let set = match build_channels(&params) {
        Ok(s) => s,
        Err(_) => return CellResult::failed(),
    };
    let pair = select_degenerate_pair(&set, pair_mode);
    let window = default_window(&pair, width);
    let gamma = match gamma_prime(&pair, &window, tol) {
        Ok(g) => g,
        Err(_) => return CellResult::failed(),
    };
    let qe = match quantum_efficiency(&set, &window, tol) {
        Ok(q) => q,
        Err(_) => return CellResult::failed(),
    };
    CellResult {
        gamma,
        gamma_abs: gamma.norm(),
        quantum_efficiency: qe,
        pair: (pair.h.branch(), pair.v.branch()),
        mismatch: pair.mismatch,
        converged: true,
    }
}

/// Run a sweep sequentially in row-major order.
pub fn sweep(spec: &SweepSpec) -> SweepResult {
    let v1 = spec.axis1.values();
    let mut cells = Vec::new();
    match spec.axis2 {
        None => {
            for &a in &v1 {
                let result = eval_cell(
                    &spec.base,
                    &[(spec.axis1.param, a)],
                    spec.window_width,
                    spec.pair_mode,
                    spec.tol,
                );
                cells.push(SweepCell {
                    value1: a,
                    value2: f64::NAN,
                    result,
                });
            }
        }
        Some(axis2) => {
            let v2 = axis2.values();
            for &a in &v1 {
                for &b in &v2 {
                    let result = eval_cell(
                        &spec.base,
                        &[(spec.axis1.param, a), (axis2.param, b)],
                        spec.window_width,
                        spec.pair_mode,
                        spec.tol,
                    );
                    cells.push(SweepCell {
                        value1: a,
                        value2: b,
                        result,
                    });
                }
            }
        }
    }
    SweepResult { spec: *spec, cells }
}

/// Optimization request over `(delta_c, delta_cx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeSpec {
    /// Base parameters (every non-optimized field fixed).
    pub base: SystemParams,
    /// Detection window width (meV).
    pub window_width: f64,
    /// Inclusive cavity-splitting bounds (meV).
    pub delta_c_bounds: (f64, f64),
    /// Inclusive rigid-detuning bounds (meV).
    pub delta_cx_bounds: (f64, f64),
    /// Coarse grid resolution per axis.
    pub grid_steps: usize,
    /// Pair selection mode.
    pub pair_mode: PairMode,
    /// Quadrature tolerance.
    pub tol: Tolerance,
    /// Run simplex refinement from the best grid cell.
    pub refine: bool,
}

impl OptimizeSpec {
    /// 41x41 grid with simplex refinement at the default tolerance.
    pub fn new(base: SystemParams, window_width: f64, delta_c_bounds: (f64, f64), delta_cx_bounds: (f64, f64)) -> Self {
        OptimizeSpec {
            base,
            window_width,
            delta_c_bounds,
            delta_cx_bounds,
            grid_steps: 41,
            pair_mode: PairMode::Auto,
            tol: Tolerance::default(),
            refine: true,
        }
    }
}

/// Optimization outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeResult {
    /// Optimal cavity splitting (meV).
    pub delta_c: f64,
    /// Optimal rigid detuning (meV).
    pub delta_cx: f64,
    /// Cell evaluation at the optimum.
    pub best: CellResult,
    /// Best coarse-grid point `(delta_c, delta_cx, gamma_abs)` before
    /// refinement.
    pub grid_best: (f64, f64, f64),
    /// Total cell evaluations.
    pub evaluations: usize,
}

/// Maximize `|gamma'|` over `(delta_c, delta_cx)`: coarse grid scan,
/// then bounded simplex refinement from the best cell.
///
/// Failed cells count as `-inf`; if the whole grid fails the run errors.
/// Exact grid ties prefer the smaller `|delta_c|`, then earlier
/// row-major position. The returned configuration re-evaluates at the
/// optimum, so `best.converged` reports its health.
pub fn optimize_gamma(spec: &OptimizeSpec) -> Result<OptimizeResult> {
    spec.base.validate()?;
    let mut evaluations = 0usize;
    let mut objective = |dc: f64, dcx: f64| -> f64 {
        evaluations += 1;
        let r = eval_cell(
            &spec.base,
            &[(SweepParam::DeltaC, dc), (SweepParam::DeltaCX, dcx)],
            spec.window_width,
            spec.pair_mode,
            spec.tol,
        );
        if r.converged {
            r.gamma_abs
        } else {
            f64::NEG_INFINITY
        }
    };

    let steps = spec.grid_steps.max(2);
    let axis = |bounds: (f64, f64), i: usize| {
        bounds.0 + (bounds.1 - bounds.0) * i as f64 / (steps - 1) as f64
    };
    let mut best = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for i in 0..steps {
        let dc = axis(spec.delta_c_bounds, i);
        for j in 0..steps {
            let dcx = axis(spec.delta_cx_bounds, j);
            let g = objective(dc, dcx);
            let better = g > best.0
                || (g == best.0 && dc.abs() < best.1.abs());
            if better {
                best = (g, dc, dcx);
            }
        }
    }
    if best.0 == f64::NEG_INFINITY {
        return Err(CoreError::AllCellsFailed);
    }
    let grid_best = (best.1, best.2, best.0);

    let (mut dc, mut dcx) = (best.1, best.2);
    if spec.refine {
        let step_c = (spec.delta_c_bounds.1 - spec.delta_c_bounds.0) / (steps - 1) as f64;
        let step_cx = (spec.delta_cx_bounds.1 - spec.delta_cx_bounds.0) / (steps - 1) as f64;
        let refined = minimize(
            |x: &[f64]| -objective(x[0], x[1]),
            &[dc, dcx],
            &[step_c, step_cx],
            &[spec.delta_c_bounds, spec.delta_cx_bounds],
            SimplexOptions::default(),
        );
        if -refined.value > best.0 {
            dc = refined.x[0];
            dcx = refined.x[1];
        }
    }

    let final_cell = eval_cell(
        &spec.base,
        &[(SweepParam::DeltaC, dc), (SweepParam::DeltaCX, dcx)],
        spec.window_width,
        spec.pair_mode,
        spec.tol,
    );
    evaluations += 1;
    Ok(OptimizeResult {
        delta_c: dc,
        delta_cx: dcx,
        best: final_cell,
        grid_best,
        evaluations,
    })
}

/// One point of a filter-width scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterPoint {
    /// Window width (meV).
    pub width: f64,
    /// Entanglement degree.
    pub gamma: Complex64,
    /// `|gamma'|`.
    pub gamma_abs: f64,
    /// Concurrence `2 |gamma'|`.
    pub concurrence: f64,
    /// Quantum efficiency.
    pub quantum_efficiency: f64,
    /// Whether all integrals converged.
    pub converged: bool,
}

/// Filter-width scan of a fixed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSweepResult {
    /// Scanned widths, in input order.
    pub points: Vec<FilterPoint>,
    /// Unfiltered (whole-line) entanglement degree.
    pub unfiltered_gamma: Complex64,
    /// The pair used everywhere.
    pub pair: DegeneratePair,
}

/// Scan window widths on one configuration; channels and pair are built
/// once, the window recenters per width via [`default_window`].
pub fn filter_sweep(
    base: &SystemParams,
    widths: &[f64],
    pair_mode: PairMode,
    tol: Tolerance,
) -> Result<FilterSweepResult> {
    base.validate()?;
    let set = build_channels(base)?;
    let pair = select_degenerate_pair(&set, pair_mode);
    let unfiltered = gamma_prime_unfiltered(&pair)?;
    let mut points = Vec::with_capacity(widths.len());
    for &width in widths {
        let window = default_window(&pair, width);
        let gamma = gamma_prime(&pair, &window, tol);
        let qe = quantum_efficiency(&set, &window, tol);
        match (gamma, qe) {
            (Ok(g), Ok(q)) => points.push(FilterPoint {
                width,
                gamma: g,
                gamma_abs: g.norm(),
                concurrence: 2.0 * g.norm(),
                quantum_efficiency: q,
                converged: true,
            }),
            _ => points.push(FilterPoint {
                width,
                gamma: Complex64::new(f64::NAN, f64::NAN),
                gamma_abs: f64::NAN,
                concurrence: f64::NAN,
                quantum_efficiency: f64::NAN,
                converged: false,
            }),
        }
    }
    Ok(FilterSweepResult {
        points,
        unfiltered_gamma: unfiltered,
        pair,
    })
}
