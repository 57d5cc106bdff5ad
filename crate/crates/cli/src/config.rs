//! TOML run configuration: schema, validation, and resolution to core
//! types.
//!
//! Field names carry their unit as a suffix (`_mev`, `_ps`) so config
//! files are self-documenting. Unknown keys are rejected. The system can
//! be specified either through detunings (`delta_*`) or through explicit
//! mode energies (`e_*`), never both at once.

use crate::error::AppError;
use biexciton_core::entanglement::PairMode;
use biexciton_core::explorer::{SweepAxis, SweepParam};
use biexciton_core::model::ParamWarning;
use biexciton_core::quadrature::Tolerance;
use biexciton_core::{Branch, Detunings, SystemParams};
use serde::{Deserialize, Serialize};

/// Top-level configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Physical system; omitted fields fall back to library defaults.
    #[serde(default)]
    pub system: SystemSection,
    /// Detection window (width, pair selection).
    #[serde(default)]
    pub window: WindowSection,
    /// Quadrature tolerance overrides.
    #[serde(default)]
    pub tolerance: ToleranceSection,
    /// Output directory (overridden by `--out`).
    #[serde(default)]
    pub output: OutputSection,
    /// `spectrum` command block.
    pub spectrum: Option<SpectrumSection>,
    /// `map` command block.
    pub map: Option<MapSection>,
    /// `optimize` command block.
    pub optimize: Option<OptimizeSection>,
    /// `filter-sweep` command block.
    pub filter: Option<FilterSection>,
    /// `bipolariton` command block.
    pub bipolariton: Option<BipolaritonSection>,
}

/// `[system]` block; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    /// Exciton fine-structure splitting (meV).
    pub delta_x_mev: Option<f64>,
    /// Cavity mode splitting (meV).
    pub delta_c_mev: Option<f64>,
    /// Cavity-minus-exciton mean detuning (meV).
    pub delta_cx_mev: Option<f64>,
    /// Exciton-minus-cavity mean detuning (meV); negated alias of
    /// `delta_cx_mev`, at most one of the two may be present.
    pub delta_xc_mev: Option<f64>,
    /// H exciton energy (meV); explicit-energy form.
    pub e_x_h_mev: Option<f64>,
    /// V exciton energy (meV).
    pub e_x_v_mev: Option<f64>,
    /// H cavity energy (meV).
    pub e_c_h_mev: Option<f64>,
    /// V cavity energy (meV).
    pub e_c_v_mev: Option<f64>,
    /// H exciton-cavity coupling (meV).
    pub omega_h_mev: Option<f64>,
    /// V exciton-cavity coupling (meV).
    pub omega_v_mev: Option<f64>,
    /// Biexciton two-photon energy (meV).
    pub e_xx_mev: Option<f64>,
    /// Biexciton linewidth FWHM (meV).
    pub gamma_xx_mev: Option<f64>,
    /// Cavity photon lifetime (ps).
    pub tau_c_ps: Option<f64>,
    /// Exciton lifetime (ps).
    pub tau_x_ps: Option<f64>,
    /// Include the exciton-lifetime term in polariton linewidths.
    pub exciton_broadening: Option<bool>,
}

/// `[window]` block.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    /// Window width (meV); default 0.1.
    pub width_mev: Option<f64>,
    /// H branch of an explicit pair: "lower" or "upper".
    pub pair_h: Option<String>,
    /// V branch of an explicit pair.
    pub pair_v: Option<String>,
}

/// `[tolerance]` block.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    /// Relative tolerance of adaptive integrals.
    pub rel: Option<f64>,
    /// Absolute floor of adaptive integrals.
    pub abs: Option<f64>,
}

/// `[output]` block.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Directory for result files.
    pub dir: Option<String>,
}

/// `[spectrum]` block: the emission-energy grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// Grid start (meV).
    pub e_min_mev: f64,
    /// Grid end (meV).
    pub e_max_mev: f64,
    /// Number of grid points (>= 2).
    pub points: usize,
}

/// `[map]` block: one or two sweep axes.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    /// First axis parameter: delta_cx | delta_c | omega_h | omega_v |
    /// window_width.
    pub param1: String,
    /// First axis start (meV).
    pub min1_mev: f64,
    /// First axis end (meV).
    pub max1_mev: f64,
    /// First axis point count.
    pub steps1: usize,
    /// Optional second axis parameter.
    pub param2: Option<String>,
    /// Second axis start (meV).
    pub min2_mev: Option<f64>,
    /// Second axis end (meV).
    pub max2_mev: Option<f64>,
    /// Second axis point count.
    pub steps2: Option<usize>,
}

/// `[optimize]` block: bounds of the detuning search.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    /// Lower cavity-splitting bound (meV).
    pub delta_c_min_mev: f64,
    /// Upper cavity-splitting bound (meV).
    pub delta_c_max_mev: f64,
    /// Lower rigid-detuning bound (meV).
    pub delta_cx_min_mev: f64,
    /// Upper rigid-detuning bound (meV).
    pub delta_cx_max_mev: f64,
    /// Coarse grid points per axis; default 41.
    pub grid_steps: Option<usize>,
    /// Run simplex refinement after the grid; default true.
    pub refine: Option<bool>,
}

/// `[filter]` block: the window widths to scan.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSection {
    /// Strictly increasing positive widths (meV).
    pub widths_mev: Vec<f64>,
}

/// `[bipolariton]` block: two-excitation manifold extension.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BipolaritonSection {
    /// Energy of the H photon emitted at the biexciton transition (meV).
    pub e_cxx_h_mev: f64,
    /// Energy of the V photon emitted at the biexciton transition (meV).
    pub e_cxx_v_mev: f64,
    /// Biexciton-photon coupling, H (meV); default 0.
    pub omega_xx_h_mev: Option<f64>,
    /// Biexciton-photon coupling, V (meV); default 0.
    pub omega_xx_v_mev: Option<f64>,
    /// Optional symmetry tuning of the emitted-photon energies.
    pub tune: Option<TuneSection>,
}

/// `[bipolariton.tune]` block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneSection {
    /// Lower H bound (meV).
    pub h_min_mev: f64,
    /// Upper H bound (meV).
    pub h_max_mev: f64,
    /// Lower V bound (meV).
    pub v_min_mev: f64,
    /// Upper V bound (meV).
    pub v_max_mev: f64,
    /// Coarse grid points per axis; default 21.
    pub grid_steps: Option<usize>,
}

/// Fully resolved system, embedded into every result JSON so a run can
/// be reproduced from its output alone.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedSystem {
    /// H exciton energy (meV).
    pub e_x_h_mev: f64,
    /// V exciton energy (meV).
    pub e_x_v_mev: f64,
    /// H cavity energy (meV).
    pub e_c_h_mev: f64,
    /// V cavity energy (meV).
    pub e_c_v_mev: f64,
    /// H coupling (meV).
    pub omega_h_mev: f64,
    /// V coupling (meV).
    pub omega_v_mev: f64,
    /// Biexciton two-photon energy (meV).
    pub e_xx_mev: f64,
    /// Biexciton linewidth (meV).
    pub gamma_xx_mev: f64,
    /// Cavity lifetime (ps).
    pub tau_c_ps: f64,
    /// Exciton lifetime (ps).
    pub tau_x_ps: f64,
    /// Exciton-lifetime broadening flag.
    pub exciton_broadening: bool,
    /// Derived exciton splitting (meV).
    pub delta_x_mev: f64,
    /// Derived cavity splitting (meV).
    pub delta_c_mev: f64,
    /// Derived cavity-exciton detuning (meV).
    pub delta_cx_mev: f64,
}

impl ResolvedSystem {
    /// Snapshot the resolved parameters.
    pub fn of(p: &SystemParams) -> Self {
        let d = p.detunings();
        ResolvedSystem {
            e_x_h_mev: p.e_x_h,
            e_x_v_mev: p.e_x_v,
            e_c_h_mev: p.e_c_h,
            e_c_v_mev: p.e_c_v,
            omega_h_mev: p.omega_h,
            omega_v_mev: p.omega_v,
            e_xx_mev: p.e_xx,
            gamma_xx_mev: p.gamma_xx,
            tau_c_ps: p.tau_c,
            tau_x_ps: p.tau_x,
            exciton_broadening: p.exciton_broadening,
            delta_x_mev: d.delta_x,
            delta_c_mev: d.delta_c,
            delta_cx_mev: d.delta_cx,
        }
    }
}

/// Resolved run context shared by every command.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedRun {
    /// System parameters.
    pub system: ResolvedSystem,
    /// Window width (meV).
    pub window_width_mev: f64,
    /// Pair selection: "auto" or "h:<branch>,v:<branch>".
    pub pair: String,
    /// Relative quadrature tolerance.
    pub tol_rel: f64,
    /// Absolute quadrature tolerance.
    pub tol_abs: f64,
}

fn parse_branch(label: &str) -> Result<Branch, AppError> {
    match label {
        "lower" => Ok(Branch::Lower),
        "upper" => Ok(Branch::Upper),
        other => Err(AppError::config(format!(
            "branch must be \"lower\" or \"upper\", got \"{other}\""
        ))),
    }
}

fn parse_sweep_param(label: &str) -> Result<SweepParam, AppError> {
    for p in [
        SweepParam::DeltaCX,
        SweepParam::DeltaC,
        SweepParam::OmegaH,
        SweepParam::OmegaV,
        SweepParam::WindowWidth,
    ] {
        if p.id() == label {
            return Ok(p);
        }
    }
    Err(AppError::config(format!(
        "unknown sweep parameter \"{label}\" (expected delta_cx, delta_c, omega_h, omega_v or window_width)"
    )))
}

impl RunConfig {
    /// Parse a TOML string; schema violations become config errors.
    pub fn from_toml(text: &str) -> Result<Self, AppError> {
        toml::from_str(text).map_err(|e| AppError::config(format!("invalid config: {e}")))
    }

    /// Resolve the `[system]` block to validated parameters.
    pub fn resolve_system(&self) -> Result<SystemParams, AppError> {
        let s = &self.system;
        if s.delta_cx_mev.is_some() && s.delta_xc_mev.is_some() {
            return Err(AppError::config(
                "set either delta_cx_mev or delta_xc_mev, not both",
            ));
        }
        let detuning_form = s.delta_x_mev.is_some()
            || s.delta_c_mev.is_some()
            || s.delta_cx_mev.is_some()
            || s.delta_xc_mev.is_some();
        let energy_form = s.e_x_h_mev.is_some()
            || s.e_x_v_mev.is_some()
            || s.e_c_h_mev.is_some()
            || s.e_c_v_mev.is_some();
        if detuning_form && energy_form {
            return Err(AppError::config(
                "specify the system either through detunings (delta_*) or explicit energies (e_*), not both",
            ));
        }

        let mut p = SystemParams::default();
        if energy_form {
            p.e_x_h = s.e_x_h_mev.unwrap_or(0.0);
            p.e_x_v = s.e_x_v_mev.unwrap_or(0.0);
            p.e_c_h = s.e_c_h_mev.unwrap_or(0.0);
            p.e_c_v = s.e_c_v_mev.unwrap_or(0.0);
        } else {
            let delta_cx = s
                .delta_cx_mev
                .or(s.delta_xc_mev.map(|v| -v))
                .unwrap_or(0.0);
            p = p.with_detunings(Detunings {
                delta_x: s.delta_x_mev.unwrap_or(0.0),
                delta_c: s.delta_c_mev.unwrap_or(0.0),
                delta_cx,
            });
        }
        if let Some(v) = s.omega_h_mev {
            p.omega_h = v;
        }
        if let Some(v) = s.omega_v_mev {
            p.omega_v = v;
        }
        if let Some(v) = s.e_xx_mev {
            p.e_xx = v;
        }
        if let Some(v) = s.gamma_xx_mev {
            p.gamma_xx = v;
        }
        if let Some(v) = s.tau_c_ps {
            p.tau_c = v;
        }
        if let Some(v) = s.tau_x_ps {
            p.tau_x = v;
        }
        if let Some(v) = s.exciton_broadening {
            p.exciton_broadening = v;
        }

        let warnings = p
            .validate()
            .map_err(|e| AppError::config(format!("invalid system: {e}")))?;
        for w in warnings.warnings {
            match w {
                ParamWarning::SpectralOverlap {
                    separation,
                    threshold,
                } => eprintln!(
                    "warning: biexciton and polariton emission lines overlap \
                     (separation {separation:.4} meV, wanted >= {threshold:.4} meV)"
                ),
            }
        }
        Ok(p)
    }

    /// Window width in meV (default 0.1).
    pub fn window_width(&self) -> Result<f64, AppError> {
        let w = self.window.width_mev.unwrap_or(0.1);
        if !(w > 0.0) || !w.is_finite() {
            return Err(AppError::config("window width_mev must be positive"));
        }
        Ok(w)
    }

    /// Pair selection mode from the `[window]` block.
    pub fn pair_mode(&self) -> Result<PairMode, AppError> {
        match (&self.window.pair_h, &self.window.pair_v) {
            (None, None) => Ok(PairMode::Auto),
            (Some(h), Some(v)) => Ok(PairMode::Explicit {
                h: parse_branch(h)?,
                v: parse_branch(v)?,
            }),
            _ => Err(AppError::config(
                "pair_h and pair_v must be given together",
            )),
        }
    }

    /// Quadrature tolerance, with an optional CLI override of the
    /// relative part.
    pub fn tolerance(&self, rel_override: Option<f64>) -> Result<Tolerance, AppError> {
        let mut tol = Tolerance::default();
        if let Some(r) = self.tolerance.rel {
            tol.rel = r;
        }
        if let Some(a) = self.tolerance.abs {
            tol.abs = a;
        }
        if let Some(r) = rel_override {
            tol.rel = r;
        }
        if !(tol.rel > 0.0) || !(tol.abs >= 0.0) {
            return Err(AppError::config(
                "tolerance rel must be > 0 and abs >= 0",
            ));
        }
        Ok(tol)
    }

    /// Shared resolved-run snapshot for result files.
    pub fn resolved_run(
        &self,
        params: &SystemParams,
        tol: Tolerance,
    ) -> Result<ResolvedRun, AppError> {
        let pair = match self.pair_mode()? {
            PairMode::Auto => "auto".to_string(),
            PairMode::Explicit { h, v } => format!("h:{},v:{}", h.tag(), v.tag()),
        };
        Ok(ResolvedRun {
            system: ResolvedSystem::of(params),
            window_width_mev: self.window_width()?,
            pair,
            tol_rel: tol.rel,
            tol_abs: tol.abs,
        })
    }

    /// The `[map]` block resolved to sweep axes.
    pub fn map_axes(&self) -> Result<(SweepAxis, Option<SweepAxis>), AppError> {
        let m = self
            .map
            .as_ref()
            .ok_or_else(|| AppError::config("missing [map] section"))?;
        let axis = |param: &str, min: f64, max: f64, steps: usize| -> Result<SweepAxis, AppError> {
            if steps == 0 {
                return Err(AppError::config("sweep axis needs steps >= 1"));
            }
            if !min.is_finite() || !max.is_finite() || (steps > 1 && max <= min) {
                return Err(AppError::config(
                    "sweep axis needs finite bounds with max > min",
                ));
            }
            Ok(SweepAxis {
                param: parse_sweep_param(param)?,
                min,
                max,
                steps,
            })
        };
        let axis1 = axis(&m.param1, m.min1_mev, m.max1_mev, m.steps1)?;
        let axis2 = match (&m.param2, m.min2_mev, m.max2_mev, m.steps2) {
            (None, None, None, None) => None,
            (Some(p), Some(min), Some(max), Some(steps)) => Some(axis(p, min, max, steps)?),
            _ => {
                return Err(AppError::config(
                    "param2/min2_mev/max2_mev/steps2 must be given together",
                ))
            }
        };
        Ok((axis1, axis2))
    }

    /// The `[filter]` widths, validated.
    pub fn filter_widths(&self) -> Result<Vec<f64>, AppError> {
        let f = self
            .filter
            .as_ref()
            .ok_or_else(|| AppError::config("missing [filter] section"))?;
        if f.widths_mev.is_empty() {
            return Err(AppError::config("filter widths_mev must not be empty"));
        }
        for pair in f.widths_mev.windows(2) {
            if pair[1] <= pair[0] {
                return Err(AppError::config(
                    "filter widths_mev must be strictly increasing",
                ));
            }
        }
        if !f.widths_mev.iter().all(|w| w.is_finite() && *w > 0.0) {
            return Err(AppError::config("filter widths_mev must be positive"));
        }
        Ok(f.widths_mev.clone())
    }
}
