//! The five commands. Each is a thin shell: resolve config, call the
//! library, serialize the result.

use crate::config::{ResolvedRun, RunConfig};
use crate::error::AppError;
use crate::output::{finite, sig12, write_csv, write_json};
use crate::parallel::par_sweep;
use biexciton_core::bipolariton::{
    eigen_symmetric, transition_asymmetry, tune_symmetric, AsymmetryReport, BipolaritonParams,
    DIM,
};
use biexciton_core::cascade::{build_channels, line_table, pl_spectrum, Transition};
use biexciton_core::entanglement::select_degenerate_pair;
use biexciton_core::explorer::{filter_sweep, optimize_gamma, OptimizeSpec, SweepSpec};
use biexciton_core::Branch;
use serde::Serialize;
use std::path::PathBuf;

/// Schema tag written into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// Per-invocation context resolved from the command line.
pub struct Ctx {
    /// Output directory; created if missing.
    pub out_dir: PathBuf,
    /// `--tol` override of the relative quadrature tolerance.
    pub tol_override: Option<f64>,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn ensure_out_dir(&self) -> Result<(), AppError> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| AppError::Io(format!("creating {}: {e}", self.out_dir.display())))
    }
}

fn pair_tag(h: Branch, v: Branch) -> String {
    format!("{}_H+{}_V", h.tag(), v.tag())
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct LineJson {
    polarization: &'static str,
    branch: &'static str,
    transition: &'static str,
    center_mev: f64,
    fwhm_mev: f64,
    weight_sq: f64,
}

#[derive(Serialize)]
struct SpectrumJson {
    schema_version: u32,
    config: ResolvedRun,
    e_min_mev: f64,
    e_max_mev: f64,
    points: usize,
    covers_all_lines: bool,
    lines: Vec<LineJson>,
}

/// Emission spectrum on an energy grid plus the analytic line table.
pub fn cmd_spectrum(cfg: &RunConfig, ctx: &Ctx) -> Result<(), AppError> {
    let params = cfg.resolve_system()?;
    let tol = cfg.tolerance(ctx.tol_override)?;
    let grid = cfg
        .spectrum
        .as_ref()
        .ok_or_else(|| AppError::config("missing [spectrum] section"))?;
    if grid.points < 2 {
        return Err(AppError::config("spectrum points must be >= 2"));
    }
    if !(grid.e_max_mev > grid.e_min_mev) {
        return Err(AppError::config("spectrum needs e_max_mev > e_min_mev"));
    }

    let set = build_channels(&params)?;
    let lines = line_table(&set);
    let n = grid.points;
    let energies: Vec<f64> = (0..n)
        .map(|i| grid.e_min_mev + (grid.e_max_mev - grid.e_min_mev) * i as f64 / (n - 1) as f64)
        .collect();
    let spectrum = pl_spectrum(&set, &energies);
    if !spectrum.covers_all_lines {
        eprintln!("warning: the energy grid does not cover every emission line");
    }

    ctx.ensure_out_dir()?;
    let rows: Vec<String> = (0..n)
        .map(|i| {
            format!(
                "{},{},{}",
                sig12(spectrum.energy[i]),
                sig12(spectrum.weighted_h[i]),
                sig12(spectrum.weighted_v[i])
            )
        })
        .collect();
    write_csv(
        &ctx.path("spectrum.csv"),
        "energy_meV,intensity_H,intensity_V",
        &rows,
    )?;

    let line_json: Vec<LineJson> = lines
        .iter()
        .map(|l| LineJson {
            polarization: l.polarization.tag(),
            branch: l.branch.tag(),
            transition: match l.transition {
                Transition::BiexcitonToPolariton => "biexciton_to_polariton",
                Transition::PolaritonToGround => "polariton_to_ground",
            },
            center_mev: l.center,
            fwhm_mev: l.fwhm,
            weight_sq: l.weight_sq,
        })
        .collect();
    write_json(
        &ctx.path("spectrum_lines.json"),
        &SpectrumJson {
            schema_version: SCHEMA_VERSION,
            config: cfg.resolved_run(&params, tol)?,
            e_min_mev: grid.e_min_mev,
            e_max_mev: grid.e_max_mev,
            points: n,
            covers_all_lines: spectrum.covers_all_lines,
            lines: line_json,
        },
    )?;
    println!(
        "spectrum: {} lines over [{}, {}] meV at {} points -> {}",
        lines.len(),
        grid.e_min_mev,
        grid.e_max_mev,
        n,
        ctx.path("spectrum.csv").display()
    );
    Ok(())
}

// --------------------------------------------------------------------- map

#[derive(Serialize)]
struct AxisJson {
    param: &'static str,
    min: f64,
    max: f64,
    steps: usize,
}

#[derive(Serialize)]
struct BestCellJson {
    value1: f64,
    value2: Option<f64>,
    gamma_abs: f64,
    qe: f64,
    pair: String,
}

#[derive(Serialize)]
struct MapJson {
    schema_version: u32,
    config: ResolvedRun,
    axis1: AxisJson,
    axis2: Option<AxisJson>,
    cells: usize,
    converged_cells: usize,
    best: Option<BestCellJson>,
}

/// One- or two-axis sweep of the entanglement degree.
pub fn cmd_map(cfg: &RunConfig, ctx: &Ctx) -> Result<(), AppError> {
    let params = cfg.resolve_system()?;
    let tol = cfg.tolerance(ctx.tol_override)?;
    let (axis1, axis2) = cfg.map_axes()?;
    let spec = SweepSpec {
        base: params,
        axis1,
        axis2,
        window_width: cfg.window_width()?,
        pair_mode: cfg.pair_mode()?,
        tol,
    };
    let result = par_sweep(&spec);

    ctx.ensure_out_dir()?;
    let rows: Vec<String> = result
        .cells
        .iter()
        .map(|c| {
            format!(
                "{},{},{},{},{},{}",
                sig12(c.value1),
                sig12(c.value2),
                sig12(c.result.gamma_abs),
                sig12(c.result.quantum_efficiency),
                pair_tag(c.result.pair.0, c.result.pair.1),
                c.result.converged
            )
        })
        .collect();
    write_csv(
        &ctx.path("map.csv"),
        "axis1,axis2,gamma_abs,qe,pair,converged",
        &rows,
    )?;

    let mut best: Option<&biexciton_core::explorer::SweepCell> = None;
    for cell in result.cells.iter().filter(|c| c.result.converged) {
        if best.map_or(true, |b| cell.result.gamma_abs > b.result.gamma_abs) {
            best = Some(cell);
        }
    }
    let converged_cells = result.cells.iter().filter(|c| c.result.converged).count();
    let axis_json = |a: &biexciton_core::explorer::SweepAxis| AxisJson {
        param: a.param.id(),
        min: a.min,
        max: a.max,
        steps: a.steps,
    };
    write_json(
        &ctx.path("map.json"),
        &MapJson {
            schema_version: SCHEMA_VERSION,
            config: cfg.resolved_run(&params, tol)?,
            axis1: axis_json(&spec.axis1),
            axis2: spec.axis2.as_ref().map(axis_json),
            cells: result.cells.len(),
            converged_cells,
            best: best.map(|c| BestCellJson {
                value1: c.value1,
                value2: finite(c.value2),
                gamma_abs: c.result.gamma_abs,
                qe: c.result.quantum_efficiency,
                pair: pair_tag(c.result.pair.0, c.result.pair.1),
            }),
        },
    )?;
    match best {
        Some(c) => println!(
            "map: best |gamma'| = {} at {} = {}{}",
            sig12(c.result.gamma_abs),
            spec.axis1.param.id(),
            sig12(c.value1),
            match spec.axis2 {
                Some(a2) => format!(", {} = {}", a2.param.id(), sig12(c.value2)),
                None => String::new(),
            }
        ),
        None => println!("map: no converged cells"),
    }
    Ok(())
}

// ---------------------------------------------------------------- optimize

#[derive(Serialize)]
struct GridBestJson {
    delta_c_mev: f64,
    delta_cx_mev: f64,
    gamma_abs: f64,
}

#[derive(Serialize)]
struct OptimizeJson {
    schema_version: u32,
    config: ResolvedRun,
    delta_c_bounds_mev: (f64, f64),
    delta_cx_bounds_mev: (f64, f64),
    grid_steps: usize,
    refine: bool,
    delta_c_mev: f64,
    delta_cx_mev: f64,
    gamma_abs: Option<f64>,
    qe: Option<f64>,
    pair: String,
    converged: bool,
    grid_best: GridBestJson,
    evaluations: usize,
}

/// Maximize the entanglement degree over the two cavity detunings.
pub fn cmd_optimize(cfg: &RunConfig, ctx: &Ctx) -> Result<(), AppError> {
    let params = cfg.resolve_system()?;
    let tol = cfg.tolerance(ctx.tol_override)?;
    let section = cfg
        .optimize
        .as_ref()
        .ok_or_else(|| AppError::config("missing [optimize] section"))?;
    let bounds_ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && hi > lo;
    if !bounds_ok(section.delta_c_min_mev, section.delta_c_max_mev)
        || !bounds_ok(section.delta_cx_min_mev, section.delta_cx_max_mev)
    {
        return Err(AppError::config(
            "optimize bounds must be finite with max > min",
        ));
    }
    let spec = OptimizeSpec {
        grid_steps: section.grid_steps.unwrap_or(41),
        refine: section.refine.unwrap_or(true),
        pair_mode: cfg.pair_mode()?,
        tol,
        ..OptimizeSpec::new(
            params,
            cfg.window_width()?,
            (section.delta_c_min_mev, section.delta_c_max_mev),
            (section.delta_cx_min_mev, section.delta_cx_max_mev),
        )
    };
    let result = optimize_gamma(&spec)?;

    ctx.ensure_out_dir()?;
    write_json(
        &ctx.path("optimize.json"),
        &OptimizeJson {
            schema_version: SCHEMA_VERSION,
            config: cfg.resolved_run(&params, tol)?,
            delta_c_bounds_mev: spec.delta_c_bounds,
            delta_cx_bounds_mev: spec.delta_cx_bounds,
            grid_steps: spec.grid_steps,
            refine: spec.refine,
            delta_c_mev: result.delta_c,
            delta_cx_mev: result.delta_cx,
            gamma_abs: finite(result.best.gamma_abs),
            qe: finite(result.best.quantum_efficiency),
            pair: pair_tag(result.best.pair.0, result.best.pair.1),
            converged: result.best.converged,
            grid_best: GridBestJson {
                delta_c_mev: result.grid_best.0,
                delta_cx_mev: result.grid_best.1,
                gamma_abs: result.grid_best.2,
            },
            evaluations: result.evaluations,
        },
    )?;
    println!(
        "optimize: delta_c = {} meV, delta_cx = {} meV, |gamma'| = {}, qe = {}",
        sig12(result.delta_c),
        sig12(result.delta_cx),
        sig12(result.best.gamma_abs),
        sig12(result.best.quantum_efficiency)
    );
    Ok(())
}

// ------------------------------------------------------------ filter-sweep

#[derive(Serialize)]
struct FilterPointJson {
    width_mev: f64,
    gamma_abs: Option<f64>,
    concurrence: Option<f64>,
    qe: Option<f64>,
    converged: bool,
}

#[derive(Serialize)]
struct FilterJson {
    schema_version: u32,
    config: ResolvedRun,
    pair: String,
    unfiltered_gamma_abs: f64,
    points: Vec<FilterPointJson>,
}

/// Entanglement degree and quantum efficiency versus window width.
pub fn cmd_filter_sweep(cfg: &RunConfig, ctx: &Ctx) -> Result<(), AppError> {
    let params = cfg.resolve_system()?;
    let tol = cfg.tolerance(ctx.tol_override)?;
    let widths = cfg.filter_widths()?;
    let result = filter_sweep(&params, &widths, cfg.pair_mode()?, tol)?;

    ctx.ensure_out_dir()?;
    let rows: Vec<String> = result
        .points
        .iter()
        .map(|p| {
            format!(
                "{},{},{},{}",
                sig12(p.width),
                sig12(p.gamma_abs),
                sig12(p.quantum_efficiency),
                p.converged
            )
        })
        .collect();
    write_csv(
        &ctx.path("filter_sweep.csv"),
        "width_meV,gamma_abs,qe,converged",
        &rows,
    )?;
    write_json(
        &ctx.path("filter_sweep.json"),
        &FilterJson {
            schema_version: SCHEMA_VERSION,
            config: cfg.resolved_run(&params, tol)?,
            pair: pair_tag(result.pair.h.branch(), result.pair.v.branch()),
            unfiltered_gamma_abs: result.unfiltered_gamma.norm(),
            points: result
                .points
                .iter()
                .map(|p| FilterPointJson {
                    width_mev: p.width,
                    gamma_abs: finite(p.gamma_abs),
                    concurrence: finite(p.concurrence),
                    qe: finite(p.quantum_efficiency),
                    converged: p.converged,
                })
                .collect(),
        },
    )?;
    println!(
        "filter-sweep: {} widths, unfiltered |gamma'| = {} -> {}",
        widths.len(),
        sig12(result.unfiltered_gamma.norm()),
        ctx.path("filter_sweep.csv").display()
    );
    Ok(())
}

// ------------------------------------------------------------- bipolariton

#[derive(Serialize)]
struct EigenstateJson {
    energy_mev: f64,
    components: [f64; DIM],
}

#[derive(Serialize)]
struct AsymmetryJson {
    metric: f64,
    delta_e_h_mev: f64,
    delta_e_v_mev: f64,
    gamma_eff_h_mev: f64,
    gamma_eff_v_mev: f64,
    xx_weight: f64,
    initial_energy_mev: f64,
}

impl AsymmetryJson {
    fn of(r: &AsymmetryReport) -> Self {
        AsymmetryJson {
            metric: r.metric,
            delta_e_h_mev: r.delta_e_h,
            delta_e_v_mev: r.delta_e_v,
            gamma_eff_h_mev: r.gamma_eff_h,
            gamma_eff_v_mev: r.gamma_eff_v,
            xx_weight: r.xx_weight,
            initial_energy_mev: r.initial_energy,
        }
    }
}

#[derive(Serialize)]
struct TunedJson {
    e_cxx_h_mev: f64,
    e_cxx_v_mev: f64,
    evaluations: usize,
    report: AsymmetryJson,
}

#[derive(Serialize)]
struct BipolaritonJson {
    schema_version: u32,
    config: ResolvedRun,
    e_cxx_h_mev: f64,
    e_cxx_v_mev: f64,
    omega_xx_h_mev: f64,
    omega_xx_v_mev: f64,
    target_h_mev: f64,
    target_v_mev: f64,
    eigenstates: Vec<EigenstateJson>,
    asymmetry: AsymmetryJson,
    tuned: Option<TunedJson>,
}

/// Two-excitation manifold: eigenstructure, transition asymmetry, and
/// optional symmetry tuning of the emitted-photon energies.
pub fn cmd_bipolariton(cfg: &RunConfig, ctx: &Ctx) -> Result<(), AppError> {
    let params = cfg.resolve_system()?;
    let tol = cfg.tolerance(ctx.tol_override)?;
    let section = cfg
        .bipolariton
        .as_ref()
        .ok_or_else(|| AppError::config("missing [bipolariton] section"))?;
    let bp = BipolaritonParams {
        base: params,
        e_cxx_h: section.e_cxx_h_mev,
        e_cxx_v: section.e_cxx_v_mev,
        omega_xx_h: section.omega_xx_h_mev.unwrap_or(0.0),
        omega_xx_v: section.omega_xx_v_mev.unwrap_or(0.0),
    };
    if ![bp.e_cxx_h, bp.e_cxx_v, bp.omega_xx_h, bp.omega_xx_v]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(AppError::config("bipolariton energies must be finite"));
    }

    // Decay targets: the degenerate polariton pair of the base system.
    let set = build_channels(&params)?;
    let pair = select_degenerate_pair(&set, cfg.pair_mode()?);
    let eig = eigen_symmetric(&bp.matrix())?;
    let report = transition_asymmetry(&bp, &pair.h.state, &pair.v.state)?;
    let tuned = match &section.tune {
        None => None,
        Some(t) => {
            let steps = t.grid_steps.unwrap_or(21);
            if !(t.h_max_mev > t.h_min_mev) || !(t.v_max_mev > t.v_min_mev) {
                return Err(AppError::config("tune bounds must satisfy max > min"));
            }
            let r = tune_symmetric(
                &bp,
                (t.h_min_mev, t.h_max_mev),
                (t.v_min_mev, t.v_max_mev),
                steps,
                &pair.h.state,
                &pair.v.state,
            )?;
            Some(TunedJson {
                e_cxx_h_mev: r.e_cxx_h,
                e_cxx_v_mev: r.e_cxx_v,
                evaluations: r.evaluations,
                report: AsymmetryJson::of(&r.report),
            })
        }
    };

    let tuned_summary = tuned
        .as_ref()
        .map(|t| (t.e_cxx_h_mev, t.e_cxx_v_mev, t.report.metric));

    ctx.ensure_out_dir()?;
    let eigenstates: Vec<EigenstateJson> = (0..DIM)
        .map(|j| {
            let mut components = [0.0; DIM];
            for (i, row) in eig.vectors.iter().enumerate() {
                components[i] = row[j];
            }
            EigenstateJson {
                energy_mev: eig.values[j],
                components,
            }
        })
        .collect();
    write_json(
        &ctx.path("bipolariton.json"),
        &BipolaritonJson {
            schema_version: SCHEMA_VERSION,
            config: cfg.resolved_run(&params, tol)?,
            e_cxx_h_mev: bp.e_cxx_h,
            e_cxx_v_mev: bp.e_cxx_v,
            omega_xx_h_mev: bp.omega_xx_h,
            omega_xx_v_mev: bp.omega_xx_v,
            target_h_mev: pair.h.state.energy,
            target_v_mev: pair.v.state.energy,
            eigenstates,
            asymmetry: AsymmetryJson::of(&report),
            tuned,
        },
    )?;
    print!(
        "bipolariton: asymmetry metric = {} (xx weight {})",
        sig12(report.metric),
        sig12(report.xx_weight)
    );
    match tuned_summary {
        Some((h, v, m)) => println!(
            "; tuned to e_cxx_h = {}, e_cxx_v = {} (metric {})",
            sig12(h),
            sig12(v),
            sig12(m)
        ),
        None => println!(),
    }
    Ok(())
}
