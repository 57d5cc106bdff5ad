//! End-to-end tests of the `biexciton` binary: artifact formats, exit
//! codes, determinism, and agreement with the library.

use biexciton_core::explorer::{sweep, SweepAxis, SweepParam, SweepSpec};
use biexciton_core::quadrature::Tolerance;
use biexciton_core::SystemParams;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_biexciton");

fn run(dir: &Path, cmd: &str, config_text: &str, extra: &[&str]) -> Output {
    let config = dir.join("run.toml");
    std::fs::write(&config, config_text).unwrap();
    Command::new(BIN)
        .arg(cmd)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir)
        .args(extra)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SYMMETRIC: &str = r#"
[system]
delta_x_mev = 0.25
delta_c_mev = 0.25
delta_cx_mev = 0.0
omega_h_mev = 0.11
omega_v_mev = 0.11
e_xx_mev = 10.0
gamma_xx_mev = 0.001
tau_c_ps = 2.0
"#;

/// Count strict interior local maxima of a sampled curve.
fn local_maxima(y: &[f64]) -> Vec<usize> {
    (1..y.len() - 1)
        .filter(|&i| y[i] > y[i - 1] && y[i] > y[i + 1])
        .collect()
}

#[test]
fn spectrum_resolves_eight_lines() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{SYMMETRIC}\n[spectrum]\ne_min_mev = -0.7\ne_max_mev = 10.7\npoints = 5701\n"
    );
    let out = run(dir.path(), "spectrum", &config, &[]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert_eq!(header, "energy_meV,intensity_H,intensity_V");
    assert_eq!(rows.len(), 5701);
    let col = |i: usize| -> Vec<f64> {
        rows.iter().map(|r| r[i].parse::<f64>().unwrap()).collect()
    };
    let (energy, h, v) = (col(0), col(1), col(2));

    // Two polariton lines and two biexciton lines per polarization.
    let peaks_h = local_maxima(&h);
    let peaks_v = local_maxima(&v);
    assert_eq!(peaks_h.len(), 4, "H peaks at {:?}", peaks_h);
    assert_eq!(peaks_v.len(), 4);

    // Every analytic line center matches a sampled peak. Overlapping
    // tails of the neighboring line pull an apex by a small fraction of
    // the width, so allow that on top of the grid resolution.
    let lines = read_json(&dir.path().join("spectrum_lines.json"));
    let step = energy[1] - energy[0];
    let line_array = lines["lines"].as_array().unwrap();
    assert_eq!(line_array.len(), 8);
    for line in line_array {
        let center = line["center_mev"].as_f64().unwrap();
        let fwhm = line["fwhm_mev"].as_f64().unwrap();
        let peaks = if line["polarization"] == "H" { &peaks_h } else { &peaks_v };
        let nearest = peaks
            .iter()
            .map(|&i| (energy[i] - center).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest <= step + 0.05 * fwhm,
            "line at {center} missed by {nearest}"
        );
    }
    assert_eq!(lines["schema_version"], 1);
    assert_eq!(lines["covers_all_lines"], true);
}

#[test]
fn spectrum_rejects_degenerate_grid() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{SYMMETRIC}\n[spectrum]\ne_min_mev = 0.0\ne_max_mev = 1.0\npoints = 1\n"
    );
    let out = run(dir.path(), "spectrum", &config, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[system]\nnot_a_key = 1.0\n";
    let out = run(dir.path(), "spectrum", config, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_key"));
}

#[test]
fn conflicting_detuning_aliases_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[system]\ndelta_cx_mev = 0.1\ndelta_xc_mev = -0.1\n\
                  [spectrum]\ne_min_mev = 0.0\ne_max_mev = 1.0\npoints = 10\n";
    let out = run(dir.path(), "spectrum", config, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn detuning_alias_negates() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[system]\ndelta_xc_mev = 0.2\n\
                  [spectrum]\ne_min_mev = -1.0\ne_max_mev = 11.0\npoints = 100\n";
    let out = run(dir.path(), "spectrum", config, &[]);
    assert!(out.status.success());
    let lines = read_json(&dir.path().join("spectrum_lines.json"));
    assert_eq!(lines["config"]["system"]["delta_cx_mev"].as_f64(), Some(-0.2));
}

#[test]
fn lone_pair_branch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{SYMMETRIC}\n[window]\npair_h = \"lower\"\n\
         [filter]\nwidths_mev = [0.1]\n"
    );
    let out = run(dir.path(), "filter-sweep", &config, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dark_system_fails_with_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[system]\nomega_h_mev = 0.0\nomega_v_mev = 0.0\n\
                  [spectrum]\ne_min_mev = -1.0\ne_max_mev = 11.0\npoints = 50\n";
    let out = run(dir.path(), "spectrum", config, &[]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["schema_version"], 1);
    assert_eq!(err["error"]["kind"], "no_radiative_channel");
}

#[test]
fn optimize_reports_when_every_cell_fails() {
    let dir = tempfile::tempdir().unwrap();
    // gamma_xx = 0 makes the two-photon amplitude vanish in every cell.
    let config = "[system]\ngamma_xx_mev = 0.0\n\
                  [optimize]\ndelta_c_min_mev = 0.0\ndelta_c_max_mev = 0.1\n\
                  delta_cx_min_mev = 0.0\ndelta_cx_max_mev = 0.1\n\
                  grid_steps = 3\nrefine = false\n";
    let out = run(dir.path(), "optimize", config, &[]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "all_cells_failed");
}

#[test]
fn map_marks_failed_cells_na_and_still_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[system]\ngamma_xx_mev = 0.0\n\
                  [map]\nparam1 = \"delta_cx\"\nmin1_mev = -0.1\nmax1_mev = 0.1\nsteps1 = 3\n";
    let out = run(dir.path(), "map", config, &[]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("no converged cells"));
    let (header, rows) = read_csv(&dir.path().join("map.csv"));
    assert_eq!(header, "axis1,axis2,gamma_abs,qe,pair,converged");
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[1], "NA"); // 1D sweep: no second axis
        assert_eq!(row[2], "NA");
        assert_eq!(row[3], "NA");
        assert_eq!(row[5], "false");
    }
    let json = read_json(&dir.path().join("map.json"));
    assert_eq!(json["converged_cells"], 0);
    assert!(json["best"].is_null());
}

const MAP_3X3: &str = r#"
[system]
delta_x_mev = 0.25
delta_c_mev = 0.25
delta_cx_mev = -0.2
omega_h_mev = 0.11
omega_v_mev = 0.05
e_xx_mev = 10.0
gamma_xx_mev = 0.001
tau_c_ps = 2.0

[map]
param1 = "delta_c"
min1_mev = 0.2
max1_mev = 0.4
steps1 = 3
param2 = "delta_cx"
min2_mev = -0.3
max2_mev = -0.1
steps2 = 3
"#;

#[test]
fn map_is_invariant_under_thread_count() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir4 = tempfile::tempdir().unwrap();
    let out1 = run(dir1.path(), "map", MAP_3X3, &["--threads", "1"]);
    let out4 = run(dir4.path(), "map", MAP_3X3, &["--threads", "4"]);
    assert!(out1.status.success() && out4.status.success());
    let csv1 = std::fs::read(dir1.path().join("map.csv")).unwrap();
    let csv4 = std::fs::read(dir4.path().join("map.csv")).unwrap();
    assert_eq!(csv1, csv4);
}

#[test]
fn map_matches_library_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "map", MAP_3X3, &[]);
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("map.csv"));

    let mut base = SystemParams::default();
    base = base.with_detunings(biexciton_core::Detunings {
        delta_x: 0.25,
        delta_c: 0.25,
        delta_cx: -0.2,
    });
    base.omega_h = 0.11;
    base.omega_v = 0.05;
    base.e_xx = 10.0;
    base.gamma_xx = 0.001;
    base.tau_c = 2.0;
    let spec = SweepSpec {
        base,
        axis1: SweepAxis { param: SweepParam::DeltaC, min: 0.2, max: 0.4, steps: 3 },
        axis2: Some(SweepAxis { param: SweepParam::DeltaCX, min: -0.3, max: -0.1, steps: 3 }),
        window_width: 0.1,
        pair_mode: biexciton_core::entanglement::PairMode::Auto,
        tol: Tolerance::default(),
    };
    let reference = sweep(&spec);
    assert_eq!(rows.len(), reference.cells.len());
    for (row, cell) in rows.iter().zip(&reference.cells) {
        let printed: f64 = row[2].parse().unwrap();
        let exact = cell.result.gamma_abs;
        assert!(
            (printed - exact).abs() <= 1e-11 * exact.abs(),
            "CSV {printed} vs library {exact}"
        );
        let printed_qe: f64 = row[3].parse().unwrap();
        assert!((printed_qe - cell.result.quantum_efficiency).abs() <= 1e-11);
    }
}

#[test]
fn optimize_rerun_is_byte_identical() {
    let config = format!(
        "{SYMMETRIC}\n[optimize]\ndelta_c_min_mev = 0.2\ndelta_c_max_mev = 0.3\n\
         delta_cx_min_mev = -0.05\ndelta_cx_max_mev = 0.05\ngrid_steps = 3\nrefine = true\n"
    );
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    assert!(run(dir1.path(), "optimize", &config, &[]).status.success());
    assert!(run(dir2.path(), "optimize", &config, &[]).status.success());
    let j1 = std::fs::read(dir1.path().join("optimize.json")).unwrap();
    let j2 = std::fs::read(dir2.path().join("optimize.json")).unwrap();
    assert_eq!(j1, j2);
}

#[test]
fn filter_sweep_csv_is_ordered_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{SYMMETRIC}\n[filter]\nwidths_mev = [0.05, 0.1, 1.0]\n");
    let out = run(dir.path(), "filter-sweep", &config, &[]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("filter_sweep.csv"));
    assert_eq!(header, "width_meV,gamma_abs,qe,converged");
    assert_eq!(rows.len(), 3);
    let widths: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(widths, vec![0.05, 0.1, 1.0]);
    // Efficiency grows with window width.
    let qe: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(qe[0] < qe[1] && qe[1] < qe[2]);
    let json = read_json(&dir.path().join("filter_sweep.json"));
    assert!(json["unfiltered_gamma_abs"].as_f64().unwrap() > 0.0);
    assert_eq!(json["points"].as_array().unwrap().len(), 3);
}

#[test]
fn bipolariton_tune_is_deterministic() {
    let config = format!(
        "{SYMMETRIC}\n[bipolariton]\ne_cxx_h_mev = 5.06\ne_cxx_v_mev = 4.94\n\
         omega_xx_h_mev = 0.05\nomega_xx_v_mev = 0.05\n\
         [bipolariton.tune]\nh_min_mev = 4.8\nh_max_mev = 5.2\n\
         v_min_mev = 4.8\nv_max_mev = 5.2\ngrid_steps = 11\n"
    );
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    assert!(run(dir1.path(), "bipolariton", &config, &[]).status.success());
    assert!(run(dir2.path(), "bipolariton", &config, &[]).status.success());
    let j1 = std::fs::read(dir1.path().join("bipolariton.json")).unwrap();
    let j2 = std::fs::read(dir2.path().join("bipolariton.json")).unwrap();
    assert_eq!(j1, j2);

    let json = read_json(&dir1.path().join("bipolariton.json"));
    assert_eq!(json["eigenstates"].as_array().unwrap().len(), 5);
    let tuned = &json["tuned"];
    assert!(tuned["report"]["metric"].as_f64().unwrap()
        <= json["asymmetry"]["metric"].as_f64().unwrap());
}

#[test]
fn invalid_cli_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{SYMMETRIC}\n[filter]\nwidths_mev = [0.1]\n");
    let zero_threads = run(dir.path(), "filter-sweep", &config, &["--threads", "0"]);
    assert_eq!(zero_threads.status.code(), Some(2));
    let bad_tol = run(dir.path(), "filter-sweep", &config, &["--tol", "-1.0"]);
    assert_eq!(bad_tol.status.code(), Some(2));
    let missing = Command::new(BIN)
        .args(["spectrum", "--config", "/nonexistent/nowhere.toml"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn output_dir_comes_from_config_when_flag_absent() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("results");
    let config_path = dir.path().join("run.toml");
    let config = format!(
        "{SYMMETRIC}\n[output]\ndir = \"{}\"\n\
         [spectrum]\ne_min_mev = -1.0\ne_max_mev = 11.0\npoints = 50\n",
        nested.display()
    );
    std::fs::write(&config_path, config).unwrap();
    let out = Command::new(BIN)
        .args(["spectrum", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(nested.join("spectrum.csv").is_file());
}

#[test]
fn shipped_example_configs_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (file, cmd) in [
        ("spectrum.toml", "spectrum"),
        ("map.toml", "map"),
        ("optimize.toml", "optimize"),
        ("filter_sweep.toml", "filter-sweep"),
        ("bipolariton.toml", "bipolariton"),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let out = Command::new(BIN)
            .arg(cmd)
            .arg("--config")
            .arg(configs.join(file))
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{file}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
