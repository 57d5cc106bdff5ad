//! Exciton/cavity parameters and polariton eigenstructure.
//!
//! Each linear polarization (H, V) hosts one exciton mode and one cavity
//! mode coupled with strength `Omega_pol` (an energy, meV). Diagonalizing
//! the 2x2 single-excitation Hamiltonian
//!
//! ```text
//! | E_X     Omega |
//! | Omega   E_C   |
//! ```
//!
//! yields the lower/upper polariton energies
//! `E_{LP,UP} = (E_C + E_X)/2 -/+ sqrt((E_C - E_X)^2 + 4 Omega^2)/2`
//! and the Hopfield decomposition `|P> = x_ex |X> + x_ph |C>`.
//!
//! Sign gauge: `x_ph >= 0`; any sign lives on `x_ex`. Radiative
//! linewidths follow from lifetime broadening of the components,
//! `Gamma_P = x_ph^2 hbar / tau_C` plus, optionally, the exciton part
//! `x_ex^2 hbar / tau_X`.

use crate::error::{CoreError, Result};
use alloc::format;
use alloc::vec::Vec;

/// Reduced Planck constant in meV * ps.
pub const HBAR_MEV_PS: f64 = 0.6582119514;

/// Linear polarization label of a mode or decay channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Horizontal.
    H,
    /// Vertical.
    V,
}

impl Polarization {
    /// The other polarization.
    pub fn other(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }

    /// Single-letter tag used in tabular output.
    pub fn tag(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
        }
    }
}

/// Polariton branch label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Lower polariton (smaller eigenvalue).
    Lower,
    /// Upper polariton (larger eigenvalue).
    Upper,
}

impl Branch {
    /// Short tag used in tabular output.
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Lower => "LP",
            Branch::Upper => "UP",
        }
    }
}

/// Full parameter set of the coupled system.
///
/// Energies are absolute mode energies relative to an arbitrary common
/// origin (the physics only depends on differences, see
/// [`Detunings`]). The biexciton energy `e_xx` is the total two-photon
/// energy released by the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// H exciton energy (meV).
    pub e_x_h: f64,
    /// V exciton energy (meV).
    pub e_x_v: f64,
    /// H cavity mode energy (meV).
    pub e_c_h: f64,
    /// V cavity mode energy (meV).
    pub e_c_v: f64,
    /// Exciton-cavity coupling in H (meV).
    pub omega_h: f64,
    /// Exciton-cavity coupling in V (meV).
    pub omega_v: f64,
    /// Biexciton energy: total energy of the emitted photon pair (meV).
    pub e_xx: f64,
    /// Biexciton linewidth (FWHM, meV).
    pub gamma_xx: f64,
    /// Cavity photon lifetime (ps).
    pub tau_c: f64,
    /// Exciton lifetime (ps); only enters linewidths when
    /// `exciton_broadening` is set.
    pub tau_x: f64,
    /// Include the exciton-fraction contribution `x_ex^2 hbar / tau_X`
    /// in polariton linewidths. Off by default: the exciton lifetime is
    /// three orders of magnitude longer than the cavity lifetime, so the
    /// term is negligible for realistic parameters.
    pub exciton_broadening: bool,
}

impl Default for SystemParams {
    /// Polarization-degenerate resonant system: both couplings 0.11 meV,
    /// all mode energies at the origin, biexciton line 10 meV below the
    /// two-photon scale with a 1 ueV linewidth, tau_C = 10 ps,
    /// tau_X = 1000 ps, exciton broadening off.
    fn default() -> Self {
        SystemParams {
            e_x_h: 0.0,
            e_x_v: 0.0,
            e_c_h: 0.0,
            e_c_v: 0.0,
            omega_h: 0.11,
            omega_v: 0.11,
            e_xx: 10.0,
            gamma_xx: 0.001,
            tau_c: 10.0,
            tau_x: 1000.0,
            exciton_broadening: false,
        }
    }
}

/// Relative mode positions; the representation used by sweeps and
/// configuration files.
///
/// With `m = (e_x_h + e_x_v)/2` as origin:
///
/// * `delta_x`  = `e_x_h - e_x_v`   (exciton fine-structure splitting),
/// * `delta_c`  = `e_c_h - e_c_v`   (cavity mode splitting),
/// * `delta_cx` = mean cavity energy minus mean exciton energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detunings {
    /// Exciton splitting `E_X^H - E_X^V` (meV).
    pub delta_x: f64,
    /// Cavity splitting `E_C^H - E_C^V` (meV).
    pub delta_c: f64,
    /// Cavity-exciton detuning of the means (meV).
    pub delta_cx: f64,
}

impl SystemParams {
    /// Build mode energies from detunings, placing the exciton mean at
    /// zero: `E_X = +/- delta_x/2`, `E_C = delta_cx +/- delta_c/2`
    /// (H carries the `+` sign).
    ///
    /// Couplings and cascade parameters keep their [`Default`] values and
    /// can be adjusted afterwards.
    pub fn from_detunings(d: Detunings) -> Self {
        SystemParams {
            e_x_h: 0.5 * d.delta_x,
            e_x_v: -0.5 * d.delta_x,
            e_c_h: d.delta_cx + 0.5 * d.delta_c,
            e_c_v: d.delta_cx - 0.5 * d.delta_c,
            ..SystemParams::default()
        }
    }

    /// Detunings realized by the current mode energies, relative to the
    /// exciton mean.
    pub fn detunings(&self) -> Detunings {
        Detunings {
            delta_x: self.e_x_h - self.e_x_v,
            delta_c: self.e_c_h - self.e_c_v,
            delta_cx: 0.5 * (self.e_c_h + self.e_c_v) - 0.5 * (self.e_x_h + self.e_x_v),
        }
    }

    /// Rebuild mode energies to realize the given detunings, keeping the
    /// exciton mean and every non-energy field fixed.
    pub fn with_detunings(&self, d: Detunings) -> Self {
        let mean_x = 0.5 * (self.e_x_h + self.e_x_v);
        SystemParams {
            e_x_h: mean_x + 0.5 * d.delta_x,
            e_x_v: mean_x - 0.5 * d.delta_x,
            e_c_h: mean_x + d.delta_cx + 0.5 * d.delta_c,
            e_c_v: mean_x + d.delta_cx - 0.5 * d.delta_c,
            ..*self
        }
    }

    /// Exciton energy of one polarization.
    pub fn e_x(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::H => self.e_x_h,
            Polarization::V => self.e_x_v,
        }
    }

    /// Cavity energy of one polarization.
    pub fn e_c(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::H => self.e_c_h,
            Polarization::V => self.e_c_v,
        }
    }

    /// Coupling of one polarization.
    pub fn omega(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::H => self.omega_h,
            Polarization::V => self.omega_v,
        }
    }

    /// Swap every H-labelled quantity with its V counterpart.
    pub fn swapped_hv(&self) -> Self {
        SystemParams {
            e_x_h: self.e_x_v,
            e_x_v: self.e_x_h,
            e_c_h: self.e_c_v,
            e_c_v: self.e_c_h,
            omega_h: self.omega_v,
            omega_v: self.omega_h,
            ..*self
        }
    }

    /// Shift every absolute mode energy by `shift` and the biexciton
    /// energy by `2 * shift` (one shift per emitted photon). Physical
    /// observables are invariant under this gauge change.
    pub fn shifted(&self, shift: f64) -> Self {
        SystemParams {
            e_x_h: self.e_x_h + shift,
            e_x_v: self.e_x_v + shift,
            e_c_h: self.e_c_h + shift,
            e_c_v: self.e_c_v + shift,
            e_xx: self.e_xx + 2.0 * shift,
            ..*self
        }
    }

    /// Validate hard invariants; returns the soft-warning summary on
    /// success.
    ///
    /// Hard: all fields finite; `omega_h`, `omega_v` and `gamma_xx`
    /// non-negative; `tau_c` and `tau_x` strictly positive.
    ///
    /// Soft (reported, not fatal): the biexciton transition lines should
    /// be spectrally separated from the polariton-to-ground lines, i.e.
    /// `e_xx` minus twice the largest polariton energy should exceed ten
    /// times the largest linewidth in the problem. Violations distort the
    /// two-line interpretation of the filtered spectra but every formula
    /// still evaluates.
    pub fn validate(&self) -> Result<ParamWarnings> {
        let fields: [(&'static str, f64); 10] = [
            ("e_x_h", self.e_x_h),
            ("e_x_v", self.e_x_v),
            ("e_c_h", self.e_c_h),
            ("e_c_v", self.e_c_v),
            ("omega_h", self.omega_h),
            ("omega_v", self.omega_v),
            ("e_xx", self.e_xx),
            ("gamma_xx", self.gamma_xx),
            ("tau_c", self.tau_c),
            ("tau_x", self.tau_x),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(CoreError::invalid(name, format!("must be finite, got {value}")));
            }
        }
        if self.omega_h < 0.0 {
            return Err(CoreError::invalid("omega_h", "coupling must be >= 0"));
        }
        if self.omega_v < 0.0 {
            return Err(CoreError::invalid("omega_v", "coupling must be >= 0"));
        }
        if self.gamma_xx < 0.0 {
            return Err(CoreError::invalid("gamma_xx", "linewidth must be >= 0"));
        }
        if self.tau_c <= 0.0 {
            return Err(CoreError::invalid("tau_c", "lifetime must be > 0"));
        }
        if self.tau_x <= 0.0 {
            return Err(CoreError::invalid("tau_x", "lifetime must be > 0"));
        }

        let mut warnings = Vec::new();
        let states = all_polariton_states(self);
        let mut max_e = f64::NEG_INFINITY;
        let mut max_g = self.gamma_xx;
        for s in &states {
            if s.energy > max_e {
                max_e = s.energy;
            }
            if s.linewidth > max_g {
                max_g = s.linewidth;
            }
        }
        // Separation between the XX->P line (at e_xx - E_P) and the
        // P->ground line (at E_P) for the highest polariton.
        let separation = self.e_xx - 2.0 * max_e;
        if separation < 10.0 * max_g {
            warnings.push(ParamWarning::SpectralOverlap {
                separation,
                threshold: 10.0 * max_g,
            });
        }
        Ok(ParamWarnings { warnings })
    }
}

/// Non-fatal observations produced by [`SystemParams::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParamWarnings {
    /// Individual warnings, empty when the parameter set is clean.
    pub warnings: Vec<ParamWarning>,
}

impl ParamWarnings {
    /// True when no warning was raised.
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// A single soft warning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning {
    /// Biexciton and polariton emission lines are not well separated.
    SpectralOverlap {
        /// Realized line separation `e_xx - 2 max(E_P)` (meV).
        separation: f64,
        /// Required separation `10 max(Gamma)` (meV).
        threshold: f64,
    },
}

/// One polariton eigenstate of a single polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonState {
    /// Polarization the state belongs to.
    pub polarization: Polarization,
    /// Lower or upper branch.
    pub branch: Branch,
    /// Eigenenergy (meV).
    pub energy: f64,
    /// Exciton Hopfield coefficient (signed).
    pub x_ex: f64,
    /// Photon Hopfield coefficient (gauge: `x_ph >= 0`).
    pub x_ph: f64,
    /// Radiative linewidth (FWHM, meV).
    pub linewidth: f64,
}

/// Diagonalize one polarization and return `(lower, upper)` polaritons.
///
/// For `omega > 0` both eigenvectors are non-degenerate and the Hopfield
/// vector is `(omega, E - e_x)` normalized, with the overall sign fixed
/// by `x_ph >= 0`. For `omega == 0` the modes decouple: the exciton-like
/// state gets `(x_ex, x_ph) = (1, 0)`, the cavity-like state `(0, 1)`,
/// and branches are assigned by energy order (exciton first on an exact
/// tie).
pub fn polariton_modes(params: &SystemParams, pol: Polarization) -> (PolaritonState, PolaritonState) {
    let e_x = params.e_x(pol);
    let e_c = params.e_c(pol);
    let omega = params.omega(pol);

    let mean = 0.5 * (e_c + e_x);
    let half_split = 0.5 * libm::sqrt((e_c - e_x) * (e_c - e_x) + 4.0 * omega * omega);
    let e_lower = mean - half_split;
    let e_upper = mean + half_split;

    let make = |branch: Branch, energy: f64| -> PolaritonState {
        let (x_ex, x_ph) = if omega > 0.0 {
            let vx = omega;
            let vp = energy - e_x;
            let norm = libm::hypot(vx, vp);
            // vp < 0 on the lower branch, > 0 on the upper; never zero
            // for omega > 0, so the gauge flip below is well defined.
            if vp < 0.0 {
                (-vx / norm, -vp / norm)
            } else {
                (vx / norm, vp / norm)
            }
        } else {
            // Decoupled: compare against the bare energies. On an exact
            // tie the lower branch is declared exciton-like.
            let is_exciton = match branch {
                Branch::Lower => e_x <= e_c,
                Branch::Upper => e_x > e_c,
            };
            if is_exciton {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        };
        let linewidth = polariton_linewidth(params, x_ex, x_ph);
        PolaritonState {
            polarization: pol,
            branch,
            energy,
            x_ex,
            x_ph,
            linewidth,
        }
    };

    (make(Branch::Lower, e_lower), make(Branch::Upper, e_upper))
}

/// All four polariton states in the fixed order
/// `[LP_H, UP_H, LP_V, UP_V]`.
pub fn all_polariton_states(params: &SystemParams) -> [PolaritonState; 4] {
    let (lh, uh) = polariton_modes(params, Polarization::H);
    let (lv, uv) = polariton_modes(params, Polarization::V);
    [lh, uh, lv, uv]
}

/// Lifetime-broadening linewidth of a polariton with the given Hopfield
/// coefficients: `x_ph^2 hbar / tau_C`, plus `x_ex^2 hbar / tau_X` when
/// exciton broadening is enabled.
pub fn polariton_linewidth(params: &SystemParams, x_ex: f64, x_ph: f64) -> f64 {
    let mut g = x_ph * x_ph * HBAR_MEV_PS / params.tau_c;
    if params.exciton_broadening {
        g += x_ex * x_ex * HBAR_MEV_PS / params.tau_x;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn resonant_coupling_splits_by_omega() {
        // E_X = E_C = 0, Omega = 0.11: eigenvalues -/+ Omega, equal
        // Hopfield weights.
        let params = SystemParams::default();
        let (lp, up) = polariton_modes(&params, Polarization::H);
        assert_close(lp.energy, -0.11, TOL);
        assert_close(up.energy, 0.11, TOL);
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        assert_close(lp.x_ph, inv_sqrt2, TOL);
        assert_close(lp.x_ex.abs(), inv_sqrt2, TOL);
        assert_close(up.x_ph, inv_sqrt2, TOL);
        assert_close(up.x_ex, inv_sqrt2, TOL);
        // Lower branch: x_ex and x_ph have opposite signs in this gauge.
        assert!(lp.x_ex < 0.0);
    }

    #[test]
    fn decoupled_modes_stay_bare() {
        let params = SystemParams {
            omega_h: 0.0,
            e_x_h: 0.1,
            e_c_h: 0.3,
            ..SystemParams::default()
        };
        let (lp, up) = polariton_modes(&params, Polarization::H);
        assert_close(lp.energy, 0.1, TOL);
        assert_close(up.energy, 0.3, TOL);
        assert_close(lp.x_ex, 1.0, TOL);
        assert_close(lp.x_ph, 0.0, TOL);
        assert_close(up.x_ex, 0.0, TOL);
        assert_close(up.x_ph, 1.0, TOL);
        // Cavity below exciton: branch roles swap.
        let params = SystemParams {
            omega_h: 0.0,
            e_x_h: 0.3,
            e_c_h: 0.1,
            ..SystemParams::default()
        };
        let (lp, up) = polariton_modes(&params, Polarization::H);
        assert_close(lp.x_ph, 1.0, TOL);
        assert_close(up.x_ex, 1.0, TOL);
    }

    #[test]
    fn hopfield_norm_and_trace() {
        // Eigenvalue sum equals E_X + E_C; coefficients normalized.
        let params = SystemParams {
            e_x_h: 0.125,
            e_c_h: -0.075,
            omega_h: 0.11,
            ..SystemParams::default()
        };
        let (lp, up) = polariton_modes(&params, Polarization::H);
        assert_close(lp.energy + up.energy, 0.125 - 0.075, TOL);
        assert_close(lp.x_ex * lp.x_ex + lp.x_ph * lp.x_ph, 1.0, TOL);
        assert_close(up.x_ex * up.x_ex + up.x_ph * up.x_ph, 1.0, TOL);
        // Eigenvectors orthogonal.
        assert_close(lp.x_ex * up.x_ex + lp.x_ph * up.x_ph, 0.0, TOL);
    }

    #[test]
    fn linewidth_is_photon_weighted() {
        let params = SystemParams {
            tau_c: 2.0,
            ..SystemParams::default()
        };
        let (lp, _) = polariton_modes(&params, Polarization::H);
        // Resonant: x_ph^2 = 1/2.
        assert_close(lp.linewidth, 0.5 * HBAR_MEV_PS / 2.0, TOL);
        // Exciton broadening adds the x_ex^2 term.
        let params2 = SystemParams {
            exciton_broadening: true,
            ..params
        };
        let (lp2, _) = polariton_modes(&params2, Polarization::H);
        assert_close(
            lp2.linewidth,
            0.5 * HBAR_MEV_PS / 2.0 + 0.5 * HBAR_MEV_PS / 1000.0,
            TOL,
        );
    }

    #[test]
    fn detunings_round_trip() {
        let d = Detunings {
            delta_x: 0.25,
            delta_c: 0.25,
            delta_cx: -0.2,
        };
        let params = SystemParams::from_detunings(d);
        assert_close(params.e_x_h, 0.125, TOL);
        assert_close(params.e_x_v, -0.125, TOL);
        assert_close(params.e_c_h, -0.075, TOL);
        assert_close(params.e_c_v, -0.325, TOL);
        let back = params.detunings();
        assert_close(back.delta_x, d.delta_x, TOL);
        assert_close(back.delta_c, d.delta_c, TOL);
        assert_close(back.delta_cx, d.delta_cx, TOL);
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let params = SystemParams {
            tau_c: 0.0,
            ..SystemParams::default()
        };
        assert!(matches!(
            params.validate(),
            Err(CoreError::InvalidParameter { name: "tau_c", .. })
        ));
        let params = SystemParams {
            omega_v: -0.1,
            ..SystemParams::default()
        };
        assert!(params.validate().is_err());
        let params = SystemParams {
            e_xx: f64::NAN,
            ..SystemParams::default()
        };
        assert!(params.validate().is_err());
    }

    #[test]
    fn validate_warns_on_spectral_overlap() {
        let clean = SystemParams::default().validate().unwrap();
        assert!(clean.is_clean());
        // Biexciton line on top of the polariton lines.
        let params = SystemParams {
            e_xx: 0.1,
            ..SystemParams::default()
        };
        let w = params.validate().unwrap();
        assert!(!w.is_clean());
        assert!(matches!(w.warnings[0], ParamWarning::SpectralOverlap { .. }));
    }

    #[test]
    fn swap_and_shift_helpers() {
        let params = SystemParams {
            e_x_h: 0.125,
            e_x_v: -0.125,
            e_c_h: 0.2,
            e_c_v: -0.1,
            omega_h: 0.05,
            omega_v: 0.11,
            ..SystemParams::default()
        };
        let swapped = params.swapped_hv();
        assert_close(swapped.e_x_h, -0.125, TOL);
        assert_close(swapped.omega_h, 0.11, TOL);
        assert_close(swapped.e_c_v, 0.2, TOL);

        let shifted = params.shifted(1.5);
        assert_close(shifted.e_x_h, 1.625, TOL);
        assert_close(shifted.e_xx, 13.0, TOL);
        let d0 = params.detunings();
        let d1 = shifted.detunings();
        assert_close(d0.delta_x, d1.delta_x, TOL);
        assert_close(d0.delta_c, d1.delta_c, TOL);
        assert_close(d0.delta_cx, d1.delta_cx, TOL);
    }
}
