//! Two-photon decay channels of the biexciton cascade.
//!
//! The biexciton (energy `e_xx`, linewidth `gamma_xx`) decays through one
//! of the four polariton states into the ground state, emitting a photon
//! pair. Channel `P` contributes the double-Lorentzian amplitude
//!
//! ```text
//! A_P(k1, k2) = pref_P / ((k1 + k2 - eps_XX)(k2 - eps_P))
//! ```
//!
//! with complex line positions `eps = center + i Gamma/2`. The prefactor
//!
//! ```text
//! pref_P = x_ex sqrt(Gamma_XX) * x_ph^2 sqrt(Gamma_P) / (2 pi)
//! ```
//!
//! carries the exciton fraction once (biexciton-to-polariton dipole) and
//! the photon fraction twice (the transition is photon assisted and the
//! line is detected through the cavity field). The full-plane norm of a
//! channel then collapses to the exact closed form
//! `N_P = x_ex^2 x_ph^4`, independent of the linewidths, and radiative
//! weights `w_P = sqrt(N_P / sum N)` obey `sum w^2 = 1`.
//!
//! Emitted-intensity marginals are analytic: each channel contributes a
//! biexciton line at `e_xx - E_P` (FWHM `Gamma_XX + Gamma_P`) and a
//! polariton line at `E_P` (FWHM `Gamma_P`), both unit-area Lorentzians
//! scaled by `w_P^2` in the total spectrum.

use crate::error::{CoreError, Result};
use crate::model::{
    all_polariton_states, Branch, Polarization, PolaritonState, SystemParams,
};
use crate::quadrature::lorentzian;
use alloc::vec::Vec;
use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Complex line position `center + i * halfwidth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    /// Line center (meV).
    pub center: f64,
    /// Half width at half maximum (meV).
    pub halfwidth: f64,
}

impl ComplexEnergy {
    /// The complex number `center + i * halfwidth`.
    pub fn value(self) -> Complex64 {
        Complex64::new(self.center, self.halfwidth)
    }
}

/// One radiative decay channel of the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayChannel {
    /// Intermediate polariton state.
    pub state: PolaritonState,
    /// Biexciton (two-photon) energy inherited from the system (meV).
    pub e_xx: f64,
    /// Biexciton linewidth (FWHM, meV).
    pub gamma_xx: f64,
    /// Signed amplitude prefactor (meV); zero for dark channels.
    pub prefactor: f64,
}

impl DecayChannel {
    /// Channel polarization.
    pub fn polarization(&self) -> Polarization {
        self.state.polarization
    }

    /// Channel branch.
    pub fn branch(&self) -> Branch {
        self.state.branch
    }

    /// Complex biexciton line position (pole in `k1 + k2`).
    pub fn eps_xx(&self) -> ComplexEnergy {
        ComplexEnergy {
            center: self.e_xx,
            halfwidth: 0.5 * self.gamma_xx,
        }
    }

    /// Complex polariton line position (pole in `k2`).
    pub fn eps_p(&self) -> ComplexEnergy {
        ComplexEnergy {
            center: self.state.energy,
            halfwidth: 0.5 * self.state.linewidth,
        }
    }

    /// Two-photon amplitude at photon energies `(k1, k2)`.
    pub fn amplitude(&self, k1: f64, k2: f64) -> Complex64 {
        if self.prefactor == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d_xx = Complex64::new(k1 + k2, 0.0) - self.eps_xx().value();
        let d_p = Complex64::new(k2, 0.0) - self.eps_p().value();
        self.prefactor / (d_xx * d_p)
    }

    /// Exact full-plane norm `int |A|^2 = x_ex^2 x_ph^4`.
    ///
    /// The linewidths cancel against the prefactor, so the closed form
    /// holds for dark channels (`x_ph = 0`) as well.
    pub fn full_norm(&self) -> f64 {
        let s = self.state.x_ex * self.state.x_ph * self.state.x_ph;
        s * s
    }
}

/// The four decay channels of a parameter set plus their radiative
/// weights, in fixed order `[LP_H, UP_H, LP_V, UP_V]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// Channels in fixed order.
    pub channels: [DecayChannel; 4],
    /// Radiative weights; squares sum to one.
    pub weights: [f64; 4],
}

impl ChannelSet {
    /// Channel lookup by polarization and branch.
    pub fn channel(&self, pol: Polarization, branch: Branch) -> &DecayChannel {
        let idx = match (pol, branch) {
            (Polarization::H, Branch::Lower) => 0,
            (Polarization::H, Branch::Upper) => 1,
            (Polarization::V, Branch::Lower) => 2,
            (Polarization::V, Branch::Upper) => 3,
        };
        &self.channels[idx]
    }

    /// Sum of the full-plane channel norms.
    pub fn total_full_norm(&self) -> f64 {
        self.channels.iter().map(DecayChannel::full_norm).sum()
    }
}

/// Build the four channels and their weights.
///
/// Errors when `gamma_xx <= 0` (degenerate biexciton line) or when every
/// channel is dark (all norms zero: both couplings vanish, so no state
/// mixes exciton and photon character).
pub fn build_channels(params: &SystemParams) -> Result<ChannelSet> {
    if !(params.gamma_xx > 0.0) {
        return Err(CoreError::invalid(
            "gamma_xx",
            "biexciton linewidth must be > 0 for cascade amplitudes",
        ));
    }
    let states = all_polariton_states(params);
    let mut channels = [DecayChannel {
        state: states[0],
        e_xx: params.e_xx,
        gamma_xx: params.gamma_xx,
        prefactor: 0.0,
    }; 4];
    let mut total = 0.0;
    for (i, state) in states.iter().enumerate() {
        let gamma_p = state.linewidth;
        let pref = state.x_ex * state.x_ph * state.x_ph * libm::sqrt(params.gamma_xx * gamma_p)
            / TWO_PI;
        channels[i] = DecayChannel {
            state: *state,
            e_xx: params.e_xx,
            gamma_xx: params.gamma_xx,
            prefactor: pref,
        };
        total += channels[i].full_norm();
    }
    if total <= 0.0 {
        return Err(CoreError::NoRadiativeChannel);
    }
    let mut weights = [0.0; 4];
    for i in 0..4 {
        weights[i] = libm::sqrt(channels[i].full_norm() / total);
    }
    Ok(ChannelSet { channels, weights })
}

/// Exact full-plane overlap `int conj(A_a) A_b` by residue evaluation.
///
/// Both amplitude factors decay as `1/k^2`, so closing each rotated axis
/// in the half plane of the single enclosed pole gives
/// `conj(pref_a) pref_b * (2 pi i / (eps_XX_b - conj(eps_XX_a)))
///  * (2 pi i / (eps_P_b - conj(eps_P_a)))`.
/// For `a = b` this reduces to the real norm `x_ex^2 x_ph^4`.
pub fn overlap_full(a: &DecayChannel, b: &DecayChannel) -> Complex64 {
    if a.prefactor == 0.0 || b.prefactor == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let two_pi_i = Complex64::new(0.0, TWO_PI);
    let i_u = two_pi_i / (b.eps_xx().value() - a.eps_xx().value().conj());
    let i_v = two_pi_i / (b.eps_p().value() - a.eps_p().value().conj());
    a.prefactor * b.prefactor * i_u * i_v
}

/// Which transition of the cascade a spectral line belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    /// Biexciton to polariton (line at `e_xx - E_P`).
    BiexcitonToPolariton,
    /// Polariton to ground (line at `E_P`).
    PolaritonToGround,
}

/// One Lorentzian line of the emission spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    /// Polarization of the emitting channel.
    pub polarization: Polarization,
    /// Branch of the emitting channel.
    pub branch: Branch,
    /// Cascade transition.
    pub transition: Transition,
    /// Line center (meV).
    pub center: f64,
    /// Full width at half maximum (meV).
    pub fwhm: f64,
    /// Squared radiative weight scaling the line in the total spectrum.
    pub weight_sq: f64,
}

/// The eight emission lines (two per channel), channel-major in the
/// fixed channel order, biexciton transition first.
pub fn line_table(set: &ChannelSet) -> [SpectrumLine; 8] {
    let mut lines = [SpectrumLine {
        polarization: Polarization::H,
        branch: Branch::Lower,
        transition: Transition::BiexcitonToPolariton,
        center: 0.0,
        fwhm: 0.0,
        weight_sq: 0.0,
    }; 8];
    for (i, (ch, w)) in set.channels.iter().zip(set.weights.iter()).enumerate() {
        lines[2 * i] = SpectrumLine {
            polarization: ch.polarization(),
            branch: ch.branch(),
            transition: Transition::BiexcitonToPolariton,
            center: ch.e_xx - ch.state.energy,
            fwhm: ch.gamma_xx + ch.state.linewidth,
            weight_sq: w * w,
        };
        lines[2 * i + 1] = SpectrumLine {
            polarization: ch.polarization(),
            branch: ch.branch(),
            transition: Transition::PolaritonToGround,
            center: ch.state.energy,
            fwhm: ch.state.linewidth,
            weight_sq: w * w,
        };
    }
    lines
}

/// Sampled emission spectrum per polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PlSpectrum {
    /// Photon energy axis (meV).
    pub energy: Vec<f64>,
    /// Weight-scaled H intensity (sum of `w^2 *` unit-area Lorentzians).
    pub weighted_h: Vec<f64>,
    /// Weight-scaled V intensity.
    pub weighted_v: Vec<f64>,
    /// Unweighted H intensity (every line unit area).
    pub raw_h: Vec<f64>,
    /// Unweighted V intensity.
    pub raw_v: Vec<f64>,
    /// True when every line center lies inside the sampled axis range.
    pub covers_all_lines: bool,
}

/// Sample the analytic emission spectrum on the given energy axis.
///
/// Lines with zero FWHM (dark channels) are skipped: they carry zero
/// weight and their unit-area limit is a delta function that a sampled
/// axis cannot represent.
pub fn pl_spectrum(set: &ChannelSet, energy: &[f64]) -> PlSpectrum {
    let lines = line_table(set);
    let n = energy.len();
    let mut weighted_h = alloc::vec![0.0; n];
    let mut weighted_v = alloc::vec![0.0; n];
    let mut raw_h = alloc::vec![0.0; n];
    let mut raw_v = alloc::vec![0.0; n];
    let (lo, hi) = energy.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
        (if e < lo { e } else { lo }, if e > hi { e } else { hi })
    });
    let mut covers = true;
    for line in &lines {
        if !(line.fwhm > 0.0) {
            continue;
        }
        if line.center < lo || line.center > hi {
            covers = false;
        }
        let (raw, weighted) = match line.polarization {
            Polarization::H => (&mut raw_h, &mut weighted_h),
            Polarization::V => (&mut raw_v, &mut weighted_v),
        };
        for (i, &e) in energy.iter().enumerate() {
            let l = lorentzian(e, line.center, line.fwhm);
            raw[i] += l;
            weighted[i] += line.weight_sq * l;
        }
    }
    PlSpectrum {
        energy: energy.to_vec(),
        weighted_h,
        weighted_v,
        raw_h,
        raw_v,
        covers_all_lines: covers,
    }
}
