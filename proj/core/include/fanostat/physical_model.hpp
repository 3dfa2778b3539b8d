#pragma once

#include <array>
#include <complex>
#include <limits>

#include <Eigen/Core>

#include "fanostat/units.hpp"

namespace fanostat {

using Complex = std::complex<double>;

/// Dimensional description of the emitter, waveguide and drive.
///
/// Energies are in µeV, times in ps. `dephasing_time_ps` may be +infinity
/// (no pure dephasing). `drive_amp` is the coherent amplitude α in ps^-1/2,
/// i.e. the square root of the incident photon flux.
struct PhysicalParams {
    double omega0_uev = 0.0;
    double lifetime_ps = 1.0;
    double dephasing_time_ps = std::numeric_limits<double>::infinity();
    double beta = 1.0;
    double t0 = 1.0;
    double sigma_wander_uev = 0.0;
    double drive_amp = 0.0;
    double detector_resp_ps = 0.0;

    /// Throws Error(kInvalidArgument) if any invariant is violated.
    void validate() const;

    /// ħγ in µeV: the energy unit of the dimensionless detuning.
    double hbar_gamma_uev() const { return units::kHbar / lifetime_ps; }
    double gamma_per_ps() const { return 1.0 / lifetime_ps; }
    double gamma_dephasing_per_ps() const { return 1.0 / dephasing_time_ps; }
};

/// Parameters that the closed forms and the Bloch solver consume, all
/// detuning-independent. `phi` is the background phase arctan(r0/t0).
struct ReducedModel {
    double zeta = 1.0;
    double beta = 1.0;
    double phi = 0.0;
    double alpha = 0.0;

    double t0() const;
    double T0() const { return t0() * t0(); }
};

/// The reduced symbols: detuning in units of γ/2 (energies over ħγ/2),
/// times in units of 2/γ.
struct DimensionlessParams {
    double delta = 0.0;
    double zeta = 1.0;
    double alpha = 0.0;
    double phi = 0.0;
    double T0 = 1.0;
    double beta = 1.0;
    double sigma = 0.0;
    double t_resp = 0.0;

    ReducedModel model() const { return {zeta, beta, phi, alpha}; }
};

/// The documented reference configuration: ω0 = 327.524 THz (E = h f),
/// 1/γ = 125 ps, 1/γ_de = 38 ns, σ = 4.7 µeV, t0 = 0.62, β = 0.99 and a
/// 34 ps (80 ps FWHM) detector response, weak pump.
PhysicalParams reference_configuration();

DimensionlessParams to_dimensionless(const PhysicalParams& p, double laser_energy_uev);

/// φ = arctan(r0/t0) with r0 = -sqrt(1 - t0²); in (-π/2, 0], and -π/2 at t0 = 0.
double background_phase(double t0);
double reflection_amplitude(double t0);

// Conversions between dimensional and reduced quantities for a given lifetime.
double reduced_detuning(double detuning_uev, double lifetime_ps);
double detuning_uev(double reduced_detuning, double lifetime_ps);
double zeta_from_times(double lifetime_ps, double dephasing_time_ps);
double dephasing_time_from_zeta(double zeta, double lifetime_ps);
double reduced_sigma(double sigma_uev, double lifetime_ps);
double sigma_uev(double reduced_sigma, double lifetime_ps);
double reduced_time(double tau_ps, double lifetime_ps);
double time_ps(double reduced_time, double lifetime_ps);
double reduced_drive(double drive_amp, double beta, double lifetime_ps);

/// Emitter coupling to the (left, right) moving waveguide modes.
struct CouplingVector {
    std::array<Complex, 2> d{};

    double norm_squared() const { return std::norm(d[0]) + std::norm(d[1]); }
};

/// d = i e^{iφ/2} sqrt(βγ/2) (1, 1); satisfies d†d = βγ and C†d = -d*.
CouplingVector coupling_vector(double beta, double gamma, double phi);

/// Background scattering matrix ((t0, i r0), (i r0, t0)); unitary.
using ScatteringMatrix = Eigen::Matrix2cd;
ScatteringMatrix scattering_matrix(double t0);

}  // namespace fanostat
