#pragma once

// Photovoltaic receiver: ideal single-diode model of the 72-cell series
// panel, I-V/P-V curve evaluation, maximum power point search, irradiance
// calibration, and the linear MPP approximation with its conversion
// efficiency.

#include <span>
#include <utility>
#include <vector>

#include "arbc/model_core.hpp"

namespace arbc {

/// Electrical constants of the PV panel. The reference (isc, voc) pair is
/// taken at irradiance ir0 and temperature t_ref; area_factor maps received
/// beam watts to irradiance (W/cm^2) and is fixed by calibration against the
/// panel's known maximum power point rather than guessed from geometry.
struct DiodeParams {
    double isc_ref_A = 0.305;        // per-cell short-circuit current at ir0, t_ref
    double voc_ref_V = 0.464;        // per-cell open-circuit voltage at ir0, t_ref
    double ir0_W_per_cm2 = 2.7187;   // measurement irradiance
    double ideality = 1.1;           // diode quality factor
    int n_series = 72;               // series cells in the string
    double t_ref_C = 120.0;          // measurement temperature
    double bandgap_eV = 1.11;        // energy gap of the saturation-current law
    double area_factor_per_cm2 = 0.11344901862;  // irradiance = pbr * area_factor
    double beam_frequency_Hz = 1.9355e14;  // recorded panel datum; unused by the model

    bool operator==(const DiodeParams&) const = default;
};

/// A maximum power point; power == voltage * current by construction.
struct MppResult {
    double voltage_V = 0.0;
    double current_A = 0.0;
    double power_W = 0.0;
};

/// Calibration anchor: the panel's known MPP at 25 W received / 25 C.
inline constexpr double kCalibrationPbrW = 25.0;
inline constexpr double kCalibrationTempC = 25.0;
inline constexpr double kCalibrationPowerW = 12.19;

/// Violations of the DiodeParams invariants (all positive, n_series >= 1).
std::vector<std::string> validate(const DiodeParams& params);

/// Panel terminal current at voltage `v_panel_V` for received beam power
/// `pbr`: photocurrent minus the diode term of the series string, clamped at
/// 0 beyond the open-circuit voltage.
double cell_current(double v_panel_V, PowerW pbr, CelsiusTemp temp,
                    const DiodeParams& params);

/// Panel open-circuit voltage n*N*Vt(T)*ln(1 + Iph/I0(T)); strictly
/// increasing in pbr, strictly decreasing in temperature.
/// Throws std::domain_error for pbr <= 0.
double open_circuit_voltage(PowerW pbr, CelsiusTemp temp, const DiodeParams& params);

/// The unique maximum of P(v) = v * cell_current(v) on [0, Voc], located by
/// golden-section search (the power curve is strictly concave there).
/// Voltage tolerance 1e-6 V. Throws std::domain_error for pbr <= 0.
MppResult mpp(PowerW pbr, CelsiusTemp temp, const DiodeParams& params);

/// Params with area_factor set so that mpp(ref_pbr, ref_temp).power hits
/// `target_power_W` within 1e-3 W, via deterministic bisection on
/// [1e-4, 1e2] /cm^2. Throws CalibrationError when the bracket fails.
DiodeParams calibrate_area_factor(DiodeParams params, PowerW ref_pbr,
                                  CelsiusTemp ref_temp, double target_power_W);

/// Element-wise mpp over a list of received beam powers.
std::vector<std::pair<double, MppResult>> mpp_sweep(std::span<const double> pbr_W,
                                                    CelsiusTemp temp,
                                                    const DiodeParams& params);

/// Ordinary least squares of MPP power on received beam power.
/// Throws FitError on fewer than 2 points or degenerate input.
MppLinearCoeffs fit_mpp_linear(
    std::span<const std::pair<double, MppResult>> sweep_points);

/// Maximum panel conversion efficiency a2 + b2/pbr on the positive-power
/// region. Throws std::domain_error below the zero crossing -b2/a2.
Efficiency eta_bem(PowerW pbr, const MppLinearCoeffs& coeffs);

}  // namespace arbc
