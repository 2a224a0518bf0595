#include "arbc/pv_receiver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arbc {

namespace {

constexpr double kBoltzmannJPerK = 1.380649e-23;
constexpr double kElementaryChargeC = 1.602176634e-19;

double thermal_voltage_V(CelsiusTemp temp) {
    return kBoltzmannJPerK * temp.kelvin() / kElementaryChargeC;
}

// Per-cell dark saturation current at the measurement temperature, recovered
// from the data-sheet (isc, voc) pair.
double saturation_current_ref_A(const DiodeParams& p) {
    const double vt = thermal_voltage_V(CelsiusTemp(p.t_ref_C));
    return p.isc_ref_A / (std::exp(p.voc_ref_V / (p.ideality * vt)) - 1.0);
}

// Diode temperature law: I0(T) = I0(Tref) * (T/Tref)^3
//                               * exp(Eg/(n*k) * (1/Tref - 1/T)),
// absolute temperatures throughout.
double saturation_current_A(CelsiusTemp temp, const DiodeParams& p) {
    const double t_k = temp.kelvin();
    const double t_ref_k = CelsiusTemp(p.t_ref_C).kelvin();
    const double cube = (t_k / t_ref_k) * (t_k / t_ref_k) * (t_k / t_ref_k);
    const double gap_term = p.bandgap_eV * kElementaryChargeC /
                            (p.ideality * kBoltzmannJPerK) *
                            (1.0 / t_ref_k - 1.0 / t_k);
    return saturation_current_ref_A(p) * cube * std::exp(gap_term);
}

// Photocurrent scales with irradiance relative to the measurement irradiance.
double photocurrent_A(PowerW pbr, const DiodeParams& p) {
    return p.isc_ref_A * (pbr.value() * p.area_factor_per_cm2) / p.ir0_W_per_cm2;
}

void require_valid(const DiodeParams& params) {
    auto violations = validate(params);
    if (!violations.empty()) throw std::domain_error("pv_receiver: " + violations.front());
}

void require_above_absolute_zero(CelsiusTemp temp) {
    if (temp.kelvin() <= 0.0)
        throw std::domain_error(
            "pv_receiver: temperature must be above absolute zero");
}

constexpr double kMppVoltageToleranceV = 1e-6;
constexpr int kMaxIterations = 200;

}  // namespace

std::vector<std::string> validate(const DiodeParams& params) {
    std::vector<std::string> violations;
    auto positive = [&](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0)
            violations.push_back(std::string("pv.") + name + " must be positive");
    };
    positive(params.isc_ref_A, "isc_ref_A");
    positive(params.voc_ref_V, "voc_ref_V");
    positive(params.ir0_W_per_cm2, "ir0_W_per_cm2");
    positive(params.ideality, "ideality");
    positive(params.bandgap_eV, "bandgap_eV");
    positive(params.area_factor_per_cm2, "area_factor_per_cm2");
    positive(params.beam_frequency_Hz, "beam_frequency_Hz");
    if (params.n_series < 1) violations.push_back("pv.n_series must be >= 1");
    if (!std::isfinite(params.t_ref_C) || params.t_ref_C <= kAbsoluteZeroC)
        violations.push_back("pv.t_ref_C must be above absolute zero");
    return violations;
}

double cell_current(double v_panel_V, PowerW pbr, CelsiusTemp temp,
                    const DiodeParams& params) {
    require_valid(params);
    require_above_absolute_zero(temp);
    if (!std::isfinite(v_panel_V) || v_panel_V < 0.0)
        throw std::domain_error("cell_current: panel voltage must be >= 0");

    const double string_vt =
        params.n_series * params.ideality * thermal_voltage_V(temp);
    const double current = photocurrent_A(pbr, params) -
                           saturation_current_A(temp, params) *
                               (std::exp(v_panel_V / string_vt) - 1.0);
    return std::max(0.0, current);
}

double open_circuit_voltage(PowerW pbr, CelsiusTemp temp, const DiodeParams& params) {
    require_valid(params);
    require_above_absolute_zero(temp);
    if (pbr.value() <= 0.0)
        throw std::domain_error("open_circuit_voltage: received beam power must be > 0");

    const double ratio = photocurrent_A(pbr, params) / saturation_current_A(temp, params);
    return params.n_series * params.ideality * thermal_voltage_V(temp) *
           std::log1p(ratio);
}

MppResult mpp(PowerW pbr, CelsiusTemp temp, const DiodeParams& params) {
    const double voc = open_circuit_voltage(pbr, temp, params);  // validates inputs

    auto power_at = [&](double v) { return v * cell_current(v, pbr, temp, params); };

    // Golden-section maximum search; P(v) is strictly concave on (0, Voc).
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = voc;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = power_at(c);
    double fd = power_at(d);
    int iterations = 0;
    while (hi - lo > kMppVoltageToleranceV && iterations < kMaxIterations) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = power_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = power_at(d);
        }
        ++iterations;
    }

    MppResult result;
    result.voltage_V = 0.5 * (lo + hi);
    result.current_A = cell_current(result.voltage_V, pbr, temp, params);
    result.power_W = result.voltage_V * result.current_A;
    return result;
}

DiodeParams calibrate_area_factor(DiodeParams params, PowerW ref_pbr,
                                  CelsiusTemp ref_temp, double target_power_W) {
    constexpr double kBracketLow = 1e-4;
    constexpr double kBracketHigh = 1e2;

    auto power_with = [&](double area_factor) {
        DiodeParams trial = params;
        trial.area_factor_per_cm2 = area_factor;
        return mpp(ref_pbr, ref_temp, trial).power_W;
    };

    double lo = kBracketLow, hi = kBracketHigh;
    const double p_lo = power_with(lo);
    const double p_hi = power_with(hi);
    if (!(p_lo < target_power_W && target_power_W < p_hi)) {
        std::ostringstream msg;
        msg << "calibrate_area_factor: target " << target_power_W
            << " W not bracketed; mpp power is " << p_lo << " W at " << lo
            << " /cm^2 and " << p_hi << " W at " << hi << " /cm^2";
        throw CalibrationError(msg.str(), lo, hi);
    }

    // MPP power is strictly increasing in the area factor, so plain bisection
    // converges; 100 halvings shrink the bracket far below any tolerance.
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (power_with(mid) < target_power_W)
            lo = mid;
        else
            hi = mid;
    }
    params.area_factor_per_cm2 = 0.5 * (lo + hi);

    const double achieved = power_with(params.area_factor_per_cm2);
    if (std::abs(achieved - target_power_W) > 1e-3) {
        std::ostringstream msg;
        msg << "calibrate_area_factor: converged to " << achieved << " W, more than 1e-3 W from "
            << target_power_W << " W";
        throw CalibrationError(msg.str(), lo, hi);
    }
    return params;
}

std::vector<std::pair<double, MppResult>> mpp_sweep(std::span<const double> pbr_W,
                                                    CelsiusTemp temp,
                                                    const DiodeParams& params) {
    std::vector<std::pair<double, MppResult>> points;
    points.reserve(pbr_W.size());
    for (double pbr : pbr_W) points.emplace_back(pbr, mpp(PowerW(pbr), temp, params));
    return points;
}

MppLinearCoeffs fit_mpp_linear(std::span<const std::pair<double, MppResult>> sweep_points) {
    if (sweep_points.size() < 2)
        throw FitError("fit_mpp_linear: need at least 2 sweep points");

    const double n = static_cast<double>(sweep_points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [pbr, point] : sweep_points) {
        sx += pbr;
        sy += point.power_W;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [pbr, point] : sweep_points) {
        sxx += (pbr - mx) * (pbr - mx);
        sxy += (pbr - mx) * (point.power_W - my);
    }
    if (sxx <= 0.0)
        throw FitError("fit_mpp_linear: degenerate input (all beam powers equal)");

    MppLinearCoeffs coeffs;
    coeffs.a2 = sxy / sxx;
    coeffs.b2 = my - coeffs.a2 * mx;
    return coeffs;
}

Efficiency eta_bem(PowerW pbr, const MppLinearCoeffs& coeffs) {
    if (pbr.value() <= 0.0)
        throw std::domain_error("eta_bem: received beam power must be > 0");
    const double value = coeffs.a2 + coeffs.b2 / pbr.value();
    // Tolerate rounding exactly at the zero crossing -b2/a2.
    if (value < -1e-12) {
        std::ostringstream msg;
        msg << "eta_bem: pbr " << pbr.value() << " W below the positive-power threshold "
            << std::max(0.0, -coeffs.b2 / coeffs.a2) << " W";
        throw std::domain_error(msg.str());
    }
    return Efficiency(std::max(0.0, value));
}

}  // namespace arbc
