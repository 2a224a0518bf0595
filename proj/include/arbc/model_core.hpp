#pragma once

// Shared domain types, parameter tables, and configuration validation for the
// resonant-beam charging link model. Everything here is an immutable value
// type; all other modules consume these.

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace arbc {

inline constexpr double kAbsoluteZeroC = -273.15;

/// Curve fitting failed (underdetermined input, degenerate data, or the
/// search did not converge). Carries the best mean squared error reached.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg,
                      double best_mse = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), best_mse_(best_mse) {}
    double best_mse() const { return best_mse_; }

private:
    double best_mse_;
};

/// The model has no solution of the requested kind (e.g. no interior
/// efficiency peak, no optimum root in the admissible interval).
class ModelError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Calibration bracketing failed; reports the bracket endpoints tried.
class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& msg, double bracket_low, double bracket_high)
        : std::runtime_error(msg), low_(bracket_low), high_(bracket_high) {}
    double bracket_low() const { return low_; }
    double bracket_high() const { return high_; }

private:
    double low_;
    double high_;
};

/// Non-negative finite power in watts.
class PowerW {
public:
    explicit PowerW(double watts) : watts_(watts) {
        if (!std::isfinite(watts_) || watts_ < 0.0)
            throw std::domain_error("PowerW: value must be finite and >= 0, got " +
                                    std::to_string(watts));
    }
    double value() const { return watts_; }

private:
    double watts_;
};

/// Dimensionless transmission/conversion efficiency as a fraction in [0, 1].
/// Fractions everywhere; the CLI layer converts to percent for display only.
class Efficiency {
public:
    explicit Efficiency(double fraction) : fraction_(fraction) {
        if (!std::isfinite(fraction_) || fraction_ < 0.0 || fraction_ > 1.0)
            throw std::domain_error("Efficiency: value must be in [0, 1], got " +
                                    std::to_string(fraction));
    }
    double value() const { return fraction_; }

private:
    double fraction_;
};

/// Temperature in degrees Celsius, bounded below by absolute zero.
class CelsiusTemp {
public:
    explicit CelsiusTemp(double celsius) : celsius_(celsius) {
        if (!std::isfinite(celsius_) || celsius_ < kAbsoluteZeroC)
            throw std::domain_error("CelsiusTemp: value must be >= -273.15 C, got " +
                                    std::to_string(celsius));
    }
    double value() const { return celsius_; }
    double kelvin() const { return celsius_ - kAbsoluteZeroC; }

private:
    double celsius_;
};

/// Coefficients of the square-root electro-beam conversion model
///   pbt = a1 * sqrt(b1 + ps) + c1   [W].
/// a1 and b1 must be positive for the efficiency-optimum analysis to hold.
/// Defaults are the fitted 1550 nm transmitter values.
struct SqrtFitCoeffs {
    double a1 = 3.331;   // sqrt-scale gain, W^(1/2)
    double b1 = 10.2;    // source-power offset inside the root, W
    double c1 = -11.99;  // additive offset, W

    bool operator==(const SqrtFitCoeffs&) const = default;
};

/// Linear approximation of the maximum PV output power vs received beam power,
///   pm = a2 * pbr + b2   [W], per panel temperature.
struct MppLinearCoeffs {
    double a2 = 0.0;  // dimensionless slope
    double b2 = 0.0;  // intercept, W (negative for all tabulated temperatures)

    bool operator==(const MppLinearCoeffs&) const = default;
};

/// Atmospheric channel description for the beam transmission model.
/// beta and the reference wavelength are fixed model constants.
struct ChannelSpec {
    double wavelength_nm = 1550.0;
    double visibility_km = 30.0;
    double range_km = 0.0;

    static constexpr double kBeta = 3.91;
    static constexpr double kLambdaRefNm = 550.0;

    bool operator==(const ChannelSpec&) const = default;
};

/// Full end-to-end parameter bundle: transmitter fit, per-temperature MPP
/// coefficients, DC-DC and battery charging efficiencies, and the channel.
struct LinkConfig {
    SqrtFitCoeffs sqrt_coeffs{};
    std::map<double, MppLinearCoeffs> mpp_coeffs_by_temp;  // key: panel temp, deg C
    double eta_dc = 0.90;
    double eta_ce = 0.99;
    ChannelSpec channel{};

    LinkConfig();
    bool operator==(const LinkConfig&) const = default;
};

/// The tabulated (a2, b2) pairs at 0 / 25 / 50 deg C.
std::map<double, MppLinearCoeffs> default_mpp_table();

/// MPP coefficients at `temp`: exact at a tabulated key, piecewise-linear
/// interpolation between bracketing keys otherwise.
/// Throws std::out_of_range (naming the supported interval) outside the table.
MppLinearCoeffs mpp_coeffs_at(const LinkConfig& config, CelsiusTemp temp);

/// Every invariant violation in `config`, one message per field; empty == ok.
/// Violations are data, not faults: this never throws.
std::vector<std::string> validate(const LinkConfig& config);

/// Violations for a channel spec alone.
std::vector<std::string> validate(const ChannelSpec& spec);

/// Violations for a transmitter coefficient set alone.
std::vector<std::string> validate(const SqrtFitCoeffs& coeffs);

}  // namespace arbc
