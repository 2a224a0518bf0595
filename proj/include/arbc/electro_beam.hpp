#pragma once

// Electricity-to-beam conversion at the transmitter: the square-root power
// model, its conversion efficiency and efficiency peak, and the least-squares
// fitting machinery that produces the model from measured (ps, pbt) samples.

#include <span>
#include <utility>
#include <vector>

#include "arbc/model_core.hpp"

namespace arbc {

/// One measured (source power, beam power) pair, both in watts.
struct MeasuredSample {
    double ps_W = 0.0;
    double pbt_W = 0.0;

    bool operator==(const MeasuredSample&) const = default;
};

/// Ordinary linear model pbt = slope * ps + intercept.
struct LinearFitCoeffs {
    double slope = 0.0;
    double intercept_W = 0.0;

    bool operator==(const LinearFitCoeffs&) const = default;
};

struct EtaEbPeak {
    PowerW ps_star;
    Efficiency eta_star;
};

struct SqrtFitResult {
    SqrtFitCoeffs coeffs;
    double mse = 0.0;
};

struct LinearFitResult {
    LinearFitCoeffs coeffs;
    double mse = 0.0;
};

/// Minimum source power below which no beam power is generated:
/// the root of a1*sqrt(b1 + ps) + c1, clamped at 0.
PowerW lasing_threshold(const SqrtFitCoeffs& coeffs);

/// Beam power at the transmitter for source power `ps`:
/// a1*sqrt(b1 + ps) + c1 above the lasing threshold, exactly 0 below it.
PowerW beam_power(PowerW ps, const SqrtFitCoeffs& coeffs);

/// Electricity-to-beam conversion efficiency beam_power(ps)/ps.
/// Zero in the sub-threshold region. Throws std::domain_error at ps = 0.
Efficiency eta_eb(PowerW ps, const SqrtFitCoeffs& coeffs);

/// Location and value of the interior maximum of eta_eb, in closed form.
///
/// Substituting t = sqrt(b1 + ps), stationarity reduces to the quadratic
/// a1*t^2 + 2*c1*t + a1*b1 = 0; the root t > sqrt(b1) is the peak.
/// Throws ModelError("no interior peak") when no such root exists.
EtaEbPeak peak_eta_eb(const SqrtFitCoeffs& coeffs);

/// Least-squares fit of the square-root model to measured samples.
///
/// Separable formulation: for fixed b1 the optimal (a1, c1) is an ordinary
/// linear least-squares subproblem on sqrt(b1 + ps); the outer 1-D search
/// over b1 uses a deterministic log-spaced scan of [1e-3, 1e3] followed by
/// golden-section refinement (tolerance 1e-9 on b1, 200-iteration cap).
///
/// Requires >= 4 samples with >= 3 distinct source powers, all with positive
/// measured beam power. Throws FitError otherwise, or when the best model
/// has non-positive a1.
SqrtFitResult fit_sqrt(std::span<const MeasuredSample> samples);

/// Ordinary least squares of pbt on ps. Requires >= 2 distinct source
/// powers; throws FitError on degenerate input.
LinearFitResult fit_linear(std::span<const MeasuredSample> samples);

/// Per-sample squared residuals (predicted pbt - measured pbt)^2.
/// Their mean is exactly the MSE reported by the corresponding fit.
/// Throws std::domain_error on an empty sample list.
std::vector<double> squared_errors(std::span<const MeasuredSample> samples,
                                   const SqrtFitCoeffs& model);
std::vector<double> squared_errors(std::span<const MeasuredSample> samples,
                                   const LinearFitCoeffs& model);

}  // namespace arbc
