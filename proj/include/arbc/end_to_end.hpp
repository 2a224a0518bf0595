#pragma once

// End-to-end composition of the link stages: output power at the panel MPP,
// battery charging power, overall maximum power transmission efficiency, and
// the closed-form unique optimum of that efficiency over source power.

#include <vector>

#include "arbc/model_core.hpp"

namespace arbc {

/// One (source power, beam transmission efficiency, panel temperature)
/// operating point of the link.
struct OperatingPoint {
    PowerW source_power;
    Efficiency eta_bt;
    CelsiusTemp temp;
};

/// The unique efficiency optimum for a fixed (eta_bt, temperature).
/// xi is the optimal root in t = sqrt(b1 + ps) space, xi > sqrt(b1).
struct OptimumResult {
    PowerW ps_star;
    Efficiency eta_opt;
    PowerW pm_star;
    PowerW pb_star;
    double xi;
};

/// Maximum panel output power at an operating point:
///   a1*a2*eta_bt*sqrt(b1 + ps) + a2*eta_bt*c1 + b2,
/// clamped at 0 (and exactly 0 below the lasing threshold).
PowerW output_power_pm(const OperatingPoint& point, const LinkConfig& config);

/// Battery charging power pm * eta_dc * eta_ce.
PowerW battery_power(PowerW pm, const LinkConfig& config);

/// Smallest source power with positive panel output at this eta_bt and
/// temperature (always above the lasing threshold).
double feasible_ps_min_W(Efficiency eta_bt, CelsiusTemp temp, const LinkConfig& config);

/// Overall maximum power transmission efficiency
///   [a1*a2*eta_bt*sqrt(b1 + ps) + (a2*c1*eta_bt + b2)] / ps * eta_dc * eta_ce,
/// identical to the product eta_eb * eta_bt * eta_bem * eta_dc * eta_ce.
/// Throws std::domain_error (naming the feasible interval) where the panel
/// output would be zero or negative.
Efficiency eta_om(const OperatingPoint& point, const LinkConfig& config);

/// The sign-of-derivative quadratic in t = sqrt(b1 + ps):
///   g(t) = -(a1/2) t^2 - (c1 + b2/(a2*eta_bt)) t - a1*b1/2.
/// eta_om rises while g > 0 and falls once g < 0.
double g_quadratic(double t, Efficiency eta_bt, CelsiusTemp temp,
                   const LinkConfig& config);

/// The unique optimum of eta_om over source power at fixed (eta_bt, temp):
/// the root of g above sqrt(b1), solved by the quadratic formula.
/// Throws ModelError if no admissible root exists (impossible for the
/// default coefficient tables, guarded regardless).
OptimumResult optimal_source_power(Efficiency eta_bt, CelsiusTemp temp,
                                   const LinkConfig& config);

/// Axis values for a sweep; rows are emitted lexicographically over
/// (eta_bt, temp, ps), matching the order given here.
struct SweepAxes {
    std::vector<double> eta_bt;
    std::vector<double> temp_C;
    std::vector<double> ps_W;
};

/// One sweep row. eta_om is NaN where the point is infeasible (panel output
/// clamped to zero); ps_star_W/eta_opt are the per-(eta_bt, temp) optimum.
struct SweepRow {
    double ps_W;
    double eta_bt;
    double temp_C;
    double pm_W;
    double pb_W;
    double eta_om;
    double ps_star_W;
    double eta_opt;
};

/// Deterministic sweep over the axis grid. Throws std::invalid_argument on
/// empty axes or out-of-range axis values.
std::vector<SweepRow> sweep(const SweepAxes& axes, const LinkConfig& config);

}  // namespace arbc
