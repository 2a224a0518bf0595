#include "arbc/end_to_end.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "arbc/electro_beam.hpp"

namespace arbc {

namespace {

void require_valid(const LinkConfig& config) {
    auto violations = validate(config);
    if (!violations.empty()) throw std::domain_error("end_to_end: " + violations.front());
}

// c1 + b2/(a2*eta_bt): the only eta_bt- and temperature-dependent term of the
// optimum quadratic. Always negative for valid coefficient tables.
double shifted_offset(Efficiency eta_bt, const MppLinearCoeffs& mpp,
                      const SqrtFitCoeffs& tx) {
    return tx.c1 + mpp.b2 / (mpp.a2 * eta_bt.value());
}

double raw_pm_W(double ps_W, double eta_bt, const MppLinearCoeffs& mpp,
                const SqrtFitCoeffs& tx) {
    return tx.a1 * mpp.a2 * eta_bt * std::sqrt(tx.b1 + ps_W) +
           mpp.a2 * eta_bt * tx.c1 + mpp.b2;
}

}  // namespace

PowerW output_power_pm(const OperatingPoint& point, const LinkConfig& config) {
    require_valid(config);
    const MppLinearCoeffs mpp = mpp_coeffs_at(config, point.temp);
    const SqrtFitCoeffs& tx = config.sqrt_coeffs;

    if (point.source_power.value() <= lasing_threshold(tx).value()) return PowerW(0.0);
    return PowerW(std::max(
        0.0, raw_pm_W(point.source_power.value(), point.eta_bt.value(), mpp, tx)));
}

PowerW battery_power(PowerW pm, const LinkConfig& config) {
    require_valid(config);
    return PowerW(pm.value() * config.eta_dc * config.eta_ce);
}

double feasible_ps_min_W(Efficiency eta_bt, CelsiusTemp temp, const LinkConfig& config) {
    require_valid(config);
    if (eta_bt.value() <= 0.0)
        throw std::domain_error("feasible_ps_min_W: eta_bt must be > 0");
    const MppLinearCoeffs mpp = mpp_coeffs_at(config, temp);
    const SqrtFitCoeffs& tx = config.sqrt_coeffs;

    // Positive panel output needs sqrt(b1 + ps) > -(c1 + b2/(a2*eta_bt))/a1.
    const double sqrt_min = -shifted_offset(eta_bt, mpp, tx) / tx.a1;
    if (sqrt_min <= 0.0) return lasing_threshold(tx).value();
    return std::max(lasing_threshold(tx).value(), sqrt_min * sqrt_min - tx.b1);
}

Efficiency eta_om(const OperatingPoint& point, const LinkConfig& config) {
    require_valid(config);
    if (point.eta_bt.value() <= 0.0)
        throw std::domain_error("eta_om: eta_bt must be > 0");
    const MppLinearCoeffs mpp = mpp_coeffs_at(config, point.temp);
    const SqrtFitCoeffs& tx = config.sqrt_coeffs;

    const double ps = point.source_power.value();
    const double pm = raw_pm_W(ps, point.eta_bt.value(), mpp, tx);
    if (ps <= lasing_threshold(tx).value() || pm <= 0.0) {
        std::ostringstream msg;
        msg << "eta_om: ps = " << ps << " W outside the feasible interval ("
            << feasible_ps_min_W(point.eta_bt, point.temp, config)
            << ", inf) W for eta_bt = " << point.eta_bt.value() << ", temp = "
            << point.temp.value() << " C";
        throw std::domain_error(msg.str());
    }
    return Efficiency(pm / ps * config.eta_dc * config.eta_ce);
}

double g_quadratic(double t, Efficiency eta_bt, CelsiusTemp temp,
                   const LinkConfig& config) {
    require_valid(config);
    if (eta_bt.value() <= 0.0)
        throw std::domain_error("g_quadratic: eta_bt must be > 0");
    const MppLinearCoeffs mpp = mpp_coeffs_at(config, temp);
    const SqrtFitCoeffs& tx = config.sqrt_coeffs;

    return -(tx.a1 / 2.0) * t * t - shifted_offset(eta_bt, mpp, tx) * t -
           tx.a1 * tx.b1 / 2.0;
}

OptimumResult optimal_source_power(Efficiency eta_bt, CelsiusTemp temp,
                                   const LinkConfig& config) {
    require_valid(config);
    if (eta_bt.value() <= 0.0)
        throw std::domain_error("optimal_source_power: eta_bt must be > 0");
    const MppLinearCoeffs mpp = mpp_coeffs_at(config, temp);
    const SqrtFitCoeffs& tx = config.sqrt_coeffs;

    // g(xi) = 0 with the negative leading coefficient divided out:
    //   t^2 + (2*q/a1) t + b1 = 0,  q = c1 + b2/(a2*eta_bt).
    // The admissible optimum is the larger root, the only one above sqrt(b1).
    const double q = shifted_offset(eta_bt, mpp, tx);
    const double disc = q * q - tx.a1 * tx.a1 * tx.b1;
    if (disc <= 0.0)
        throw ModelError("optimal_source_power: no real optimum root");
    const double xi = (-q + std::sqrt(disc)) / tx.a1;
    if (xi <= std::sqrt(tx.b1))
        throw ModelError("optimal_source_power: no root above sqrt(b1)");

    const double ps_star = xi * xi - tx.b1;
    const OperatingPoint star{PowerW(ps_star), eta_bt, temp};
    const PowerW pm_star = output_power_pm(star, config);
    return {PowerW(ps_star), eta_om(star, config), pm_star,
            battery_power(pm_star, config), xi};
}

std::vector<SweepRow> sweep(const SweepAxes& axes, const LinkConfig& config) {
    require_valid(config);
    if (axes.eta_bt.empty() || axes.temp_C.empty() || axes.ps_W.empty())
        throw std::invalid_argument("sweep: all axes must be non-empty");
    for (double e : axes.eta_bt) {
        if (!std::isfinite(e) || e <= 0.0 || e > 1.0)
            throw std::invalid_argument("sweep: eta_bt axis values must be in (0, 1]");
    }
    for (double ps : axes.ps_W) {
        if (!std::isfinite(ps) || ps < 0.0)
            throw std::invalid_argument("sweep: ps axis values must be >= 0");
    }
    // Temperature range errors surface from mpp_coeffs_at below.

    std::vector<SweepRow> rows;
    rows.reserve(axes.eta_bt.size() * axes.temp_C.size() * axes.ps_W.size());
    for (double ebt : axes.eta_bt) {
        for (double temp_c : axes.temp_C) {
            const Efficiency eta(ebt);
            const CelsiusTemp temp(temp_c);
            const OptimumResult optimum = optimal_source_power(eta, temp, config);
            for (double ps : axes.ps_W) {
                const OperatingPoint point{PowerW(ps), eta, temp};
                SweepRow row{};
                row.ps_W = ps;
                row.eta_bt = ebt;
                row.temp_C = temp_c;
                row.pm_W = output_power_pm(point, config).value();
                row.pb_W = battery_power(PowerW(row.pm_W), config).value();
                try {
                    row.eta_om = eta_om(point, config).value();
                } catch (const std::domain_error&) {
                    // Infeasible grid point; the column stays NaN rather than
                    // a silent zero.
                    row.eta_om = std::numeric_limits<double>::quiet_NaN();
                }
                row.ps_star_W = optimum.ps_star.value();
                row.eta_opt = optimum.eta_opt.value();
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace arbc
