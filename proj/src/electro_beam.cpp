#include "arbc/electro_beam.hpp"

#include <algorithm>
#include <cmath>

namespace arbc {

namespace {

void require_valid(const SqrtFitCoeffs& coeffs) {
    auto violations = validate(coeffs);
    if (!violations.empty()) throw std::domain_error("electro_beam: " + violations.front());
}

void require_valid_samples(std::span<const MeasuredSample> samples) {
    for (const auto& s : samples) {
        if (!std::isfinite(s.ps_W) || s.ps_W < 0.0 || !std::isfinite(s.pbt_W) || s.pbt_W < 0.0)
            throw std::domain_error("electro_beam: samples must be finite and non-negative");
    }
}

std::size_t distinct_source_powers(std::span<const MeasuredSample> samples) {
    std::vector<double> ps;
    ps.reserve(samples.size());
    for (const auto& s : samples) ps.push_back(s.ps_W);
    std::sort(ps.begin(), ps.end());
    return static_cast<std::size_t>(std::unique(ps.begin(), ps.end()) - ps.begin());
}

struct InnerFit {
    double a1 = 0.0;
    double c1 = 0.0;
    double sse = 0.0;
};

// Optimal (a1, c1) for a fixed b1: ordinary least squares on x = sqrt(b1 + ps).
InnerFit inner_linear_fit(std::span<const MeasuredSample> samples, double b1) {
    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : samples) {
        sx += std::sqrt(b1 + s.ps_W);
        sy += s.pbt_W;
    }
    const double mx = sx / n, my = sy / n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        const double dx = std::sqrt(b1 + s.ps_W) - mx;
        sxx += dx * dx;
        sxy += dx * (s.pbt_W - my);
    }
    if (sxx <= 0.0) return {0.0, my, std::numeric_limits<double>::infinity()};

    InnerFit fit;
    fit.a1 = sxy / sxx;
    fit.c1 = my - fit.a1 * mx;
    for (const auto& s : samples) {
        const double r = fit.a1 * std::sqrt(b1 + s.ps_W) + fit.c1 - s.pbt_W;
        fit.sse += r * r;
    }
    return fit;
}

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

constexpr double kB1BracketLow = 1e-3;
constexpr double kB1BracketHigh = 1e3;
constexpr double kB1Tolerance = 1e-9;
constexpr int kMaxIterations = 200;

}  // namespace

PowerW lasing_threshold(const SqrtFitCoeffs& coeffs) {
    require_valid(coeffs);
    if (coeffs.c1 >= 0.0) return PowerW(0.0);  // beam positive already at ps = 0
    const double ratio = coeffs.c1 / coeffs.a1;
    return PowerW(std::max(0.0, ratio * ratio - coeffs.b1));
}

PowerW beam_power(PowerW ps, const SqrtFitCoeffs& coeffs) {
    const double threshold = lasing_threshold(coeffs).value();
    if (ps.value() <= threshold) return PowerW(0.0);
    const double raw = coeffs.a1 * std::sqrt(coeffs.b1 + ps.value()) + coeffs.c1;
    return PowerW(std::max(0.0, raw));
}

Efficiency eta_eb(PowerW ps, const SqrtFitCoeffs& coeffs) {
    if (ps.value() == 0.0)
        throw std::domain_error("eta_eb: undefined at ps = 0 (division by zero)");
    return Efficiency(beam_power(ps, coeffs).value() / ps.value());
}

EtaEbPeak peak_eta_eb(const SqrtFitCoeffs& coeffs) {
    require_valid(coeffs);
    // d(eta_eb)/dt with t = sqrt(b1 + ps) vanishes where
    // a1*t^2 + 2*c1*t + a1*b1 = 0; an interior maximum needs a root t > sqrt(b1),
    // which requires c1 < 0 and a positive discriminant.
    const double disc = coeffs.c1 * coeffs.c1 - coeffs.a1 * coeffs.a1 * coeffs.b1;
    if (coeffs.c1 >= 0.0 || disc <= 0.0)
        throw ModelError("peak_eta_eb: no interior peak");
    const double root = (-coeffs.c1 + std::sqrt(disc)) / coeffs.a1;
    if (root <= std::sqrt(coeffs.b1))
        throw ModelError("peak_eta_eb: no interior peak");

    const double ps_star = root * root - coeffs.b1;
    const double eta_star = (coeffs.a1 * root + coeffs.c1) / ps_star;
    return {PowerW(ps_star), Efficiency(eta_star)};
}

SqrtFitResult fit_sqrt(std::span<const MeasuredSample> samples) {
    require_valid_samples(samples);
    if (samples.size() < 4)
        throw FitError("fit_sqrt: need at least 4 samples, got " +
                       std::to_string(samples.size()));
    if (distinct_source_powers(samples) < 3)
        throw FitError("fit_sqrt: need at least 3 distinct source powers");
    for (const auto& s : samples) {
        if (s.pbt_W <= 0.0)
            throw FitError("fit_sqrt: all samples must lie above the lasing region "
                           "(measured beam power > 0)");
    }

    // Coarse log-spaced scan locates the bracket for the outer b1 search.
    constexpr int kScanPoints = 240;
    std::vector<double> candidates(kScanPoints);
    for (int k = 0; k < kScanPoints; ++k) {
        const double frac = static_cast<double>(k) / (kScanPoints - 1);
        candidates[k] = kB1BracketLow *
                        std::pow(kB1BracketHigh / kB1BracketLow, frac);
    }
    int best_k = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kScanPoints; ++k) {
        const double sse = inner_linear_fit(samples, candidates[k]).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_k = k;
        }
    }

    // Golden-section refinement inside the bracketing neighbours.
    double lo = candidates[std::max(0, best_k - 1)];
    double hi = candidates[std::min(kScanPoints - 1, best_k + 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = inner_linear_fit(samples, c).sse;
    double fd = inner_linear_fit(samples, d).sse;
    int iterations = 0;
    while (hi - lo > kB1Tolerance && iterations < kMaxIterations) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = inner_linear_fit(samples, c).sse;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = inner_linear_fit(samples, d).sse;
        }
        ++iterations;
    }
    const double b1 = 0.5 * (lo + hi);
    const InnerFit inner = inner_linear_fit(samples, b1);
    if (hi - lo > kB1Tolerance)
        throw FitError("fit_sqrt: b1 search did not converge within iteration cap",
                       inner.sse / static_cast<double>(samples.size()));
    if (inner.a1 <= 0.0)
        throw FitError("fit_sqrt: fitted a1 not positive; data inconsistent with model",
                       inner.sse / static_cast<double>(samples.size()));

    SqrtFitResult result;
    result.coeffs = {inner.a1, b1, inner.c1};
    result.mse = mean(squared_errors(samples, result.coeffs));
    return result;
}

LinearFitResult fit_linear(std::span<const MeasuredSample> samples) {
    require_valid_samples(samples);
    if (samples.size() < 2 || distinct_source_powers(samples) < 2)
        throw FitError("fit_linear: need at least 2 distinct source powers");

    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : samples) {
        sx += s.ps_W;
        sy += s.pbt_W;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        sxx += (s.ps_W - mx) * (s.ps_W - mx);
        sxy += (s.ps_W - mx) * (s.pbt_W - my);
    }
    if (sxx <= 0.0) throw FitError("fit_linear: degenerate input (all source powers equal)");

    LinearFitResult result;
    result.coeffs.slope = sxy / sxx;
    result.coeffs.intercept_W = my - result.coeffs.slope * mx;
    result.mse = mean(squared_errors(samples, result.coeffs));
    return result;
}

std::vector<double> squared_errors(std::span<const MeasuredSample> samples,
                                   const SqrtFitCoeffs& model) {
    if (samples.empty()) throw std::domain_error("squared_errors: empty sample list");
    std::vector<double> errors;
    errors.reserve(samples.size());
    for (const auto& s : samples) {
        const double r = beam_power(PowerW(s.ps_W), model).value() - s.pbt_W;
        errors.push_back(r * r);
    }
    return errors;
}

std::vector<double> squared_errors(std::span<const MeasuredSample> samples,
                                   const LinearFitCoeffs& model) {
    if (samples.empty()) throw std::domain_error("squared_errors: empty sample list");
    std::vector<double> errors;
    errors.reserve(samples.size());
    for (const auto& s : samples) {
        const double r = model.slope * s.ps_W + model.intercept_W - s.pbt_W;
        errors.push_back(r * r);
    }
    return errors;
}

}  // namespace arbc
