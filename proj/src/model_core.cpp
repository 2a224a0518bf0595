#include "arbc/model_core.hpp"

#include <sstream>

namespace arbc {

std::map<double, MppLinearCoeffs> default_mpp_table() {
    return {
        {0.0, {0.5434, -0.2761}},
        {25.0, {0.4979, -0.2989}},
        {50.0, {0.4525, -0.3209}},
    };
}

LinkConfig::LinkConfig() : mpp_coeffs_by_temp(default_mpp_table()) {}

MppLinearCoeffs mpp_coeffs_at(const LinkConfig& config, CelsiusTemp temp) {
    const auto& table = config.mpp_coeffs_by_temp;
    if (table.empty())
        throw std::out_of_range("mpp_coeffs_at: temperature table is empty");

    const double t = temp.value();
    const double t_min = table.begin()->first;
    const double t_max = table.rbegin()->first;
    if (t < t_min || t > t_max) {
        std::ostringstream msg;
        msg << "mpp_coeffs_at: temperature " << t << " C outside supported interval ["
            << t_min << ", " << t_max << "] C";
        throw std::out_of_range(msg.str());
    }

    auto upper = table.lower_bound(t);  // first key >= t
    if (upper->first == t) return upper->second;

    auto lower = std::prev(upper);
    const double frac = (t - lower->first) / (upper->first - lower->first);
    return {
        lower->second.a2 + frac * (upper->second.a2 - lower->second.a2),
        lower->second.b2 + frac * (upper->second.b2 - lower->second.b2),
    };
}

std::vector<std::string> validate(const SqrtFitCoeffs& coeffs) {
    std::vector<std::string> violations;
    if (!std::isfinite(coeffs.a1) || coeffs.a1 <= 0.0)
        violations.push_back("sqrt_coeffs.a1 must be positive");
    if (!std::isfinite(coeffs.b1) || coeffs.b1 <= 0.0)
        violations.push_back("sqrt_coeffs.b1 must be positive");
    if (!std::isfinite(coeffs.c1))
        violations.push_back("sqrt_coeffs.c1 must be finite");
    return violations;
}

std::vector<std::string> validate(const ChannelSpec& spec) {
    std::vector<std::string> violations;
    if (!std::isfinite(spec.wavelength_nm) || spec.wavelength_nm <= 0.0)
        violations.push_back("channel.wavelength_nm must be positive");
    if (!std::isfinite(spec.visibility_km) || spec.visibility_km <= 0.0)
        violations.push_back("channel.visibility_km must be positive");
    if (!std::isfinite(spec.range_km) || spec.range_km < 0.0)
        violations.push_back("channel.range_km must be non-negative");
    return violations;
}

std::vector<std::string> validate(const LinkConfig& config) {
    std::vector<std::string> violations = validate(config.sqrt_coeffs);

    if (config.mpp_coeffs_by_temp.empty())
        violations.push_back("mpp_coeffs_by_temp must be non-empty");
    for (const auto& [temp_c, coeffs] : config.mpp_coeffs_by_temp) {
        const std::string where = "mpp_coeffs_by_temp[" + std::to_string(temp_c) + "]";
        if (!std::isfinite(temp_c) || temp_c < kAbsoluteZeroC)
            violations.push_back(where + " temperature below absolute zero");
        if (!std::isfinite(coeffs.a2) || coeffs.a2 <= 0.0 || coeffs.a2 >= 1.0)
            violations.push_back(where + ".a2 out of (0,1)");
        if (!std::isfinite(coeffs.b2) || coeffs.b2 >= 0.0)
            violations.push_back(where + ".b2 must be negative");
    }

    if (!std::isfinite(config.eta_dc) || config.eta_dc <= 0.0 || config.eta_dc > 1.0)
        violations.push_back("eta_dc out of (0,1]");
    if (!std::isfinite(config.eta_ce) || config.eta_ce <= 0.0 || config.eta_ce > 1.0)
        violations.push_back("eta_ce out of (0,1]");

    auto channel_violations = validate(config.channel);
    violations.insert(violations.end(), channel_violations.begin(), channel_violations.end());
    return violations;
}

}  // namespace arbc
