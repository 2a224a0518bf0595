#include "arbc/beam_channel.hpp"

#include <cmath>
#include <sstream>

namespace arbc {

double scattering_exponent(double visibility_km) {
    if (!std::isfinite(visibility_km) || visibility_km <= 0.0 || visibility_km > 50.0) {
        std::ostringstream msg;
        msg << "scattering_exponent: visibility " << visibility_km
            << " km outside the modeled regimes (0, 50] km";
        throw std::out_of_range(msg.str());
    }
    if (visibility_km >= 21.0) return 1.6;
    if (visibility_km >= 6.0) return 1.3;
    return 0.585 * std::cbrt(visibility_km);
}

Efficiency eta_bt(const ChannelSpec& spec) {
    auto violations = validate(spec);
    if (!violations.empty()) throw std::domain_error("eta_bt: " + violations.front());

    const double chi = scattering_exponent(spec.visibility_km);
    const double wavelength_term =
        std::pow(spec.wavelength_nm / ChannelSpec::kLambdaRefNm, -chi);
    const double exponent =
        -(ChannelSpec::kBeta / spec.visibility_km) * wavelength_term * spec.range_km;
    return Efficiency(std::exp(exponent));
}

double max_range_km(const ChannelSpec& spec, double target_eta) {
    if (!std::isfinite(target_eta) || target_eta <= 0.0 || target_eta > 1.0)
        throw std::domain_error("max_range_km: target efficiency must be in (0, 1]");

    const double chi = scattering_exponent(spec.visibility_km);
    return -std::log(target_eta) * (spec.visibility_km / ChannelSpec::kBeta) *
           std::pow(spec.wavelength_nm / ChannelSpec::kLambdaRefNm, chi);
}

double scenario_visibility_km(const std::string& scenario) {
    if (scenario == "high") return 30.0;
    if (scenario == "average") return 11.0;
    if (scenario == "low") return 4.0;
    throw std::invalid_argument("unknown visibility scenario '" + scenario +
                                "' (expected high, average, or low)");
}

}  // namespace arbc
