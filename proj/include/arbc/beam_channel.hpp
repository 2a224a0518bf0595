#pragma once

// Atmospheric beam transmission: exponential attenuation over range with a
// visibility-dependent scattering size distribution exponent, plus the
// inverse range query. Constant beam diameter is assumed throughout, so the
// only loss mechanism is scattering.

#include "arbc/model_core.hpp"

namespace arbc {

/// Scattering size distribution exponent chi for a visibility in (0, 50] km:
///   1.6             for 21 <= v <= 50   (high visibility)
///   1.3             for  6 <= v <  21   (average visibility)
///   0.585 * v^(1/3) for  0 <  v <   6   (low visibility)
/// The overlapping printed boundaries resolve to the higher-chi branch, and
/// chi is deliberately discontinuous at v = 21 km.
/// Throws std::out_of_range outside (0, 50] km.
double scattering_exponent(double visibility_km);

/// Beam transmission efficiency over the spec's range:
///   exp(-(beta / v) * (lambda / 550 nm)^(-chi) * R), always in (0, 1].
Efficiency eta_bt(const ChannelSpec& spec);

/// Range (km) at which the channel attenuates to `target_eta`; inverse of
/// eta_bt, ignoring spec.range_km. Round-trips through eta_bt to 1e-12
/// relative. Throws std::domain_error unless target_eta is in (0, 1].
double max_range_km(const ChannelSpec& spec, double target_eta);

/// Visibility for a named scenario: high -> 30 km, average -> 11 km,
/// low -> 4 km. Throws std::invalid_argument for unknown names.
double scenario_visibility_km(const std::string& scenario);

}  // namespace arbc
