// Acceptance suite: prints one PASS/FAIL line per criterion and exits with
// the number of failures. The determinism criterion drives the real CLI
// binary; point it at the build with ARBC_CLI_BIN (ctest does this).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "arbc/beam_channel.hpp"
#include "arbc/cli_io.hpp"
#include "arbc/electro_beam.hpp"
#include "arbc/end_to_end.hpp"
#include "arbc/model_core.hpp"
#include "arbc/pv_receiver.hpp"

using namespace arbc;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& detail) {
    if (!condition) throw CheckFailure(detail);
}

std::string num(double v) { return format_double(v); }

const LinkConfig kConfig{};
const std::vector<double> kEtaBtLattice = [] {
    std::vector<double> v;
    for (int k = 0; k <= 7; ++k) v.push_back(0.3 + 0.1 * k);
    return v;
}();
const std::vector<double> kTempLattice{0.0, 25.0, 50.0};

// Independent route for the oracle scans: the composed end-to-end efficiency
// expression evaluated directly.
double raw_eta_om(double ps, double ebt, const MppLinearCoeffs& mpp,
                  const SqrtFitCoeffs& tx, double eta_dc, double eta_ce) {
    return (tx.a1 * mpp.a2 * ebt * std::sqrt(tx.b1 + ps) +
            (mpp.a2 * tx.c1 * ebt + mpp.b2)) /
           ps * eta_dc * eta_ce;
}

// --- criterion 1 -----------------------------------------------------------
void electro_beam_peak() {
    const EtaEbPeak peak = peak_eta_eb(kConfig.sqrt_coeffs);
    require(std::abs(peak.eta_star.value() - 0.317) <= 0.003,
            "peak efficiency " + num(peak.eta_star.value()) + " not 31.7% +- 0.3pp");
    require(peak.ps_star.value() >= 16.5 && peak.ps_star.value() <= 18.5,
            "peak location " + num(peak.ps_star.value()) + " W outside [16.5, 18.5]");

    const double lo = lasing_threshold(kConfig.sqrt_coeffs).value();
    double grid_eta = -1.0, grid_ps = lo;
    const long long n = static_cast<long long>((100.0 - lo) / 1e-3);
    for (long long k = 1; k <= n; ++k) {
        const double ps = lo + static_cast<double>(k) * 1e-3;
        const double eta =
            (kConfig.sqrt_coeffs.a1 * std::sqrt(kConfig.sqrt_coeffs.b1 + ps) +
             kConfig.sqrt_coeffs.c1) /
            ps;
        if (eta > grid_eta) {
            grid_eta = eta;
            grid_ps = ps;
        }
    }
    require(std::abs(grid_ps - peak.ps_star.value()) <= 2e-3,
            "0.001 W grid peak at " + num(grid_ps) + " W disagrees with closed form " +
                num(peak.ps_star.value()));
    require(grid_eta <= peak.eta_star.value() + 1e-12,
            "grid found a better efficiency than the closed form");
    require(std::abs(grid_eta - peak.eta_star.value()) <= 1e-8,
            "grid peak efficiency " + num(grid_eta) + " too far from closed form");
}

// --- criterion 2 -----------------------------------------------------------
void end_to_end_spot_check() {
    const Efficiency eta = eta_om(
        {PowerW(40.0), Efficiency(0.70), CelsiusTemp(0.0)}, kConfig);
    require(std::abs(eta.value() - 0.092) <= 0.010,
            "eta_om(40 W, 0.70, 0 C) = " + num(eta.value()) + " not 9.2% +- 1.0pp");
}

// --- criterion 3 -----------------------------------------------------------
void mpp_linear_anchor() {
    const MppLinearCoeffs coeffs = mpp_coeffs_at(kConfig, CelsiusTemp(25.0));
    const double pm = coeffs.a2 * 25.0 + coeffs.b2;
    require(std::abs(pm - 12.1486) <= 1e-9,
            "linear model at 25 W gives " + num(pm) + " W, expected 12.1486 W");
    require(std::abs(pm - 12.19) / 12.19 <= 0.005,
            "linear model " + num(pm) + " W more than 0.5% from the 12.19 W MPP");
}

// --- criterion 4 -----------------------------------------------------------
void diode_model_anchor() {
    DiodeParams params;
    params.area_factor_per_cm2 = 0.05;  // start the calibration from a wrong value
    const DiodeParams calibrated = calibrate_area_factor(
        params, PowerW(kCalibrationPbrW), CelsiusTemp(kCalibrationTempC),
        kCalibrationPowerW);

    const MppResult point =
        mpp(PowerW(25.0), CelsiusTemp(25.0), calibrated);
    require(std::abs(point.power_W - 12.19) / 12.19 <= 0.05,
            "mpp power " + num(point.power_W) + " W not within 5% of 12.19 W");
    require(std::abs(point.voltage_V - 40.11) / 40.11 <= 0.05,
            "mpp voltage " + num(point.voltage_V) + " V not within 5% of 40.11 V");
    require(std::abs(point.current_A - 0.3039) / 0.3039 <= 0.05,
            "mpp current " + num(point.current_A) + " A not within 5% of 303.9 mA");
}

// --- criterion 5 -----------------------------------------------------------
void optimum_matches_oracle() {
    const SqrtFitCoeffs& tx = kConfig.sqrt_coeffs;
    const double sqrt_b1 = std::sqrt(tx.b1);
    const double lo = lasing_threshold(tx).value();

    for (double ebt : kEtaBtLattice) {
        for (double temp : kTempLattice) {
            const OptimumResult opt =
                optimal_source_power(Efficiency(ebt), CelsiusTemp(temp), kConfig);
            const MppLinearCoeffs coeffs = mpp_coeffs_at(kConfig, CelsiusTemp(temp));
            const std::string where =
                " at (eta_bt=" + num(ebt) + ", T=" + num(temp) + ")";

            // Brute-force oracle over a 1e-3 W grid up to 200 W.
            double best_eta = -1.0, best_ps = lo;
            const long long n = static_cast<long long>((200.0 - lo) / 1e-3);
            for (long long k = 1; k <= n; ++k) {
                const double ps = lo + static_cast<double>(k) * 1e-3;
                const double eta = raw_eta_om(ps, ebt, coeffs, tx, kConfig.eta_dc,
                                              kConfig.eta_ce);
                if (eta > best_eta) {
                    best_eta = eta;
                    best_ps = ps;
                }
            }
            require(std::abs(best_ps - opt.ps_star.value()) <= 2e-3,
                    "ps_star " + num(opt.ps_star.value()) + " vs oracle " +
                        num(best_ps) + where);
            require(std::abs(best_eta - opt.eta_opt.value()) <= 1e-6,
                    "eta_opt " + num(opt.eta_opt.value()) + " vs oracle " +
                        num(best_eta) + where);
            require(best_eta <= opt.eta_opt.value() + 1e-15,
                    "oracle beat the closed-form optimum" + where);

            // Root structure of g: exactly one root above sqrt(b1).
            const double q = tx.c1 + coeffs.b2 / (coeffs.a2 * ebt);
            const double disc = q * q - tx.a1 * tx.a1 * tx.b1;
            require(disc > 0.0, "g has no real roots" + where);
            const double root_hi = (-q + std::sqrt(disc)) / tx.a1;
            const double root_lo = (-q - std::sqrt(disc)) / tx.a1;
            require(root_hi > sqrt_b1 && root_lo < sqrt_b1,
                    "g does not have exactly one root above sqrt(b1)" + where);
            require(g_quadratic(sqrt_b1, Efficiency(ebt), CelsiusTemp(temp), kConfig) >
                        0.0,
                    "g(sqrt(b1)) not positive" + where);
        }
    }
}

// --- criterion 6 -----------------------------------------------------------
void unimodality_suite() {
    const SqrtFitCoeffs& tx = kConfig.sqrt_coeffs;
    for (double ebt : kEtaBtLattice) {
        for (double temp : kTempLattice) {
            const MppLinearCoeffs coeffs = mpp_coeffs_at(kConfig, CelsiusTemp(temp));
            const double start =
                feasible_ps_min_W(Efficiency(ebt), CelsiusTemp(temp), kConfig);
            const std::string where =
                " at (eta_bt=" + num(ebt) + ", T=" + num(temp) + ")";

            std::vector<double> values;
            for (double ps = start + 0.01; ps <= 200.0; ps += 0.01)
                values.push_back(raw_eta_om(ps, ebt, coeffs, tx, kConfig.eta_dc,
                                            kConfig.eta_ce));
            require(values.size() > 100, "scan too short" + where);

            std::size_t argmax = 0;
            for (std::size_t i = 1; i < values.size(); ++i)
                if (values[i] > values[argmax]) argmax = i;

            for (std::size_t i = 1; i < values.size(); ++i) {
                const bool rising = values[i] > values[i - 1];
                if (i <= argmax)
                    require(rising, "not strictly increasing before the peak" + where);
                else
                    require(!rising && values[i] < values[i - 1],
                            "not strictly decreasing after the peak" + where);
            }
        }
    }
}

// --- criterion 7 -----------------------------------------------------------
void channel_properties() {
    ChannelSpec spec;
    spec.wavelength_nm = 1550.0;
    spec.visibility_km = 30.0;
    spec.range_km = 0.0;
    require(eta_bt(spec).value() == 1.0, "eta_bt(R=0) != 1 exactly");

    double prev = 2.0;
    for (double r = 0.0; r <= 25.0; r += 0.5) {
        spec.range_km = r;
        const double eta = eta_bt(spec).value();
        require(eta < prev, "eta_bt not strictly decreasing at R=" + num(r));
        prev = eta;
    }

    for (double r : {1.0, 5.0, 10.0}) {
        auto eta_for = [&](const char* scenario) {
            ChannelSpec s;
            s.wavelength_nm = 1550.0;
            s.visibility_km = scenario_visibility_km(scenario);
            s.range_km = r;
            return eta_bt(s).value();
        };
        require(eta_for("high") > eta_for("average") &&
                    eta_for("average") > eta_for("low"),
                "scenario ordering broken at R=" + num(r));
    }

    for (double target : {0.9, 0.5, 0.1, 0.013}) {
        for (double visibility : {30.0, 11.0, 4.0}) {
            ChannelSpec s;
            s.wavelength_nm = 1550.0;
            s.visibility_km = visibility;
            s.range_km = max_range_km(s, target);
            require(std::abs(eta_bt(s).value() - target) <= 1e-12 * target,
                    "inverse round-trip off at target " + num(target));
        }
    }
}

// --- criterion 8 -----------------------------------------------------------
void fit_recovery() {
    std::vector<MeasuredSample> samples;
    for (int i = 0; i < 20; ++i) {
        const double ps = 5.0 + (80.0 - 5.0) * i / 19.0;
        samples.push_back({ps, kConfig.sqrt_coeffs.a1 *
                                       std::sqrt(kConfig.sqrt_coeffs.b1 + ps) +
                                   kConfig.sqrt_coeffs.c1});
    }

    const SqrtFitResult sqrt_fit = fit_sqrt(samples);
    require(std::abs(sqrt_fit.coeffs.a1 - 3.331) / 3.331 <= 1e-6,
            "a1 recovered as " + num(sqrt_fit.coeffs.a1));
    require(std::abs(sqrt_fit.coeffs.b1 - 10.2) / 10.2 <= 1e-6,
            "b1 recovered as " + num(sqrt_fit.coeffs.b1));
    require(std::abs(sqrt_fit.coeffs.c1 - (-11.99)) / 11.99 <= 1e-6,
            "c1 recovered as " + num(sqrt_fit.coeffs.c1));
    require(sqrt_fit.mse < 1e-10, "sqrt-fit MSE " + num(sqrt_fit.mse) + " not < 1e-10");

    const LinearFitResult linear_fit = fit_linear(samples);
    require(linear_fit.mse >= 100.0 * sqrt_fit.mse,
            "linear MSE " + num(linear_fit.mse) + " not >= 100x sqrt MSE " +
                num(sqrt_fit.mse));
}

// --- criterion 9 -----------------------------------------------------------
std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void cli_determinism() {
    const char* cli = std::getenv("ARBC_CLI_BIN");
    require(cli != nullptr && *cli != '\0',
            "ARBC_CLI_BIN not set; run under ctest or export the CLI path");

    const auto dir = std::filesystem::temp_directory_path() / "arbc_acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto csv = dir / "sweep.csv";
    const auto manifest = dir / "sweep.csv.manifest";

    const std::string command = std::string("\"") + cli +
                                "\" sweep --ps 5:100:0.5 --eta-bt 0.3:1.0:0.1 "
                                "--temp 0,25,50 --out \"" +
                                csv.string() + "\" > /dev/null";

    require(std::system(command.c_str()) == 0, "first sweep invocation failed");
    const std::string csv_first = read_bytes(csv);
    const std::string manifest_first = read_bytes(manifest);

    require(std::system(command.c_str()) == 0, "second sweep invocation failed");
    require(read_bytes(csv) == csv_first, "sweep CSV not byte-identical across runs");
    require(read_bytes(manifest) == manifest_first,
            "manifest not byte-identical across runs");

    // 8 eta_bt x 3 temperatures x 191 source powers, plus the header line.
    const std::size_t lines =
        static_cast<std::size_t>(std::count(csv_first.begin(), csv_first.end(), '\n'));
    require(lines == 8 * 3 * 191 + 1,
            "sweep emitted " + std::to_string(lines) + " lines, expected 4585");

    std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* description;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "electro-beam peak efficiency 31.7% +- 0.3pp, grid-confirmed",
         electro_beam_peak},
        {2, "end-to-end spot check eta_om(40 W, 0.70, 0 C) = 9.2% +- 1.0pp",
         end_to_end_spot_check},
        {3, "MPP linear model anchor 12.1486 W within 0.5% of 12.19 W",
         mpp_linear_anchor},
        {4, "diode model anchor: calibrated MPP triple within 5%",
         diode_model_anchor},
        {5, "closed-form optimum matches 1e-3 W grid oracle on the lattice",
         optimum_matches_oracle},
        {6, "eta_om unimodal (+...+-...-) at every lattice point",
         unimodality_suite},
        {7, "channel properties: boundary, monotonicity, ordering, inverse",
         channel_properties},
        {8, "sqrt-fit recovery to 1e-6 with linear MSE >= 100x worse",
         fit_recovery},
        {9, "CLI sweeps byte-identical across repeated runs", cli_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        try {
            criterion.run();
            std::cout << "PASS criterion " << criterion.number << ": "
                      << criterion.description << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL criterion " << criterion.number << ": "
                      << criterion.description << " -- " << e.what() << "\n";
        }
    }
    if (failures != 0) std::cout << failures << " criterion(s) failed\n";
    return failures;
}
