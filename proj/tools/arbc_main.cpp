// arbc: command-line front end for the resonant-beam charging link model.
//
// Subcommands: fit, channel, pv, optimize, sweep. Exit codes: 0 ok,
// 2 input/domain error, 3 numerical/calibration failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arbc/beam_channel.hpp"
#include "arbc/cli_io.hpp"
#include "arbc/electro_beam.hpp"
#include "arbc/end_to_end.hpp"
#include "arbc/model_core.hpp"
#include "arbc/pv_receiver.hpp"

namespace {

using namespace arbc;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

std::string percent(double fraction) {
    return format_double(fraction * 100.0) + " %";
}

ToolConfig resolve_config(const std::string& config_path) {
    ToolConfig config;
    if (!config_path.empty()) config = load_config_file(config_path);

    std::vector<std::string> violations = validate(config.link);
    auto pv_violations = validate(config.pv);
    violations.insert(violations.end(), pv_violations.begin(), pv_violations.end());
    if (!violations.empty()) {
        std::string message = "invalid configuration:";
        for (const auto& v : violations) message += "\n  " + v;
        throw ConfigError(message);
    }
    return config;
}

RunManifest make_manifest(const std::string& command, const ToolConfig& config,
                          std::vector<std::string> inputs,
                          std::vector<std::string> outputs) {
    RunManifest manifest;
    manifest.command = command;
    manifest.timestamp = manifest_timestamp();
    manifest.inputs = std::move(inputs);
    manifest.outputs = std::move(outputs);
    manifest.config = config;
    return manifest;
}

void write_file_with_manifest(const std::filesystem::path& path,
                              const std::string& contents,
                              const RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << contents;
    out.close();
    write_manifest_for(path, manifest);
}

struct FitOptions {
    std::string input_csv;
    std::string method = "sqrt";
    std::string curve_out;
};

int run_fit(const FitOptions& opt, const ToolConfig& config,
            const std::string& config_path) {
    const auto samples = load_samples_csv(opt.input_csv);

    SqrtFitCoeffs sqrt_coeffs;
    LinearFitCoeffs linear_coeffs;
    std::vector<double> errors;
    double mse = 0.0;

    if (opt.method == "sqrt") {
        const SqrtFitResult result = fit_sqrt(samples);
        sqrt_coeffs = result.coeffs;
        mse = result.mse;
        errors = squared_errors(samples, result.coeffs);
        std::cout << "method = sqrt\n"
                  << "a1 = " << format_double(result.coeffs.a1) << "\n"
                  << "b1 = " << format_double(result.coeffs.b1) << "\n"
                  << "c1 = " << format_double(result.coeffs.c1) << "\n";
    } else {
        const LinearFitResult result = fit_linear(samples);
        linear_coeffs = result.coeffs;
        mse = result.mse;
        errors = squared_errors(samples, result.coeffs);
        std::cout << "method = linear\n"
                  << "slope = " << format_double(result.coeffs.slope) << "\n"
                  << "intercept_W = " << format_double(result.coeffs.intercept_W) << "\n";
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
        std::cout << "squared_error ps_W=" << format_double(samples[i].ps_W)
                  << " pbt_W=" << format_double(samples[i].pbt_W) << " se="
                  << format_double(errors[i]) << "\n";
    std::cout << "mse = " << format_double(mse) << "\n";

    if (!opt.curve_out.empty()) {
        double ps_min = samples.front().ps_W, ps_max = samples.front().ps_W;
        for (const auto& s : samples) {
            ps_min = std::min(ps_min, s.ps_W);
            ps_max = std::max(ps_max, s.ps_W);
        }
        constexpr int kCurvePoints = 201;
        std::vector<MeasuredSample> curve;
        curve.reserve(kCurvePoints);
        for (int k = 0; k < kCurvePoints; ++k) {
            const double ps = ps_min + (ps_max - ps_min) * k / (kCurvePoints - 1);
            const double pbt = opt.method == "sqrt"
                                   ? beam_power(PowerW(ps), sqrt_coeffs).value()
                                   : linear_coeffs.slope * ps + linear_coeffs.intercept_W;
            curve.push_back({ps, pbt});
        }
        std::ostringstream csv;
        write_samples_csv(csv, curve);
        std::vector<std::string> inputs{opt.input_csv};
        if (!config_path.empty()) inputs.push_back(config_path);
        write_file_with_manifest(opt.curve_out, csv.str(),
                                 make_manifest("fit", config, inputs, {opt.curve_out}));
    }
    return kExitOk;
}

struct ChannelOptions {
    double wavelength_nm = 0.0;
    double visibility_km = 0.0;
    std::string scenario;
    double range_km = 0.0;
    double target_eta = 0.0;
    // Presence flags, filled from the parsed option counts: absent flags fall
    // back to the config, but a present-and-invalid value must still error.
    bool has_lambda = false;
    bool has_visibility = false;
    bool has_range = false;
    bool has_target = false;
};

int run_channel(const ChannelOptions& opt, const ToolConfig& config) {
    ChannelSpec spec = config.link.channel;
    if (opt.has_lambda) spec.wavelength_nm = opt.wavelength_nm;
    if (!opt.scenario.empty()) spec.visibility_km = scenario_visibility_km(opt.scenario);
    if (opt.has_visibility) spec.visibility_km = opt.visibility_km;

    if (opt.has_target) {
        const double range = max_range_km(spec, opt.target_eta);
        std::cout << "max_range_km = " << format_double(range) << "\n";
        return kExitOk;
    }
    if (opt.has_range) spec.range_km = opt.range_km;
    const Efficiency eta = eta_bt(spec);
    std::cout << "eta_bt = " << format_double(eta.value()) << " (" << percent(eta.value())
              << ")\n";
    return kExitOk;
}

struct PvOptions {
    double mpp_pbr_W = 0.0;
    double curve_pbr_W = 0.0;
    bool calibrate = false;
    bool has_mpp = false;
    bool has_curve = false;
    double temp_C = 25.0;
    std::string out;
    std::string params_out;
};

int run_pv(const PvOptions& opt, const ToolConfig& config,
           const std::string& config_path) {
    const CelsiusTemp temp(opt.temp_C);
    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);

    if (opt.calibrate) {
        const DiodeParams calibrated = calibrate_area_factor(
            config.pv, PowerW(kCalibrationPbrW), CelsiusTemp(kCalibrationTempC),
            kCalibrationPowerW);
        std::cout << "area_factor_cm2 = " << format_double(calibrated.area_factor_per_cm2)
                  << "\n";
        const MppResult anchor =
            mpp(PowerW(kCalibrationPbrW), CelsiusTemp(kCalibrationTempC), calibrated);
        std::cout << "mpp_power_W = " << format_double(anchor.power_W) << "\n";
        if (!opt.params_out.empty()) {
            ToolConfig updated = config;
            updated.pv = calibrated;
            write_file_with_manifest(
                opt.params_out, serialize_config(updated),
                make_manifest("pv", updated, inputs, {opt.params_out}));
        }
        return kExitOk;
    }

    if (opt.has_curve) {
        const PowerW pbr(opt.curve_pbr_W);
        const double voc = open_circuit_voltage(pbr, temp, config.pv);
        constexpr int kCurvePoints = 501;
        std::vector<IvPoint> points;
        points.reserve(kCurvePoints);
        for (int k = 0; k < kCurvePoints; ++k) {
            const double v = voc * k / (kCurvePoints - 1);
            const double i = cell_current(v, pbr, temp, config.pv);
            points.push_back({v, i, v * i});
        }
        std::ostringstream csv;
        write_iv_curve_csv(csv, points);
        if (opt.out.empty()) {
            std::cout << csv.str();
        } else {
            write_file_with_manifest(opt.out, csv.str(),
                                     make_manifest("pv", config, inputs, {opt.out}));
        }
        return kExitOk;
    }

    const PowerW pbr(opt.mpp_pbr_W);
    const MppResult point = mpp(pbr, temp, config.pv);
    // Cross-check against the linear MPP approximation; errors out below the
    // approximation's positive-power region.
    const Efficiency approx_eta =
        eta_bem(pbr, mpp_coeffs_at(config.link, temp));
    std::cout << "voltage_V = " << format_double(point.voltage_V) << "\n"
              << "current_A = " << format_double(point.current_A) << "\n"
              << "power_W = " << format_double(point.power_W) << "\n"
              << "eta_bem_linear = " << format_double(approx_eta.value()) << " ("
              << percent(approx_eta.value()) << ")\n";
    return kExitOk;
}

struct OptimizeOptions {
    double eta_bt = 1.0;
    double temp_C = 25.0;
};

int run_optimize(const OptimizeOptions& opt, const ToolConfig& config) {
    const OptimumResult result = optimal_source_power(Efficiency(opt.eta_bt),
                                                      CelsiusTemp(opt.temp_C),
                                                      config.link);
    std::cout << "ps_star_W = " << format_double(result.ps_star.value()) << "\n"
              << "eta_opt = " << format_double(result.eta_opt.value()) << " ("
              << percent(result.eta_opt.value()) << ")\n"
              << "pm_star_W = " << format_double(result.pm_star.value()) << "\n"
              << "pb_star_W = " << format_double(result.pb_star.value()) << "\n"
              << "xi = " << format_double(result.xi) << "\n";
    return kExitOk;
}

struct SweepOptions {
    std::string ps_axis = "5:200:0.5";
    std::string eta_bt_axis;
    std::string range_axis;
    std::string temp_axis = "0,25,50";
    std::string out;
};

int run_sweep(const SweepOptions& opt, const ToolConfig& config,
              const std::string& config_path) {
    SweepAxes axes;
    axes.ps_W = parse_axis(opt.ps_axis);
    axes.temp_C = parse_axis(opt.temp_axis);
    if (!opt.range_axis.empty()) {
        // Derive the eta_bt axis from channel ranges.
        for (double range_km : parse_axis(opt.range_axis)) {
            ChannelSpec spec = config.link.channel;
            spec.range_km = range_km;
            axes.eta_bt.push_back(eta_bt(spec).value());
        }
    } else {
        axes.eta_bt = parse_axis(opt.eta_bt_axis.empty() ? "1.0" : opt.eta_bt_axis);
    }

    const std::vector<SweepRow> rows = sweep(axes, config.link);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);

    std::vector<std::string> inputs;
    if (!config_path.empty()) inputs.push_back(config_path);
    write_file_with_manifest(opt.out, csv.str(),
                             make_manifest("sweep", config, inputs, {opt.out}));
    std::cout << "rows = " << rows.size() << "\n"
              << "output = " << opt.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive resonant-beam charging link model"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Path to a key-value config file")
        ->envname(kConfigEnvVar);
    // Let --config appear after the subcommand name too.
    app.fallthrough();

    FitOptions fit_opt;
    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "Fit the electro-beam conversion model to measured samples");
    fit_cmd->add_option("input", fit_opt.input_csv, "CSV with header ps_W,pbt_W")
        ->required();
    fit_cmd->add_option("--method", fit_opt.method, "Fitting model")
        ->check(CLI::IsMember({"sqrt", "linear"}));
    fit_cmd->add_option("--curve-out", fit_opt.curve_out,
                        "Write the fitted curve as CSV to this path");

    ChannelOptions chan_opt;
    CLI::App* chan_cmd =
        app.add_subcommand("channel", "Beam transmission efficiency / max range");
    auto* lambda_opt =
        chan_cmd->add_option("--lambda", chan_opt.wavelength_nm, "Beam wavelength, nm");
    auto* vis_opt = chan_cmd->add_option("--visibility", chan_opt.visibility_km,
                                         "Atmospheric visibility, km");
    chan_cmd->add_option("--scenario", chan_opt.scenario,
                         "Visibility scenario: high, average, or low")
        ->check(CLI::IsMember({"high", "average", "low"}))
        ->excludes(vis_opt);
    auto* range_opt = chan_cmd->add_option("--range", chan_opt.range_km,
                                           "Transmission range, km");
    auto* target_opt =
        chan_cmd->add_option("--target-eta", chan_opt.target_eta,
                             "Solve for the range that attenuates to this efficiency")
            ->excludes(range_opt);

    PvOptions pv_opt;
    CLI::App* pv_cmd = app.add_subcommand("pv", "PV receiver diode model");
    auto* mpp_opt = pv_cmd->add_option("--mpp", pv_opt.mpp_pbr_W,
                                       "Maximum power point at this received power, W");
    auto* curve_opt = pv_cmd->add_option("--curve", pv_opt.curve_pbr_W,
                                         "Emit the I-V/P-V curve at this received power, W");
    auto* cal_opt = pv_cmd->add_flag("--calibrate", pv_opt.calibrate,
                                     "Calibrate the irradiance area factor");
    mpp_opt->excludes(curve_opt)->excludes(cal_opt);
    curve_opt->excludes(cal_opt);
    pv_cmd->add_option("--temp", pv_opt.temp_C, "Panel temperature, deg C");
    pv_cmd->add_option("--out", pv_opt.out, "Write curve CSV to this path");
    pv_cmd->add_option("--params-out", pv_opt.params_out,
                       "Write the calibrated config to this path");

    OptimizeOptions optm_opt;
    CLI::App* optm_cmd =
        app.add_subcommand("optimize", "Unique optimum of the end-to-end efficiency");
    optm_cmd->add_option("--eta-bt", optm_opt.eta_bt, "Beam transmission efficiency")
        ->required();
    optm_cmd->add_option("--temp", optm_opt.temp_C, "Panel temperature, deg C")
        ->required();

    SweepOptions sweep_opt;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Grid sweep over source power / eta_bt / temperature");
    sweep_cmd->add_option("--ps", sweep_opt.ps_axis, "Source power axis (W)");
    auto* ebt_axis_opt =
        sweep_cmd->add_option("--eta-bt", sweep_opt.eta_bt_axis,
                              "Beam transmission efficiency axis");
    sweep_cmd->add_option("--range", sweep_opt.range_axis,
                          "Channel range axis (km), converted to eta_bt")
        ->excludes(ebt_axis_opt);
    sweep_cmd->add_option("--temp", sweep_opt.temp_axis, "Temperature axis (deg C)");
    sweep_cmd->add_option("--out", sweep_opt.out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }
    chan_opt.has_lambda = lambda_opt->count() > 0;
    chan_opt.has_visibility = vis_opt->count() > 0;
    chan_opt.has_range = range_opt->count() > 0;
    chan_opt.has_target = target_opt->count() > 0;
    pv_opt.has_mpp = mpp_opt->count() > 0;
    pv_opt.has_curve = curve_opt->count() > 0;

    try {
        const ToolConfig config = resolve_config(config_path);
        if (app.got_subcommand(fit_cmd)) return run_fit(fit_opt, config, config_path);
        if (app.got_subcommand(chan_cmd)) return run_channel(chan_opt, config);
        if (app.got_subcommand(pv_cmd)) {
            if (!pv_opt.calibrate && !pv_opt.has_mpp && !pv_opt.has_curve)
                throw std::invalid_argument(
                    "pv: one of --mpp, --curve, --calibrate is required");
            return run_pv(pv_opt, config, config_path);
        }
        if (app.got_subcommand(optm_cmd)) return run_optimize(optm_opt, config);
        if (app.got_subcommand(sweep_cmd)) return run_sweep(sweep_opt, config, config_path);
        return kExitInputError;
    } catch (const FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const CalibrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
