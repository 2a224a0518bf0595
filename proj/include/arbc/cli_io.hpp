#pragma once

// Text configuration, CSV ingestion/emission, and run manifests for the CLI.
// All emitted numbers use the shortest round-trip representation so repeated
// runs are byte-identical and files re-parse losslessly.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arbc/electro_beam.hpp"
#include "arbc/end_to_end.hpp"
#include "arbc/model_core.hpp"
#include "arbc/pv_receiver.hpp"

namespace arbc {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Environment variable overriding the default config path; a --config flag
/// still wins over it.
inline constexpr const char* kConfigEnvVar = "ARBC_CONFIG";

/// Config file problem, with the 1-based line number when known (0 otherwise).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                      : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// CSV schema or value problem, with the offending 1-based line number.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Everything the tool needs to run: the link model plus the PV panel.
struct ToolConfig {
    LinkConfig link{};
    DiodeParams pv{};

    bool operator==(const ToolConfig&) const = default;
};

/// Shortest representation that parses back to exactly the same double.
std::string format_double(double value);

/// Strict full-token parse; throws std::invalid_argument on anything else.
double parse_double(std::string_view text);

/// Parse the flat `section.key = value` config format. Unknown keys,
/// duplicates, and malformed numbers raise ConfigError with the line number.
/// Missing keys keep their defaults; if any mpp.* key is present the whole
/// temperature table is replaced by the keys given.
ToolConfig parse_config(std::istream& in);
ToolConfig parse_config_text(const std::string& text);
ToolConfig load_config_file(const std::filesystem::path& path);

/// Canonical serialization; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ToolConfig& config);

/// Measured-sample CSV: header `ps_W,pbt_W`, one pair per line.
std::vector<MeasuredSample> read_samples_csv(std::istream& in);
std::vector<MeasuredSample> load_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, std::span<const MeasuredSample> samples);

/// One point of an I-V / P-V curve table.
struct IvPoint {
    double voltage_V;
    double current_A;
    double power_W;
};
void write_iv_curve_csv(std::ostream& out, std::span<const IvPoint> points);

/// Sweep CSV: header ps_W,eta_bt,temp_C,pm_W,pb_W,eta_om,ps_star_W,eta_opt.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Axis syntax for sweep flags: a single value, a comma list (`0,25,50`), or
/// an inclusive range `start:stop:step`. Throws std::invalid_argument.
std::vector<double> parse_axis(std::string_view text);

/// Sidecar metadata emitted next to every output file.
struct RunManifest {
    std::string command;
    std::string tool_version = std::string(kToolVersion);
    std::string timestamp;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    ToolConfig config{};
};

/// Deterministic by default: ISO-8601 UTC from SOURCE_DATE_EPOCH when that
/// variable is set, the literal "unset" otherwise.
std::string manifest_timestamp();

std::string serialize_manifest(const RunManifest& manifest);
RunManifest parse_manifest(std::istream& in);

/// Writes serialize_manifest() to `<output_file>.manifest`.
std::filesystem::path write_manifest_for(const std::filesystem::path& output_file,
                                         const RunManifest& manifest);

}  // namespace arbc
