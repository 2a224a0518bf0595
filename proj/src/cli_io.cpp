#include "arbc/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace arbc {

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

int parse_int(std::string_view text) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return value;
}

// Assigns one config key. Returns false for unknown keys.
bool apply_key(ToolConfig& config, std::map<double, MppLinearCoeffs>& mpp_table,
               bool& saw_mpp_key, std::string_view key, std::string_view value) {
    auto num = [&] { return parse_double(value); };

    if (key == "transmitter.a1") config.link.sqrt_coeffs.a1 = num();
    else if (key == "transmitter.b1") config.link.sqrt_coeffs.b1 = num();
    else if (key == "transmitter.c1") config.link.sqrt_coeffs.c1 = num();
    else if (key == "channel.wavelength_nm") config.link.channel.wavelength_nm = num();
    else if (key == "channel.visibility_km") config.link.channel.visibility_km = num();
    else if (key == "channel.range_km") config.link.channel.range_km = num();
    else if (key == "link.eta_dc") config.link.eta_dc = num();
    else if (key == "link.eta_ce") config.link.eta_ce = num();
    else if (key == "pv.isc_ref_A") config.pv.isc_ref_A = num();
    else if (key == "pv.voc_ref_V") config.pv.voc_ref_V = num();
    else if (key == "pv.ir0_W_cm2") config.pv.ir0_W_per_cm2 = num();
    else if (key == "pv.ideality") config.pv.ideality = num();
    else if (key == "pv.n_series") config.pv.n_series = parse_int(std::string(value));
    else if (key == "pv.t_ref_C") config.pv.t_ref_C = num();
    else if (key == "pv.bandgap_eV") config.pv.bandgap_eV = num();
    else if (key == "pv.area_factor_cm2") config.pv.area_factor_per_cm2 = num();
    else if (key == "pv.beam_frequency_Hz") config.pv.beam_frequency_Hz = num();
    else if (key.starts_with("mpp.")) {
        // mpp.<temp_C>.a2 / mpp.<temp_C>.b2 — the temperature may itself
        // contain a decimal point, so split at the last dot.
        const auto last_dot = key.rfind('.');
        const std::string_view field = key.substr(last_dot + 1);
        const std::string_view temp_text = key.substr(4, last_dot - 4);
        if (temp_text.empty() || (field != "a2" && field != "b2"))
            return false;
        const double temp_c = parse_double(temp_text);
        saw_mpp_key = true;
        if (field == "a2") mpp_table[temp_c].a2 = num();
        else mpp_table[temp_c].b2 = num();
    } else {
        return false;
    }
    return true;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

ToolConfig parse_config(std::istream& in) {
    ToolConfig config;
    std::map<double, MppLinearCoeffs> mpp_table;
    std::map<double, std::set<std::string>> mpp_fields_seen;
    bool saw_mpp_key = false;
    std::set<std::string> seen_keys;

    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = trim(strip_cr(raw_line));
        if (line.empty() || line.front() == '#') continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value', got '" + std::string(line) + "'",
                              line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("empty key or value", line_no);
        if (!seen_keys.insert(key).second)
            throw ConfigError("duplicate key '" + key + "'", line_no);

        try {
            if (!apply_key(config, mpp_table, saw_mpp_key, key, value))
                throw ConfigError("unknown key '" + key + "'", line_no);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), line_no);
        }
        if (key.starts_with("mpp.")) {
            const auto last_dot = key.rfind('.');
            mpp_fields_seen[parse_double(std::string_view(key).substr(4, last_dot - 4))]
                .insert(key.substr(last_dot + 1));
        }
    }

    if (saw_mpp_key) {
        for (const auto& [temp_c, fields] : mpp_fields_seen) {
            if (fields.size() != 2)
                throw ConfigError("mpp entry at " + format_double(temp_c) +
                                  " C needs both a2 and b2");
        }
        config.link.mpp_coeffs_by_temp = std::move(mpp_table);
    }
    return config;
}

ToolConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ToolConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in);
}

std::string serialize_config(const ToolConfig& config) {
    std::ostringstream out;
    auto emit = [&](std::string_view key, double value) {
        out << key << " = " << format_double(value) << "\n";
    };
    emit("transmitter.a1", config.link.sqrt_coeffs.a1);
    emit("transmitter.b1", config.link.sqrt_coeffs.b1);
    emit("transmitter.c1", config.link.sqrt_coeffs.c1);
    emit("channel.wavelength_nm", config.link.channel.wavelength_nm);
    emit("channel.visibility_km", config.link.channel.visibility_km);
    emit("channel.range_km", config.link.channel.range_km);
    emit("link.eta_dc", config.link.eta_dc);
    emit("link.eta_ce", config.link.eta_ce);
    for (const auto& [temp_c, coeffs] : config.link.mpp_coeffs_by_temp) {
        const std::string prefix = "mpp." + format_double(temp_c) + ".";
        emit(prefix + "a2", coeffs.a2);
        emit(prefix + "b2", coeffs.b2);
    }
    emit("pv.isc_ref_A", config.pv.isc_ref_A);
    emit("pv.voc_ref_V", config.pv.voc_ref_V);
    emit("pv.ir0_W_cm2", config.pv.ir0_W_per_cm2);
    emit("pv.ideality", config.pv.ideality);
    out << "pv.n_series = " << config.pv.n_series << "\n";
    emit("pv.t_ref_C", config.pv.t_ref_C);
    emit("pv.bandgap_eV", config.pv.bandgap_eV);
    emit("pv.area_factor_cm2", config.pv.area_factor_per_cm2);
    emit("pv.beam_frequency_Hz", config.pv.beam_frequency_Hz);
    return out.str();
}

std::vector<MeasuredSample> read_samples_csv(std::istream& in) {
    std::string raw_line;
    int line_no = 0;

    if (!std::getline(in, raw_line))
        throw CsvError("empty file; expected header 'ps_W,pbt_W'", 1);
    ++line_no;
    if (strip_cr(raw_line) != "ps_W,pbt_W")
        throw CsvError("expected header 'ps_W,pbt_W', got '" + raw_line + "'", line_no);

    std::vector<MeasuredSample> samples;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = strip_cr(raw_line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw CsvError("expected two comma-separated values", line_no);
        MeasuredSample sample;
        try {
            sample.ps_W = parse_double(line.substr(0, comma));
            sample.pbt_W = parse_double(line.substr(comma + 1));
        } catch (const std::invalid_argument& e) {
            throw CsvError(e.what(), line_no);
        }
        if (!std::isfinite(sample.ps_W) || sample.ps_W < 0.0 ||
            !std::isfinite(sample.pbt_W) || sample.pbt_W < 0.0)
            throw CsvError("sample values must be finite and non-negative", line_no);
        samples.push_back(sample);
    }
    return samples;
}

std::vector<MeasuredSample> load_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path.string() + "'", 0);
    return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, std::span<const MeasuredSample> samples) {
    out << "ps_W,pbt_W\n";
    for (const auto& s : samples)
        out << format_double(s.ps_W) << ',' << format_double(s.pbt_W) << '\n';
}

void write_iv_curve_csv(std::ostream& out, std::span<const IvPoint> points) {
    out << "voltage_V,current_A,power_W\n";
    for (const auto& p : points)
        out << format_double(p.voltage_V) << ',' << format_double(p.current_A) << ','
            << format_double(p.power_W) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "ps_W,eta_bt,temp_C,pm_W,pb_W,eta_om,ps_star_W,eta_opt\n";
    for (const auto& r : rows)
        out << format_double(r.ps_W) << ',' << format_double(r.eta_bt) << ','
            << format_double(r.temp_C) << ',' << format_double(r.pm_W) << ','
            << format_double(r.pb_W) << ',' << format_double(r.eta_om) << ','
            << format_double(r.ps_star_W) << ',' << format_double(r.eta_opt) << '\n';
}

std::vector<double> parse_axis(std::string_view text) {
    if (trim(text).empty()) throw std::invalid_argument("empty axis");
    text = trim(text);

    if (text.find(':') != std::string_view::npos) {
        // start:stop:step, endpoints inclusive up to rounding.
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos)
            throw std::invalid_argument("range axis must be start:stop:step");
        const double start = parse_double(trim(text.substr(0, first)));
        const double stop = parse_double(trim(text.substr(first + 1, second - first - 1)));
        const double step = parse_double(trim(text.substr(second + 1)));
        if (!(step > 0.0)) throw std::invalid_argument("axis step must be > 0");
        if (stop < start) throw std::invalid_argument("axis stop must be >= start");

        const double raw_count = (stop - start) / step;
        long long last = std::llround(raw_count);
        if (std::abs(raw_count - static_cast<double>(last)) > 1e-6)
            last = static_cast<long long>(std::floor(raw_count));
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(last) + 1);
        for (long long k = 0; k <= last; ++k)
            values.push_back(start + static_cast<double>(k) * step);
        return values;
    }

    std::vector<double> values;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const auto comma = text.find(',', begin);
        const auto piece = comma == std::string_view::npos
                               ? text.substr(begin)
                               : text.substr(begin, comma - begin);
        values.push_back(parse_double(trim(piece)));
        if (comma == std::string_view::npos) break;
        begin = comma + 1;
    }
    return values;
}

std::string manifest_timestamp() {
    const char* epoch_text = std::getenv("SOURCE_DATE_EPOCH");
    if (epoch_text == nullptr) return "unset";

    long long epoch = 0;
    try {
        epoch = std::stoll(epoch_text);
    } catch (const std::exception&) {
        return "unset";
    }
    const std::time_t t = static_cast<std::time_t>(epoch);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour,
                  utc.tm_min, utc.tm_sec);
    return buffer;
}

std::string serialize_manifest(const RunManifest& manifest) {
    std::ostringstream out;
    out << "# arbc run manifest\n";
    out << "command = " << manifest.command << "\n";
    out << "tool_version = " << manifest.tool_version << "\n";
    out << "timestamp = " << manifest.timestamp << "\n";
    for (const auto& input : manifest.inputs) out << "input = " << input << "\n";
    for (const auto& output : manifest.outputs) out << "output = " << output << "\n";
    out << "[config]\n";
    out << serialize_config(manifest.config);
    return out.str();
}

RunManifest parse_manifest(std::istream& in) {
    RunManifest manifest;
    std::string raw_line;
    int line_no = 0;
    bool in_config = false;
    std::string config_text;

    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = trim(strip_cr(raw_line));
        if (in_config) {
            config_text += std::string(strip_cr(raw_line)) + "\n";
            continue;
        }
        if (line.empty() || line.front() == '#') continue;
        if (line == "[config]") {
            in_config = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("manifest: expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key == "command") manifest.command = value;
        else if (key == "tool_version") manifest.tool_version = value;
        else if (key == "timestamp") manifest.timestamp = value;
        else if (key == "input") manifest.inputs.push_back(value);
        else if (key == "output") manifest.outputs.push_back(value);
        else throw ConfigError("manifest: unknown key '" + key + "'", line_no);
    }
    if (!in_config) throw ConfigError("manifest: missing [config] section");
    manifest.config = parse_config_text(config_text);
    return manifest;
}

std::filesystem::path write_manifest_for(const std::filesystem::path& output_file,
                                         const RunManifest& manifest) {
    std::filesystem::path manifest_path = output_file;
    manifest_path += ".manifest";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write manifest '" + manifest_path.string() + "'");
    out << serialize_manifest(manifest);
    return manifest_path;
}

}  // namespace arbc
