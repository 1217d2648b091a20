#include "havmon/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "json_canon.hpp"

namespace havmon {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

double sidecar_number(const Sidecar& kv, const std::string& key) {
    double v = 0.0;
    if (!parse_double(kv.at(key), v)) {
        throw Error(Errc::ParseError, "sidecar key '" + key + "' is not a number: '" +
                                          kv.at(key) + "'");
    }
    return v;
}

const std::string& require_key(const Sidecar& kv, const std::string& key,
                               const std::filesystem::path& meta_path) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        throw Error(Errc::MetadataMissing,
                    "sidecar " + meta_path.string() + " lacks required key '" + key + "'");
    }
    return it->second;
}

// Splits one CSV record; handles trailing CR from CRLF input.
std::vector<std::string> split_csv(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

GravityInit parse_init_policy(const std::string& s) {
    if (s == "first_sample") return GravityInit::FirstSample;
    if (s == "zero") return GravityInit::Zero;
    if (s == "given") return GravityInit::Given;
    throw Error(Errc::ParseError, "unknown gravity init policy '" + s + "'");
}

const char* init_policy_name(GravityInit p) {
    switch (p) {
        case GravityInit::FirstSample: return "first_sample";
        case GravityInit::Zero: return "zero";
        case GravityInit::Given: return "given";
    }
    return "?";
}

Axis parse_axis_letter(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    throw Error(Errc::ParseError, "axis must be x, y or z, got '" + s + "'");
}

// Rejects keys outside `allowed`; nlohmann type errors are rethrown as
// ParseError so callers see one error family.
void check_keys(const nlohmann::json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw Error(Errc::ParseError, "config section '" + scope + "' must be an object");
    }
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) {
            const std::string where = scope.empty() ? item.key() : scope + "." + item.key();
            throw Error(Errc::ParseError, "unknown config key '" + where + "'");
        }
    }
}

}  // namespace

Sidecar parse_sidecar(const std::string& text) {
    Sidecar kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::ParseError,
                        "sidecar line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) {
            throw Error(Errc::ParseError,
                        "sidecar line " + std::to_string(lineno) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw Error(Errc::ParseError, "sidecar line " + std::to_string(lineno) +
                                              ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

std::string render_sidecar(const Sidecar& kv) {
    std::string out;
    for (const auto& [key, value] : kv) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".meta");
    return p;
}

TriaxialSeries load_recording(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path) {
    const Sidecar kv = parse_sidecar(read_text_file(meta_path));

    SensorMeta meta;
    meta.sensor_id = require_key(kv, "sensor_id", meta_path);
    meta.location = parse_location(require_key(kv, "location", meta_path));
    require_key(kv, "rate_hz", meta_path);
    meta.rate_hz = sidecar_number(kv, "rate_hz");
    require_key(kv, "range_g", meta_path);
    meta.range_g = sidecar_number(kv, "range_g");
    if (kv.count("bandwidth_hz")) meta.bandwidth_hz = sidecar_number(kv, "bandwidth_hz");

    std::string units = require_key(kv, "units", meta_path);
    std::transform(units.begin(), units.end(), units.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    double scale = 1.0;
    if (units == "g") {
        scale = kGravity;
    } else if (units != "m/s2" && units != "m/s^2") {
        throw Error(Errc::ParseError, "sidecar units must be 'g' or 'm/s2', got '" +
                                          kv.at("units") + "'");
    }

    const std::string text = read_text_file(csv_path);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> time, ax, ay, az;
    std::optional<std::size_t> ncols;
    bool first_data_line = true;

    while (std::getline(in, line)) {
        ++lineno;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() == 1 && fields[0].empty()) continue;

        double probe = 0.0;
        if (first_data_line && !parse_double(fields[0], probe)) {
            continue;  // optional header row
        }
        first_data_line = false;

        if (!ncols) {
            if (fields.size() != 3 && fields.size() != 4) {
                throw Error(Errc::ParseError,
                            csv_path.string() + " line " + std::to_string(lineno) +
                                ": expected 3 or 4 columns, got " +
                                std::to_string(fields.size()));
            }
            ncols = fields.size();
        } else if (fields.size() != *ncols) {
            throw Error(Errc::ParseError, csv_path.string() + " line " +
                                              std::to_string(lineno) +
                                              ": inconsistent column count");
        }

        double vals[4];
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!parse_double(fields[i], vals[i])) {
                throw Error(Errc::ParseError, csv_path.string() + " line " +
                                                  std::to_string(lineno) +
                                                  ": not a number: '" + fields[i] + "'");
            }
        }
        std::size_t off = 0;
        if (*ncols == 4) {
            time.push_back(vals[0]);
            off = 1;
        }
        ax.push_back(scale * vals[off + 0]);
        ay.push_back(scale * vals[off + 1]);
        az.push_back(scale * vals[off + 2]);
    }

    if (ax.empty()) {
        throw Error(Errc::EmptyInput, csv_path.string() + " has no data rows");
    }

    double t0 = 0.0;
    if (!time.empty()) {
        t0 = time.front();
        if (time.size() >= 2) {
            const double mean_dt =
                (time.back() - time.front()) / static_cast<double>(time.size() - 1);
            if (mean_dt <= 0.0) {
                throw Error(Errc::NonUniformTime,
                            csv_path.string() + ": time column is not increasing");
            }
            for (std::size_t i = 1; i < time.size(); ++i) {
                const double dt = time[i] - time[i - 1];
                if (std::abs(dt - mean_dt) > 1e-6 * mean_dt) {
                    throw Error(Errc::NonUniformTime,
                                csv_path.string() + " row " + std::to_string(i + 1) +
                                    ": spacing deviates from uniform by more than 1 ppm");
                }
            }
        }
    }

    std::vector<Vec3> raw(ax.size());
    for (std::size_t i = 0; i < ax.size(); ++i) raw[i] = {ax[i], ay[i], az[i]};
    return validate_series(raw, meta, t0);
}

TriaxialSeries load_recording(const std::filesystem::path& csv_path) {
    return load_recording(csv_path, sidecar_path_for(csv_path));
}

void save_recording(const TriaxialSeries& series, const std::filesystem::path& csv_path,
                    const Sidecar& extra) {
    std::string csv = "ax,ay,az\n";
    const auto x = series.axis(Axis::X);
    const auto y = series.axis(Axis::Y);
    const auto z = series.axis(Axis::Z);
    for (std::size_t i = 0; i < series.size(); ++i) {
        csv += format_full(x[i]);
        csv += ',';
        csv += format_full(y[i]);
        csv += ',';
        csv += format_full(z[i]);
        csv += '\n';
    }
    write_file_atomic(csv_path, csv);

    Sidecar kv = extra;
    const SensorMeta& meta = series.meta();
    kv["sensor_id"] = meta.sensor_id;
    kv["location"] = location_name(meta.location);
    kv["rate_hz"] = format_full(meta.rate_hz);
    kv["range_g"] = format_full(meta.range_g);
    if (meta.bandwidth_hz) kv["bandwidth_hz"] = format_full(*meta.bandwidth_hz);
    kv["units"] = "m/s2";
    write_file_atomic(sidecar_path_for(csv_path), render_sidecar(kv));
}

void AnalysisConfig::validate() const {
    gravity.validate();
    weighting.validate();
    if (window_s <= 0.0) throw Error(Errc::InvalidSpec, "window_s must be > 0");
    if (thresholds.action <= 0.0 || thresholds.limit < thresholds.action) {
        throw Error(Errc::InvalidThresholds, "need 0 < action <= limit");
    }
    if (exposure_duration_s < 0.0) {
        throw Error(Errc::InvalidSpec, "exposure_duration_s must be >= 0");
    }
    if (orders.nb == 0 || orders.na == 0 || orders.nc == 0 || orders.nd == 0) {
        throw Error(Errc::InvalidSpec, "model orders must be >= 1");
    }
    if (significance <= 0.0 || significance >= 1.0) {
        throw Error(Errc::InvalidSpec, "significance must lie in (0, 1)");
    }
}

AnalysisConfig detail::config_from_json(const nlohmann::json& j, const std::string& origin) {
    AnalysisConfig cfg;
    try {
        check_keys(j, "",
                   {"beta", "gravity_init", "initial_gravity", "gravity_removal",
                    "weighting", "window_s", "thresholds", "exposure_duration_s",
                    "orders", "input_delay", "max_iterations", "rel_tolerance",
                    "pairing", "significance"});

        if (j.contains("beta")) cfg.gravity.beta = j["beta"].get<double>();
        if (j.contains("gravity_init")) {
            cfg.gravity.init_policy = parse_init_policy(j["gravity_init"].get<std::string>());
        }
        if (j.contains("initial_gravity")) {
            const auto& arr = j["initial_gravity"];
            if (!arr.is_array() || arr.size() != 3) {
                throw Error(Errc::ParseError, "initial_gravity must be [gx, gy, gz]");
            }
            cfg.gravity.initial = {arr[0].get<double>(), arr[1].get<double>(),
                                   arr[2].get<double>()};
        }
        if (j.contains("gravity_removal")) {
            cfg.gravity_removal = j["gravity_removal"].get<bool>();
        }
        if (j.contains("weighting")) {
            const auto& w = j["weighting"];
            check_keys(w, "weighting", {"f1_hz", "f2_hz", "f3_hz", "f4_hz", "q4", "enabled"});
            if (w.contains("f1_hz")) cfg.weighting.f1_hz = w["f1_hz"].get<double>();
            if (w.contains("f2_hz")) cfg.weighting.f2_hz = w["f2_hz"].get<double>();
            if (w.contains("f3_hz")) cfg.weighting.f3_hz = w["f3_hz"].get<double>();
            if (w.contains("f4_hz")) cfg.weighting.f4_hz = w["f4_hz"].get<double>();
            if (w.contains("q4")) cfg.weighting.q4 = w["q4"].get<double>();
            if (w.contains("enabled")) cfg.weighting.enabled = w["enabled"].get<bool>();
        }
        if (j.contains("window_s")) cfg.window_s = j["window_s"].get<double>();
        if (j.contains("thresholds")) {
            const auto& t = j["thresholds"];
            check_keys(t, "thresholds", {"action", "limit"});
            if (t.contains("action")) cfg.thresholds.action = t["action"].get<double>();
            if (t.contains("limit")) cfg.thresholds.limit = t["limit"].get<double>();
        }
        if (j.contains("exposure_duration_s")) {
            cfg.exposure_duration_s = j["exposure_duration_s"].get<double>();
        }
        if (j.contains("orders")) {
            const auto& o = j["orders"];
            if (o.is_number_unsigned() || o.is_number_integer()) {
                const auto n = o.get<std::size_t>();
                cfg.orders = {n, n, n, n};
            } else {
                check_keys(o, "orders", {"nb", "na", "nc", "nd"});
                if (o.contains("nb")) cfg.orders.nb = o["nb"].get<std::size_t>();
                if (o.contains("na")) cfg.orders.na = o["na"].get<std::size_t>();
                if (o.contains("nc")) cfg.orders.nc = o["nc"].get<std::size_t>();
                if (o.contains("nd")) cfg.orders.nd = o["nd"].get<std::size_t>();
            }
        }
        if (j.contains("input_delay")) cfg.input_delay = j["input_delay"].get<std::size_t>();
        if (j.contains("max_iterations")) {
            cfg.fit_options.max_iterations = j["max_iterations"].get<std::size_t>();
        }
        if (j.contains("rel_tolerance")) {
            cfg.fit_options.rel_tolerance = j["rel_tolerance"].get<double>();
        }
        if (j.contains("pairing")) {
            const auto& p = j["pairing"];
            check_keys(p, "pairing", {"x", "y", "z"});
            const char* names[3] = {"x", "y", "z"};
            for (int i = 0; i < 3; ++i) {
                if (p.contains(names[i])) {
                    cfg.pairing[i] = parse_axis_letter(p[names[i]].get<std::string>());
                }
            }
        }
        if (j.contains("significance")) cfg.significance = j["significance"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, origin + ": " + e.what());
    }

    cfg.validate();
    return cfg;
}

nlohmann::json detail::config_to_json(const AnalysisConfig& cfg) {
    nlohmann::json j;
    j["beta"] = cfg.gravity.beta;
    j["gravity_init"] = init_policy_name(cfg.gravity.init_policy);
    j["initial_gravity"] = {cfg.gravity.initial.x, cfg.gravity.initial.y,
                            cfg.gravity.initial.z};
    j["gravity_removal"] = cfg.gravity_removal;
    j["weighting"] = {{"f1_hz", cfg.weighting.f1_hz}, {"f2_hz", cfg.weighting.f2_hz},
                      {"f3_hz", cfg.weighting.f3_hz}, {"f4_hz", cfg.weighting.f4_hz},
                      {"q4", cfg.weighting.q4},       {"enabled", cfg.weighting.enabled}};
    j["window_s"] = cfg.window_s;
    j["thresholds"] = {{"action", cfg.thresholds.action}, {"limit", cfg.thresholds.limit}};
    j["exposure_duration_s"] = cfg.exposure_duration_s;
    j["orders"] = {{"nb", cfg.orders.nb},
                   {"na", cfg.orders.na},
                   {"nc", cfg.orders.nc},
                   {"nd", cfg.orders.nd}};
    j["input_delay"] = cfg.input_delay;
    j["max_iterations"] = cfg.fit_options.max_iterations;
    j["rel_tolerance"] = cfg.fit_options.rel_tolerance;
    j["pairing"] = {{"x", axis_name(cfg.pairing[0])},
                    {"y", axis_name(cfg.pairing[1])},
                    {"z", axis_name(cfg.pairing[2])}};
    j["significance"] = cfg.significance;
    return j;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
    return detail::config_from_json(j, path.string());
}

AnalysisConfig resolve_config(const std::optional<std::filesystem::path>& cli_path) {
    if (cli_path) return load_config(*cli_path);
    if (const char* env = std::getenv("HAVMON_CONFIG"); env && *env) {
        return load_config(env);
    }
    return AnalysisConfig{};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "read failed for " + path.string());
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoError, "cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out.good()) throw Error(Errc::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(Errc::IoError,
                    "rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
    }
}

}  // namespace havmon
