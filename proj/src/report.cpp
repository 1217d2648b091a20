#include "havmon/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json_canon.hpp"

namespace havmon {

namespace {

using nlohmann::json;

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void dump_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void dump_number(std::string& out, double v) {
    if (std::isnan(v)) {
        out += "\"NaN\"";
    } else if (std::isinf(v)) {
        out += v > 0 ? "\"Infinity\"" : "\"-Infinity\"";
    } else {
        out += fmt("%.15g", v);
    }
}

void dump_value(const json& j, std::string& out, int indent) {
    const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(indent + 1), ' ');
    switch (j.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case json::value_t::string: dump_string(out, j.get_ref<const std::string&>()); break;
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_value(j[i], out, indent + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += ']';
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& item : j.items()) {  // std::map order: sorted keys
                out += pad_in;
                dump_string(out, item.key());
                out += ": ";
                dump_value(item.value(), out, indent + 1);
                if (++i < j.size()) out += ',';
                out += '\n';
            }
            out += pad;
            out += '}';
            break;
        }
        default: dump_number(out, j.get<double>()); break;
    }
}

std::vector<double> number_array(const json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(detail::json_number(v));
    return out;
}

std::vector<std::string> string_array(const json& j) {
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(v.get<std::string>());
    return out;
}

json axis_rms_to_json(const AxisRms& r) {
    return {{"x", r.ahw_x}, {"y", r.ahw_y}, {"z", r.ahw_z}, {"n", r.n}};
}

AxisRms axis_rms_from_json(const json& j) {
    AxisRms r;
    r.ahw_x = detail::json_number(j.at("x"));
    r.ahw_y = detail::json_number(j.at("y"));
    r.ahw_z = detail::json_number(j.at("z"));
    r.n = j.at("n").get<std::size_t>();
    return r;
}

json model_to_json(const BoxJenkinsModel& m) {
    json j;
    j["b"] = m.b.coeffs;
    j["a"] = m.a.coeffs;
    j["c"] = m.c.coeffs;
    j["d"] = m.d.coeffs;
    j["input_delay"] = m.input_delay;
    j["rate_hz"] = m.rate_hz;
    return j;
}

BoxJenkinsModel model_from_json(const json& j) {
    BoxJenkinsModel m;
    m.b.coeffs = number_array(j.at("b"));
    m.b.monic = false;
    m.a.coeffs = number_array(j.at("a"));
    m.a.monic = true;
    m.c.coeffs = number_array(j.at("c"));
    m.c.monic = true;
    m.d.coeffs = number_array(j.at("d"));
    m.d.monic = true;
    m.input_delay = j.at("input_delay").get<std::size_t>();
    m.rate_hz = detail::json_number(j.at("rate_hz"));
    m.validate();
    return m;
}

json fit_to_json(const FitReport& f) {
    json j;
    j["nrmse_fit_percent"] = f.nrmse_fit_percent;
    j["rmse_simulated"] = f.rmse_simulated;
    j["rmse_predicted"] = f.rmse_predicted;
    j["rms_discrepancy_percent"] = f.rms_discrepancy_percent;
    j["orders"] = {{"nb", f.orders.nb},
                   {"na", f.orders.na},
                   {"nc", f.orders.nc},
                   {"nd", f.orders.nd}};
    j["iterations"] = f.iterations;
    j["converged"] = f.converged;
    return j;
}

FitReport fit_from_json(const json& j) {
    FitReport f;
    f.nrmse_fit_percent = detail::json_number(j.at("nrmse_fit_percent"));
    f.rmse_simulated = detail::json_number(j.at("rmse_simulated"));
    f.rmse_predicted = detail::json_number(j.at("rmse_predicted"));
    f.rms_discrepancy_percent = detail::json_number(j.at("rms_discrepancy_percent"));
    const json& o = j.at("orders");
    f.orders = {o.at("nb").get<std::size_t>(), o.at("na").get<std::size_t>(),
                o.at("nc").get<std::size_t>(), o.at("nd").get<std::size_t>()};
    f.iterations = j.at("iterations").get<std::size_t>();
    f.converged = j.at("converged").get<bool>();
    return f;
}

json report_to_json(const RunReport& r) {
    json j;
    j["artifact"] = r.artifact;
    j["version"] = r.version;
    j["command"] = r.command;
    j["config"] = detail::config_to_json(r.config);

    json recs = json::array();
    for (const RecordingExposure& rec : r.recordings) {
        json jr;
        jr["sensor_id"] = rec.sensor_id;
        jr["location"] = rec.location;
        jr["rate_hz"] = rec.rate_hz;
        jr["n_samples"] = rec.n_samples;
        json segs = json::array();
        for (const SegmentExposure& s : rec.segments) {
            json js;
            js["index"] = s.index;
            js["start_s"] = s.start_s;
            js["duration_s"] = s.duration_s;
            js["raw"] = axis_rms_to_json(s.raw);
            js["weighted"] = axis_rms_to_json(s.weighted);
            js["ahv_raw"] = s.ahv_raw;
            js["ahv_weighted"] = s.ahv_weighted;
            segs.push_back(std::move(js));
        }
        jr["segments"] = std::move(segs);
        jr["ahv_overall"] = rec.ahv_overall;
        jr["a8"] = rec.a8;
        jr["assessment"] = rec.assessment;
        jr["warnings"] = rec.warnings;
        recs.push_back(std::move(jr));
    }
    j["recordings"] = std::move(recs);

    json pairs = json::array();
    for (const PairIdentification& p : r.pairs) {
        json jp;
        jp["input_id"] = p.input_id;
        jp["output_id"] = p.output_id;
        jp["axis_in"] = p.axis_in;
        jp["axis_out"] = p.axis_out;
        jp["model"] = model_to_json(p.model);
        jp["fit"] = fit_to_json(p.fit);
        jp["gains"] = {{"freq_hz", p.gains.freq_hz},
                       {"gain_system", p.gains.gain_system},
                       {"gain_noise", p.gains.gain_noise}};
        jp["model_path"] = p.model_path;
        pairs.push_back(std::move(jp));
    }
    j["pairs"] = std::move(pairs);

    if (r.stats) {
        json js;
        json tt = json::array();
        for (const TTestEntry& e : r.stats->t_tests) {
            tt.push_back({{"label", e.label},
                          {"t", e.result.t},
                          {"df", e.result.df},
                          {"p_two_sided", e.result.p_two_sided},
                          {"mean_diff", e.result.mean_diff},
                          {"n_pairs", e.result.n_pairs},
                          {"significant", e.significant}});
        }
        js["t_tests"] = std::move(tt);
        json rg = json::array();
        for (const RegressionEntry& e : r.stats->regressions) {
            rg.push_back({{"label", e.label},
                          {"slope", e.result.slope},
                          {"intercept", e.result.intercept},
                          {"r2", e.result.r2},
                          {"adj_r2", e.result.adj_r2},
                          {"f_stat", e.result.f_stat},
                          {"df1", e.result.df1},
                          {"df2", e.result.df2},
                          {"p", e.result.p},
                          {"significant", e.significant}});
        }
        js["regressions"] = std::move(rg);
        js["warnings"] = r.stats->warnings;
        j["stats"] = std::move(js);
    }

    j["warnings"] = r.warnings;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    if (!j.is_object() || j.value("artifact", json()) != json("havmon-report") ||
        j.value("version", json()) != json(1)) {
        throw Error(Errc::UnknownFormat, "not a havmon-report v1 document");
    }
    r.artifact = j.at("artifact").get<std::string>();
    r.version = j.at("version").get<int>();
    r.command = j.at("command").get<std::string>();
    r.config = detail::config_from_json(j.at("config"), "report config");

    for (const json& jr : j.at("recordings")) {
        RecordingExposure rec;
        rec.sensor_id = jr.at("sensor_id").get<std::string>();
        rec.location = jr.at("location").get<std::string>();
        rec.rate_hz = detail::json_number(jr.at("rate_hz"));
        rec.n_samples = jr.at("n_samples").get<std::size_t>();
        for (const json& js : jr.at("segments")) {
            SegmentExposure s;
            s.index = js.at("index").get<std::size_t>();
            s.start_s = detail::json_number(js.at("start_s"));
            s.duration_s = detail::json_number(js.at("duration_s"));
            s.raw = axis_rms_from_json(js.at("raw"));
            s.weighted = axis_rms_from_json(js.at("weighted"));
            s.ahv_raw = detail::json_number(js.at("ahv_raw"));
            s.ahv_weighted = detail::json_number(js.at("ahv_weighted"));
            rec.segments.push_back(std::move(s));
        }
        rec.ahv_overall = detail::json_number(jr.at("ahv_overall"));
        rec.a8 = detail::json_number(jr.at("a8"));
        rec.assessment = jr.at("assessment").get<std::string>();
        rec.warnings = string_array(jr.at("warnings"));
        r.recordings.push_back(std::move(rec));
    }

    for (const json& jp : j.at("pairs")) {
        PairIdentification p;
        p.input_id = jp.at("input_id").get<std::string>();
        p.output_id = jp.at("output_id").get<std::string>();
        p.axis_in = jp.at("axis_in").get<std::string>();
        p.axis_out = jp.at("axis_out").get<std::string>();
        p.model = model_from_json(jp.at("model"));
        p.fit = fit_from_json(jp.at("fit"));
        const json& g = jp.at("gains");
        p.gains.freq_hz = number_array(g.at("freq_hz"));
        p.gains.gain_system = number_array(g.at("gain_system"));
        p.gains.gain_noise = number_array(g.at("gain_noise"));
        p.model_path = jp.at("model_path").get<std::string>();
        r.pairs.push_back(std::move(p));
    }

    if (j.contains("stats")) {
        StatsSection s;
        for (const json& je : j.at("stats").at("t_tests")) {
            TTestEntry e;
            e.label = je.at("label").get<std::string>();
            e.result.t = detail::json_number(je.at("t"));
            e.result.df = je.at("df").get<std::size_t>();
            e.result.p_two_sided = detail::json_number(je.at("p_two_sided"));
            e.result.mean_diff = detail::json_number(je.at("mean_diff"));
            e.result.n_pairs = je.at("n_pairs").get<std::size_t>();
            e.significant = je.at("significant").get<bool>();
            s.t_tests.push_back(std::move(e));
        }
        for (const json& je : j.at("stats").at("regressions")) {
            RegressionEntry e;
            e.label = je.at("label").get<std::string>();
            e.result.slope = detail::json_number(je.at("slope"));
            e.result.intercept = detail::json_number(je.at("intercept"));
            e.result.r2 = detail::json_number(je.at("r2"));
            e.result.adj_r2 = detail::json_number(je.at("adj_r2"));
            e.result.f_stat = detail::json_number(je.at("f_stat"));
            e.result.df1 = je.at("df1").get<std::size_t>();
            e.result.df2 = je.at("df2").get<std::size_t>();
            e.result.p = detail::json_number(je.at("p"));
            e.significant = je.at("significant").get<bool>();
            s.regressions.push_back(std::move(e));
        }
        s.warnings = string_array(j.at("stats").at("warnings"));
        r.stats = std::move(s);
    }

    r.warnings = string_array(j.at("warnings"));
    return r;
}

std::string p_value_text(double p) {
    if (p < 0.001) return "p-value < 0.001";
    return "p-value = " + fmt("%.3f", p);
}

}  // namespace

namespace detail {

std::string canonical_dump(const nlohmann::json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += '\n';
    return out;
}

double json_number(const nlohmann::json& v) {
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
        throw Error(Errc::ParseError, "expected a number, got string '" + s + "'");
    }
    if (!v.is_number()) {
        throw Error(Errc::ParseError, std::string("expected a number, got ") + v.type_name());
    }
    return v.get<double>();
}

}  // namespace detail

std::string render_machine(const RunReport& report) {
    return detail::canonical_dump(report_to_json(report));
}

RunReport parse_machine(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("machine report: ") + e.what());
    }
    try {
        return report_from_json(j);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("machine report: ") + e.what());
    }
}

std::string render_text(const RunReport& report) {
    std::string out;
    out += "havmon " + report.command + " report\n";

    const AnalysisConfig& c = report.config;
    out += "config: beta " + fmt("%g", c.gravity.beta) + ", window " +
           fmt("%g", c.window_s) + " s, weighting " +
           (c.weighting.enabled ? "on" : "off") + ", gravity removal " +
           (c.gravity_removal ? "on" : "off") + "\n\n";

    for (const RecordingExposure& rec : report.recordings) {
        out += "recording " + rec.sensor_id + " (" + rec.location + "), " +
               fmt("%g", rec.rate_hz) + " Hz, " + std::to_string(rec.n_samples) +
               " samples\n";
        out += "  segment  start_s     ahw_x     ahw_y     ahw_z       ahv\n";
        for (const SegmentExposure& s : rec.segments) {
            char line[160];
            std::snprintf(line, sizeof line, "  %7zu %8.1f %9.4f %9.4f %9.4f %9.4f\n",
                          s.index, s.start_s, s.weighted.ahw_x, s.weighted.ahw_y,
                          s.weighted.ahw_z, s.ahv_weighted);
            out += line;
        }
        out += "  overall ahv " + fmt("%.4f", rec.ahv_overall) + " m/s^2, A(8) " +
               fmt("%.4f", rec.a8) + " m/s^2, assessment " + rec.assessment + "\n";
        for (const std::string& w : rec.warnings) out += "  warning: " + w + "\n";
        out += '\n';
    }

    for (const PairIdentification& p : report.pairs) {
        out += "identification " + p.input_id + " -> " + p.output_id + " (" + p.axis_in +
               " -> " + p.axis_out + ")\n";
        out += "  orders nb=" + std::to_string(p.fit.orders.nb) + " na=" +
               std::to_string(p.fit.orders.na) + " nc=" + std::to_string(p.fit.orders.nc) +
               " nd=" + std::to_string(p.fit.orders.nd) + ", delay " +
               std::to_string(p.model.input_delay) + ", " +
               std::to_string(p.fit.iterations) + " iterations, " +
               (p.fit.converged ? "converged" : "not converged") + "\n";
        out += "  NRMSE fit " + fmt("%.2f", p.fit.nrmse_fit_percent) + " %\n";
        out += "  RMSE simulated " + fmt("%.6g", p.fit.rmse_simulated) +
               ", RMSE predicted " + fmt("%.6g", p.fit.rmse_predicted) + "\n";
        out += "  RMS discrepancy " + fmt("%.2f", p.fit.rms_discrepancy_percent) + " %\n";
        if (!p.model_path.empty()) out += "  model file: " + p.model_path + "\n";
        out += '\n';
    }

    if (report.stats) {
        out += "statistics\n";
        if (!report.stats->t_tests.empty()) {
            out += "  paired t-tests (two-sided)\n";
            for (const TTestEntry& e : report.stats->t_tests) {
                out += "    " + e.label + ": t(" + std::to_string(e.result.df) + ") = " +
                       fmt("%.3f", e.result.t) + ", " + p_value_text(e.result.p_two_sided) +
                       ", mean diff " + fmt("%.4g", e.result.mean_diff) + " (n = " +
                       std::to_string(e.result.n_pairs) + "), " +
                       (e.significant ? "significant" : "not significant") + "\n";
            }
        }
        if (!report.stats->regressions.empty()) {
            out += "  regressions\n";
            for (const RegressionEntry& e : report.stats->regressions) {
                out += "    " + e.label + ": slope " + fmt("%.4g", e.result.slope) +
                       ", intercept " + fmt("%.4g", e.result.intercept) +
                       ", Adjusted R\xc2\xb2 = " + fmt("%.4g", e.result.adj_r2) + ", F(" +
                       std::to_string(e.result.df1) + "," + std::to_string(e.result.df2) +
                       ") = " + fmt("%.4g", e.result.f_stat) + ", " +
                       p_value_text(e.result.p) + ", " +
                       (e.significant ? "significant" : "not significant") + "\n";
            }
        }
        for (const std::string& w : report.stats->warnings) {
            out += "  warning: " + w + "\n";
        }
        out += '\n';
    }

    for (const std::string& w : report.warnings) out += "warning: " + w + "\n";
    return out;
}

std::string render_trace_csv(const PredictionTrace& trace, double rate_hz) {
    std::string out = "t_s,y_measured,y_simulated,y_predicted,residual\n";
    for (std::size_t i = 0; i < trace.y_measured.size(); ++i) {
        out += fmt("%.9g", static_cast<double>(i) / rate_hz) + "," +
               fmt("%.9g", trace.y_measured[i]) + "," + fmt("%.9g", trace.y_simulated[i]) +
               "," + fmt("%.9g", trace.y_predicted[i]) + "," +
               fmt("%.9g", trace.residuals[i]) + "\n";
    }
    return out;
}

std::string render_gain_csv(const GainTable& gains) {
    std::string out = "freq_hz,gain_system,gain_noise\n";
    for (std::size_t i = 0; i < gains.freq_hz.size(); ++i) {
        out += fmt("%.9g", gains.freq_hz[i]) + "," + fmt("%.9g", gains.gain_system[i]) +
               "," + fmt("%.9g", gains.gain_noise[i]) + "\n";
    }
    return out;
}

}  // namespace havmon
