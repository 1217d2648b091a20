#include "havmon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "havmon/gravity.hpp"
#include "json_canon.hpp"

namespace havmon {

namespace {

AxisRms segment_rms(const TriaxialSeries& series, const Segment& seg) {
    AxisRms r;
    r.ahw_x = axis_rms(segment_axis(series, seg, Axis::X));
    r.ahw_y = axis_rms(segment_axis(series, seg, Axis::Y));
    r.ahw_z = axis_rms(segment_axis(series, seg, Axis::Z));
    r.n = seg.length;
    return r;
}

RecordingExposure analyze_one(const TriaxialSeries& recording,
                              const AnalysisConfig& config) {
    RecordingExposure rec;
    rec.sensor_id = recording.meta().sensor_id;
    rec.location = location_name(recording.meta().location);
    rec.rate_hz = recording.rate_hz();
    rec.n_samples = recording.size();

    const TriaxialSeries dynamic =
        config.gravity_removal ? remove_gravity(recording, config.gravity) : recording;

    TriaxialSeries weighted = dynamic;
    if (config.weighting.enabled) {
        const DesignedWeighting dw =
            design_weighting_filter(config.weighting, recording.rate_hz());
        if (dw.reduced_bandwidth) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "ReducedBandwidth: low-pass corner %g Hz is at or above the "
                          "Nyquist frequency %g Hz; band limiting degrades to unity",
                          config.weighting.f2_hz, recording.rate_hz() / 2.0);
            rec.warnings.push_back(buf);
        }
        weighted = apply_filter(dw.filter, dynamic);
    }

    const std::vector<Segment> segs =
        segment(dynamic, config.window_s, TailPolicy::Strict);

    double energy = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        SegmentExposure se;
        se.index = i;
        se.start_s = static_cast<double>(segs[i].start_index) / recording.rate_hz();
        se.duration_s = segs[i].duration_s;
        se.raw = segment_rms(dynamic, segs[i]);
        se.weighted = segment_rms(weighted, segs[i]);
        se.ahv_raw = vibration_total(se.raw.ahw_x, se.raw.ahw_y, se.raw.ahw_z);
        se.ahv_weighted =
            vibration_total(se.weighted.ahw_x, se.weighted.ahw_y, se.weighted.ahw_z);
        energy += se.ahv_weighted * se.ahv_weighted;
        rec.segments.push_back(std::move(se));
    }

    rec.ahv_overall = std::sqrt(energy / static_cast<double>(segs.size()));
    const double exposure_s = config.exposure_duration_s > 0.0
                                  ? config.exposure_duration_s
                                  : recording.duration_s();
    rec.a8 = daily_exposure(rec.ahv_overall, exposure_s);
    rec.assessment = assessment_name(assess_limits(rec.a8, config.thresholds));
    return rec;
}

const RecordingExposure* find_by_location(const std::vector<RecordingExposure>& recs,
                                          Location loc) {
    for (const RecordingExposure& r : recs) {
        if (r.location == location_name(loc)) return &r;
    }
    return nullptr;
}

std::vector<double> segment_totals(const RecordingExposure& rec) {
    std::vector<double> out;
    out.reserve(rec.segments.size());
    for (const SegmentExposure& s : rec.segments) out.push_back(s.ahv_weighted);
    return out;
}

std::string sanitize_filename(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        if (!ok) c = '_';
    }
    return out.empty() ? "recording" : out;
}

nlohmann::json stage_to_json(const ArmStage& stage) {
    nlohmann::json j;
    j["b0"] = stage.filter.b0;
    j["b1"] = stage.filter.b1;
    j["b2"] = stage.filter.b2;
    j["a1"] = stage.filter.a1;
    j["a2"] = stage.filter.a2;
    j["rate_hz"] = stage.rate_hz;
    j["noise_rms"] = stage.noise_rms;
    j["noise_ar1"] = stage.noise_ar1;
    j["dc_gain"] = stage.dc_gain();
    return j;
}

}  // namespace

RunReport cmd_analyze(const std::vector<TriaxialSeries>& recordings,
                      const AnalysisConfig& config) {
    config.validate();
    if (recordings.empty()) throw Error(Errc::EmptyInput, "no recordings to analyze");

    RunReport report;
    report.command = "analyze";
    report.config = config;
    for (const TriaxialSeries& rec : recordings) {
        try {
            report.recordings.push_back(analyze_one(rec, config));
        } catch (const Error& e) {
            throw Error(e.code(),
                        "recording '" + rec.meta().sensor_id + "': " + e.what());
        }
    }
    return report;
}

IdentifyOutput cmd_identify(const TriaxialSeries& input, const TriaxialSeries& output,
                            const AnalysisConfig& config, bool decimate_to_match) {
    config.validate();

    TriaxialSeries in = input;
    TriaxialSeries out = output;
    if (in.rate_hz() != out.rate_hz()) {
        if (!decimate_to_match) {
            throw Error(Errc::RateMismatch,
                        "input at " + std::to_string(in.rate_hz()) + " Hz, output at " +
                            std::to_string(out.rate_hz()) +
                            " Hz (pass the decimation flag to reconcile)");
        }
        TriaxialSeries& fast = in.rate_hz() > out.rate_hz() ? in : out;
        const double slow_rate = std::min(in.rate_hz(), out.rate_hz());
        const double ratio = fast.rate_hz() / slow_rate;
        const int factor = static_cast<int>(std::llround(ratio));
        if (std::abs(ratio - factor) > 1e-9) {
            throw Error(Errc::RateMismatch,
                        "rate ratio " + std::to_string(ratio) + " is not an integer");
        }
        fast = decimate(fast, factor, /*antialias_on=*/true);
    }

    if (config.gravity_removal) {
        in = remove_gravity(in, config.gravity);
        out = remove_gravity(out, config.gravity);
    }
    auto [u_series, y_series] = truncate_to_common(in, out);

    IdentifyOutput result;
    result.report.command = "identify";
    result.report.config = config;

    for (int ai = 0; ai < 3; ++ai) {
        const Axis axis_in = kAxes[ai];
        const Axis axis_out = config.pairing[ai];
        const auto u = u_series.axis(axis_in);
        const auto y = y_series.axis(axis_out);

        PairIdentification pair;
        pair.input_id = input.meta().sensor_id;
        pair.output_id = output.meta().sensor_id;
        pair.axis_in = axis_name(axis_in);
        pair.axis_out = axis_name(axis_out);
        try {
            auto [model, fit] = fit_bj(u, y, config.orders, config.fit_options,
                                       u_series.rate_hz(), config.input_delay);
            pair.model = model;
            pair.fit = fit;

            const double nyquist = u_series.rate_hz() / 2.0;
            const double f_lo = 0.5;
            const double f_hi = 0.8 * nyquist;
            const int n_freq = 50;
            std::vector<double> freqs(n_freq);
            for (int k = 0; k < n_freq; ++k) {
                freqs[k] = f_lo * std::pow(f_hi / f_lo, static_cast<double>(k) /
                                                            (n_freq - 1));
            }
            const FrequencyResponse fr = frequency_response(model, freqs);
            pair.gains = {fr.freqs_hz, fr.gain_system, fr.gain_noise};

            const PredictionTrace trace = predict_one_step(model, u, y);
            result.traces.emplace_back(pair.axis_in + "-" + pair.axis_out, trace);
        } catch (const Error& e) {
            throw Error(e.code(), "pair " + pair.axis_in + " -> " + pair.axis_out + ": " +
                                      e.what());
        }
        result.report.pairs.push_back(std::move(pair));
    }
    return result;
}

void write_identify_artifacts(IdentifyOutput& out, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string());

    for (std::size_t i = 0; i < out.report.pairs.size(); ++i) {
        PairIdentification& pair = out.report.pairs[i];
        const std::string tag =
            sanitize_filename(pair.axis_in + "-" + pair.axis_out);
        const std::filesystem::path model_path = dir / ("model_" + tag + ".txt");
        write_file_atomic(model_path, serialize_model(pair.model, pair.fit));
        pair.model_path = model_path.string();

        write_file_atomic(dir / ("trace_" + tag + ".csv"),
                          render_trace_csv(out.traces[i].second, pair.model.rate_hz));
        write_file_atomic(dir / ("gain_" + tag + ".csv"), render_gain_csv(pair.gains));
    }
}

StatsSection cmd_stats(const RunReport& analyzed, const AnalysisConfig& config) {
    StatsSection stats;

    struct TPair {
        Location a;
        Location b;
    };
    const TPair t_pairs[] = {{Location::HandRT, Location::Tool},
                             {Location::UpperArmRT, Location::NearUpperArmRT}};
    for (const TPair& tp : t_pairs) {
        const std::string label = std::string(location_name(tp.a)) + " vs " +
                                  location_name(tp.b);
        const RecordingExposure* ra = find_by_location(analyzed.recordings, tp.a);
        const RecordingExposure* rb = find_by_location(analyzed.recordings, tp.b);
        if (!ra || !rb) {
            stats.warnings.push_back("t-test " + label + " skipped: location not present");
            continue;
        }
        std::vector<double> x = segment_totals(*ra);
        std::vector<double> y = segment_totals(*rb);
        const std::size_t n = std::min(x.size(), y.size());
        x.resize(n);
        y.resize(n);
        try {
            TTestEntry entry;
            entry.label = label;
            entry.result = paired_t_test(x, y);
            entry.significant = entry.result.p_two_sided < config.significance;
            stats.t_tests.push_back(std::move(entry));
        } catch (const Error& e) {
            stats.warnings.push_back("t-test " + label + ": " + e.what());
        }
    }

    const TPair reg_pairs[] = {{Location::HandRT, Location::ForearmRT},
                               {Location::ForearmRT, Location::UpperArmRT},
                               {Location::HandLT, Location::ForearmLT},
                               {Location::ForearmLT, Location::UpperArmLT}};
    for (const TPair& rp : reg_pairs) {
        const std::string label = std::string(location_name(rp.a)) + " -> " +
                                  location_name(rp.b);
        const RecordingExposure* ra = find_by_location(analyzed.recordings, rp.a);
        const RecordingExposure* rb = find_by_location(analyzed.recordings, rp.b);
        if (!ra || !rb) {
            stats.warnings.push_back("regression " + label +
                                     " skipped: location not present");
            continue;
        }
        std::vector<double> x = segment_totals(*ra);
        std::vector<double> y = segment_totals(*rb);
        const std::size_t n = std::min(x.size(), y.size());
        x.resize(n);
        y.resize(n);
        try {
            RegressionEntry entry;
            entry.label = label;
            entry.result = linear_regression(x, y);
            entry.significant = entry.result.p < config.significance;
            stats.regressions.push_back(std::move(entry));
        } catch (const Error& e) {
            stats.warnings.push_back("regression " + label + ": " + e.what());
        }
    }
    return stats;
}

std::filesystem::path cmd_simulate(const ExperimentConfig& config, std::uint64_t seed,
                                   const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + out_dir.string());

    const ExperimentBundle bundle = make_experiment(config, seed);

    Sidecar extra;
    extra["subject"] = "synthetic";
    extra["run"] = std::to_string(seed);

    nlohmann::json manifest;
    manifest["artifact"] = "havmon-manifest";
    manifest["version"] = 1;
    manifest["seed"] = std::to_string(seed);
    manifest["arm"] = {{"hand_from_tool", stage_to_json(config.arm.hand_from_tool)},
                       {"forearm_from_hand", stage_to_json(config.arm.forearm_from_hand)},
                       {"upperarm_from_forearm",
                        stage_to_json(config.arm.upperarm_from_forearm)}};

    nlohmann::json recs = nlohmann::json::array();
    auto emit = [&](const TriaxialSeries& s, const char* kind) {
        const std::string file = sanitize_filename(s.meta().sensor_id) + ".csv";
        save_recording(s, out_dir / file, extra);
        recs.push_back({{"file", file},
                        {"kind", kind},
                        {"sensor_id", s.meta().sensor_id},
                        {"location", location_name(s.meta().location)},
                        {"rate_hz", s.meta().rate_hz},
                        {"n_samples", s.size()}});
    };

    emit(bundle.true_tool, "truth");
    emit(bundle.true_hand, "truth");
    emit(bundle.true_forearm, "truth");
    emit(bundle.true_upperarm, "truth");
    for (const TriaxialSeries& obs : bundle.observed) emit(obs, "observed");

    manifest["recordings"] = std::move(recs);

    const std::filesystem::path manifest_path = out_dir / "manifest.json";
    write_file_atomic(manifest_path, detail::canonical_dump(manifest));
    return manifest_path;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "machine") return ReportFormat::Machine;
    if (name == "text") return ReportFormat::Text;
    if (name == "tables") return ReportFormat::Tables;
    throw Error(Errc::UnknownFormat,
                "report format must be machine, text or tables, got '" + name + "'");
}

std::string cmd_report(const RunReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Machine: return render_machine(report);
        case ReportFormat::Text: return render_text(report);
        case ReportFormat::Tables: break;
    }

    std::string out;
    for (const RecordingExposure& rec : report.recordings) {
        out += "# segments " + rec.sensor_id + " (" + rec.location + ")\n";
        out += "index,start_s,ahw_x,ahw_y,ahw_z,ahv_weighted,ahv_raw\n";
        for (const SegmentExposure& s : rec.segments) {
            char line[200];
            std::snprintf(line, sizeof line, "%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                          s.index, s.start_s, s.weighted.ahw_x, s.weighted.ahw_y,
                          s.weighted.ahw_z, s.ahv_weighted, s.ahv_raw);
            out += line;
        }
        out += '\n';
    }
    for (const PairIdentification& p : report.pairs) {
        out += "# gain " + p.input_id + " -> " + p.output_id + " (" + p.axis_in + " -> " +
               p.axis_out + ")\n";
        out += render_gain_csv(p.gains);
        out += '\n';
    }
    return out;
}

}  // namespace havmon
