#include "uedge/report.hpp"

#include "uedge/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uedge {

namespace {

constexpr const char* csv_header = "family,theta,n,rep,s,metric,value,mc_se,flag,seed";

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InvalidArgument("report CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, std::size_t line) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return parse_number<double>(s, line);
}

nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

double null_as_nan(const nlohmann::json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string report_csv(const StudyReport& r) {
    std::string out = csv_header;
    out += '\n';
    for (const auto& rec : r.records) {
        out += rec.family + ',' + rec.theta + ',' + std::to_string(rec.n) + ',' + std::to_string(rec.rep) + ',' +
               std::to_string(rec.s) + ',' + rec.metric + ',' + format_double(rec.value) + ',' +
               format_double(rec.mc_se) + ',' + rec.flag + ',' + std::to_string(rec.seed) + '\n';
    }
    return out;
}

std::string report_json(const StudyReport& r) {
    nlohmann::ordered_json doc;
    doc["version"] = r.version;
    doc["config_hash"] = r.config_hash;
    auto records = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
        records.push_back({{"family", rec.family},
                           {"theta", rec.theta},
                           {"n", rec.n},
                           {"rep", rec.rep},
                           {"s", rec.s},
                           {"metric", rec.metric},
                           {"value", number_or_null(rec.value)},
                           {"mc_se", number_or_null(rec.mc_se)},
                           {"flag", rec.flag},
                           {"seed", rec.seed}});
    }
    doc["records"] = std::move(records);
    auto slopes = nlohmann::ordered_json::array();
    for (const auto& s : r.slopes) {
        slopes.push_back({{"metric", s.metric},
                          {"s", s.s},
                          {"slope", number_or_null(s.slope)},
                          {"std_error", number_or_null(s.std_error)},
                          {"points", s.points}});
    }
    doc["slopes"] = std::move(slopes);
    doc["notes"] = r.notes;
    return doc.dump(2) + "\n";
}

void emit_report(const StudyReport& r, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open report file for writing: " + path.string());
    out << (format == ReportFormat::Csv ? report_csv(r) : report_json(r));
    out.flush();
    if (!out) throw IoError("failed writing report file: " + path.string());
}

std::vector<StudyRecord> parse_report_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw InvalidArgument("report CSV: missing or wrong header");
    std::vector<StudyRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw InvalidArgument("report CSV line " + std::to_string(lineno) + ": expected 10 fields");
        StudyRecord r;
        r.family = f[0];
        r.theta = f[1];
        r.n = parse_number<std::int64_t>(f[2], lineno);
        r.rep = parse_number<int>(f[3], lineno);
        r.s = parse_number<int>(f[4], lineno);
        r.metric = f[5];
        r.value = parse_double(f[6], lineno);
        r.mc_se = parse_double(f[7], lineno);
        r.flag = f[8];
        r.seed = parse_number<std::uint64_t>(f[9], lineno);
        out.push_back(std::move(r));
    }
    return out;
}

StudyReport parse_report_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        StudyReport r;
        r.version = doc.at("version").get<std::string>();
        r.config_hash = doc.at("config_hash").get<std::string>();
        for (const auto& j : doc.at("records")) {
            r.records.push_back({j.at("family").get<std::string>(), j.at("theta").get<std::string>(),
                                 j.at("n").get<std::int64_t>(), j.at("rep").get<int>(), j.at("s").get<int>(),
                                 j.at("metric").get<std::string>(), null_as_nan(j.at("value")),
                                 null_as_nan(j.at("mc_se")), j.at("flag").get<std::string>(),
                                 j.at("seed").get<std::uint64_t>()});
        }
        for (const auto& j : doc.at("slopes")) {
            r.slopes.push_back({j.at("metric").get<std::string>(), j.at("s").get<int>(), null_as_nan(j.at("slope")),
                                null_as_nan(j.at("std_error")), j.at("points").get<int>()});
        }
        r.notes = doc.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("report JSON: ") + e.what());
    }
}

} // namespace uedge
