#include "study_config.hpp"

#include <uedge/error.hpp>
#include <uedge/set_spec.hpp>

#include <json.hpp>

#include <charconv>
#include <cstdlib>

namespace uedge::cli {

namespace {

using nlohmann::json;

std::vector<double> grid_from_json(const json& j) {
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_string()) return parse_grid_spec(j.get<std::string>());
    return make_grid(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("step").get<double>());
}

RateStudyConfig study_from_json(const json& j) {
    RateStudyConfig c;
    c.family = j.at("family").get<std::string>();
    if (j.contains("theta")) c.theta = j.at("theta").get<std::vector<double>>();
    c.s = j.value("s", c.s);
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
    c.M = j.value("M", c.M);
    c.B = j.value("B", c.B);
    c.reps = j.value("reps", c.reps);
    const auto mode = j.value("mode", std::string("theorem1"));
    if (mode == "theorem1") {
        c.mode = StudyMode::Theorem1;
    } else if (mode == "theorem2") {
        c.mode = StudyMode::Theorem2;
    } else {
        throw InvalidArgument("config: mode must be theorem1 or theorem2");
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("t_grid")) c.t_grid = grid_from_json(j.at("t_grid"));
    c.workers = j.value("workers", c.workers);
    return c;
}

OutputPaths output_from_json(const json& j) {
    OutputPaths o;
    if (!j.contains("output")) return o;
    const auto& out = j.at("output");
    if (out.contains("csv")) o.csv = out.at("csv").get<std::string>();
    if (out.contains("json")) o.json = out.at("json").get<std::string>();
    return o;
}

template <class F>
auto guarded(std::string_view text, F&& f) {
    try {
        return f(json::parse(text));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

} // namespace

RateStudyFile parse_rate_study_config(std::string_view text) {
    return guarded(text, [](const json& j) { return RateStudyFile{study_from_json(j), output_from_json(j)}; });
}

SweepFile parse_sweep_config(std::string_view text) {
    return guarded(text, [](const json& j) {
        SweepFile f{{study_from_json(j), {}, 50.0}, output_from_json(j)};
        f.sweep.theta_grid = j.at("theta_grid").get<std::vector<std::vector<double>>>();
        f.sweep.rho_bar = j.value("rho_bar", f.sweep.rho_bar);
        return f;
    });
}

std::vector<double> parse_grid_spec(std::string_view spec) {
    double v[3];
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const auto end = i < 2 ? spec.find(':', start) : spec.size();
        if (end == std::string_view::npos) throw InvalidArgument("grid spec must be lo:hi:step");
        const auto field = spec.substr(start, end - start);
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[i]);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
            throw InvalidArgument("grid spec must be lo:hi:step, got '" + std::string(spec) + "'");
        }
        start = end + 1;
    }
    return make_grid(v[0], v[1], v[2]);
}

std::filesystem::path resolve_output(const std::filesystem::path& p) {
    if (p.is_absolute()) return p;
    const char* dir = std::getenv("UEDGE_OUTPUT_DIR");
    return (dir && *dir) ? std::filesystem::path(dir) / p : p;
}

} // namespace uedge::cli
