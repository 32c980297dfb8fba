#include "study_config.hpp"

#include <uedge/bootstrap.hpp>
#include <uedge/cramer.hpp>
#include <uedge/edgeworth.hpp>
#include <uedge/error.hpp>
#include <uedge/families.hpp>
#include <uedge/hermite.hpp>
#include <uedge/report.hpp>
#include <uedge/study.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace uedge;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text(cli::resolve_output(out_path), text);
    }
}

ordered_json flags_json(const EventFlags& f) {
    ordered_json j;
    j["e0"] = {{"ok", f.e0}, {"moment", f.e0_stat}};
    j["e1"] = {{"ok", f.e1}, {"lambda_min", f.e1_stat}};
    j["e2"] = {{"ok", f.e2}, {"max_mixed_moment", f.e2_stat}};
    j["e3"] = {{"ok", f.e3}, {"lambda_max", f.e3_lambda_max}};
    if (f.e3_jet_max) j["e3"]["jet_max"] = *f.e3_jet_max;
    return j;
}

struct DataSource {
    std::string data;
    std::string family;
    std::vector<double> theta;
    std::size_t n = 200;
    std::uint64_t seed = 1;

    void add_to(CLI::App* app) {
        app->add_option("--data", data, "CSV dataset, one point per row");
        app->add_option("--family", family, "registered family to sample instead of --data");
        app->add_option("--theta", theta, "family parameters");
        app->add_option("--n", n, "sample size when sampling a family");
        app->add_option("--seed", seed, "master seed");
    }

    Dataset load(const FamilyRegistry& reg) const {
        if (!data.empty()) return read_csv(data);
        if (family.empty()) throw InvalidArgument("give --data or --family");
        return reg.make(family, theta).draw(n, derive_seed(seed, {hash_string(family), 0}));
    }
};

struct ScanFlags {
    double b = 1.0, R = 1.0, T_max = 200.0;
    std::optional<double> c, c_R;
    int radii = 512, dirs = 0;
    unsigned workers = 1;
    bool no_evidence = false;

    void add_to(CLI::App* app) {
        app->add_option("--b", b, "exponent b");
        app->add_option("--R", R, "inner radius");
        app->add_option("--Tmax", T_max, "scan ceiling");
        app->add_option("--c", c, "margin to test");
        app->add_option("--cR", c_R, "c_R for the failure-probability bound");
        app->add_option("--grid-radii", radii, "number of radii");
        app->add_option("--grid-dirs", dirs, "number of directions (0 = default for d)");
        app->add_option("--workers", workers, "worker threads");
        app->add_flag("--no-evidence", no_evidence, "omit the per-point evidence table");
    }

    ScanOptions options() const {
        ScanOptions o;
        o.b = b;
        o.R = R;
        o.T_max = T_max;
        o.c = c;
        o.grid.radii = radii;
        o.grid.directions = dirs;
        o.grid.workers = workers;
        return o;
    }
};

int run_cf_scan(const DataSource& src, const ScanFlags& sf, const std::string& out, const FamilyRegistry& reg) {
    std::optional<CharFunctionHandle> h;
    std::int64_t n = 0;
    if (src.data.empty() && !src.family.empty()) {
        const Family f = reg.make(src.family, src.theta);
        if (!f.cf) throw InvalidArgument("family " + f.name + " has no closed-form characteristic function");
        h = *f.cf;
    } else {
        Dataset d = src.load(reg);
        n = static_cast<std::int64_t>(d.size());
        h = CharFunctionHandle::empirical(std::move(d));
    }
    CramerCertificate cert = weak_cramer_scan(*h, sf.options());
    if (sf.c_R && n > 0) cert.prob_bound = failure_prob_bound(*sf.c_R, n);
    emit(out, certificate_json(cert, !sf.no_evidence));
    return 0;
}

int run_certify(const DataSource& src, const ScanFlags& sf, const std::string& out, const FamilyRegistry& reg) {
    const Dataset data = src.load(reg);
    const auto opt = sf.options();
    CramerCertificate scan = weak_cramer_scan(CharFunctionHandle::empirical(data), opt);
    CramerCertificate ustat = ustat_scan(data, opt);
    if (sf.c_R) {
        const double p = failure_prob_bound(*sf.c_R, static_cast<std::int64_t>(data.size()));
        scan.prob_bound = p;
        ustat.prob_bound = p;
    }
    ordered_json doc;
    doc["n"] = data.size();
    doc["d"] = data.dimension();
    doc["cf_scan"] = ordered_json::parse(certificate_json(scan, !sf.no_evidence));
    doc["ustat"] = ordered_json::parse(certificate_json(ustat, !sf.no_evidence));
    emit(out, doc.dump(2));
    return 0;
}

struct CompareFlags {
    std::size_t B = 1'000'000;
    int s = 3;
    std::string sets;
    std::string out_dir = ".";
    std::string prefix = "bootstrap_compare";
    unsigned workers = 1;
    EventThresholds th{100.0, 1e-3, 100.0, 100.0};
    std::uint64_t mc_samples = 1'000'000;
    std::string tgrid = "-5:5:0.025";
};

int run_bootstrap_compare(const DataSource& src, const CompareFlags& cf, const FamilyRegistry& reg) {
    const Dataset data = src.load(reg);
    const std::size_t d = data.dimension();
    std::vector<SetSpec> sets;
    if (!cf.sets.empty()) {
        sets = parse_set_specs(read_file(cf.sets));
    } else if (d == 1) {
        sets = half_line_class(cli::parse_grid_spec(cf.tgrid));
    } else {
        throw InvalidArgument("--sets is required for d > 1");
    }
    const EmpiricalMeasure q_emp(bootstrap_draws(data, cf.B, derive_seed(src.seed, {1}), cf.workers));
    const EdgeworthExpansion e = empirical_edgeworth(data, cf.s);
    const EdgeworthExpansion g = gaussian_expansion(static_cast<int>(d));
    MeasureBudget budget;
    budget.mc_samples = cf.mc_samples;
    budget.seed = derive_seed(src.seed, {2});
    budget.workers = cf.workers;
    const auto method = d <= 3 ? MeasureMethod::Quadrature : MeasureMethod::GaussianImportanceMC;
    auto tilde = [&](const SetSpec& A) { return set_measure(e, A, method, budget).value; };
    const auto sup = sup_deviation<SetSpec>(sets, [&](const SetSpec& A) { return q_emp.measure(A); }, tilde);
    const auto sup_gauss = sup_deviation<SetSpec>(sets, [&](const SetSpec& A) { return q_emp.measure(A); },
                                                  [&](const SetSpec& A) { return set_measure(g, A, method, budget).value; });

    std::string csv = "set_id,q_emp,q_tilde,abs_dev,mc_se\n";
    for (const auto& r : sup.records) {
        const double se = std::sqrt(r.q_emp * (1.0 - r.q_emp) / static_cast<double>(cf.B));
        csv += std::to_string(r.member) + ',' + format_double(r.q_emp) + ',' + format_double(r.q_tilde) + ',' +
               format_double(r.abs_dev) + ',' + format_double(se) + '\n';
    }
    ordered_json summary;
    summary["n"] = data.size();
    summary["d"] = d;
    summary["B"] = cf.B;
    summary["s"] = cf.s;
    summary["sup_deviation"] = sup.value;
    summary["argmax_set"] = sets[sup.argmax].describe();
    summary["gaussian_sup_deviation"] = sup_gauss.value;
    summary["degenerate_draws"] = 0;
    summary["dkw_half_width"] = dkw_half_width(cf.B);
    if (data.size() >= 2) summary["events"] = flags_json(event_checks(data, cf.s, cf.th));
    const std::filesystem::path dir = cli::resolve_output(cf.out_dir);
    write_text(dir / (cf.prefix + ".csv"), csv);
    write_text(dir / (cf.prefix + ".json"), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int run_tstat_study(const DataSource& src, const CompareFlags& cf, const FamilyRegistry& reg) {
    const Dataset W = src.load(reg);
    if (W.dimension() != 1) throw InvalidArgument("tstat-study needs one-dimensional W data");
    std::vector<double> pair;
    pair.reserve(2 * W.size());
    for (double w : W.values()) {
        pair.push_back(w);
        pair.push_back(w * w);
    }
    const Dataset X(2, std::move(pair), W.provenance());
    const SampleStats st = sample_stats(X, cf.s);
    const TstatFunctional f(st, st.mean[0]);
    const EdgeworthExpansion e = empirical_edgeworth(X, cf.s);
    const auto grid = cli::parse_grid_spec(cf.tgrid);

    TstatDraws draws = tstat_bootstrap(W, cf.B, derive_seed(src.seed, {1}), cf.workers);
    std::sort(draws.values.begin(), draws.values.end());
    const auto curve = edgeworth_tstat_measure(grid, e, f, cf.mc_samples, derive_seed(src.seed, {2}), cf.workers);

    const double band = dkw_half_width(draws.values.size());
    std::string csv = "t,q_emp,q_tilde,abs_dev,mc_se\n";
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q = tstat_cdf(draws.values, grid[i]);
        const double dev = std::abs(q - curve.value[i]);
        sup = std::max(sup, dev);
        csv += format_double(grid[i]) + ',' + format_double(q) + ',' + format_double(curve.value[i]) + ',' +
               format_double(dev) + ',' + format_double(curve.std_error[i]) + '\n';
    }
    ordered_json summary;
    summary["n"] = W.size();
    summary["B"] = cf.B;
    summary["s"] = cf.s;
    summary["sup_deviation"] = sup;
    summary["dkw_half_width"] = band;
    summary["degenerate_draws"] = draws.degenerate;
    summary["singular_points"] = curve.singular;
    summary["mc_samples"] = curve.samples;
    summary["events"] = flags_json(event_checks(X, cf.s, cf.th));
    const std::filesystem::path dir = cli::resolve_output(cf.out_dir);
    write_text(dir / (cf.prefix + ".csv"), csv);
    write_text(dir / (cf.prefix + ".json"), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int finish_study(const StudyReport& r, const cli::OutputPaths& out) {
    if (out.csv) emit_report(r, ReportFormat::Csv, cli::resolve_output(*out.csv));
    if (out.json) emit_report(r, ReportFormat::Json, cli::resolve_output(*out.json));
    if (!out.csv && !out.json) std::cout << report_json(r);
    for (const auto& s : r.slopes) {
        std::cerr << s.metric << " s=" << s.s << " slope=" << format_double(s.slope) << " (" << s.points
                  << " points)\n";
    }
    const bool all_flagged = !r.records.empty() &&
                             std::all_of(r.records.begin(), r.records.end(),
                                         [](const StudyRecord& rec) { return rec.flag == "inconclusive"; });
    return all_flagged ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uedge: Edgeworth expansions, Cramer-condition certificates and bootstrap studies"};
    app.require_subcommand(1);
    const FamilyRegistry registry = register_builtin_families();

    DataSource src;
    ScanFlags sf;
    CompareFlags cf;
    std::string out, config;
    int s_expand = 3;
    std::int64_t n_expand = 100;

    auto* cf_scan = app.add_subcommand("cf-scan", "scan the weak Cramer condition of a dataset or family");
    src.add_to(cf_scan);
    sf.add_to(cf_scan);
    cf_scan->add_option("--out", out, "output file (default stdout)");

    auto* certify = app.add_subcommand("certify", "cf scan plus the U-statistic certificate");
    src.add_to(certify);
    sf.add_to(certify);
    certify->add_option("--out", out, "output file (default stdout)");

    auto add_compare = [&](CLI::App* sub) {
        src.add_to(sub);
        sub->add_option("--B", cf.B, "bootstrap draws");
        sub->add_option("--s", cf.s, "expansion order");
        sub->add_option("--workers", cf.workers, "worker threads");
        sub->add_option("--out-dir", cf.out_dir, "output directory (relative to $UEDGE_OUTPUT_DIR)");
        sub->add_option("--prefix", cf.prefix, "output file prefix");
        sub->add_option("--tgrid", cf.tgrid, "t grid lo:hi:step");
        sub->add_option("--mc-samples", cf.mc_samples, "Gaussian MC budget for the expansion");
        sub->add_option("--rho-bar", cf.th.rho_bar, "moment threshold");
        sub->add_option("--c1", cf.th.c1, "smallest-eigenvalue threshold");
        sub->add_option("--c2", cf.th.c2, "mixed-moment threshold");
        sub->add_option("--c3", cf.th.c3, "derivative / largest-eigenvalue threshold");
    };
    auto* compare = app.add_subcommand("bootstrap-compare", "bootstrap law vs empirical Edgeworth expansion");
    add_compare(compare);
    compare->add_option("--sets", cf.sets, "JSON set specification file");

    auto* tstat = app.add_subcommand("tstat-study", "bootstrap-t CDF vs expansion of the t functional");
    add_compare(tstat);

    auto* rate = app.add_subcommand("rate-study", "rate study driven by a JSON config");
    rate->add_option("--config", config, "config file")->required();

    auto* sweep = app.add_subcommand("uniform-sweep", "max-over-theta rate study driven by a JSON config");
    sweep->add_option("--config", config, "config file")->required();

    auto* expand = app.add_subcommand("expand", "print an expansion's coefficient table");
    src.add_to(expand);
    expand->add_option("--s", s_expand, "expansion order");
    expand->add_option("--sample-size", n_expand, "n used for the n^{-j/2} scaling");
    expand->add_option("--out", out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cf_scan->parsed()) return run_cf_scan(src, sf, out, registry);
        if (certify->parsed()) return run_certify(src, sf, out, registry);
        if (compare->parsed()) return run_bootstrap_compare(src, cf, registry);
        if (tstat->parsed()) {
            if (src.family.empty() && src.data.empty()) src.family = "centered-exponential";
            if (tstat->count("--prefix") == 0) cf.prefix = "tstat_study";
            return run_tstat_study(src, cf, registry);
        }
        if (rate->parsed()) {
            const auto file = cli::parse_rate_study_config(read_file(config));
            return finish_study(rate_study(file.study, registry), file.output);
        }
        if (sweep->parsed()) {
            const auto file = cli::parse_sweep_config(read_file(config));
            return finish_study(uniform_sweep(file.sweep, registry), file.output);
        }
        if (expand->parsed()) {
            if (!src.data.empty()) {
                emit(out, to_json(empirical_edgeworth(read_csv(src.data), s_expand)) + "\n");
            } else {
                if (src.family.empty()) throw InvalidArgument("give --data or --family");
                const Family f = registry.make(src.family, src.theta);
                emit(out, to_json(build_expansion(standardized_family_cumulants(f, s_expand), n_expand, s_expand)) + "\n");
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "uedge: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "uedge: unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
