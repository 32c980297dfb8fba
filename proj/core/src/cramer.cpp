#include "uedge/cramer.hpp"

#include "uedge/error.hpp"
#include "uedge/parallel.hpp"
#include "uedge/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace uedge {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double pi_sq = std::numbers::pi * std::numbers::pi;

double norm(std::span<const double> t) {
    double s = 0.0;
    for (double v : t) s += v * v;
    return std::sqrt(s);
}

void check_options(const ScanOptions& opt) {
    if (!(opt.b > 0.0)) throw InvalidArgument("exponent b must be > 0");
    if (!(opt.R > 0.0) || !(opt.R < opt.T_max)) throw InvalidArgument("scan needs 0 < R < T_max");
    if (opt.c && !(*opt.c > 0.0)) throw InvalidArgument("margin c must be > 0");
}

int default_direction_count(int d) { return d == 1 ? 2 : (d == 2 ? 64 : 256); }

using Modulus = std::function<double(std::span<const double>)>;

// Slack scan along every ray; evidence is merged in direction order.
CramerCertificate radial_scan(int d, const Modulus& modulus, const ScanOptions& opt) {
    check_options(opt);
    const auto radii = scan_radii(opt.R, opt.T_max, opt.grid);
    const int count = opt.grid.directions > 0 ? opt.grid.directions : default_direction_count(d);
    const auto dirs = scan_directions(d, count);
    const auto dd = static_cast<std::size_t>(d);

    std::vector<std::vector<CfEvidence>> per_dir(dirs.size());
    parallel_for(dirs.size(), opt.grid.workers, [&](std::size_t di) {
        const auto& u = dirs[di];
        std::vector<double> t(dd);
        auto eval = [&](double r) {
            for (std::size_t k = 0; k < dd; ++k) t[k] = r * u[k];
            const double m = modulus(t);
            return CfEvidence{t, m, (1.0 - m) * std::pow(r, opt.b)};
        };
        auto& out = per_dir[di];
        out.reserve(radii.size());
        for (double r : radii) out.push_back(eval(r));
        if (!opt.grid.refine) return;
        const std::size_t m = radii.size();
        for (std::size_t k = 1; k + 1 < m; ++k) {
            if (!(out[k].slack <= out[k - 1].slack && out[k].slack <= out[k + 1].slack)) continue;
            constexpr double g = 0.6180339887498949;
            double a = radii[k - 1], b = radii[k + 1];
            double x1 = b - g * (b - a), x2 = a + g * (b - a);
            double f1 = eval(x1).slack, f2 = eval(x2).slack;
            for (int it = 0; it < 60 && b - a > 1e-13 * b; ++it) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - g * (b - a);
                    f1 = eval(x1).slack;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + g * (b - a);
                    f2 = eval(x2).slack;
                }
            }
            CfEvidence best = eval(f1 <= f2 ? x1 : x2);
            if (best.slack < out[k].slack) out.push_back(std::move(best));
        }
    });

    CramerCertificate cert;
    cert.b = opt.b;
    cert.R = opt.R;
    cert.T_max = opt.T_max;
    cert.c_hat = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (auto& block : per_dir) {
        for (auto& ev : block) {
            if (ev.slack < cert.c_hat) {
                cert.c_hat = ev.slack;
                arg = cert.evidence.size();
            }
            cert.evidence.push_back(std::move(ev));
        }
    }
    cert.c = opt.c.value_or(cert.c_hat);
    const bool violated = opt.c ? cert.c_hat < *opt.c : !(cert.c_hat > 0.0);
    if (violated) {
        cert.status = CertStatus::Violated;
        cert.witness = cert.evidence[arg];
    } else {
        cert.status = CertStatus::CertifiedOnGrid;
    }
    return cert;
}

// S(t) from projections p_i = t'u_i.
double s_from_projections(std::span<const double> p) {
    const std::size_t n = p.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) sum += xi_wrap(p[i] - p[j]);
    }
    const auto nn = static_cast<double>(n);
    return 2.0 * sum / (pi_sq * nn * (nn - 1.0));
}

std::vector<double> projections(const Dataset& data, std::span<const double> t) {
    if (t.size() != data.dimension()) throw InvalidArgument("t dimension does not match dataset");
    std::vector<double> p(data.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto u = data.point(i);
        double s = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) s += t[k] * u[k];
        p[i] = s;
    }
    return p;
}

} // namespace

std::string to_string(CertStatus s) {
    switch (s) {
    case CertStatus::CertifiedOnGrid: return "certified-on-grid";
    case CertStatus::Violated: return "violated";
    case CertStatus::CertifiedByUstat: return "certified-by-ustat";
    }
    return "unknown";
}

std::vector<std::vector<double>> scan_directions(int d, int count) {
    if (d < 1 || count < 1) throw InvalidArgument("scan needs d >= 1 and at least one direction");
    std::vector<std::vector<double>> out;
    if (d == 1) {
        out.push_back({1.0});
        if (count > 1) out.push_back({-1.0});
        return out;
    }
    if (d == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = two_pi * i / count;
            out.push_back({std::cos(a), std::sin(a)});
        }
        return out;
    }
    if (d == 3) {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            out.push_back({rho * std::cos(golden_angle * i), rho * std::sin(golden_angle * i), z});
        }
        return out;
    }
    Stream rng(derive_seed(0x5ca1ab1e, {static_cast<std::uint64_t>(d)}));
    std::normal_distribution<double> normal;
    for (int i = 0; i < count; ++i) {
        std::vector<double> v(static_cast<std::size_t>(d));
        for (auto& x : v) x = normal(rng);
        const double nv = norm(v);
        for (auto& x : v) x /= nv;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> scan_radii(double R, double T_max, const ScanGrid& grid) {
    std::vector<double> r;
    if (grid.fixed_ratio) {
        const double q = *grid.fixed_ratio;
        if (!(q > 1.0)) throw InvalidArgument("fixed grid ratio must be > 1");
        for (int k = 1;; ++k) {
            const double v = R * std::pow(q, k);
            if (v > T_max) break;
            r.push_back(v);
        }
    } else {
        if (grid.radii < 1) throw InvalidArgument("grid needs at least one radius");
        for (int k = 1; k <= grid.radii; ++k) {
            r.push_back(R * std::pow(T_max / R, static_cast<double>(k) / grid.radii));
        }
    }
    if (r.empty()) throw InvalidArgument("scan grid is empty; refine the radial resolution");
    return r;
}

CramerCertificate weak_cramer_scan(const CharFunctionHandle& h, const ScanOptions& opt) {
    return radial_scan(h.dimension(), [&](std::span<const double> t) { return std::abs(h(t)); }, opt);
}

CramerCertificate mean_weak_cramer_scan(std::span<const CharFunctionHandle> hs, const ScanOptions& opt) {
    if (hs.empty()) throw InvalidArgument("mean scan needs at least one characteristic function");
    const int d = hs.front().dimension();
    for (const auto& h : hs) {
        if (h.dimension() != d) throw InvalidArgument("mean scan: handles have mixed dimensions");
    }
    return radial_scan(d,
                       [&](std::span<const double> t) {
                           double s = 0.0;
                           for (const auto& h : hs) s += std::abs(h(t));
                           return s / static_cast<double>(hs.size());
                       },
                       opt);
}

double xi_wrap(double x) {
    double r = x - two_pi * std::floor(x / two_pi + 0.5);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r * r;
}

double xi_wrap(std::span<const double> ui, std::span<const double> uj, std::span<const double> t) {
    if (ui.size() != uj.size() || ui.size() != t.size()) throw InvalidArgument("xi_wrap dimension mismatch");
    double x = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) x += t[k] * (ui[k] - uj[k]);
    return xi_wrap(x);
}

UstatRecord ustat_certificate(const Dataset& data, std::span<const double> t, double b) {
    if (data.size() < 2) throw InvalidArgument("U-statistic certificate needs n >= 2");
    const auto p = projections(data, t);
    UstatRecord rec;
    rec.t.assign(t.begin(), t.end());
    rec.S = s_from_projections(p);
    double re = 0.0, im = 0.0;
    for (double v : p) {
        re += std::cos(v);
        im += std::sin(v);
    }
    const auto nn = static_cast<double>(p.size());
    rec.one_minus_modulus = 1.0 - std::hypot(re / nn, im / nn);
    rec.slack = rec.S * std::pow(norm(t), b);
    rec.holds = rec.one_minus_modulus >= rec.S - 1e-12;
    return rec;
}

CramerCertificate ustat_scan(const Dataset& data, const ScanOptions& opt) {
    check_options(opt);
    if (data.size() < 2) throw InvalidArgument("U-statistic certificate needs n >= 2");
    const int d = static_cast<int>(data.dimension());
    const auto radii = scan_radii(opt.R, opt.T_max, opt.grid);
    const int count = opt.grid.directions > 0 ? opt.grid.directions : default_direction_count(d);
    const auto dirs = scan_directions(d, count);

    std::vector<std::vector<CfEvidence>> per_dir(dirs.size());
    parallel_for(dirs.size(), opt.grid.workers, [&](std::size_t di) {
        std::vector<double> t(dirs[di].size());
        for (double r : radii) {
            for (std::size_t k = 0; k < t.size(); ++k) t[k] = r * dirs[di][k];
            const auto rec = ustat_certificate(data, t, opt.b);
            per_dir[di].push_back({t, 1.0 - rec.one_minus_modulus, rec.slack});
        }
    });
    CramerCertificate cert;
    cert.b = opt.b;
    cert.R = opt.R;
    cert.T_max = opt.T_max;
    double s_min = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (auto& block : per_dir) {
        for (auto& ev : block) {
            if (ev.slack < s_min) {
                s_min = ev.slack;
                arg = cert.evidence.size();
            }
            cert.evidence.push_back(std::move(ev));
        }
    }
    cert.S_value = s_min;
    cert.c_hat = s_min;
    cert.c = opt.c.value_or(s_min);
    if (s_min > 0.0 && s_min >= cert.c) {
        cert.status = CertStatus::CertifiedByUstat;
    } else {
        cert.status = CertStatus::Violated;
        cert.witness = cert.evidence[arg];
    }
    return cert;
}

UstatEstimate c_kr_estimate(const Dataset& data, int k, double r, std::size_t coord) {
    const std::size_t n = data.size();
    if (n < 2) throw InvalidArgument("c(k; r) estimate needs n >= 2");
    if (!(r > 0.0)) throw InvalidArgument("c(k; r) estimate needs r > 0");
    if (coord >= data.dimension()) throw InvalidArgument("coordinate out of range");
    const bool even = k % 2 == 0;
    const double lo = r * k, hi = r * (k + 1);
    auto kernel = [&](double delta) {
        if (even) return (delta > lo && delta < hi) ? (delta - lo) * (delta - lo) : 0.0;
        return (delta > lo && delta <= hi) ? (delta - hi) * (delta - hi) : 0.0;
    };
    const auto x = data.column(coord);
    std::vector<double> h1(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = kernel(x[i] - x[j]) + kernel(x[j] - x[i]);
            total += v;
            h1[i] += v;
            h1[j] += v;
        }
    }
    const auto nn = static_cast<double>(n);
    const double mean = total / (nn * (nn - 1.0));
    double var = 0.0;
    for (double v : h1) {
        const double c = v / (2.0 * (nn - 1.0)) - mean;
        var += c * c;
    }
    var /= nn;
    return {mean, std::sqrt(4.0 * var / nn)};
}

GridMax c_r_lower_bound(const Dataset& data, double R, std::span<const std::vector<double>> t_grid) {
    if (t_grid.empty()) throw InvalidArgument("c_R bound needs a nonempty t grid");
    if (data.size() < 2) throw InvalidArgument("c_R bound needs n >= 2");
    GridMax best{-1.0, {}};
    for (const auto& t : t_grid) {
        if (!(norm(t) > R)) throw InvalidArgument("every grid point must satisfy |t| > R");
        // mean xi over ordered pairs is pi^2 S(t)
        const double v = 0.5 * s_from_projections(projections(data, t));
        if (v > best.value) best = {v, t};
    }
    return best;
}

double failure_prob_bound(double c_R, std::int64_t n) {
    if (!(c_R > 0.0)) throw InvalidArgument("c_R must be > 0");
    if (n < 1) throw InvalidArgument("n must be >= 1");
    return std::exp(-c_R * c_R * static_cast<double>(n) / 2.0);
}

std::string certificate_json(const CramerCertificate& cert, bool include_evidence, int indent) {
    nlohmann::ordered_json doc;
    doc["status"] = to_string(cert.status);
    doc["b"] = cert.b;
    doc["c"] = cert.c;
    doc["R"] = cert.R;
    doc["T_max"] = cert.T_max;
    doc["c_hat"] = cert.c_hat;
    doc["grid_points"] = cert.evidence.size();
    if (cert.witness) {
        doc["witness"] = {{"t", cert.witness->t}, {"modulus", cert.witness->modulus}, {"slack", cert.witness->slack}};
    }
    if (cert.S_value) doc["S_value"] = *cert.S_value;
    if (cert.prob_bound) doc["prob_bound"] = *cert.prob_bound;
    if (include_evidence) {
        auto ev = nlohmann::ordered_json::array();
        for (const auto& e : cert.evidence) ev.push_back({{"t", e.t}, {"modulus", e.modulus}, {"slack", e.slack}});
        doc["evidence"] = std::move(ev);
    }
    return doc.dump(indent);
}

} // namespace uedge
