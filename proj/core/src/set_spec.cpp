#include "uedge/set_spec.hpp"

#include "uedge/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uedge {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void require_dim(std::span<const double> x, std::size_t d) {
    if (x.size() != d) throw InvalidArgument("point dimension does not match set dimension");
}

} // namespace

SetSpec::SetSpec(Shape shape) : shape_(std::move(shape)) {}

SetSpec SetSpec::half_line(double upper) {
    if (std::isnan(upper)) throw InvalidArgument("half-line endpoint is NaN");
    return SetSpec(HalfLine{upper});
}

SetSpec SetSpec::box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size()) {
        throw InvalidArgument("box bounds must be nonempty and of equal length");
    }
    for (std::size_t k = 0; k < lower.size(); ++k) {
        if (!(lower[k] <= upper[k])) throw InvalidArgument("box bounds must satisfy lower <= upper");
    }
    return SetSpec(Box{std::move(lower), std::move(upper)});
}

SetSpec SetSpec::ball(std::vector<double> center, double radius) {
    if (center.empty()) throw InvalidArgument("ball center must be nonempty");
    if (!(radius >= 0.0)) throw InvalidArgument("ball radius must be >= 0");
    return SetSpec(Ball{std::move(center), radius});
}

SetSpec SetSpec::half_space(std::vector<double> normal, double offset) {
    if (normal.empty() || norm(normal) == 0.0) throw InvalidArgument("half-space normal must be nonzero");
    return SetSpec(HalfSpace{std::move(normal), offset});
}

SetSpec SetSpec::whole_space(std::size_t d) {
    return box(std::vector<double>(d, -inf), std::vector<double>(d, inf));
}

std::size_t SetSpec::dimension() const {
    return std::visit(overloaded{[](const HalfLine&) -> std::size_t { return 1; },
                                 [](const Box& b) { return b.lower.size(); },
                                 [](const Ball& b) { return b.center.size(); },
                                 [](const HalfSpace& h) { return h.normal.size(); }},
                      shape_);
}

std::string SetSpec::kind_name() const {
    return std::visit(overloaded{[](const HalfLine&) { return std::string("half-line"); },
                                 [](const Box&) { return std::string("box"); },
                                 [](const Ball&) { return std::string("ball"); },
                                 [](const HalfSpace&) { return std::string("half-space"); }},
                      shape_);
}

std::string SetSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    auto vec = [&](const std::vector<double>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
        os << ']';
    };
    std::visit(overloaded{[&](const HalfLine& h) { os << "half-line(" << h.upper << ')'; },
                          [&](const Box& b) {
                              os << "box(";
                              vec(b.lower);
                              os << ',';
                              vec(b.upper);
                              os << ')';
                          },
                          [&](const Ball& b) {
                              os << "ball(";
                              vec(b.center);
                              os << ',' << b.radius << ')';
                          },
                          [&](const HalfSpace& h) {
                              os << "half-space(";
                              vec(h.normal);
                              os << ',' << h.offset << ')';
                          }},
               shape_);
    return os.str();
}

bool SetSpec::contains(std::span<const double> x) const {
    require_dim(x, dimension());
    return std::visit(overloaded{[&](const HalfLine& h) { return x[0] <= h.upper; },
                                 [&](const Box& b) {
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         if (x[k] < b.lower[k] || x[k] > b.upper[k]) return false;
                                     }
                                     return true;
                                 },
                                 [&](const Ball& b) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         s += (x[k] - b.center[k]) * (x[k] - b.center[k]);
                                     }
                                     return s <= b.radius * b.radius;
                                 },
                                 [&](const HalfSpace& h) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) s += h.normal[k] * x[k];
                                     return s <= h.offset;
                                 }},
                      shape_);
}

double SetSpec::distance_to(std::span<const double> x) const {
    require_dim(x, dimension());
    return std::visit(overloaded{[&](const HalfLine& h) { return std::max(0.0, x[0] - h.upper); },
                                 [&](const Box& b) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         const double e = std::max({b.lower[k] - x[k], 0.0, x[k] - b.upper[k]});
                                         s += e * e;
                                     }
                                     return std::sqrt(s);
                                 },
                                 [&](const Ball& b) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         s += (x[k] - b.center[k]) * (x[k] - b.center[k]);
                                     }
                                     return std::max(0.0, std::sqrt(s) - b.radius);
                                 },
                                 [&](const HalfSpace& h) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) s += h.normal[k] * x[k];
                                     return std::max(0.0, (s - h.offset) / norm(h.normal));
                                 }},
                      shape_);
}

double SetSpec::boundary_distance(std::span<const double> x) const {
    require_dim(x, dimension());
    return std::visit(overloaded{[&](const HalfLine& h) { return std::abs(x[0] - h.upper); },
                                 [&](const Box& b) {
                                     if (!contains(x)) return distance_to(x);
                                     double m = inf;
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         m = std::min({m, x[k] - b.lower[k], b.upper[k] - x[k]});
                                     }
                                     return m;
                                 },
                                 [&](const Ball& b) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) {
                                         s += (x[k] - b.center[k]) * (x[k] - b.center[k]);
                                     }
                                     return std::abs(std::sqrt(s) - b.radius);
                                 },
                                 [&](const HalfSpace& h) {
                                     double s = 0.0;
                                     for (std::size_t k = 0; k < x.size(); ++k) s += h.normal[k] * x[k];
                                     return std::abs(s - h.offset) / norm(h.normal);
                                 }},
                      shape_);
}

bool SetSpec::in_enlargement(std::span<const double> x, double eta) const {
    if (!(eta >= 0.0)) throw InvalidArgument("enlargement radius must be >= 0");
    return distance_to(x) <= eta;
}

namespace {

double bound_from_json(const nlohmann::json& v, double if_null) {
    if (v.is_null()) return if_null;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return inf;
        if (s == "-inf") return -inf;
        throw InvalidArgument("unrecognized bound string: " + s);
    }
    return v.get<double>();
}

std::vector<double> bounds_from_json(const nlohmann::json& arr, double if_null) {
    std::vector<double> out;
    for (const auto& v : arr) out.push_back(bound_from_json(v, if_null));
    return out;
}

} // namespace

std::vector<SetSpec> parse_set_specs(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("set spec JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidArgument("set spec JSON must be an array");
    std::vector<SetSpec> out;
    try {
        for (const auto& item : doc) {
            const auto kind = item.at("kind").get<std::string>();
            if (kind == "half-line") {
                out.push_back(SetSpec::half_line(bound_from_json(item.at("upper"), inf)));
            } else if (kind == "box") {
                out.push_back(SetSpec::box(bounds_from_json(item.at("lower"), -inf),
                                           bounds_from_json(item.at("upper"), inf)));
            } else if (kind == "ball") {
                out.push_back(SetSpec::ball(item.at("center").get<std::vector<double>>(),
                                            item.at("radius").get<double>()));
            } else if (kind == "half-space") {
                out.push_back(SetSpec::half_space(item.at("normal").get<std::vector<double>>(),
                                                  item.at("offset").get<double>()));
            } else {
                throw InvalidArgument("unknown set kind: " + kind);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("set spec JSON: ") + e.what());
    }
    return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument("grid needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

std::vector<SetSpec> half_line_class(std::span<const double> t_grid) {
    std::vector<SetSpec> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(SetSpec::half_line(t));
    return out;
}

} // namespace uedge
