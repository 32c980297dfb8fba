#pragma once

#include "uedge/char_function.hpp"
#include "uedge/cumulants.hpp"
#include "uedge/dataset.hpp"
#include "uedge/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uedge {

/// A sampling law with optional closed forms.
struct Family {
    std::string name;
    int dimension = 1;
    std::vector<double> theta;
    bool lattice = false;

    /// One draw into `out` (size dimension).
    std::function<void(Stream&, std::span<double>)> sample;
    /// Raw moments E[X^nu] for |nu| <= order, when known in closed form.
    std::function<MomentSet(int)> moments;
    std::optional<CharFunctionHandle> cf;
    /// Sum of n independent draws into `out`, when it can be drawn directly.
    std::function<void(Stream&, std::int64_t, std::span<double>)> sample_sum;

    bool has_moments() const { return static_cast<bool>(moments); }
    Dataset draw(std::size_t n, std::uint64_t seed) const;
};

/// Mean and covariance from the closed-form moments, or from a pilot sample
/// of `pilot` draws when the family has none.
struct FamilyMoments {
    Vector mean;
    Matrix cov;
};
FamilyMoments family_mean_cov(const Family& f, std::uint64_t pilot = 1'000'000, std::uint64_t seed = 7);

/// Cumulants of V^{-1/2}(X - mu) up to order s. Throws InvalidArgument when
/// the family has no closed-form moments.
CumulantSet standardized_family_cumulants(const Family& f, int s);

/// Moment proxy (E|Z|^{2k})^{s/(2k)}, k = ceil(s/2), for the standardized
/// law Z; an upper bound for E|Z|^s. Infinite when unavailable.
double moment_proxy(const Family& f, int s);

class FamilyRegistry {
public:
    using Factory = std::function<Family(const std::vector<double>& theta)>;

    struct Entry {
        std::string description;
        std::vector<double> default_theta;
        Factory factory;
    };

    void add(std::string name, Entry entry);
    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    std::vector<std::string> names() const;
    const Entry& entry(const std::string& name) const;
    /// Builds the family; an empty theta selects the default. Throws InvalidArgument for unknown names.
    Family make(const std::string& name, const std::vector<double>& theta = {}) const;

private:
    std::map<std::string, Entry> entries_;
};

/// gaussian, bernoulli(1/2) (lattice), three-point-irrational ({0, 1, sqrt 2}),
/// centered-exponential, centered-gamma (theta = shape, standardized),
/// gaussian-mixture (theta = weight of N(0,1) against N(3, 0.25)),
/// exp-t-pair ((W, W^2) for centered-exponential W).
FamilyRegistry register_builtin_families();

struct SelfTestRow {
    MultiIndex nu;
    double analytic = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    bool ok = true;
};

/// Compares closed-form cumulants up to `order` with sample cumulants from
/// `samples` draws; standard errors from 50 batch means, tolerance 4 sigma.
std::vector<SelfTestRow> family_self_test(const Family& f, int order, std::uint64_t samples = 1'000'000,
                                          std::uint64_t seed = 11);

} // namespace uedge
