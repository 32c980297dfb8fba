#pragma once

#include "uedge/dataset.hpp"
#include "uedge/edgeworth.hpp"
#include "uedge/error.hpp"
#include "uedge/jet.hpp"
#include "uedge/linalg.hpp"
#include "uedge/set_spec.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uedge {

struct SampleStats {
    std::size_t n = 0;
    int s = 0;
    Vector mean;
    Matrix cov;                     ///< (1/n) sum (X_i - mean)(X_i - mean)'
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double abs_moment = 0.0;        ///< (1/n) sum |X_i|^s
    double max_mixed_moment = 0.0;  ///< max over 1 <= |v| <= s of (1/n) sum prod_k |X_ik|^{v_k}
};

/// Throws InvalidArgument when n < 2 or s < 1.
SampleStats sample_stats(const Dataset& data, int s);

struct EventThresholds {
    double rho_bar = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
};

struct EventFlags {
    bool e0 = false;
    double e0_stat = 0.0;        ///< (1/n) sum |X_i|^s, checked <= rho_bar
    bool e1 = false;
    double e1_stat = 0.0;        ///< lambda_min, checked >= c1
    bool e2 = false;
    double e2_stat = 0.0;        ///< max mixed moment, checked <= c2
    bool e3 = false;
    std::optional<double> e3_jet_max; ///< max |D^alpha g(X_bar)| over |alpha| <= s + 3 (d = 2 only)
    double e3_lambda_max = 0.0;  ///< checked <= c3
};

/// e3 uses the g jet at X_bar with w_bar = X_bar_1 when d = 2, otherwise
/// only lambda_max. Throws SingularityError when the d = 2 base point has
/// x2 <= x1^2, InvalidArgument for nonpositive thresholds.
EventFlags event_checks(const Dataset& data, int s, const EventThresholds& th);

/// B standardized bootstrap means sqrt(n) V^{-1/2}(X_bar* - X_bar), row-major B x d.
struct BootstrapDraws {
    std::size_t dimension = 0;
    std::vector<double> values;

    std::size_t size() const noexcept { return dimension ? values.size() / dimension : 0; }
    std::span<const double> draw(std::size_t b) const { return {values.data() + b * dimension, dimension}; }
};

/// Draw b uses its own stream derived from (seed, b), so results do not
/// depend on `workers`. Throws StandardizationError for singular V_hat
/// (including n = 1), InvalidArgument for B = 0.
BootstrapDraws bootstrap_draws(const Dataset& data, std::size_t B, std::uint64_t seed, unsigned workers = 1);

/// Expansion from the cumulants of the V_hat^{-1/2}-standardized centered
/// empirical measure, at sample size n.
EdgeworthExpansion empirical_edgeworth(const Dataset& data, int s);

/// Empirical measure of a point cloud; 1-D clouds keep a sorted copy for CDF queries.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(const BootstrapDraws& draws);
    EmpiricalMeasure(std::size_t dimension, std::vector<double> points);

    std::size_t size() const noexcept { return count_; }
    std::size_t dimension() const noexcept { return dimension_; }
    double measure(const SetSpec& A) const;
    /// Mass of {x : dist(x, A) <= eta}.
    double enlarged_measure(const SetSpec& A, double eta) const;
    /// P(X <= t) for d = 1.
    double cdf(double t) const;

private:
    std::size_t dimension_;
    std::size_t count_;
    std::vector<double> points_;
    std::vector<double> sorted_;
};

struct DeviationRecord {
    std::size_t member = 0;
    double q_emp = 0.0;
    double q_tilde = 0.0;
    double abs_dev = 0.0;
};

struct SupDeviation {
    double value = 0.0;
    std::size_t argmax = 0;
    std::vector<DeviationRecord> records;
};

/// max over members of |q_emp(A) - q_tilde(A)|; throws InvalidArgument for an empty class.
template <class Member, class F, class G>
SupDeviation sup_deviation(std::span<const Member> members, F&& q_emp, G&& q_tilde);

/// Q_emp(A^eta) - Q_emp(A). Throws InvalidArgument for eta < 0.
double enlargement_deviation(const SetSpec& A, double eta, const EmpiricalMeasure& q_emp);

// ---------------------------------------------------------------- t statistic

struct TstatDraws {
    std::size_t requested = 0;
    std::size_t degenerate = 0;  ///< resamples with all values equal (s* = 0), excluded
    std::vector<double> values;  ///< non-degenerate T*, in draw order
};

/// T* = sqrt(n)(W_bar* - W_bar)/s*, s*^2 = (1/n) sum (W* - W_bar*)^2.
/// Throws InvalidArgument when all W are equal or B = 0.
TstatDraws tstat_bootstrap(const Dataset& W, std::size_t B, std::uint64_t seed, unsigned workers = 1);

/// x -> sqrt(n) g(X_bar + V_hat^{1/2} x / sqrt(n)) for the (W, W^2) sample
/// moments, and the indicator f_t(x) = 1{... <= t}.
class TstatFunctional {
public:
    /// `stats` must come from 2-D data; throws InvalidArgument otherwise and
    /// StandardizationError when V_hat is singular.
    TstatFunctional(const SampleStats& stats, double w_bar);

    /// Empty outside the domain of g.
    std::optional<double> value(std::span<const double> x) const;
    /// 0 and ++singular when the shifted point leaves the domain of g.
    int indicator(double t, std::span<const double> x, std::uint64_t& singular) const;

    std::size_t sample_size() const noexcept { return n_; }

private:
    Vector mean_;
    Matrix root_;
    double w_bar_;
    std::size_t n_;
};

/// f_hat_{n,t}(x) with its singular-set counter.
int fhat_indicator(double t, std::span<const double> x, const TstatFunctional& f, std::uint64_t& singular);

struct TstatMeasureCurve {
    std::vector<double> t;
    std::vector<double> value;
    std::vector<double> std_error;
    std::uint64_t samples = 0;
    std::uint64_t singular = 0;
};

/// Gaussian-importance MC estimate of Q~(f_hat_{n,t}) on a t grid with common
/// random numbers. Throws InvalidArgument for a zero budget or d != 2.
TstatMeasureCurve edgeworth_tstat_measure(std::span<const double> t_grid, const EdgeworthExpansion& e,
                                          const TstatFunctional& f, std::uint64_t samples,
                                          std::uint64_t seed, unsigned workers = 1);

/// Single-t convenience wrapper.
struct TstatMeasure {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t singular = 0;
};
TstatMeasure edgeworth_tstat_measure(double t, const EdgeworthExpansion& e, const TstatFunctional& f,
                                     std::uint64_t samples, std::uint64_t seed);

/// Empirical CDF of the non-degenerate T* draws.
double tstat_cdf(const std::vector<double>& sorted_values, double t);

// ---------------------------------------------------------------- template

template <class Member, class F, class G>
SupDeviation sup_deviation(std::span<const Member> members, F&& q_emp, G&& q_tilde) {
    if (members.empty()) throw InvalidArgument("sup deviation over an empty class");
    SupDeviation out;
    out.records.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double a = q_emp(members[i]);
        const double b = q_tilde(members[i]);
        const double dev = std::abs(a - b);
        out.records.push_back({i, a, b, dev});
        if (dev > out.value || i == 0) {
            out.value = dev;
            out.argmax = i;
        }
    }
    return out;
}

} // namespace uedge
