#pragma once

#include "uedge/families.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uedge {

/// Empirical CDF of zeta_n = V^{-1/2}(S_n - n mu)/sqrt(n) on a grid.
struct SumCdf {
    std::vector<double> t;
    std::vector<double> cdf;
    std::uint64_t M = 0;
    double half_width = 0.0; ///< DKW 99% half-width sqrt(ln(200) / (2M))
};

/// DKW 99% half-width for M draws.
double dkw_half_width(std::uint64_t M);

/// M realizations of the standardized sum of n draws (sampled directly when
/// the family provides a sum sampler). `seed` identifies the cell; chunks of
/// draws get derived streams, so the result does not depend on `workers`.
/// Throws DimensionError for d != 1, StandardizationError for singular V.
SumCdf exact_sum_cdf_mc(const Family& f, std::int64_t n, std::uint64_t M, std::span<const double> t_grid,
                        std::uint64_t seed, unsigned workers = 1);

/// Default interval-class grid: 401 points on [-5, 5].
std::vector<double> default_t_grid();

enum class StudyMode { Theorem1, Theorem2 };

struct RateStudyConfig {
    std::string family;
    std::vector<double> theta;
    std::size_t theta_index = 0;
    int s = 3;
    std::vector<std::int64_t> n_grid{25, 50, 100, 200, 400};
    std::uint64_t M = 1'000'000;     ///< sums per n (theorem-1 mode)
    std::uint64_t B = 1'000'000;     ///< bootstrap draws per n (theorem-2 mode)
    int reps = 1;
    StudyMode mode = StudyMode::Theorem1;
    std::uint64_t seed = 1;
    std::vector<double> t_grid = default_t_grid();
    unsigned workers = 1;
};

struct StudyRecord {
    std::string family;
    std::string theta;     ///< parameters joined by ';', "max" for sweep maxima
    std::int64_t n = 0;
    int rep = 0;
    int s = 0;
    std::string metric;
    double value = 0.0;
    double mc_se = 0.0;
    std::string flag;      ///< "ok" or "inconclusive"
    std::uint64_t seed = 0;

    bool operator==(const StudyRecord&) const = default;
};

struct SlopeFit {
    std::string metric;
    int s = 0;
    double slope = 0.0;     ///< NaN with fewer than two usable points
    double std_error = 0.0; ///< NaN with fewer than three usable points
    int points = 0;

    bool operator==(const SlopeFit&) const = default;
};

struct StudyReport {
    std::string version;
    std::string config_hash;
    std::vector<StudyRecord> records;
    std::vector<SlopeFit> slopes;
    std::vector<std::string> notes;
};

/// OLS of log(value) on log(n) over records with the given metric and s
/// whose flag is not "inconclusive".
SlopeFit fit_slope(std::span<const StudyRecord> records, const std::string& metric, int s);

/// Canonical JSON of a config and its FNV-1a hash.
std::string config_json(const RateStudyConfig& cfg);
std::string config_hash(std::string_view canonical);

/// Theorem-1 mode: sup over the t grid of |Q_hat_n - Q~_{n,s}| with closed-form
/// cumulants (metric "sup_dev"), for s and for the s = 2 baseline.
/// Theorem-2 mode: the same with bootstrap draws from a sampled dataset
/// against the empirical-cumulant expansion. Records whose DKW band exceeds
/// the metric are flagged "inconclusive".
/// Throws InvalidArgument unless the n grid is strictly increasing with >= 4 points.
StudyReport rate_study(const RateStudyConfig& cfg, const FamilyRegistry& registry);

struct SweepConfig {
    RateStudyConfig base;                   ///< family, s, grids, budgets, seed
    std::vector<std::vector<double>> theta_grid;
    double rho_bar = 50.0;                  ///< moment cap for the s-th standardized absolute moment proxy
};

/// Runs rate_study for every admissible theta (seeded by theta index) and
/// adds per-n records "max_sup_dev" (theta "max") with their slopes. Thetas
/// whose moment proxy exceeds rho_bar are rejected with a note.
StudyReport uniform_sweep(const SweepConfig& cfg, const FamilyRegistry& registry);

/// Seed of the (family, theta index, n, rep) cell.
std::uint64_t cell_seed(std::uint64_t master, const std::string& family, std::size_t theta_index, std::int64_t n,
                        int rep);

std::string theta_label(std::span<const double> theta);

} // namespace uedge
