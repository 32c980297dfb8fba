#pragma once

#include "uedge/char_function.hpp"
#include "uedge/dataset.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uedge {

/// Radial-shell grid over R < |t| <= T_max.
struct ScanGrid {
    int radii = 512;          ///< geometric radii R (T_max/R)^{k/radii}, k = 1..radii
    int directions = 0;       ///< 0: 2 (d=1), 64 (d=2), 256 (d>=3)
    /// When set, radii are R q^k for k >= 1 up to T_max, so grids for
    /// growing T_max are nested.
    std::optional<double> fixed_ratio;
    /// Golden-section refinement of every interior local minimum along each ray.
    bool refine = true;
    unsigned workers = 1;
};

struct ScanOptions {
    double b = 1.0;
    double R = 1.0;
    double T_max = 200.0;
    std::optional<double> c; ///< margin to test; without it the certificate uses c = c_hat
    ScanGrid grid;
};

struct CfEvidence {
    std::vector<double> t;
    double modulus;   ///< |phi(t)| (mean modulus for the mean-weak scan)
    double slack;     ///< (1 - modulus) |t|^b
};

enum class CertStatus { CertifiedOnGrid, Violated, CertifiedByUstat };
std::string to_string(CertStatus s);

struct CramerCertificate {
    double b = 1.0;
    double c = 0.0;
    double R = 1.0;
    double T_max = 0.0;
    double c_hat = 0.0;                   ///< minimum slack over the evidence
    std::vector<CfEvidence> evidence;
    CertStatus status = CertStatus::CertifiedOnGrid;
    std::optional<CfEvidence> witness;    ///< set when status == Violated
    std::optional<double> S_value;        ///< smallest S(t)|t|^b over the grid (ustat route)
    std::optional<double> prob_bound;
};

/// Unit directions used by the scanner for dimension d.
std::vector<std::vector<double>> scan_directions(int d, int count);
/// Radii used by the scanner; throws InvalidArgument if empty.
std::vector<double> scan_radii(double R, double T_max, const ScanGrid& grid);

/// Throws InvalidArgument unless 0 < R < T_max and b > 0, or when the grid is empty.
CramerCertificate weak_cramer_scan(const CharFunctionHandle& h, const ScanOptions& opt);
/// Scan of t -> (1/n) sum_i |phi_i(t)|. Throws InvalidArgument for an empty
/// list or mixed dimensions.
CramerCertificate mean_weak_cramer_scan(std::span<const CharFunctionHandle> hs, const ScanOptions& opt);

/// (t'(u_i - u_j) wrapped to (-pi, pi])^2.
double xi_wrap(std::span<const double> ui, std::span<const double> uj, std::span<const double> t);
double xi_wrap(double projected_difference);

struct UstatRecord {
    std::vector<double> t;
    double S = 0.0;                ///< (1/(pi^2 n(n-1))) sum_{i != j} xi
    double one_minus_modulus = 0.0;
    double slack = 0.0;            ///< S |t|^b
    bool holds = true;             ///< 1 - |phi_emp(t)| >= S - 1e-12
};

/// Throws InvalidArgument when n < 2.
UstatRecord ustat_certificate(const Dataset& data, std::span<const double> t, double b);

/// Evaluates S(t) on the scan grid. Status is certified-by-ustat when
/// S(t)|t|^b >= c on every grid point (c defaults to the grid minimum).
CramerCertificate ustat_scan(const Dataset& data, const ScanOptions& opt);

struct UstatEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Pairwise U-statistic estimate of c_P(k; r) from coordinate `coord`:
/// even k: E[(D - rk)^2 1{rk < D < r(k+1)}], odd k: E[(D - r(k+1))^2 1{rk < D <= r(k+1)}],
/// D the difference of two independent draws. Throws InvalidArgument for n < 2 or r <= 0.
UstatEstimate c_kr_estimate(const Dataset& data, int k, double r, std::size_t coord = 0);

struct GridMax {
    double value = 0.0;
    std::vector<double> argmax;
};

/// max over t_grid of (1/(2 pi^2)) * mean_{i != j} xi(u_i, u_j; t).
/// Throws InvalidArgument for an empty grid, n < 2, or a grid point with |t| <= R.
GridMax c_r_lower_bound(const Dataset& data, double R, std::span<const std::vector<double>> t_grid);

/// exp(-c_R^2 n / 2). Throws InvalidArgument unless c_R > 0 and n >= 1.
double failure_prob_bound(double c_R, std::int64_t n);

/// JSON certificate with the evidence table.
std::string certificate_json(const CramerCertificate& cert, bool include_evidence = true, int indent = 2);

} // namespace uedge
