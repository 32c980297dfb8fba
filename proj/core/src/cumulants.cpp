#include "uedge/cumulants.hpp"

#include "uedge/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace uedge {

std::shared_ptr<const MultiIndexTable> canonical_table(int d, int max_order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{d, max_order}];
    if (!slot) {
        slot = std::make_shared<const MultiIndexTable>(enumerate_multi_indices(d, max_order));
    }
    return slot;
}

OrderTable::OrderTable(int d, int max_order, int min_order)
    : dimension_(d), max_order_(max_order), min_order_(min_order) {
    if (d < 1) throw InvalidArgument("dimension must be >= 1");
    if (max_order < min_order) throw InvalidArgument("max_order below the table's minimum order");
    table_ = canonical_table(d, max_order);
    offset_ = min_order == 0 ? 0 : canonical_table(d, min_order - 1)->size();
    values_.assign(table_->size() - offset_, 0.0);
}

std::size_t OrderTable::slot(const MultiIndex& nu) const {
    if (static_cast<int>(nu.dimension()) != dimension_) {
        throw InvalidArgument("multi-index dimension mismatch");
    }
    if (nu.order() < min_order_ || nu.order() > max_order_) {
        throw UnsupportedOrder("order " + std::to_string(nu.order()) + " outside table range [" +
                               std::to_string(min_order_) + ", " + std::to_string(max_order_) + "]");
    }
    return table_->find(nu) - offset_;
}

double OrderTable::at(const MultiIndex& nu) const { return values_[slot(nu)]; }

void OrderTable::set(const MultiIndex& nu, double value) { values_[slot(nu)] = value; }

std::span<const MultiIndex> OrderTable::indices() const {
    return std::span<const MultiIndex>(table_->indices()).subspan(offset_);
}

MomentSet::MomentSet(int d, int max_order) : OrderTable(d, max_order, 0) { values_[0] = 1.0; }

CumulantSet::CumulantSet(int d, int max_order) : OrderTable(d, std::max(max_order, 1), 1) {}

bool CumulantSet::standardized(double tol) const {
    const auto d = static_cast<std::size_t>(dimension_);
    if (max_order_ < 2) return false;
    for (std::size_t k = 0; k < d; ++k) {
        if (std::abs(at(MultiIndex::unit(d, k))) > tol) return false;
        for (std::size_t l = 0; l < d; ++l) {
            const double want = k == l ? 1.0 : 0.0;
            if (std::abs(at(MultiIndex::unit(d, k) + MultiIndex::unit(d, l)) - want) > tol) {
                return false;
            }
        }
    }
    return true;
}

CumulantSet& CumulantSet::operator+=(const CumulantSet& other) {
    if (other.dimension_ != dimension_ || other.max_order_ != max_order_) {
        throw InvalidArgument("cumulant tables differ in shape");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

CumulantSet& CumulantSet::operator*=(double scale) {
    for (double& v : values_) v *= scale;
    return *this;
}

MomentSet raw_moments(const Dataset& data, int max_order) {
    if (max_order < 0) throw InvalidArgument("max_order must be >= 0");
    const int d = static_cast<int>(data.dimension());
    MomentSet m(d, max_order);
    auto idx = m.indices();
    std::vector<double> sums(idx.size(), 0.0);
    std::vector<double> powers(static_cast<std::size_t>(d * (max_order + 1)));
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto x = data.point(i);
        for (int k = 0; k < d; ++k) {
            double p = 1.0;
            for (int e = 0; e <= max_order; ++e) {
                powers[static_cast<std::size_t>(k * (max_order + 1) + e)] = p;
                p *= x[static_cast<std::size_t>(k)];
            }
        }
        for (std::size_t j = 0; j < idx.size(); ++j) {
            double mono = 1.0;
            for (int k = 0; k < d; ++k) {
                mono *= powers[static_cast<std::size_t>(k * (max_order + 1) + idx[j][static_cast<std::size_t>(k)])];
            }
            sums[j] += mono;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (std::size_t j = 1; j < idx.size(); ++j) m.set(idx[j], sums[j] * inv_n);
    return m;
}

namespace {

std::size_t first_nonzero(const MultiIndex& nu) {
    for (std::size_t k = 0; k < nu.dimension(); ++k) {
        if (nu[k] > 0) return k;
    }
    return nu.dimension();
}

// All mu with mu <= bound entrywise.
std::vector<MultiIndex> sub_indices(const MultiIndex& bound) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(bound.dimension(), 0);
    for (;;) {
        out.emplace_back(cur);
        std::size_t k = 0;
        while (k < cur.size()) {
            if (cur[k] < bound[k]) {
                ++cur[k];
                break;
            }
            cur[k] = 0;
            ++k;
        }
        if (k == cur.size()) break;
    }
    return out;
}

} // namespace

CumulantSet moments_to_cumulants(const MomentSet& m) {
    if (std::abs(m.at(MultiIndex::zero(static_cast<std::size_t>(m.dimension()))) - 1.0) > 1e-12) {
        throw InvalidArgument("moment table must have unit total mass");
    }
    const auto d = static_cast<std::size_t>(m.dimension());
    CumulantSet c(m.dimension(), m.max_order());
    if (m.max_order() == 0) return c;
    for (const MultiIndex& nu : c.indices()) {
        const std::size_t k = first_nonzero(nu);
        const MultiIndex ek = MultiIndex::unit(d, k);
        const MultiIndex reduced = nu - ek;
        double acc = m.at(nu);
        for (const MultiIndex& mu : sub_indices(reduced)) {
            if (mu == reduced) continue; // kappa_nu itself
            acc -= multi_binomial(reduced, mu) * c.at(mu + ek) * m.at(reduced - mu);
        }
        c.set(nu, acc);
    }
    return c;
}

MomentSet cumulants_to_moments(const CumulantSet& c) {
    const auto d = static_cast<std::size_t>(c.dimension());
    MomentSet m(c.dimension(), c.max_order());
    for (const MultiIndex& nu : m.indices()) {
        if (nu.order() == 0) continue;
        const std::size_t k = first_nonzero(nu);
        const MultiIndex ek = MultiIndex::unit(d, k);
        const MultiIndex reduced = nu - ek;
        double acc = 0.0;
        for (const MultiIndex& mu : sub_indices(reduced)) {
            acc += multi_binomial(reduced, mu) * c.at(mu + ek) * m.at(reduced - mu);
        }
        m.set(nu, acc);
    }
    return m;
}

CumulantSet transform_cumulants(const CumulantSet& c, const Matrix& A) {
    const int d = c.dimension();
    if (A.rows() != d || A.cols() != d) throw InvalidArgument("transform must be d x d");
    CumulantSet out(d, c.max_order());
    std::vector<int> target;
    std::vector<int> source;
    std::vector<int> counts(static_cast<std::size_t>(d));
    for (const MultiIndex& nu : out.indices()) {
        const int r = nu.order();
        target.clear();
        for (int k = 0; k < d; ++k) target.insert(target.end(), static_cast<std::size_t>(nu[static_cast<std::size_t>(k)]), k);
        source.assign(static_cast<std::size_t>(r), 0);
        double acc = 0.0;
        for (;;) {
            double w = 1.0;
            std::fill(counts.begin(), counts.end(), 0);
            for (int p = 0; p < r; ++p) {
                w *= A(target[static_cast<std::size_t>(p)], source[static_cast<std::size_t>(p)]);
                ++counts[static_cast<std::size_t>(source[static_cast<std::size_t>(p)])];
            }
            if (w != 0.0) acc += w * c.at(MultiIndex(counts));
            int p = 0;
            while (p < r) {
                if (++source[static_cast<std::size_t>(p)] < d) break;
                source[static_cast<std::size_t>(p)] = 0;
                ++p;
            }
            if (p == r) break;
        }
        out.set(nu, acc);
    }
    return out;
}

CumulantSet averaged_standardized_cumulants(std::span<const CumulantSet> units, int s,
                                            const Matrix& V) {
    if (s < 2) throw InvalidArgument("cumulant order s must be >= 2");
    if (units.empty()) throw InvalidArgument("need at least one unit");
    const SymmetricRoot root = symmetric_root(V);
    const int d = units.front().dimension();
    if (V.rows() != d) throw InvalidArgument("covariance dimension mismatch");
    CumulantSet avg(d, s);
    for (const CumulantSet& u : units) {
        if (u.dimension() != d) throw InvalidArgument("units differ in dimension");
        if (u.max_order() < s) {
            throw UnsupportedOrder("unit cumulants available only to order " +
                                   std::to_string(u.max_order()));
        }
        CumulantSet truncated(d, s);
        for (const MultiIndex& nu : truncated.indices()) truncated.set(nu, u.at(nu));
        avg += transform_cumulants(truncated, root.inv_root);
    }
    avg *= 1.0 / static_cast<double>(units.size());
    return avg;
}

CumulantSet averaged_standardized_cumulants(const Dataset& data, int s, const Matrix& V) {
    if (s < 2) throw InvalidArgument("cumulant order s must be >= 2");
    const auto d = data.dimension();
    if (static_cast<std::size_t>(V.rows()) != d) throw InvalidArgument("covariance dimension mismatch");
    const SymmetricRoot root = symmetric_root(V);
    std::vector<double> y(data.values().size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        Eigen::Map<const Vector> x(data.point(i).data(), static_cast<Eigen::Index>(d));
        Eigen::Map<Vector>(y.data() + i * d, static_cast<Eigen::Index>(d)) = root.inv_root * x;
    }
    return moments_to_cumulants(raw_moments(Dataset(d, std::move(y)), s));
}

Polynomial chi_poly(int j, const CumulantSet& c) {
    if (j < 1 || j > c.max_order()) {
        throw UnsupportedOrder("chi_" + std::to_string(j) + " needs cumulants of order " +
                               std::to_string(j) + ", table has " + std::to_string(c.max_order()));
    }
    const auto d = static_cast<std::size_t>(c.dimension());
    Polynomial p(d);
    const double jf = factorial(j);
    for (const MultiIndex& nu : multi_indices_of_order(c.dimension(), j)) {
        p.add_term(nu, jf * c.at(nu) / nu.factorial());
    }
    return p;
}

} // namespace uedge
