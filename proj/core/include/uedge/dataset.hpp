#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uedge {

struct Provenance {
    std::string family;
    std::optional<std::uint64_t> seed;
};

/// n points in R^d stored row-major. Always n >= 1 with finite coordinates.
class Dataset {
public:
    Dataset(std::size_t dimension, std::vector<double> values, Provenance provenance = {});

    /// One-dimensional dataset from a list of values.
    static Dataset from_values(std::vector<double> values, Provenance provenance = {});
    static Dataset from_rows(const std::vector<std::vector<double>>& rows, Provenance provenance = {});

    std::size_t size() const noexcept { return values_.size() / dimension_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::span<const double> point(std::size_t i) const {
        return {values_.data() + i * dimension_, dimension_};
    }
    double operator()(std::size_t i, std::size_t k) const { return values_[i * dimension_ + k]; }
    std::span<const double> values() const noexcept { return values_; }
    const Provenance& provenance() const noexcept { return provenance_; }

    /// Copy with every point translated by `shift`.
    Dataset shifted(std::span<const double> shift) const;
    /// Copy with every coordinate multiplied by `factor`.
    Dataset scaled(double factor) const;
    /// Column k as a vector.
    std::vector<double> column(std::size_t k) const;

private:
    std::size_t dimension_;
    std::vector<double> values_;
    Provenance provenance_;
};

/// Reads a CSV file with one point per row. A first row that does not parse
/// as numbers is treated as a header. Throws IoError / InvalidArgument.
Dataset read_csv(const std::filesystem::path& path);

void write_csv(const Dataset& data, const std::filesystem::path& path);

} // namespace uedge
