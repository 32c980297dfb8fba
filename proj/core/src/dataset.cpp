#include "uedge/dataset.hpp"

#include "uedge/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uedge {

Dataset::Dataset(std::size_t dimension, std::vector<double> values, Provenance provenance)
    : dimension_(dimension), values_(std::move(values)), provenance_(std::move(provenance)) {
    if (dimension_ == 0) throw InvalidArgument("dataset dimension must be >= 1");
    if (values_.empty()) throw InvalidArgument("dataset must contain at least one point");
    if (values_.size() % dimension_ != 0) {
        throw InvalidArgument("dataset value count is not a multiple of the dimension");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("dataset coordinates must be finite");
    }
}

Dataset Dataset::from_values(std::vector<double> values, Provenance provenance) {
    return Dataset(1, std::move(values), std::move(provenance));
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows, Provenance provenance) {
    if (rows.empty()) throw InvalidArgument("dataset must contain at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw InvalidArgument("ragged dataset rows");
        values.insert(values.end(), r.begin(), r.end());
    }
    return Dataset(d, std::move(values), std::move(provenance));
}

Dataset Dataset::shifted(std::span<const double> shift) const {
    if (shift.size() != dimension_) throw InvalidArgument("shift dimension mismatch");
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift[i % dimension_];
    return Dataset(dimension_, std::move(v), provenance_);
}

Dataset Dataset::scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return Dataset(dimension_, std::move(v), provenance_);
}

std::vector<double> Dataset::column(std::size_t k) const {
    if (k >= dimension_) throw InvalidArgument("column index out of range");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, k);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        double v = 0.0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || p != cell.data() + cell.size()) return false;
        out.push_back(v);
    }
    return !out.empty();
}

} // namespace

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::vector<double> row;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!parse_row(line, row)) {
            if (rows.empty() && line_no == 1) continue; // header
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                                  ": non-numeric row");
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw InvalidArgument(path.string() + ": no data rows");
    return Dataset::from_rows(rows, Provenance{path.filename().string(), std::nullopt});
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path.string());
    char buf[32];
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t k = 0; k < data.dimension(); ++k) {
            if (k) out << ',';
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, data(i, k));
            out.write(buf, p - buf);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace uedge
