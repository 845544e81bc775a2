#include "resci/stats/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string_view>

namespace resci::stats {

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
    if (values_.rows() < 2) throw std::invalid_argument("data needs at least 2 samples");
    if (values_.cols() < 2) throw std::invalid_argument("data needs at least 2 variables");
    if (!values_.allFinite()) throw std::invalid_argument("data contains non-finite values");
    if (names_.empty()) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) names_.push_back("X" + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw std::invalid_argument("column name count does not match data");
    }
}

std::optional<int> DataMatrix::find(const std::string& name) const {
    for (std::size_t j = 0; j < names_.size(); ++j)
        if (names_[j] == name) return static_cast<int>(j);
    return std::nullopt;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
    return s;
}

}  // namespace

DataMatrix read_csv(std::istream& in) {
    std::string line;
    int row = 0;
    std::vector<std::string> names;
    while (names.empty() && std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        for (auto field : split_commas(line)) names.emplace_back(trim(field));
    }
    if (names.empty()) throw DataParseError(row, 0, "missing header row");
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j].empty()) throw DataParseError(row, static_cast<int>(j + 1), "empty column name");
    }

    std::vector<double> flat;
    int samples = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != names.size()) {
            throw DataParseError(row, static_cast<int>(std::min(fields.size(), names.size()) + 1),
                                 "expected " + std::to_string(names.size()) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string_view cell = trim(fields[j]);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
                throw DataParseError(row, static_cast<int>(j + 1), "not a finite number: '" + std::string(cell) + "'");
            }
            flat.push_back(value);
        }
        ++samples;
    }
    const auto d = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd values(samples, d);
    for (Eigen::Index r = 0; r < samples; ++r)
        for (Eigen::Index c = 0; c < d; ++c) values(r, c) = flat[static_cast<std::size_t>(r * d + c)];
    if (samples < 2) throw DataParseError(row, 0, "data needs at least 2 samples");
    if (d < 2) throw DataParseError(1, 0, "data needs at least 2 columns");
    return DataMatrix(std::move(values), std::move(names));
}

DataMatrix read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

void write_csv(std::ostream& out, const DataMatrix& data) {
    const auto& names = data.names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index r = 0; r < data.values().rows(); ++r) {
        for (Eigen::Index c = 0; c < data.values().cols(); ++c) out << (c ? "," : "") << data.values()(r, c);
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace resci::stats
