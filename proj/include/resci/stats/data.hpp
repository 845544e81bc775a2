#pragma once

#include <Eigen/Dense>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace resci::stats {

/// Raised when a matrix that must be inverted is numerically singular.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV problem with its 1-based row (line) and column position.
class DataParseError : public std::runtime_error {
public:
    DataParseError(int row, int column, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
          row_(row),
          column_(column) {}
    int row() const { return row_; }
    int column() const { return column_; }

private:
    int row_;
    int column_;
};

/// n samples by d variables with column names. Requires n >= 2, d >= 2 and
/// finite values.
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {});

    int num_samples() const { return static_cast<int>(values_.rows()); }
    int num_variables() const { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& names() const { return names_; }

    /// Column index for a name, or nullopt.
    std::optional<int> find(const std::string& name) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
};

/// Comma-separated values with a header row of column names.
DataMatrix read_csv(std::istream& in);
DataMatrix read_csv_file(const std::string& path);
/// Values printed with 17 significant digits, so read_csv restores them exactly.
void write_csv(std::ostream& out, const DataMatrix& data);

}  // namespace resci::stats
