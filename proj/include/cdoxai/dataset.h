#ifndef CDOXAI_DATASET_H_
#define CDOXAI_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace cdoxai {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  void AppendRow(std::span<const double> values);

  // Rows picked by `indices`, in that order.
  Matrix Select(std::span<const std::size_t> indices) const;
  // Columns picked by `columns`, in that order.
  Matrix SelectColumns(std::span<const std::size_t> columns) const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// The modeling table: one row per flight, the 29 feature columns, and the
// Eq.-derived adherence and its category index (Low=0, Medium=1, High=2).
struct Dataset {
  std::vector<std::string> flight_ids;
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<double> adherence;
  std::vector<int> labels;

  std::size_t size() const { return flight_ids.size(); }
  // Throws kUnknownFeature when absent.
  std::size_t FeatureIndex(const std::string& name) const;
};

// CSV: `flight_id`, the feature columns, `cdo_adherence`, `cdocat`. Lines
// starting with '#' are provenance comments and are written verbatim first.
void WriteDatasetCsv(std::ostream& out, const Dataset& dataset,
                     const std::vector<std::string>& comments = {});
Dataset ReadDatasetCsv(std::istream& in);
Dataset ReadDatasetCsv(const std::filesystem::path& path);

}  // namespace cdoxai

#endif  // CDOXAI_DATASET_H_
