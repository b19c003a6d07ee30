#include "cdoxai/dataset.h"

#include <fstream>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"
#include "cdoxai/features.h"

namespace cdoxai {

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kFeatureCountMismatch,
                "row has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::Select(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::SelectColumns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out(r, c) = (*this)(r, columns[c]);
    }
  }
  return out;
}

std::size_t Dataset::FeatureIndex(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  throw Error(ErrorCode::kUnknownFeature, "no feature named " + name);
}

void WriteDatasetCsv(std::ostream& out, const Dataset& dataset,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "flight_id";
  for (const auto& name : dataset.feature_names) out << ',' << name;
  out << ",cdo_adherence,cdocat\n";
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    out << dataset.flight_ids[r];
    for (double v : dataset.features.row(r)) out << ',' << csv::FormatDouble(v);
    out << ',' << csv::FormatDouble(dataset.adherence[r]) << ','
        << CdoCategoryName(static_cast<CdoCategory>(dataset.labels[r])) << '\n';
  }
}

Dataset ReadDatasetCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::NextDataLine(in, line, line_number)) {
    throw Error(ErrorCode::kEmptyFile, "feature file has no header");
  }
  const auto header = csv::SplitLine(line);
  if (header.size() < 3 || csv::Trim(header.front()) != "flight_id" ||
      csv::Trim(header[header.size() - 2]) != "cdo_adherence" ||
      csv::Trim(header.back()) != "cdocat") {
    throw Error(ErrorCode::kMissingColumn,
                "feature header must be flight_id,<features>,cdo_adherence,cdocat",
                line_number);
  }
  Dataset ds;
  for (std::size_t c = 1; c + 2 < header.size(); ++c) {
    ds.feature_names.push_back(csv::Trim(header[c]));
  }
  ds.features = Matrix(0, ds.feature_names.size());
  std::vector<double> row(ds.feature_names.size());
  while (csv::NextDataLine(in, line, line_number)) {
    const auto fields = csv::SplitLine(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow, "wrong field count", line_number);
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto v = csv::ParseDouble(fields[c + 1]);
      if (!v) {
        throw Error(ErrorCode::kMalformedRow,
                    "column " + ds.feature_names[c] + " is not a number",
                    line_number);
      }
      row[c] = *v;
    }
    const auto adherence = csv::ParseDouble(fields[fields.size() - 2]);
    const auto category = ParseCdoCategory(csv::Trim(fields.back()));
    if (!adherence || !category) {
      throw Error(ErrorCode::kMalformedRow, "bad adherence or cdocat",
                  line_number);
    }
    ds.flight_ids.push_back(csv::Trim(fields.front()));
    ds.features.AppendRow(row);
    ds.adherence.push_back(*adherence);
    ds.labels.push_back(static_cast<int>(*category));
  }
  return ds;
}

Dataset ReadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadDatasetCsv(in);
}

}  // namespace cdoxai
