#include "disgan/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace disgan {

Domain domain_of(int label) {
  if (label == -1) return Domain::X;
  if (label == 1) return Domain::Y;
  throw std::invalid_argument("label must be -1 or +1, got " + std::to_string(label));
}

void Dataset::add(std::vector<double> features, int label) {
  domain_of(label);
  if (dim_ == 0) dim_ = features.size();
  if (features.size() != dim_ || dim_ == 0) {
    throw ShapeError("sample of dimension " + std::to_string(features.size()) + " added to a dataset of dimension " +
                     std::to_string(dim_));
  }
  samples_.push_back(Sample{std::move(features), label});
}

void Dataset::append(const Dataset& other) {
  for (const auto& s : other.samples_) add(s);
}

std::size_t Dataset::count(Domain d) const {
  std::size_t n = 0;
  for (const auto& s : samples_) n += s.label == label_of(d);
  return n;
}

std::vector<std::vector<double>> Dataset::domain(Domain d) const {
  std::vector<std::vector<double>> out;
  for (const auto& s : samples_)
    if (s.label == label_of(d)) out.push_back(s.features);
  return out;
}

Tensor Dataset::features() const {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples_.size());
  for (const auto& s : samples_) rows.push_back(s.features);
  return to_matrix(rows);
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

std::vector<double> Dataset::labels_real() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(static_cast<double>(s.label));
  return out;
}

Tensor to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("cannot build a matrix from zero rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("ragged rows: " + std::to_string(r.size()) + " vs " + std::to_string(cols));
    values.insert(values.end(), r.begin(), r.end());
  }
  return Tensor({rows.size(), cols}, std::move(values));
}

Tensor gather_rows(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> picked;
  picked.reserve(idx.size());
  for (auto i : idx) picked.push_back(rows.at(i));
  return to_matrix(picked);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 2 || header.back() != "label") {
    throw std::runtime_error(path.string() + ":1: header must be f1..fD,label");
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j] != "f" + std::to_string(j + 1)) {
      throw std::runtime_error(path.string() + ":1: expected column f" + std::to_string(j + 1) + ", got '" +
                               header[j] + "'");
    }
  }
  Dataset data(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != dim + 1) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(dim + 1) + " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> f(dim);
    for (std::size_t j = 0; j < dim; ++j) f[j] = parse_number(cells[j], path, line_no);
    const double label = parse_number(cells[dim], path, line_no);
    if (label != -1.0 && label != 1.0) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": label must be -1 or 1");
    }
    data.add(std::move(f), static_cast<int>(label));
  }
  return data;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < data.dim(); ++j) out << 'f' << (j + 1) << ',';
  out << "label\n";
  for (const auto& s : data.samples()) {
    for (double v : s.features) out << format_double(v) << ',';
    out << s.label << '\n';
  }
}

}  // namespace disgan
