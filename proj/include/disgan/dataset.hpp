#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "disgan/tensor.hpp"

namespace disgan {

/// Domain X carries label -1, domain Y carries +1.
enum class Domain : int { X = -1, Y = 1 };

inline int label_of(Domain d) { return static_cast<int>(d); }
Domain domain_of(int label);

struct Sample {
  std::vector<double> features;
  int label = -1;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {}

  void add(std::vector<double> features, int label);
  void add(const Sample& s) { add(s.features, s.label); }
  void append(const Dataset& other);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  std::size_t count(Domain d) const;
  /// Feature rows belonging to one domain, in file order.
  std::vector<std::vector<double>> domain(Domain d) const;

  Tensor features() const;
  std::vector<int> labels() const;
  std::vector<double> labels_real() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Sample> samples_;
};

Tensor to_matrix(const std::vector<std::vector<double>>& rows);
Tensor gather_rows(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& idx);

/// CSV with header f1..fD,label. Throws std::runtime_error with the line
/// number on malformed input.
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

/// 17 significant digits; reads back to the identical double.
std::string format_double(double v);

}  // namespace disgan
