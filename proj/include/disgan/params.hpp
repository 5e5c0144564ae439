#pragma once

#include <string>
#include <vector>

#include "disgan/tensor.hpp"

namespace disgan {

struct Parameter {
  std::string name;
  Tensor tensor;
  bool frozen = false;
};

/// Ordered collection of named parameters. Order is insertion order and is
/// what the optimizer and the model file both follow.
class ParamSet {
 public:
  Parameter& add(std::string name, Tensor value, bool frozen = false);

  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool contains(const std::string& name) const;

  std::vector<Parameter>& items() { return params_; }
  const std::vector<Parameter>& items() const { return params_; }
  std::size_t size() const { return params_.size(); }

  void freeze_all();
  void clear_grads();
  std::size_t scalar_count() const;

 private:
  std::vector<Parameter> params_;
};

}  // namespace disgan
