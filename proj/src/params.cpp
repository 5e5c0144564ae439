#include "disgan/params.hpp"

#include <algorithm>
#include <stdexcept>

namespace disgan {

Parameter& ParamSet::add(std::string name, Tensor value, bool frozen) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  params_.push_back(Parameter{std::move(name), std::move(value), frozen});
  return params_.back();
}

Parameter& ParamSet::get(const std::string& name) {
  auto it = std::find_if(params_.begin(), params_.end(), [&](const Parameter& p) { return p.name == name; });
  if (it == params_.end()) throw std::out_of_range("no parameter named " + name);
  return *it;
}

const Parameter& ParamSet::get(const std::string& name) const {
  return const_cast<ParamSet*>(this)->get(name);
}

bool ParamSet::contains(const std::string& name) const {
  return std::any_of(params_.begin(), params_.end(), [&](const Parameter& p) { return p.name == name; });
}

void ParamSet::freeze_all() {
  for (auto& p : params_) {
    p.frozen = true;
    p.tensor.clear_grad();
  }
}

void ParamSet::clear_grads() {
  for (auto& p : params_) p.tensor.clear_grad();
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.size();
  return n;
}

}  // namespace disgan
