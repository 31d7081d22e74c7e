#pragma once

#include <map>
#include <string>

#include "chronograph/autodiff.hpp"
#include "chronograph/tensor.hpp"

namespace chronograph::num {

// Named dense parameters with a gradient slot per entry.
class ParamStore {
 public:
  Matrix& create(const std::string& name, int rows, int cols);
  bool has(const std::string& name) const { return values_.count(name) > 0; }
  Matrix& value(const std::string& name);
  const Matrix& value(const std::string& name) const;
  Matrix& grad(const std::string& name);
  void zero_grads();

  std::size_t n_params() const { return values_.size(); }
  std::size_t n_entries() const;
  const std::map<std::string, Matrix>& values() const { return values_; }
  std::map<std::string, Matrix>& values() { return values_; }

  std::string to_json() const;
  static ParamStore from_json(const std::string& text);

 private:
  std::map<std::string, Matrix> values_;
  std::map<std::string, Matrix> grads_;
};

// Lazily binds store parameters to leaves of one tape; after backward(),
// accumulate() folds the tape gradients back into the store.
class BoundParams {
 public:
  BoundParams(Tape& tape, ParamStore& store) : tape_(&tape), store_(&store) {}

  Var operator[](const std::string& name);
  void accumulate(double weight = 1.0);

 private:
  Tape* tape_;
  ParamStore* store_;
  std::map<std::string, Var> bound_;
};

}  // namespace chronograph::num
