#include "chronograph/params.hpp"

#include "chronograph/errors.hpp"
#include "json.hpp"

namespace chronograph::num {

using json = nlohmann::ordered_json;

Matrix& ParamStore::create(const std::string& name, int rows, int cols) {
  if (values_.count(name)) throw ValidationError("duplicate parameter \"" + name + "\"");
  values_[name] = Matrix::Zero(rows, cols);
  grads_[name] = Matrix::Zero(rows, cols);
  return values_[name];
}

Matrix& ParamStore::value(const std::string& name) {
  auto it = values_.find(name);
  if (it == values_.end()) throw ValidationError("unknown parameter \"" + name + "\"");
  return it->second;
}

const Matrix& ParamStore::value(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw ValidationError("unknown parameter \"" + name + "\"");
  return it->second;
}

Matrix& ParamStore::grad(const std::string& name) {
  auto it = grads_.find(name);
  if (it == grads_.end()) throw ValidationError("unknown parameter \"" + name + "\"");
  return it->second;
}

void ParamStore::zero_grads() {
  for (auto& [name, g] : grads_) g.setZero();
}

std::size_t ParamStore::n_entries() const {
  std::size_t n = 0;
  for (const auto& [name, v] : values_) n += static_cast<std::size_t>(v.size());
  return n;
}

std::string ParamStore::to_json() const {
  json out = json::object();
  for (const auto& [name, v] : values_) {
    json entry;
    entry["shape"] = {v.rows(), v.cols()};
    json data = json::array();
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j) data.push_back(v(i, j));
    entry["data"] = std::move(data);
    out[name] = std::move(entry);
  }
  return out.dump();
}

ParamStore ParamStore::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed parameter JSON: ") + e.what());
  }
  ParamStore store;
  for (const auto& [name, entry] : j.items()) {
    if (!entry.contains("shape") || !entry.contains("data"))
      throw ValidationError("parameter \"" + name + "\" missing shape/data");
    const int rows = entry["shape"][0].get<int>();
    const int cols = entry["shape"][1].get<int>();
    const auto& data = entry["data"];
    if (static_cast<int>(data.size()) != rows * cols)
      throw ValidationError("parameter \"" + name + "\" data length mismatch");
    Matrix& m = store.create(name, rows, cols);
    int at = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[at++].get<double>();
  }
  return store;
}

Var BoundParams::operator[](const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  Var v = tape_->input(store_->value(name));
  bound_.emplace(name, v);
  return v;
}

void BoundParams::accumulate(double weight) {
  for (const auto& [name, var] : bound_)
    store_->grad(name) += weight * tape_->grad(var);
}

}  // namespace chronograph::num
