#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qident/scalar.hpp"

namespace qident {

/// Small ordered name -> value map for parameter points. Order is the
/// declaration order of the owning record, which keeps serialized reports
/// deterministic.
class ParamMap {
 public:
  void set(const std::string& name, mp::Scalar v) {
    for (auto& kv : items_)
      if (kv.first == name) {
        kv.second = std::move(v);
        return;
      }
    items_.emplace_back(name, std::move(v));
  }

  const mp::Scalar& get(const std::string& name) const {
    for (const auto& kv : items_)
      if (kv.first == name) return kv.second;
    throw std::invalid_argument("missing parameter \"" + name + "\"");
  }

  bool has(const std::string& name) const {
    for (const auto& kv : items_)
      if (kv.first == name) return true;
    return false;
  }

  const std::vector<std::pair<std::string, mp::Scalar>>& items() const {
    return items_;
  }
  bool empty() const { return items_.empty(); }

 private:
  std::vector<std::pair<std::string, mp::Scalar>> items_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

}  // namespace qident
