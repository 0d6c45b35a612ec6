#pragma once

#include <string>
#include <vector>

#include "otkit/geometry.hpp"
#include "otkit/measures.hpp"

namespace otkit {

/// Sparse coupling between two discrete measures, indexed by support ids.
struct TransportPlan {
  struct Entry {
    int src;
    int dst;
    double mass;
  };

  std::vector<Entry> entries;

  double total_mass() const;

  /// Cost under Euclidean ground distance.
  double cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const;

  /// Largest relative marginal violation; fills the offending id if given.
  double marginal_error(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        int* bad_vertex = nullptr, bool* bad_on_nu = nullptr) const;

  bool feasible(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                double rel_tol = kMassRelTol) const;

  void save_csv(const std::string& path) const;
  void save_json(const std::string& path) const;
  static TransportPlan load_csv(const std::string& path);
  static TransportPlan load_json(const std::string& path);
};

}  // namespace otkit
