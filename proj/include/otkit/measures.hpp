#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "otkit/geometry.hpp"

namespace otkit {

// Module-wide comparison tolerances.
constexpr double kMassRelTol = 1e-9;   // mass feasibility, relative
constexpr double kGeomTol = 1e-12;     // geometry, absolute

/// Weighted point set. Duplicate points are merged (masses summed) on
/// construction, so the support is a proper set.
struct DiscreteMeasure {
  std::vector<Pt> points;
  std::vector<double> masses;
  int dim = 0;

  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Pt> pts, std::vector<double> ms, int d);

  size_t size() const { return points.size(); }
  double total_mass() const;
  void validate() const;  // throws InputError on invariant violation
};

struct InstanceMeta {
  double diameter = 0.0;
  double spread = 1.0;
  uint64_t seed = 0;
  double eps = 0.0;
};

/// Diameter and spread of the union of both supports.
InstanceMeta instance_meta(const DiscreteMeasure& mu, const DiscreteMeasure& nu, uint64_t seed,
                           double eps);

/// Clamp eps into (0, 1/2); throws on eps <= 0.
double clamp_eps(double eps);

/// Continuous distribution that answers axis-aligned box mass queries.
/// Both concrete implementations are uniform mixtures over boxes, so the
/// component list is part of the interface (cost integrals need it).
class DensityOracle {
 public:
  struct Component {
    Box box;
    double weight;
  };

  virtual ~DensityOracle() = default;
  virtual int dim() const = 0;
  virtual double total_mass() const = 0;
  virtual double box_mass(const Box& b) const = 0;
  virtual Box support_box() const = 0;
  virtual const std::vector<Component>& components() const = 0;
};

class UniformBoxMixture : public DensityOracle {
 public:
  UniformBoxMixture(std::vector<Component> comps, int d);

  int dim() const override { return dim_; }
  double total_mass() const override { return total_; }
  double box_mass(const Box& b) const override;
  Box support_box() const override { return support_; }
  const std::vector<Component>& components() const override { return comps_; }

 private:
  std::vector<Component> comps_;
  Box support_;
  double total_ = 0.0;
  int dim_ = 0;
};

/// 1-D specialization: components are intervals.
class PiecewiseUniform1D : public UniformBoxMixture {
 public:
  PiecewiseUniform1D(const std::vector<std::pair<double, double>>& intervals,
                     const std::vector<double>& weights);

  double interval_mass(double lo, double hi) const;
};

// ---------------------------------------------------------------------------
// Instance I/O.  JSON:
//   {"dim": d, "mu": {"points": [[...]], "masses": [...]}, "nu": {...}}
// CSV: one row per point, columns x1..xd,mass,side with side in {mu, nu}.
// ---------------------------------------------------------------------------

enum class InstanceFormat { json, csv };

std::pair<DiscreteMeasure, DiscreteMeasure> load_instance(const std::string& path,
                                                          InstanceFormat format,
                                                          bool normalize = false);
void save_instance(const std::string& path, InstanceFormat format, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu);

/// Rescales nu to match mu exactly when totals agree to kMassRelTol,
/// otherwise throws InfeasibleError.
void enforce_balance(const DiscreteMeasure& mu, DiscreteMeasure& nu);

/// Oracle spec file:
///   {"kind": "uniform_box_mixture", "components":
///       [{"box": [[lo...],[hi...]], "weight": w}, ...]}
///   {"kind": "piecewise_uniform_1d", "components":
///       [{"interval": [lo, hi], "weight": w}, ...]}
std::unique_ptr<DensityOracle> load_oracle(const std::string& path);
void save_oracle(const std::string& path, const DensityOracle& oracle);

/// Random instance on a snapped grid so the spread stays below spread_cap.
/// Masses are uniform (1/n per point) or Dirichlet-random, each side summing
/// to 1. Deterministic in seed.
std::pair<DiscreteMeasure, DiscreteMeasure> gen_random(size_t n, int d, double spread_cap,
                                                       uint64_t seed, bool uniform_masses = true);

/// Random d-dim uniform box mixture supported inside [0,1]^d (for tests and
/// the semi-discrete generators). Deterministic in seed.
std::unique_ptr<DensityOracle> gen_random_mixture(int d, int n_components, uint64_t seed);

/// Snap the oracle onto a grid of the given step: one point per grid cell of
/// the support box carrying the cell's analytic mass (zero-mass cells are
/// dropped). Used as the fine-grid reference discretization.
DiscreteMeasure grid_discretize(const DensityOracle& oracle, double step);

}  // namespace otkit
