#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "otkit/measures.hpp"
#include "otkit/plan.hpp"

namespace otkit {

/// Balanced bipartite transportation instance. Costs come from a callback; a
/// batched row filler can be supplied for hot instances.
struct CostedBipartite {
  size_t n_left = 0;
  size_t n_right = 0;
  std::vector<double> supplies;
  std::vector<double> demands;
  std::function<double(int, int)> cost;
  // optional: fill out[j] = cost(i, j) for all j
  std::function<void(int, double*)> cost_row;
};

/// Primal-dual certificate pair: y(b) - y(a) <= d(a,b) on all pairs, equality
/// on support pairs. Duals shifted so the smallest right-side dual is 0.
struct PdSolution {
  TransportPlan plan;
  std::vector<double> y_left;
  std::vector<double> y_right;
  double cost = 0.0;
};

PdSolution pd_ot(const CostedBipartite& inst);

/// Uncapacitated min-cost flow on an explicit directed graph.
struct GraphMCF {
  struct Edge {
    int u;
    int v;
    double cost;
  };
  size_t n_vertices = 0;
  std::vector<Edge> edges;
  std::vector<double> eta;  // positive = supply, negative = demand
};

/// Flow with reduced-cost optimal duals: y(u) - y(v) <= cost(u,v) on every
/// directed edge, equality on edges carrying flow. Duals shifted so the
/// smallest dual over demand vertices is 0.
struct GraphFlow {
  std::vector<double> flow;
  std::vector<double> y;
  double cost = 0.0;
};

GraphFlow mcf_exact(const GraphMCF& g);

/// Warm-startable variant: pi holds internal potentials (cost + pi[u] - pi[v]
/// >= 0 for every edge) and is updated in place for the next call on the same
/// graph. Pass an empty vector on first use.
GraphFlow mcf_exact_warm(const GraphMCF& g, std::vector<double>& pi);

/// Exact Euclidean-cost discrete OT; the ground-truth baseline.
std::pair<TransportPlan, double> exact_ot_euclidean(const DiscreteMeasure& mu,
                                                    const DiscreteMeasure& nu);

/// Max violation of the Eq.(1)/(2) certificates of a pd solution, relative to
/// the max cost (checked over all pairs; quadratic, test-sized inputs only).
double pd_certificate_error(const CostedBipartite& inst, const PdSolution& sol);

}  // namespace otkit
