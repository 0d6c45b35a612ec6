#include "otkit/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "otkit/errors.hpp"
#include "otkit/kernels.hpp"

namespace otkit {

namespace {

using HeapItem = std::pair<double, int>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

struct DijkstraScratch {
  std::vector<double> dist;
  std::vector<int> parent;
  std::vector<int> mark;
  std::vector<int> done;
  int round = 0;

  void resize(size_t n) {
    dist.assign(n, 0.0);
    parent.assign(n, -1);
    mark.assign(n, 0);
    done.assign(n, 0);
    round = 0;
  }
  bool seen(int v) const { return mark[static_cast<size_t>(v)] == round; }
  bool settled(int v) const { return done[static_cast<size_t>(v)] == round; }
  void settle(int v) { done[static_cast<size_t>(v)] = round; }
  void touch(int v, double d, int par) {
    mark[static_cast<size_t>(v)] = round;
    dist[static_cast<size_t>(v)] = d;
    parent[static_cast<size_t>(v)] = par;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Bipartite transportation (PD-OT)
// ---------------------------------------------------------------------------

PdSolution pd_ot(const CostedBipartite& inst) {
  const size_t m = inst.n_left, k = inst.n_right;
  require_input(m >= 1 && k >= 1, "pd_ot: empty side");
  require_input(inst.supplies.size() == m && inst.demands.size() == k,
                "pd_ot: supplies/demands size mismatch");
  require_input(static_cast<bool>(inst.cost), "pd_ot: missing cost function");

  double total_s = 0.0, total_t = 0.0;
  for (double v : inst.supplies) {
    require_input(v >= 0.0 && std::isfinite(v), "pd_ot: bad supply");
    total_s += v;
  }
  for (double v : inst.demands) {
    require_input(v >= 0.0 && std::isfinite(v), "pd_ot: bad demand");
    total_t += v;
  }
  if (std::abs(total_s - total_t) > kMassRelTol * std::max({total_s, total_t, 1e-300}))
    throw InfeasibleError("pd_ot: unbalanced instance");

  PdSolution sol;
  sol.y_left.assign(m, 0.0);
  sol.y_right.assign(k, 0.0);
  if (total_s <= 0.0) return sol;

  std::vector<double> rem_s = inst.supplies;
  std::vector<double> rem_t = inst.demands;
  std::vector<std::map<int, double>> inflow(k);  // per sink: source -> mass
  std::vector<double>& pis = sol.y_left;          // potentials, shifted at the end
  std::vector<double>& pit = sol.y_right;

  const size_t V = m + k;
  DijkstraScratch dk;
  dk.resize(V);
  std::vector<double> row(k, 0.0);
  std::vector<int> settled;
  settled.reserve(64);

  const double demand_eps = 1e-13 * total_s;
  const size_t aug_guard = 60 * (m + k) + 1000;
  size_t augs = 0;

  auto cost_at = [&](int i, int j) { return inst.cost(i, j); };

  for (size_t si = 0; si < m; ++si) {
    while (rem_s[si] > 0.0) {
      require_internal(++augs <= aug_guard, "pd_ot: augmentation guard tripped");
      ++dk.round;
      settled.clear();
      MinHeap heap;
      dk.touch(static_cast<int>(si), 0.0, -1);
      heap.push({0.0, static_cast<int>(si)});
      int target = -1;
      double dt = 0.0;
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (!dk.seen(u) || d > dk.dist[static_cast<size_t>(u)] || dk.settled(u)) continue;
        dk.settle(u);
        settled.push_back(u);
        if (u >= static_cast<int>(m)) {
          const int j = u - static_cast<int>(m);
          if (rem_t[static_cast<size_t>(j)] > demand_eps) {
            target = u;
            dt = d;
            break;
          }
          // relax reverse arcs sink -> source
          for (const auto& [i, f] : inflow[static_cast<size_t>(j)]) {
            if (f <= 0.0) continue;
            double rc = -cost_at(i, j) + pit[static_cast<size_t>(j)] - pis[static_cast<size_t>(i)];
            if (rc < 0.0) rc = 0.0;
            const double nd = d + rc;
            if (!dk.seen(i) || nd < dk.dist[static_cast<size_t>(i)]) {
              dk.touch(i, nd, u);
              heap.push({nd, i});
            }
          }
        } else {
          // relax forward arcs source -> every sink
          if (inst.cost_row)
            inst.cost_row(u, row.data());
          else
            for (size_t j = 0; j < k; ++j) row[j] = cost_at(u, static_cast<int>(j));
          for (size_t j = 0; j < k; ++j) {
            double rc = row[j] + pis[static_cast<size_t>(u)] - pit[j];
            if (rc < 0.0) rc = 0.0;
            const double nd = d + rc;
            const int v = static_cast<int>(m + j);
            if (!dk.seen(v) || nd < dk.dist[static_cast<size_t>(v)]) {
              dk.touch(v, nd, u);
              heap.push({nd, v});
            }
          }
        }
      }
      if (target < 0) {
        if (rem_s[si] > 1e-9 * total_s)
          throw InfeasibleError("pd_ot: residual demand unreachable");
        rem_s[si] = 0.0;
        break;
      }
      // settled potentials move by dist - dt; untouched vertices stay put
      for (int u : settled) {
        const double dd = dk.dist[static_cast<size_t>(u)] - dt;
        if (u < static_cast<int>(m))
          pis[static_cast<size_t>(u)] += dd;
        else
          pit[static_cast<size_t>(u) - m] += dd;
      }
      // bottleneck
      const int tj = target - static_cast<int>(m);
      double q = std::min(rem_s[si], rem_t[static_cast<size_t>(tj)]);
      for (int v = target; dk.parent[static_cast<size_t>(v)] >= 0;) {
        const int u = dk.parent[static_cast<size_t>(v)];
        if (v < static_cast<int>(m)) {
          // reverse arc sink u -> source v caps at the existing flow
          const auto it = inflow[static_cast<size_t>(u) - m].find(v);
          require_internal(it != inflow[static_cast<size_t>(u) - m].end(),
                           "pd_ot: reverse arc lost");
          q = std::min(q, it->second);
        }
        v = u;
      }
      require_internal(q > 0.0, "pd_ot: zero augmentation");
      // apply
      for (int v = target; dk.parent[static_cast<size_t>(v)] >= 0;) {
        const int u = dk.parent[static_cast<size_t>(v)];
        if (v >= static_cast<int>(m)) {
          inflow[static_cast<size_t>(v) - m][u] += q;
        } else {
          auto& mp = inflow[static_cast<size_t>(u) - m];
          const auto it = mp.find(v);
          it->second -= q;
          if (it->second <= 0.0) mp.erase(it);
        }
        v = u;
      }
      rem_s[si] -= q;
      rem_t[static_cast<size_t>(tj)] -= q;
      if (rem_s[si] < 0.0) rem_s[si] = 0.0;
      if (rem_t[static_cast<size_t>(tj)] < 0.0) rem_t[static_cast<size_t>(tj)] = 0.0;
    }
  }

  // reduce the support to a forest: cancel zero-reduced-cost cycles
  {
    size_t support = 0;
    for (const auto& mp : inflow) support += mp.size();
    while (support > m + k - 1) {
      // rebuild forest, find one cycle edge
      std::vector<int> uf(V);
      for (size_t i = 0; i < V; ++i) uf[i] = static_cast<int>(i);
      std::function<int(int)> find = [&](int x) {
        while (uf[static_cast<size_t>(x)] != x) {
          uf[static_cast<size_t>(x)] = uf[static_cast<size_t>(uf[static_cast<size_t>(x)])];
          x = uf[static_cast<size_t>(x)];
        }
        return x;
      };
      std::vector<std::vector<std::pair<int, int>>> adj(V);  // (neighbor, sink j of edge)
      int ci = -1, cj = -1;
      for (size_t j = 0; j < k && ci < 0; ++j) {
        for (const auto& [i, f] : inflow[j]) {
          (void)f;
          const int a = i, b = static_cast<int>(m + j);
          const int ra = find(a), rb = find(b);
          if (ra == rb) {
            ci = i;
            cj = static_cast<int>(j);
            break;
          }
          uf[static_cast<size_t>(ra)] = rb;
          adj[static_cast<size_t>(a)].push_back({b, static_cast<int>(j)});
          adj[static_cast<size_t>(b)].push_back({a, static_cast<int>(j)});
        }
      }
      if (ci < 0) break;  // support count included dust entries; done
      // path from ci to sink m+cj in the forest (BFS)
      std::vector<int> par(V, -2);
      std::queue<int> bfs;
      par[static_cast<size_t>(ci)] = -1;
      bfs.push(ci);
      const int goal = static_cast<int>(m + cj);
      while (!bfs.empty()) {
        const int u = bfs.front();
        bfs.pop();
        if (u == goal) break;
        for (const auto& [w, ej] : adj[static_cast<size_t>(u)]) {
          (void)ej;
          if (par[static_cast<size_t>(w)] == -2) {
            par[static_cast<size_t>(w)] = u;
            bfs.push(w);
          }
        }
      }
      require_internal(par[static_cast<size_t>(goal)] != -2, "pd_ot: cycle path missing");
      // alternate signs around the cycle; the cycle has even length and every
      // edge is (source, sink); the extra edge (ci,cj) gets sign -1
      struct CEdge {
        int i, j;
        int sign;
      };
      std::vector<CEdge> cyc;
      cyc.push_back({ci, cj, -1});
      int sign = +1;
      for (int v = goal; par[static_cast<size_t>(v)] >= 0; v = par[static_cast<size_t>(v)]) {
        const int u = par[static_cast<size_t>(v)];
        const int i = std::min(u, v);
        const int j = std::max(u, v) - static_cast<int>(m);
        cyc.push_back({i, j, sign});
        sign = -sign;
      }
      double push = 1e300;
      for (const auto& e : cyc)
        if (e.sign < 0) push = std::min(push, inflow[static_cast<size_t>(e.j)].at(e.i));
      for (const auto& e : cyc) {
        auto& mp = inflow[static_cast<size_t>(e.j)];
        auto it = mp.find(e.i);
        require_internal(it != mp.end(), "pd_ot: cycle edge lost");
        it->second += e.sign * push;
        if (it->second <= 0.0) mp.erase(it);
      }
      size_t support2 = 0;
      for (const auto& mp : inflow) support2 += mp.size();
      require_internal(support2 < support, "pd_ot: cycle cancel made no progress");
      support = support2;
    }
  }

  // extract plan + duals
  double shift = 1e300;
  for (size_t j = 0; j < k; ++j) shift = std::min(shift, pit[j]);
  for (size_t i = 0; i < m; ++i) pis[i] -= shift;
  for (size_t j = 0; j < k; ++j) pit[j] -= shift;
  for (size_t j = 0; j < k; ++j)
    for (const auto& [i, f] : inflow[j])
      if (f > 0.0) {
        sol.plan.entries.push_back({i, static_cast<int>(j), f});
        sol.cost += f * cost_at(i, static_cast<int>(j));
      }
  std::sort(sol.plan.entries.begin(), sol.plan.entries.end(),
            [](const TransportPlan::Entry& a, const TransportPlan::Entry& b) {
              return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
  return sol;
}

// ---------------------------------------------------------------------------
// Explicit-graph min-cost flow
// ---------------------------------------------------------------------------

GraphFlow mcf_exact_warm(const GraphMCF& g, std::vector<double>& pi) {
  const size_t V = g.n_vertices;
  const size_t E = g.edges.size();
  require_input(g.eta.size() == V, "mcf: eta size mismatch");
  for (const auto& e : g.edges) {
    require_input(e.u >= 0 && static_cast<size_t>(e.u) < V && e.v >= 0 &&
                      static_cast<size_t>(e.v) < V,
                  "mcf: edge endpoint out of range");
    require_input(e.cost >= 0.0 && std::isfinite(e.cost), "mcf: negative cost edge");
  }
  double total_pos = 0.0, total_neg = 0.0;
  for (double v : g.eta) (v > 0.0 ? total_pos : total_neg) += v;
  if (std::abs(total_pos + total_neg) > kMassRelTol * std::max(total_pos, 1e-300))
    throw InfeasibleError("mcf: unbalanced eta");

  if (pi.size() != V) pi.assign(V, 0.0);

  GraphFlow out;
  out.flow.assign(E, 0.0);
  out.y.assign(V, 0.0);

  if (total_pos <= 0.0) {
    for (size_t v = 0; v < V; ++v) out.y[v] = -pi[v];
    double sh = 1e300;
    for (size_t v = 0; v < V; ++v) sh = std::min(sh, out.y[v]);
    for (size_t v = 0; v < V; ++v) out.y[v] -= sh;
    return out;
  }

  // adjacency
  std::vector<std::vector<int>> out_e(V), in_e(V);
  for (size_t e = 0; e < E; ++e) {
    out_e[static_cast<size_t>(g.edges[e].u)].push_back(static_cast<int>(e));
    in_e[static_cast<size_t>(g.edges[e].v)].push_back(static_cast<int>(e));
  }

  std::vector<double> rem = g.eta;
  DijkstraScratch dk;
  dk.resize(V);
  std::vector<int> par_edge(V, -1);
  std::vector<int> settled;
  settled.reserve(64);

  const double demand_eps = 1e-13 * total_pos;
  const size_t aug_guard = 60 * (V + E) + 1000;
  size_t augs = 0;

  for (size_t src = 0; src < V; ++src) {
    while (rem[src] > 0.0) {
      require_internal(++augs <= aug_guard, "mcf: augmentation guard tripped");
      ++dk.round;
      settled.clear();
      MinHeap heap;
      dk.touch(static_cast<int>(src), 0.0, -1);
      par_edge[src] = -1;
      heap.push({0.0, static_cast<int>(src)});
      int target = -1;
      double dt = 0.0;
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (!dk.seen(u) || d > dk.dist[static_cast<size_t>(u)] || dk.settled(u)) continue;
        dk.settle(u);
        settled.push_back(u);
        if (rem[static_cast<size_t>(u)] < -demand_eps) {
          target = u;
          dt = d;
          break;
        }
        for (int e : out_e[static_cast<size_t>(u)]) {
          const auto& ed = g.edges[static_cast<size_t>(e)];
          double rc = ed.cost + pi[static_cast<size_t>(ed.u)] - pi[static_cast<size_t>(ed.v)];
          if (rc < 0.0) rc = 0.0;
          const double nd = d + rc;
          if (!dk.seen(ed.v) || nd < dk.dist[static_cast<size_t>(ed.v)]) {
            dk.touch(ed.v, nd, u);
            par_edge[static_cast<size_t>(ed.v)] = e;
            heap.push({nd, ed.v});
          }
        }
        for (int e : in_e[static_cast<size_t>(u)]) {
          if (out.flow[static_cast<size_t>(e)] <= 0.0) continue;
          const auto& ed = g.edges[static_cast<size_t>(e)];
          double rc = -ed.cost + pi[static_cast<size_t>(ed.v)] - pi[static_cast<size_t>(ed.u)];
          if (rc < 0.0) rc = 0.0;
          const double nd = d + rc;
          if (!dk.seen(ed.u) || nd < dk.dist[static_cast<size_t>(ed.u)]) {
            dk.touch(ed.u, nd, u);
            par_edge[static_cast<size_t>(ed.u)] = e;
            heap.push({nd, ed.u});
          }
        }
      }
      if (target < 0) {
        if (rem[src] > 1e-9 * total_pos) throw InfeasibleError("mcf: disconnected demand");
        rem[src] = 0.0;
        break;
      }
      for (int u : settled) pi[static_cast<size_t>(u)] += dk.dist[static_cast<size_t>(u)] - dt;
      // bottleneck
      double q = std::min(rem[src], -rem[static_cast<size_t>(target)]);
      for (int v = target; v != static_cast<int>(src);) {
        const int e = par_edge[static_cast<size_t>(v)];
        const auto& ed = g.edges[static_cast<size_t>(e)];
        if (ed.v == v) {
          v = ed.u;  // forward arc, uncapacitated
        } else {
          q = std::min(q, out.flow[static_cast<size_t>(e)]);
          v = ed.v;
        }
      }
      require_internal(q > 0.0, "mcf: zero augmentation");
      for (int v = target; v != static_cast<int>(src);) {
        const int e = par_edge[static_cast<size_t>(v)];
        auto& ed = g.edges[static_cast<size_t>(e)];
        if (ed.v == v) {
          out.flow[static_cast<size_t>(e)] += q;
          v = ed.u;
        } else {
          out.flow[static_cast<size_t>(e)] -= q;
          if (out.flow[static_cast<size_t>(e)] < 0.0) out.flow[static_cast<size_t>(e)] = 0.0;
          v = ed.v;
        }
      }
      rem[src] -= q;
      rem[static_cast<size_t>(target)] += q;
      if (rem[src] < 0.0) rem[src] = 0.0;
    }
  }

  for (size_t e = 0; e < E; ++e) out.cost += out.flow[e] * g.edges[e].cost;
  for (size_t v = 0; v < V; ++v) out.y[v] = -pi[v];
  double shift = 1e300;
  bool has_demand = false;
  for (size_t v = 0; v < V; ++v)
    if (g.eta[v] < 0.0) {
      has_demand = true;
      shift = std::min(shift, out.y[v]);
    }
  if (!has_demand) {
    shift = 1e300;
    for (size_t v = 0; v < V; ++v) shift = std::min(shift, out.y[v]);
  }
  for (size_t v = 0; v < V; ++v) out.y[v] -= shift;
  return out;
}

GraphFlow mcf_exact(const GraphMCF& g) {
  std::vector<double> pi;
  return mcf_exact_warm(g, pi);
}

// ---------------------------------------------------------------------------

std::pair<TransportPlan, double> exact_ot_euclidean(const DiscreteMeasure& mu,
                                                    const DiscreteMeasure& nu) {
  require_input(mu.dim == nu.dim, "dimension mismatch");
  const int d = mu.dim;
  // SoA layout of nu for the batched relax loop
  std::array<std::vector<double>, kMaxDim> soa;
  for (int kk = 0; kk < d; ++kk) {
    soa[static_cast<size_t>(kk)].resize(nu.size());
    for (size_t j = 0; j < nu.size(); ++j) soa[static_cast<size_t>(kk)][j] = nu.points[j][kk];
  }
  const double* coords[kMaxDim] = {nullptr, nullptr, nullptr, nullptr};
  for (int kk = 0; kk < d; ++kk) coords[kk] = soa[static_cast<size_t>(kk)].data();

  CostedBipartite inst;
  inst.n_left = mu.size();
  inst.n_right = nu.size();
  inst.supplies = mu.masses;
  inst.demands = nu.masses;
  inst.cost = [&](int i, int j) {
    return dist(mu.points[static_cast<size_t>(i)], nu.points[static_cast<size_t>(j)], d);
  };
  inst.cost_row = [&, d](int i, double* out_row) {
    kern::l2_dist_batch(coords, d, mu.points[static_cast<size_t>(i)].c.data(), out_row,
                        nu.size());
  };
  PdSolution sol = pd_ot(inst);
  return {std::move(sol.plan), sol.cost};
}

double pd_certificate_error(const CostedBipartite& inst, const PdSolution& sol) {
  double max_cost = 0.0;
  for (size_t i = 0; i < inst.n_left; ++i)
    for (size_t j = 0; j < inst.n_right; ++j)
      max_cost = std::max(max_cost, inst.cost(static_cast<int>(i), static_cast<int>(j)));
  const double scale = std::max(max_cost, 1e-300);
  double worst = 0.0;
  for (size_t i = 0; i < inst.n_left; ++i)
    for (size_t j = 0; j < inst.n_right; ++j) {
      const double slack = sol.y_right[j] - sol.y_left[i] -
                           inst.cost(static_cast<int>(i), static_cast<int>(j));
      worst = std::max(worst, slack / scale);
    }
  for (const auto& e : sol.plan.entries) {
    const double gap = std::abs(sol.y_right[static_cast<size_t>(e.dst)] -
                                sol.y_left[static_cast<size_t>(e.src)] - inst.cost(e.src, e.dst));
    worst = std::max(worst, gap / scale);
  }
  return worst;
}

}  // namespace otkit
