#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brute_transport.hpp"
#include "otkit/errors.hpp"
#include "otkit/exact_oracle.hpp"
#include "otkit/rng.hpp"

using namespace otkit;

namespace {

CostedBipartite random_bipartite(size_t m, size_t k, Rng& rng,
                                 std::vector<std::vector<double>>& cost_store) {
  cost_store.assign(m, std::vector<double>(k));
  for (auto& row : cost_store)
    for (double& c : row) c = rng.next_double() * 10.0;
  CostedBipartite inst;
  inst.n_left = m;
  inst.n_right = k;
  inst.supplies.resize(m);
  inst.demands.resize(k);
  double ts = 0.0, td = 0.0;
  for (double& s : inst.supplies) ts += (s = rng.next_double() + 0.05);
  for (double& d : inst.demands) td += (d = rng.next_double() + 0.05);
  for (double& d : inst.demands) d *= ts / td;
  inst.cost = [&cost_store](int i, int j) {
    return cost_store[static_cast<size_t>(i)][static_cast<size_t>(j)];
  };
  return inst;
}

DiscreteMeasure random_measure(size_t n, int d, Rng& rng) {
  std::vector<Pt> pts(n);
  std::vector<double> ms(n);
  for (size_t i = 0; i < n; ++i) {
    for (int kk = 0; kk < d; ++kk) pts[i][kk] = rng.next_double();
    ms[i] = rng.next_double() + 0.01;
  }
  const double t = std::accumulate(ms.begin(), ms.end(), 0.0);
  for (double& m : ms) m /= t;
  return DiscreteMeasure(std::move(pts), std::move(ms), d);
}

}  // namespace

TEST_CASE("pd_ot: 1x1 instance") {
  CostedBipartite inst;
  inst.n_left = inst.n_right = 1;
  inst.supplies = {1.0};
  inst.demands = {1.0};
  inst.cost = [](int, int) { return 5.0; };
  auto sol = pd_ot(inst);
  CHECK(sol.cost == doctest::Approx(5.0));
  REQUIRE(sol.plan.entries.size() == 1);
  CHECK(sol.plan.entries[0].mass == doctest::Approx(1.0));
  CHECK(sol.y_right[0] - sol.y_left[0] == doctest::Approx(5.0));
}

TEST_CASE("pd_ot: identity instance has zero cost") {
  const size_t n = 6;
  CostedBipartite inst;
  inst.n_left = inst.n_right = n;
  inst.supplies.assign(n, 1.0 / n);
  inst.demands.assign(n, 1.0 / n);
  inst.cost = [](int i, int j) { return i == j ? 0.0 : 1.0 + i + j; };
  auto sol = pd_ot(inst);
  CHECK(sol.cost == doctest::Approx(0.0));
  CHECK(pd_certificate_error(inst, sol) <= 1e-12);
}

TEST_CASE("pd_ot: unbalanced instance rejected") {
  CostedBipartite inst;
  inst.n_left = inst.n_right = 1;
  inst.supplies = {1.0};
  inst.demands = {2.0};
  inst.cost = [](int, int) { return 1.0; };
  CHECK_THROWS_AS(pd_ot(inst), InfeasibleError);
}

TEST_CASE("pd_ot: 4x4 instances match transportation-polytope enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::vector<double>> costs;
    auto inst = random_bipartite(4, 4, rng, costs);
    auto sol = pd_ot(inst);
    const double brute =
        otkit_test::brute_transport_optimum(4, 4, inst.supplies, inst.demands, inst.cost);
    REQUIRE(brute >= 0.0);
    CHECK(std::abs(sol.cost - brute) <= 1e-7 * std::max(1.0, brute));
    CHECK(pd_certificate_error(inst, sol) <= 1e-7);
    CHECK(sol.plan.entries.size() <= 4 + 4 - 1);
  }
}

TEST_CASE("pd_ot: support is a forest even with tie-heavy costs") {
  // integer-ish costs create many equal-cost alternatives
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t m = 6, k = 5;
    std::vector<std::vector<double>> costs(m, std::vector<double>(k));
    for (auto& row : costs)
      for (double& c : row) c = static_cast<double>(rng.next_below(3));
    CostedBipartite inst;
    inst.n_left = m;
    inst.n_right = k;
    inst.supplies.assign(m, 1.0);
    inst.demands.assign(k, 1.2);
    inst.cost = [&costs](int i, int j) {
      return costs[static_cast<size_t>(i)][static_cast<size_t>(j)];
    };
    auto sol = pd_ot(inst);
    CHECK(sol.plan.entries.size() <= m + k - 1);
    CHECK(sol.plan.feasible(
        DiscreteMeasure(std::vector<Pt>(m, Pt{}), inst.supplies, 1),
        DiscreteMeasure(std::vector<Pt>(k, Pt{}), inst.demands, 1)) == false);
    // feasibility checked directly on marginals instead (points collide above)
    std::vector<double> row(m, 0.0), col(k, 0.0);
    for (const auto& e : sol.plan.entries) {
      row[static_cast<size_t>(e.src)] += e.mass;
      col[static_cast<size_t>(e.dst)] += e.mass;
    }
    for (size_t i = 0; i < m; ++i) CHECK(row[i] == doctest::Approx(1.0).epsilon(1e-9));
    for (size_t j = 0; j < k; ++j) CHECK(col[j] == doctest::Approx(1.2).epsilon(1e-9));
  }
}

TEST_CASE("mcf_exact: path graph routes along the path") {
  GraphMCF g;
  g.n_vertices = 3;
  g.edges = {{0, 1, 2.0}, {1, 2, 3.0}, {1, 0, 2.0}, {2, 1, 3.0}};
  g.eta = {1.0, 0.0, -1.0};
  auto f = mcf_exact(g);
  CHECK(f.cost == doctest::Approx(5.0));
  CHECK(f.flow[0] == doctest::Approx(1.0));
  CHECK(f.flow[1] == doctest::Approx(1.0));
  // reduced-cost optimality with equality on flow edges
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    const double diff = f.y[static_cast<size_t>(ed.u)] - f.y[static_cast<size_t>(ed.v)];
    CHECK(diff <= ed.cost + 1e-9);
    if (f.flow[e] > 0.0) CHECK(diff == doctest::Approx(ed.cost));
  }
}

TEST_CASE("mcf_exact: zero demand gives zero flow") {
  GraphMCF g;
  g.n_vertices = 4;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  g.eta = {0.0, 0.0, 0.0, 0.0};
  auto f = mcf_exact(g);
  CHECK(f.cost == 0.0);
  for (double x : f.flow) CHECK(x == 0.0);
}

TEST_CASE("mcf_exact: negative cost and disconnection rejected") {
  GraphMCF g;
  g.n_vertices = 2;
  g.edges = {{0, 1, -1.0}};
  g.eta = {1.0, -1.0};
  CHECK_THROWS_AS(mcf_exact(g), InputError);
  g.edges = {};
  CHECK_THROWS_AS(mcf_exact(g), InfeasibleError);
}

TEST_CASE("mcf_exact: random 20-vertex instance matches pd_ot on the metric closure") {
  Rng rng(77);
  // random connected graph on 20 vertices with metric-ish costs
  const size_t V = 20;
  GraphMCF g;
  g.n_vertices = V;
  std::vector<Pt> pos(V);
  for (auto& p : pos) {
    p[0] = rng.next_double();
    p[1] = rng.next_double();
  }
  for (size_t v = 1; v < V; ++v) {
    const size_t u = rng.next_below(v);
    const double c = dist(pos[u], pos[v], 2);
    g.edges.push_back({static_cast<int>(u), static_cast<int>(v), c});
    g.edges.push_back({static_cast<int>(v), static_cast<int>(u), c});
  }
  for (int extra = 0; extra < 20; ++extra) {
    const size_t u = rng.next_below(V), v = rng.next_below(V);
    if (u == v) continue;
    const double c = dist(pos[u], pos[v], 2);
    g.edges.push_back({static_cast<int>(u), static_cast<int>(v), c});
    g.edges.push_back({static_cast<int>(v), static_cast<int>(u), c});
  }
  g.eta.assign(V, 0.0);
  // supplies on 6 vertices, demands on 6 others
  double tot = 0.0;
  for (int i = 0; i < 6; ++i) tot += (g.eta[static_cast<size_t>(i)] = rng.next_double() + 0.1);
  for (int j = 6; j < 12; ++j) g.eta[static_cast<size_t>(j)] = -tot / 6.0;
  auto f = mcf_exact(g);

  // Dijkstra closure between supply and demand vertices
  auto sp = [&](size_t s, std::vector<double>& out) {
    out.assign(V, 1e300);
    out[s] = 0.0;
    std::vector<char> fin(V, 0);
    for (size_t it = 0; it < V; ++it) {
      size_t best = V;
      for (size_t v = 0; v < V; ++v)
        if (!fin[v] && (best == V || out[v] < out[best])) best = v;
      if (best == V || out[best] >= 1e300) break;
      fin[best] = 1;
      for (const auto& e : g.edges)
        if (static_cast<size_t>(e.u) == best)
          out[static_cast<size_t>(e.v)] = std::min(out[static_cast<size_t>(e.v)], out[best] + e.cost);
    }
  };
  std::vector<std::vector<double>> closure(6);
  for (int i = 0; i < 6; ++i) sp(static_cast<size_t>(i), closure[static_cast<size_t>(i)]);
  CostedBipartite inst;
  inst.n_left = 6;
  inst.n_right = 6;
  for (int i = 0; i < 6; ++i) inst.supplies.push_back(g.eta[static_cast<size_t>(i)]);
  inst.demands.assign(6, tot / 6.0);
  inst.cost = [&closure](int i, int j) {
    return closure[static_cast<size_t>(i)][static_cast<size_t>(j) + 6];
  };
  auto ref = pd_ot(inst);
  CHECK(f.cost == doctest::Approx(ref.cost).epsilon(1e-9));
}

TEST_CASE("exact_ot_euclidean: basics and order invariance") {
  DiscreteMeasure mu({{{0.0, 0.0}}}, {1.0}, 2);
  DiscreteMeasure nu({{{3.0, 4.0}}}, {1.0}, 2);
  auto [plan, cost] = exact_ot_euclidean(mu, nu);
  CHECK(cost == doctest::Approx(5.0));

  auto [plan2, cost2] = exact_ot_euclidean(mu, mu);
  CHECK(cost2 == doctest::Approx(0.0));

  Rng rng(123);
  auto a = random_measure(16, 2, rng);
  auto b = random_measure(16, 2, rng);
  auto [p1, c1] = exact_ot_euclidean(a, b);
  // shuffle input order and re-solve
  std::vector<size_t> perm(16);
  std::iota(perm.begin(), perm.end(), 0ul);
  for (size_t i = 15; i > 0; --i) std::swap(perm[i], perm[rng.next_below(i + 1)]);
  std::vector<Pt> pts;
  std::vector<double> ms;
  for (size_t i : perm) {
    pts.push_back(a.points[i]);
    ms.push_back(a.masses[i]);
  }
  DiscreteMeasure a2(std::move(pts), std::move(ms), 2);
  auto [p2, c2] = exact_ot_euclidean(a2, b);
  CHECK(std::abs(c1 - c2) <= 1e-7 * std::max(1.0, c1));

  // translation invariance
  std::vector<Pt> ta = a.points, tb = b.points;
  for (auto& p : ta) {
    p[0] += 3.5;
    p[1] -= 1.25;
  }
  for (auto& p : tb) {
    p[0] += 3.5;
    p[1] -= 1.25;
  }
  auto [p3, c3] = exact_ot_euclidean(DiscreteMeasure(std::move(ta), a.masses, 2),
                                     DiscreteMeasure(std::move(tb), b.masses, 2));
  CHECK(std::abs(c1 - c3) <= 1e-9 * std::max(1.0, c1));
}

TEST_CASE("pd_ot: random shapes match enumeration oracle") {
  Rng rng(31337);
  int done = 0;
  while (done < 15) {
    const size_t m = 1 + rng.next_below(12);
    const size_t k = 1 + rng.next_below(12);
    if (otkit_test::tree_count(m, k) > 3e5) continue;
    ++done;
    std::vector<std::vector<double>> costs;
    auto inst = random_bipartite(m, k, rng, costs);
    auto sol = pd_ot(inst);
    const double brute =
        otkit_test::brute_transport_optimum(m, k, inst.supplies, inst.demands, inst.cost);
    REQUIRE(brute >= 0.0);
    CHECK(std::abs(sol.cost - brute) <= 1e-7 * std::max(1.0, brute));
    CHECK(pd_certificate_error(inst, sol) <= 1e-7);
    CHECK(sol.plan.entries.size() <= m + k - 1);
  }
}
