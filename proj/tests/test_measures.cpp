#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "otkit/errors.hpp"
#include "otkit/measures.hpp"
#include "otkit/rng.hpp"

using namespace otkit;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("minimal two-point instance loads") {
  const std::string p = tmp_path("otkit_min.json");
  {
    std::ofstream out(p);
    out << R"({"dim":2,"mu":{"points":[[0,0]],"masses":[1]},)"
        << R"("nu":{"points":[[3,4]],"masses":[1]}})";
  }
  auto [mu, nu] = load_instance(p, InstanceFormat::json);
  CHECK(mu.size() == 1);
  CHECK(nu.size() == 1);
  CHECK(mu.dim == 2);
  CHECK(dist(mu.points[0], nu.points[0], 2) == doctest::Approx(5.0));
  std::remove(p.c_str());
}

TEST_CASE("duplicate points merge with summed mass") {
  DiscreteMeasure m({{{1.0, 1.0}}, {{1.0, 1.0}}}, {0.2, 0.3}, 2);
  CHECK(m.size() == 1);
  CHECK(m.masses[0] == doctest::Approx(0.5));
}

TEST_CASE("load/save round trip preserves parsed values") {
  auto [mu, nu] = gen_random(100, 2, 1e6, 42);
  for (auto fmt : {InstanceFormat::json, InstanceFormat::csv}) {
    const std::string p = tmp_path(fmt == InstanceFormat::json ? "otkit_rt.json" : "otkit_rt.csv");
    save_instance(p, fmt, mu, nu);
    auto [mu2, nu2] = load_instance(p, fmt);
    REQUIRE(mu2.size() == mu.size());
    REQUIRE(nu2.size() == nu.size());
    for (size_t i = 0; i < mu.size(); ++i) {
      CHECK(mu2.points[i] == mu.points[i]);
      CHECK(mu2.masses[i] == doctest::Approx(mu.masses[i]).epsilon(1e-12));
    }
    std::remove(p.c_str());
  }
}

TEST_CASE("unbalanced totals rejected, near-balanced rescaled") {
  const std::string p = tmp_path("otkit_bal.json");
  {
    std::ofstream out(p);
    out << R"({"dim":1,"mu":{"points":[[0]],"masses":[1]},)"
        << R"("nu":{"points":[[1]],"masses":[1.5]}})";
  }
  CHECK_THROWS_AS(load_instance(p, InstanceFormat::json), InfeasibleError);
  CHECK_NOTHROW(load_instance(p, InstanceFormat::json, /*normalize=*/true));
  std::remove(p.c_str());
}

TEST_CASE("malformed files raise InputError, never corrupt states") {
  const std::string p = tmp_path("otkit_bad.json");
  for (const char* body :
       {"not json at all", R"({"dim":2,"mu":{"points":[[0,0]],"masses":[-1]},"nu":{}})",
        R"({"dim":2,"mu":{"points":[[0]],"masses":[1]},"nu":{"points":[[1,1]],"masses":[1]}})",
        R"({"dim":2})"}) {
    std::ofstream(p) << body;
    CHECK_THROWS_AS(load_instance(p, InstanceFormat::json), InputError);
  }
  std::remove(p.c_str());
}

TEST_CASE("gen_random: determinism and basics") {
  auto [a1, b1] = gen_random(2, 1, 4.0, 7);
  CHECK(a1.size() == 2);
  CHECK(a1.masses[0] == doctest::Approx(0.5));
  auto [a2, b2] = gen_random(2, 1, 4.0, 7);
  CHECK(a1.points == a2.points);
  CHECK(b1.points == b2.points);
  CHECK_THROWS_AS(gen_random(4, 2, 1.5, 1), InputError);
}

TEST_CASE("gen_random: measured spread stays below the cap") {
  auto [mu, nu] = gen_random(256, 2, 1e6, 3);
  auto meta = instance_meta(mu, nu, 3, 0.25);
  CHECK(meta.spread <= 1e6);
  CHECK(meta.spread >= 1.0);
  CHECK(meta.diameter > 0.0);
}

TEST_CASE("box_mass: proportional volume and additivity") {
  UniformBoxMixture uni({{Box{{{0, 0}}, {{1, 1}}}, 1.0}}, 2);
  Box half{{{0, 0}}, {{0.5, 1.0}}};
  CHECK(uni.box_mass(half) == doctest::Approx(0.5));
  Box away{{{5, 5}}, {{6, 6}}};
  CHECK(uni.box_mass(away) == 0.0);

  UniformBoxMixture two(
      {{Box{{{0, 0}}, {{1, 1}}}, 0.3}, {Box{{{2, 0}}, {{3, 1}}}, 0.7}}, 2);
  Box first{{{-1, -1}}, {{1.5, 2}}};
  CHECK(two.box_mass(first) == doctest::Approx(0.3));
  CHECK(two.box_mass(two.support_box()) == doctest::Approx(1.0));
}

TEST_CASE("box_mass: finitely additive over random disjoint splits") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    auto oracle = gen_random_mixture(d, 1 + static_cast<int>(rng.next_below(5)),
                                     1000 + static_cast<uint64_t>(trial));
    Box q = oracle->support_box();
    // shrink to a random sub-box
    for (int k = 0; k < d; ++k) {
      const double a = q.lo[k] + (q.hi[k] - q.lo[k]) * 0.5 * rng.next_double();
      const double b = q.hi[k] - (q.hi[k] - q.lo[k]) * 0.5 * rng.next_double();
      q.lo[k] = std::min(a, b);
      q.hi[k] = std::max(a, b);
    }
    // split into <= 16 boxes by random axis cuts
    std::vector<Box> parts = {q};
    while (parts.size() < 16) {
      const size_t pick = rng.next_below(parts.size());
      Box b = parts[pick];
      const int ax = static_cast<int>(rng.next_below(static_cast<uint64_t>(d)));
      const double cut = b.lo[ax] + (b.hi[ax] - b.lo[ax]) * rng.next_double();
      Box left = b, right = b;
      left.hi[ax] = cut;
      right.lo[ax] = cut;
      parts[pick] = left;
      parts.push_back(right);
    }
    double sum = 0.0;
    for (const Box& b : parts) sum += oracle->box_mass(b);
    CHECK(std::abs(sum - oracle->box_mass(q)) <= 1e-12 * oracle->total_mass());
  }
}

TEST_CASE("oracle spec file round trip") {
  auto oracle = gen_random_mixture(2, 3, 5);
  const std::string p = tmp_path("otkit_oracle.json");
  save_oracle(p, *oracle);
  auto back = load_oracle(p);
  CHECK(back->dim() == 2);
  CHECK(back->total_mass() == doctest::Approx(oracle->total_mass()));
  Box q{{{0.2, 0.2}}, {{0.8, 0.9}}};
  CHECK(back->box_mass(q) == doctest::Approx(oracle->box_mass(q)));
  std::remove(p.c_str());

  PiecewiseUniform1D pw({{0.0, 1.0}, {2.0, 3.0}}, {0.25, 0.75});
  save_oracle(p, pw);
  auto back1 = load_oracle(p);
  CHECK(back1->dim() == 1);
  CHECK(back1->box_mass(Box{{{0.5}}, {{2.5}}}) == doctest::Approx(0.125 + 0.375));
  std::remove(p.c_str());
}

TEST_CASE("grid_discretize conserves mass") {
  auto oracle = gen_random_mixture(2, 3, 17);
  auto grid = grid_discretize(*oracle, 0.03);
  CHECK(grid.total_mass() == doctest::Approx(oracle->total_mass()).epsilon(1e-10));
}
