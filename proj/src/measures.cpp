#include "otkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "otkit/errors.hpp"
#include "otkit/rng.hpp"

namespace otkit {

using nlohmann::json;

DiscreteMeasure::DiscreteMeasure(std::vector<Pt> pts, std::vector<double> ms, int d) {
  require_input(pts.size() == ms.size(), "points/masses length mismatch");
  require_input(d >= 1 && d <= kMaxDim, "unsupported dimension");
  dim = d;
  // merge duplicates: supports are sets
  std::map<Pt, double> merged;
  for (size_t i = 0; i < pts.size(); ++i) {
    require_input(std::isfinite(ms[i]) && ms[i] >= 0.0, "mass must be finite and non-negative");
    for (int k = 0; k < d; ++k)
      require_input(std::isfinite(pts[i][k]), "coordinate must be finite");
    merged[pts[i]] += ms[i];
  }
  points.reserve(merged.size());
  masses.reserve(merged.size());
  for (const auto& [p, m] : merged) {
    points.push_back(p);
    masses.push_back(m);
  }
  validate();
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

void DiscreteMeasure::validate() const {
  require_input(!points.empty(), "measure has empty support");
  require_input(total_mass() > 0.0, "measure has zero total mass");
}

InstanceMeta instance_meta(const DiscreteMeasure& mu, const DiscreteMeasure& nu, uint64_t seed,
                           double eps) {
  std::vector<Pt> all = mu.points;
  all.insert(all.end(), nu.points.begin(), nu.points.end());
  const int d = mu.dim;
  double dmax = 0.0, dmin = 1e300;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      const double dd = dist(all[i], all[j], d);
      dmax = std::max(dmax, dd);
      if (dd > 0.0) dmin = std::min(dmin, dd);
    }
  InstanceMeta meta;
  meta.diameter = dmax;
  meta.spread = (dmax > 0.0 && dmin < 1e300) ? dmax / dmin : 1.0;
  meta.seed = seed;
  meta.eps = eps;
  return meta;
}

double clamp_eps(double eps) {
  require_input(eps > 0.0, "eps must be positive");
  return std::min(eps, 0.5 - 1e-9);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

UniformBoxMixture::UniformBoxMixture(std::vector<Component> comps, int d)
    : comps_(std::move(comps)), dim_(d) {
  require_input(d >= 1 && d <= kMaxDim, "unsupported dimension");
  require_input(!comps_.empty(), "mixture needs at least one component");
  for (int k = 0; k < d; ++k) {
    support_.lo[k] = 1e300;
    support_.hi[k] = -1e300;
  }
  for (const auto& c : comps_) {
    require_input(c.weight >= 0.0 && std::isfinite(c.weight), "component weight must be >= 0");
    require_input(c.box.well_formed(d) && c.box.volume(d) > 0.0,
                  "component box must have positive volume");
    total_ += c.weight;
    for (int k = 0; k < d; ++k) {
      support_.lo[k] = std::min(support_.lo[k], c.box.lo[k]);
      support_.hi[k] = std::max(support_.hi[k], c.box.hi[k]);
    }
  }
  require_input(total_ > 0.0, "mixture has zero total mass");
}

double UniformBoxMixture::box_mass(const Box& b) const {
  require_input(b.well_formed(dim_), "malformed query box");
  double m = 0.0;
  for (const auto& c : comps_) {
    const Box ov = intersect(c.box, b, dim_);
    if (!empty_box(ov, dim_)) m += c.weight * ov.volume(dim_) / c.box.volume(dim_);
  }
  return m;
}

static std::vector<DensityOracle::Component> intervals_to_components(
    const std::vector<std::pair<double, double>>& intervals, const std::vector<double>& weights) {
  require_input(intervals.size() == weights.size(), "intervals/weights length mismatch");
  std::vector<DensityOracle::Component> comps;
  comps.reserve(intervals.size());
  for (size_t i = 0; i < intervals.size(); ++i) {
    Box b;
    b.lo[0] = intervals[i].first;
    b.hi[0] = intervals[i].second;
    comps.push_back({b, weights[i]});
  }
  return comps;
}

PiecewiseUniform1D::PiecewiseUniform1D(const std::vector<std::pair<double, double>>& intervals,
                                       const std::vector<double>& weights)
    : UniformBoxMixture(intervals_to_components(intervals, weights), 1) {}

double PiecewiseUniform1D::interval_mass(double lo, double hi) const {
  Box b;
  b.lo[0] = lo;
  b.hi[0] = hi;
  return box_mass(b);
}

// ---------------------------------------------------------------------------
// I/O
// ---------------------------------------------------------------------------

static json measure_to_json(const DiscreteMeasure& m) {
  json pts = json::array();
  for (const Pt& p : m.points) {
    json row = json::array();
    for (int k = 0; k < m.dim; ++k) row.push_back(p[k]);
    pts.push_back(row);
  }
  return json{{"points", pts}, {"masses", m.masses}};
}

static DiscreteMeasure measure_from_json(const json& j, int dim) {
  require_input(j.contains("points") && j.contains("masses"), "measure needs points and masses");
  std::vector<Pt> pts;
  std::vector<double> ms;
  for (const auto& row : j.at("points")) {
    require_input(static_cast<int>(row.size()) == dim, "point dimension mismatch");
    Pt p;
    for (int k = 0; k < dim; ++k) p[k] = row.at(static_cast<size_t>(k)).get<double>();
    pts.push_back(p);
  }
  for (const auto& v : j.at("masses")) ms.push_back(v.get<double>());
  return DiscreteMeasure(std::move(pts), std::move(ms), dim);
}

static std::pair<DiscreteMeasure, DiscreteMeasure> load_json_instance(const std::string& path) {
  std::ifstream in(path);
  require_input(in.good(), "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("json parse failure in " + path + ": " + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    require_input(dim >= 1 && dim <= kMaxDim, "unsupported dimension");
    return {measure_from_json(j.at("mu"), dim), measure_from_json(j.at("nu"), dim)};
  } catch (const json::exception& e) {
    throw InputError(std::string("bad instance json: ") + e.what());
  }
}

static std::pair<DiscreteMeasure, DiscreteMeasure> load_csv_instance(const std::string& path) {
  std::ifstream in(path);
  require_input(in.good(), "cannot open " + path);
  std::vector<Pt> mu_pts, nu_pts;
  std::vector<double> mu_ms, nu_ms;
  int dim = -1;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() < 3) throw InputError("csv row too short at line " + std::to_string(lineno));
    // header line allowed
    if (lineno == 1 && fields[0].find_first_not_of(" \t") != std::string::npos &&
        !std::isdigit(fields[0][fields[0].find_first_not_of(" \t")]) &&
        fields[0][fields[0].find_first_not_of(" \t")] != '-' &&
        fields[0][fields[0].find_first_not_of(" \t")] != '.')
      continue;
    const int row_dim = static_cast<int>(fields.size()) - 2;
    if (dim < 0) dim = row_dim;
    require_input(dim == row_dim, "mixed dimensions in csv at line " + std::to_string(lineno));
    require_input(dim >= 1 && dim <= kMaxDim, "unsupported dimension");
    Pt p;
    double mass;
    try {
      for (int k = 0; k < dim; ++k) p[k] = std::stod(fields[static_cast<size_t>(k)]);
      mass = std::stod(fields[static_cast<size_t>(dim)]);
    } catch (const std::exception&) {
      throw InputError("csv parse failure at line " + std::to_string(lineno));
    }
    std::string side = fields[static_cast<size_t>(dim) + 1];
    side.erase(std::remove_if(side.begin(), side.end(), [](char c) { return std::isspace(c); }),
               side.end());
    if (side == "mu") {
      mu_pts.push_back(p);
      mu_ms.push_back(mass);
    } else if (side == "nu") {
      nu_pts.push_back(p);
      nu_ms.push_back(mass);
    } else {
      throw InputError("csv side must be mu or nu at line " + std::to_string(lineno));
    }
  }
  require_input(dim > 0, "csv instance is empty");
  return {DiscreteMeasure(std::move(mu_pts), std::move(mu_ms), dim),
          DiscreteMeasure(std::move(nu_pts), std::move(nu_ms), dim)};
}

std::pair<DiscreteMeasure, DiscreteMeasure> load_instance(const std::string& path,
                                                          InstanceFormat format, bool normalize) {
  auto [mu, nu] = format == InstanceFormat::json ? load_json_instance(path)
                                                 : load_csv_instance(path);
  require_input(mu.dim == nu.dim, "mu/nu dimension mismatch");
  if (normalize) {
    const double tm = mu.total_mass(), tn = nu.total_mass();
    for (double& m : mu.masses) m /= tm;
    for (double& m : nu.masses) m /= tn;
  }
  enforce_balance(mu, nu);
  return {std::move(mu), std::move(nu)};
}

void save_instance(const std::string& path, InstanceFormat format, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu) {
  std::ofstream out(path);
  require_input(out.good(), "cannot write " + path);
  if (format == InstanceFormat::json) {
    json j{{"dim", mu.dim}, {"mu", measure_to_json(mu)}, {"nu", measure_to_json(nu)}};
    out << j.dump(2) << "\n";
  } else {
    out.precision(17);
    for (int k = 1; k <= mu.dim; ++k) out << "x" << k << ",";
    out << "mass,side\n";
    auto rows = [&](const DiscreteMeasure& m, const char* side) {
      for (size_t i = 0; i < m.size(); ++i) {
        for (int k = 0; k < m.dim; ++k) out << m.points[i][k] << ",";
        out << m.masses[i] << "," << side << "\n";
      }
    };
    rows(mu, "mu");
    rows(nu, "nu");
  }
}

void enforce_balance(const DiscreteMeasure& mu, DiscreteMeasure& nu) {
  const double tm = mu.total_mass(), tn = nu.total_mass();
  if (std::abs(tm - tn) > kMassRelTol * std::max(tm, tn))
    throw InfeasibleError("unbalanced totals: mu=" + std::to_string(tm) +
                          " nu=" + std::to_string(tn));
  const double f = tm / tn;
  for (double& m : nu.masses) m *= f;
}

std::unique_ptr<DensityOracle> load_oracle(const std::string& path) {
  std::ifstream in(path);
  require_input(in.good(), "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("json parse failure in " + path + ": " + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform_box_mixture") {
      std::vector<DensityOracle::Component> comps;
      int dim = -1;
      for (const auto& c : j.at("components")) {
        const auto& lo = c.at("box").at(0);
        const auto& hi = c.at("box").at(1);
        require_input(lo.size() == hi.size(), "box lo/hi dimension mismatch");
        if (dim < 0) dim = static_cast<int>(lo.size());
        require_input(dim == static_cast<int>(lo.size()), "mixed component dimensions");
        Box b;
        for (int k = 0; k < dim; ++k) {
          b.lo[k] = lo.at(static_cast<size_t>(k)).get<double>();
          b.hi[k] = hi.at(static_cast<size_t>(k)).get<double>();
        }
        comps.push_back({b, c.at("weight").get<double>()});
      }
      require_input(dim >= 1, "oracle spec has no components");
      return std::make_unique<UniformBoxMixture>(std::move(comps), dim);
    }
    if (kind == "piecewise_uniform_1d") {
      std::vector<std::pair<double, double>> ivs;
      std::vector<double> ws;
      for (const auto& c : j.at("components")) {
        ivs.emplace_back(c.at("interval").at(0).get<double>(),
                         c.at("interval").at(1).get<double>());
        ws.push_back(c.at("weight").get<double>());
      }
      return std::make_unique<PiecewiseUniform1D>(ivs, ws);
    }
    throw InputError("unknown oracle kind: " + kind);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad oracle json: ") + e.what());
  }
}

void save_oracle(const std::string& path, const DensityOracle& oracle) {
  json comps = json::array();
  for (const auto& c : oracle.components()) {
    if (oracle.dim() == 1) {
      comps.push_back(json{{"interval", {c.box.lo[0], c.box.hi[0]}}, {"weight", c.weight}});
    } else {
      json lo = json::array(), hi = json::array();
      for (int k = 0; k < oracle.dim(); ++k) {
        lo.push_back(c.box.lo[k]);
        hi.push_back(c.box.hi[k]);
      }
      comps.push_back(json{{"box", {lo, hi}}, {"weight", c.weight}});
    }
  }
  json j{{"kind", oracle.dim() == 1 ? "piecewise_uniform_1d" : "uniform_box_mixture"},
         {"components", comps}};
  std::ofstream out(path);
  require_input(out.good(), "cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

std::pair<DiscreteMeasure, DiscreteMeasure> gen_random(size_t n, int d, double spread_cap,
                                                       uint64_t seed, bool uniform_masses) {
  require_input(n >= 2, "need n >= 2");
  require_input(d >= 1 && d <= kMaxDim, "unsupported dimension");
  require_input(spread_cap >= 2.0, "spread_cap < 2 cannot place n distinct points");

  // grid of (g+1)^d sites in [0,1]^d; min distance 1/g, max sqrt(d), so the
  // spread is at most g*sqrt(d) <= spread_cap
  const uint64_t g = std::max<uint64_t>(1, static_cast<uint64_t>(spread_cap / std::sqrt(d)));
  double sites = 1.0;
  for (int k = 0; k < d; ++k) sites *= static_cast<double>(g + 1);
  require_input(sites >= static_cast<double>(n),
                "spread_cap too small for n distinct points");

  Rng rng(seed);
  auto draw_side = [&](Rng& r) {
    std::map<Pt, bool> used;
    std::vector<Pt> pts;
    while (pts.size() < n) {
      Pt p;
      for (int k = 0; k < d; ++k)
        p[k] = static_cast<double>(r.next_below(g + 1)) / static_cast<double>(g);
      if (!used.emplace(p, true).second) continue;
      pts.push_back(p);
    }
    std::vector<double> ms(n, 1.0 / static_cast<double>(n));
    if (!uniform_masses) {
      double tot = 0.0;
      for (double& m : ms) {
        m = r.next_exponential() + 1e-9;
        tot += m;
      }
      for (double& m : ms) m /= tot;
    }
    return DiscreteMeasure(std::move(pts), std::move(ms), d);
  };
  Rng ra = rng.fork(1), rb = rng.fork(2);
  auto mu = draw_side(ra);
  auto nu = draw_side(rb);
  enforce_balance(mu, nu);
  return {std::move(mu), std::move(nu)};
}

std::unique_ptr<DensityOracle> gen_random_mixture(int d, int n_components, uint64_t seed) {
  require_input(n_components >= 1, "need at least one component");
  Rng rng(seed);
  std::vector<DensityOracle::Component> comps;
  double tot = 0.0;
  for (int i = 0; i < n_components; ++i) {
    Box b;
    for (int k = 0; k < d; ++k) {
      const double c = rng.next_double();
      const double half = 0.05 + 0.45 * rng.next_double();
      b.lo[k] = std::max(0.0, c - half);
      b.hi[k] = std::min(1.0, c + half);
      if (b.hi[k] - b.lo[k] < 0.01) b.hi[k] = b.lo[k] + 0.01;
    }
    const double w = rng.next_exponential() + 0.1;
    comps.push_back({b, w});
    tot += w;
  }
  for (auto& c : comps) c.weight /= tot;
  return std::make_unique<UniformBoxMixture>(std::move(comps), d);
}

DiscreteMeasure grid_discretize(const DensityOracle& oracle, double step) {
  require_input(step > 0.0, "grid step must be positive");
  const int d = oracle.dim();
  const Box sup = oracle.support_box();
  int64_t cells[kMaxDim] = {1, 1, 1, 1};
  double total_cells = 1.0;
  for (int k = 0; k < d; ++k) {
    cells[k] = std::max<int64_t>(1, static_cast<int64_t>(std::ceil((sup.hi[k] - sup.lo[k]) / step)));
    total_cells *= static_cast<double>(cells[k]);
  }
  require_input(total_cells <= 6.0e7, "grid_discretize: grid too fine");
  std::vector<Pt> pts;
  std::vector<double> ms;
  int64_t idx[kMaxDim] = {0, 0, 0, 0};
  for (;;) {
    Box cell;
    for (int k = 0; k < d; ++k) {
      const double w = (sup.hi[k] - sup.lo[k]) / static_cast<double>(cells[k]);
      cell.lo[k] = sup.lo[k] + w * static_cast<double>(idx[k]);
      cell.hi[k] = cell.lo[k] + w;
    }
    const double m = oracle.box_mass(cell);
    if (m > 0.0) {
      pts.push_back(cell.center(d));
      ms.push_back(m);
    }
    int k = 0;
    while (k < d && ++idx[k] == cells[k]) idx[k++] = 0;
    if (k == d) break;
  }
  return DiscreteMeasure(std::move(pts), std::move(ms), d);
}

}  // namespace otkit
