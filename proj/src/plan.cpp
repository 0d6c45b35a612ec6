#include "otkit/plan.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otkit/errors.hpp"

namespace otkit {

using nlohmann::json;

double TransportPlan::total_mass() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.mass;
  return s;
}

double TransportPlan::cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
  double c = 0.0;
  for (const auto& e : entries)
    c += e.mass * dist(mu.points[static_cast<size_t>(e.src)],
                       nu.points[static_cast<size_t>(e.dst)], mu.dim);
  return c;
}

double TransportPlan::marginal_error(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     int* bad_vertex, bool* bad_on_nu) const {
  std::vector<double> row(mu.size(), 0.0), col(nu.size(), 0.0);
  for (const auto& e : entries) {
    require_input(e.src >= 0 && static_cast<size_t>(e.src) < mu.size(), "plan src out of range");
    require_input(e.dst >= 0 && static_cast<size_t>(e.dst) < nu.size(), "plan dst out of range");
    row[static_cast<size_t>(e.src)] += e.mass;
    col[static_cast<size_t>(e.dst)] += e.mass;
  }
  const double scale = std::max(mu.total_mass(), 1e-300);
  double worst = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double err = std::abs(row[i] - mu.masses[i]) / scale;
    if (err > worst) {
      worst = err;
      if (bad_vertex) *bad_vertex = static_cast<int>(i);
      if (bad_on_nu) *bad_on_nu = false;
    }
  }
  for (size_t j = 0; j < nu.size(); ++j) {
    const double err = std::abs(col[j] - nu.masses[j]) / scale;
    if (err > worst) {
      worst = err;
      if (bad_vertex) *bad_vertex = static_cast<int>(j);
      if (bad_on_nu) *bad_on_nu = true;
    }
  }
  return worst;
}

bool TransportPlan::feasible(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             double rel_tol) const {
  return marginal_error(mu, nu) <= rel_tol;
}

void TransportPlan::save_csv(const std::string& path) const {
  std::ofstream out(path);
  require_input(out.good(), "cannot write " + path);
  out.precision(17);
  out << "src,dst,mass\n";
  for (const auto& e : entries) out << e.src << "," << e.dst << "," << e.mass << "\n";
}

void TransportPlan::save_json(const std::string& path) const {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(json{{"src", e.src}, {"dst", e.dst}, {"mass", e.mass}});
  std::ofstream out(path);
  require_input(out.good(), "cannot write " + path);
  out << json{{"entries", arr}}.dump(2) << "\n";
}

TransportPlan TransportPlan::load_csv(const std::string& path) {
  std::ifstream in(path);
  require_input(in.good(), "cannot open " + path);
  TransportPlan plan;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("src", 0) == 0) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw InputError("plan csv parse failure at line " + std::to_string(lineno));
    try {
      plan.entries.push_back({std::stoi(a), std::stoi(b), std::stod(c)});
    } catch (const std::exception&) {
      throw InputError("plan csv parse failure at line " + std::to_string(lineno));
    }
  }
  return plan;
}

TransportPlan TransportPlan::load_json(const std::string& path) {
  std::ifstream in(path);
  require_input(in.good(), "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("json parse failure in " + path + ": " + e.what());
  }
  TransportPlan plan;
  try {
    for (const auto& e : j.at("entries"))
      plan.entries.push_back(
          {e.at("src").get<int>(), e.at("dst").get<int>(), e.at("mass").get<double>()});
  } catch (const json::exception& e) {
    throw InputError(std::string("bad plan json: ") + e.what());
  }
  return plan;
}

}  // namespace otkit
