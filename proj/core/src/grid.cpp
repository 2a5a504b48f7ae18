#include "entrywise/grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace entrywise {

namespace {

using nlohmann::json;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kZ2Phase, "z2-phase"},
    {ExperimentKind::kSbmPhase, "sbm-phase"},
    {ExperimentKind::kSbmMisclassification, "sbm-miscl"},
    {ExperimentKind::kSbmLinearization, "sbm-linearization"},
    {ExperimentKind::kNmcRatios, "nmc-ratios"},
    {ExperimentKind::kAudits, "audits"},
};

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("grid: " + where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw std::invalid_argument("grid: unknown key '" + key + "' in " + where);
  }
}

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument("grid: missing key '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("grid: bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

Axis axis_from_json(const json& j) {
  reject_unknown(j, {"name", "geometric", "arithmetic", "values"}, "axis");
  const auto name = required<std::string>(j, "name", "axis");
  const int forms = int(j.contains("geometric")) + int(j.contains("arithmetic")) + int(j.contains("values"));
  if (forms != 1)
    throw std::invalid_argument("grid: axis '" + name + "' needs exactly one of geometric, arithmetic, values");
  if (j.contains("values")) return Axis::list(name, required<std::vector<double>>(j, "values", "axis " + name));
  const bool geometric = j.contains("geometric");
  const json& seq = j.at(geometric ? "geometric" : "arithmetic");
  const std::string where = "axis " + name;
  reject_unknown(seq, {"from", "to", "count"}, where);
  const auto from = required<double>(seq, "from", where);
  const auto to = required<double>(seq, "to", where);
  const auto count = required<std::size_t>(seq, "count", where);
  return geometric ? Axis::geometric(name, from, to, count) : Axis::arithmetic(name, from, to, count);
}

json axis_to_json(const Axis& axis) {
  json j;
  j["name"] = axis.name;
  switch (axis.type) {
    case Axis::Type::kGeometric:
      j["geometric"] = {{"from", axis.from}, {"to", axis.to}, {"count", axis.count}};
      break;
    case Axis::Type::kArithmetic:
      j["arithmetic"] = {{"from", axis.from}, {"to", axis.to}, {"count", axis.count}};
      break;
    case Axis::Type::kList:
      j["values"] = axis.values;
      break;
  }
  return j;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  throw std::logic_error("unhandled experiment kind");
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& k : kKindNames)
    if (name == k.name) return k.kind;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

Axis Axis::geometric(std::string name, double from, double to, std::size_t count) {
  if (count == 0) throw std::invalid_argument("axis " + name + ": count must be positive");
  if (!(from > 0.0) || !(to > 0.0) || !std::isfinite(from) || !std::isfinite(to))
    throw std::invalid_argument("axis " + name + ": geometric endpoints must be positive and finite");
  if (count == 1 && from != to) throw std::invalid_argument("axis " + name + ": one point needs from == to");
  Axis a;
  a.name = std::move(name);
  a.type = Type::kGeometric;
  a.from = from;
  a.to = to;
  a.count = count;
  const double log_ratio = count > 1 ? std::log(to / from) / static_cast<double>(count - 1) : 0.0;
  for (std::size_t k = 0; k < count; ++k)
    a.values.push_back(k + 1 == count ? to : from * std::exp(log_ratio * static_cast<double>(k)));
  return a;
}

Axis Axis::arithmetic(std::string name, double from, double to, std::size_t count) {
  if (count == 0) throw std::invalid_argument("axis " + name + ": count must be positive");
  if (!std::isfinite(from) || !std::isfinite(to))
    throw std::invalid_argument("axis " + name + ": arithmetic endpoints must be finite");
  if (count == 1 && from != to) throw std::invalid_argument("axis " + name + ": one point needs from == to");
  Axis a;
  a.name = std::move(name);
  a.type = Type::kArithmetic;
  a.from = from;
  a.to = to;
  a.count = count;
  const double step = count > 1 ? (to - from) / static_cast<double>(count - 1) : 0.0;
  for (std::size_t k = 0; k < count; ++k)
    a.values.push_back(k + 1 == count ? to : from + step * static_cast<double>(k));
  return a;
}

Axis Axis::list(std::string name, std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("axis " + name + ": no values");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("axis " + name + ": values must be finite");
  Axis a;
  a.name = std::move(name);
  a.type = Type::kList;
  a.count = values.size();
  a.values = std::move(values);
  return a;
}

std::size_t GridSpec::cells() const {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  return total;
}

std::vector<double> GridSpec::coordinates(std::size_t cell) const {
  if (cell >= cells()) throw std::out_of_range("grid: cell index out of range");
  std::vector<double> out(axes.size());
  for (std::size_t i = axes.size(); i-- > 0;) {
    const std::size_t len = axes[i].values.size();
    out[i] = axes[i].values[cell % len];
    cell /= len;
  }
  return out;
}

std::size_t GridSpec::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (axes[i].name == name) return i;
  throw std::out_of_range("grid: no axis named " + name);
}

const Axis& GridSpec::axis(const std::string& name) const { return axes[axis_index(name)]; }

double GridSpec::param(const std::string& name) const {
  const auto it = params.find(name);
  if (it != params.end()) return it->second;
  const auto defaults = default_params(kind);
  const auto d = defaults.find(name);
  if (d == defaults.end()) throw std::out_of_range("grid: no parameter named " + name);
  return d->second;
}

std::vector<std::string> expected_axes(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kZ2Phase:
      return {"n", "sigma"};
    case ExperimentKind::kSbmPhase:
      return {"a", "b"};
    case ExperimentKind::kSbmMisclassification:
      return {"n", "a"};
    case ExperimentKind::kSbmLinearization:
      return {"n", "a", "b"};
    case ExperimentKind::kNmcRatios:
      return {"n"};
    case ExperimentKind::kAudits:
      return {};
  }
  throw std::logic_error("unhandled experiment kind");
}

std::map<std::string, double> default_params(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kZ2Phase:
      return {};
    case ExperimentKind::kSbmPhase:
      return {{"n", 300}};
    case ExperimentKind::kSbmMisclassification:
      return {{"b", 2}};
    case ExperimentKind::kSbmLinearization:
      return {{"bins", 60}};
    case ExperimentKind::kNmcRatios:
      return {{"r", 5}, {"sigma", 1}, {"p_factor", 10}};
    case ExperimentKind::kAudits:
      return {{"n", 5000}, {"a", 4.5}, {"b", 0.25}, {"z2_n", 1000}, {"concentration_trials", 20}};
  }
  throw std::logic_error("unhandled experiment kind");
}

void GridSpec::validate() {
  const std::string name = to_string(kind);
  if (trials == 0) throw std::invalid_argument("grid " + name + ": trials must be at least 1");
  const auto want = expected_axes(kind);
  std::set<std::string> seen;
  for (const auto& a : axes) {
    if (std::find(want.begin(), want.end(), a.name) == want.end())
      throw std::invalid_argument("grid " + name + ": unexpected axis '" + a.name + "'");
    if (!seen.insert(a.name).second) throw std::invalid_argument("grid " + name + ": duplicate axis '" + a.name + "'");
    if (a.values.empty()) throw std::invalid_argument("grid " + name + ": axis '" + a.name + "' is empty");
    for (double v : a.values)
      if (!std::isfinite(v)) throw std::invalid_argument("grid " + name + ": axis '" + a.name + "' is not finite");
  }
  for (const auto& w : want)
    if (!seen.count(w)) throw std::invalid_argument("grid " + name + ": missing axis '" + w + "'");
  // Order the axes as the kind lists them so cell numbering is canonical.
  std::sort(axes.begin(), axes.end(), [&](const Axis& x, const Axis& y) {
    return std::find(want.begin(), want.end(), x.name) < std::find(want.begin(), want.end(), y.name);
  });

  auto defaults = default_params(kind);
  for (const auto& [key, value] : params) {
    if (!defaults.count(key)) throw std::invalid_argument("grid " + name + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw std::invalid_argument("grid " + name + ": parameter '" + key + "' is not finite");
  }
  for (const auto& [key, value] : defaults) params.emplace(key, value);
}

GridSpec grid_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("grid: malformed JSON: ") + e.what());
  }
  reject_unknown(j, {"kind", "axes", "params", "trials", "master_seed", "output"}, "grid");
  GridSpec grid;
  grid.kind = parse_experiment_kind(required<std::string>(j, "kind", "grid"));
  if (j.contains("axes")) {
    if (!j.at("axes").is_array()) throw std::invalid_argument("grid: axes must be an array");
    for (const auto& a : j.at("axes")) grid.axes.push_back(axis_from_json(a));
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw std::invalid_argument("grid: params must be an object");
    for (const auto& [key, value] : j.at("params").items()) {
      if (!value.is_number()) throw std::invalid_argument("grid: parameter '" + key + "' must be a number");
      grid.params[key] = value.get<double>();
    }
  }
  if (j.contains("trials")) grid.trials = required<std::size_t>(j, "trials", "grid");
  if (j.contains("master_seed")) grid.master_seed = required<std::uint64_t>(j, "master_seed", "grid");
  if (j.contains("output")) grid.output = required<std::string>(j, "output", "grid");
  grid.validate();
  return grid;
}

std::string grid_to_json(const GridSpec& grid) {
  json j;
  j["kind"] = to_string(grid.kind);
  j["axes"] = json::array();
  for (const auto& a : grid.axes) j["axes"].push_back(axis_to_json(a));
  j["params"] = json::object();
  for (const auto& [key, value] : grid.params) j["params"][key] = value;
  j["trials"] = grid.trials;
  j["master_seed"] = grid.master_seed;
  j["output"] = grid.output;
  return j.dump(2);
}

GridSpec preset(ExperimentKind kind, Scale scale) {
  const bool paper = scale == Scale::kPaper;
  GridSpec g;
  g.kind = kind;
  g.trials = paper ? 100 : 20;
  g.output = "results";
  switch (kind) {
    case ExperimentKind::kZ2Phase:
      // n = 2 q1^k with q1 = 500^(1/50); sigma = q2^j with q2 = 2^(1/10), j = -32..50.
      // Desk scale keeps every 5th k and every 4th j.
      g.axes.push_back(Axis::geometric("n", 2.0, 1000.0, paper ? 51 : 11));
      g.axes.push_back(paper ? Axis::geometric("sigma", std::pow(2.0, -3.2), std::pow(2.0, 5.0), 83)
                             : Axis::geometric("sigma", std::pow(2.0, -3.2), std::pow(2.0, 4.8), 21));
      break;
    case ExperimentKind::kSbmPhase:
      g.axes.push_back(Axis::arithmetic("a", 0.0, 30.0, paper ? 101 : 21));
      g.axes.push_back(Axis::arithmetic("b", 0.0, 10.0, paper ? 101 : 21));
      break;
    case ExperimentKind::kSbmMisclassification:
      g.axes.push_back(Axis::list("n", paper ? std::vector<double>{100, 500, 5000} : std::vector<double>{100, 500, 2000}));
      g.axes.push_back(Axis::arithmetic("a", 2.0, 8.0, paper ? 31 : 7));
      break;
    case ExperimentKind::kSbmLinearization:
      g.axes.push_back(Axis::list("n", {5000}));
      g.axes.push_back(Axis::list("a", {4.5}));
      g.axes.push_back(Axis::list("b", {0.25}));
      break;
    case ExperimentKind::kNmcRatios:
      g.axes.push_back(Axis::arithmetic("n", 500.0, paper ? 5000.0 : 2500.0, paper ? 10 : 5));
      break;
    case ExperimentKind::kAudits:
      g.trials = 1;
      g.params["concentration_trials"] = paper ? 100 : 20;
      break;
  }
  g.validate();
  return g;
}

}  // namespace entrywise
