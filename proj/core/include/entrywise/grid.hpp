#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace entrywise {

enum class ExperimentKind { kZ2Phase, kSbmPhase, kSbmMisclassification, kSbmLinearization, kNmcRatios, kAudits };

// "z2-phase", "sbm-phase", "sbm-miscl", "sbm-linearization", "nmc-ratios", "audits".
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct Axis {
  enum class Type { kGeometric, kArithmetic, kList };

  std::string name;
  Type type = Type::kList;
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 0;
  std::vector<double> values;

  // `count` points from `from` to `to` inclusive, equal ratios.
  static Axis geometric(std::string name, double from, double to, std::size_t count);
  // `count` points from `from` to `to` inclusive, equal steps.
  static Axis arithmetic(std::string name, double from, double to, std::size_t count);
  static Axis list(std::string name, std::vector<double> values);
};

struct GridSpec {
  ExperimentKind kind = ExperimentKind::kZ2Phase;
  std::vector<Axis> axes;
  // Fixed model parameters; each kind accepts a known set with defaults.
  std::map<std::string, double> params;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  // Output directory.
  std::string output = ".";

  // Product of the axis lengths, last axis varying fastest.
  std::size_t cells() const;
  std::vector<double> coordinates(std::size_t cell) const;
  const Axis& axis(const std::string& name) const;
  std::size_t axis_index(const std::string& name) const;
  double param(const std::string& name) const;

  // Axes must be exactly the ones the kind expects, nonempty and finite;
  // params must be known to the kind; trials >= 1. Fills in default params.
  void validate();
};

// Axis names and parameter defaults by kind.
std::vector<std::string> expected_axes(ExperimentKind kind);
std::map<std::string, double> default_params(ExperimentKind kind);

// JSON with keys kind, axes, params, trials, master_seed, output. Axis
// objects hold "name" and one of "geometric" / "arithmetic" ({from, to,
// count}) or "values". Unknown keys are rejected with std::invalid_argument.
GridSpec grid_from_json(const std::string& text);
std::string grid_to_json(const GridSpec& grid);

enum class Scale { kDesk, kPaper };
GridSpec preset(ExperimentKind kind, Scale scale);

}  // namespace entrywise
