#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcoh::verify {

/// How a property's recorded values are judged against its tolerance:
/// AtMost: every value <= tol (worst = max); AtLeast: every value >= tol
/// (worst = min); SomeAbove: at least one value >= tol (reported value = max).
enum class Bound { AtMost, AtLeast, SomeAbove };

struct PropertyResult {
  std::string name;
  /// Acceptance criterion this property belongs to, 0 for module-level properties.
  int criterion = 0;
  Bound bound = Bound::AtMost;
  double worst = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  bool passed = false;
  /// Wall time. Not part of the formatted report, which must be reproducible.
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 1;
  /// Instance count per property; 0 keeps each property's own default.
  int trials = 0;
  /// Largest system dimension for random instances.
  int dim_max = 8;
  /// Flips the sign of one term in the discord identity (negative control).
  bool corrupt = false;
};

struct Report {
  Options options;
  /// Sorted by property name.
  std::vector<PropertyResult> properties;
  bool passed() const;
  double seconds() const;
};

/// Names of all properties, sorted.
std::vector<std::string> property_names();

/// Runs the whole suite. Each property draws from its own stream
/// derive_seed(seed, k), k being its index in the sorted name list.
Report run(const Options& options);

/// One line per property: status, name, worst value, bound, tolerance, trials.
std::string format_text(const Report& report);
std::string format_json(const Report& report);

}  // namespace qcoh::verify
