#pragma once

#include <string>
#include <string_view>

namespace forestcalc {

/// Size bounds for the exponential-cost routines. Defaults can be overridden
/// through the FORESTCALC_LIMIT environment variable, a comma separated list
/// of key=value pairs, e.g. FORESTCALC_LIMIT="trees=9,tau=8".
///
/// keys: trees (forest/tree enumeration n), tau (links in a box integral),
///       mayer (polymers per connected coefficient), fermion (tree order),
///       cluster (boxes in a Gaussian model), order (series truncation).
struct SizeLimits {
  int trees = 7;
  int tau = 7;
  int mayer = 6;
  int fermion = 4;
  int cluster = 6;
  int order = 8;

  /// Applies a FORESTCALC_LIMIT style override string; throws ValidationError on junk.
  void apply(std::string_view spec);
};

/// Process-wide limits, initialised from the environment on first use.
const SizeLimits& limits();

/// Replaces the process-wide limits (tests and the CLI use this).
void set_limits(const SizeLimits& l);

/// Throws SizeLimitError when value > bound.
void require_within(int value, int bound, std::string_view what);

} // namespace forestcalc
