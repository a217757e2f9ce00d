#include "forestcalc/limits.hpp"

#include "forestcalc/errors.hpp"

#include <cstdlib>
#include <sstream>

namespace forestcalc {

namespace {

SizeLimits& storage() {
  static SizeLimits instance = [] {
    SizeLimits l;
    if (const char* env = std::getenv("FORESTCALC_LIMIT"); env != nullptr) l.apply(env);
    return l;
  }();
  return instance;
}

} // namespace

void SizeLimits::apply(std::string_view spec) {
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("limit entry '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("limit entry '" + item + "' has a non-integer value");
    }
    if (value < 1) throw ValidationError("limit entry '" + item + "' must be positive");
    if (key == "trees") trees = value;
    else if (key == "tau") tau = value;
    else if (key == "mayer") mayer = value;
    else if (key == "fermion") fermion = value;
    else if (key == "cluster") cluster = value;
    else if (key == "order") order = value;
    else throw ValidationError("unknown limit key '" + key + "'");
  }
}

const SizeLimits& limits() { return storage(); }

void set_limits(const SizeLimits& l) { storage() = l; }

void require_within(int value, int bound, std::string_view what) {
  if (value > bound) {
    std::ostringstream os;
    os << what << " = " << value << " exceeds the configured bound " << bound
       << " (raise it with FORESTCALC_LIMIT)";
    throw SizeLimitError(os.str());
  }
}

} // namespace forestcalc
