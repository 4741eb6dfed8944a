#include "c3bf/errors.hpp"

#include <sstream>

namespace c3bf {

namespace {

std::string inside_message(double separation, double radius) {
  std::ostringstream os;
  os << "relative distance " << separation << " m is within collision radius " << radius << " m";
  return os.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

InsideCollisionRadius::InsideCollisionRadius(double separation, double radius)
    : Error(inside_message(separation, radius)), separation_(separation), radius_(radius) {}

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error("invalid scenario config: " + join(violations)), violations_(std::move(violations)) {}

}  // namespace c3bf
