#include "piseries/harmonics.hpp"

namespace piseries {

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::classical:
      return "classical";
    case Flavor::q_quadratic:
      return "q_quadratic";
    case Flavor::q_linear:
      return "q_linear";
  }
  return "unknown";
}

Flavor parse_flavor(const std::string& s) {
  if (s == "classical") return Flavor::classical;
  if (s == "q_quadratic") return Flavor::q_quadratic;
  if (s == "q_linear") return Flavor::q_linear;
  throw PreconditionError("unknown flavor: " + s);
}

}  // namespace piseries
