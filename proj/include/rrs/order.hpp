#pragma once

#include <limits>
#include <string>

namespace rrs {

// Order of a Renyi divergence: a finite alpha > 1, the alpha -> 1+ limit (KL),
// or alpha = infinity.
struct RenyiOrder {
  enum class Kind { Finite, OnePlus, Infinity };

  Kind kind = Kind::Finite;
  double value = 2.0;

  static RenyiOrder finite(double a) { return {Kind::Finite, a}; }
  static RenyiOrder one_plus() { return {Kind::OnePlus, 1.0}; }
  static RenyiOrder infinity() {
    return {Kind::Infinity, std::numeric_limits<double>::infinity()};
  }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_one_plus() const { return kind == Kind::OnePlus; }
  bool is_infinity() const { return kind == Kind::Infinity; }

  // Throws DomainError unless finite alpha > 1.
  void validate() const;

  // "1+", "inf" or the shortest round-trip decimal.
  std::string str() const;
  static RenyiOrder parse(const std::string& s);
};

}  // namespace rrs
