#pragma once

#include <cmath>

namespace rrs {

// Forward-mode dual number; running the reverse pass on duals yields
// Hessian-vector products.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  Dual(double value, double tangent) : v(value), d(tangent) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

inline double tanh_fn(double x) { return std::tanh(x); }
inline Dual tanh_fn(const Dual& x) {
  double t = std::tanh(x.v);
  return {t, (1.0 - t * t) * x.d};
}

inline double sigmoid_fn(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}
inline Dual sigmoid_fn(const Dual& x) {
  double s = sigmoid_fn(x.v);
  return {s, s * (1.0 - s) * x.d};
}

inline double softplus_fn(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline Dual softplus_fn(const Dual& x) { return {softplus_fn(x.v), sigmoid_fn(x.v) * x.d}; }

}  // namespace rrs
