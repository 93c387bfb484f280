#include "rrs/order.hpp"

#include <charconv>
#include <cmath>

#include "rrs/errors.hpp"

namespace rrs {

void RenyiOrder::validate() const {
  if (kind == Kind::Finite && !(value > 1.0 && std::isfinite(value)))
    throw DomainError("Renyi order must be > 1, got " + std::to_string(value));
}

std::string RenyiOrder::str() const {
  if (kind == Kind::OnePlus) return "1+";
  if (kind == Kind::Infinity) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

RenyiOrder RenyiOrder::parse(const std::string& s) {
  if (s == "1+" || s == "one_plus" || s == "kl") return one_plus();
  if (s == "inf" || s == "infinity") return infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("cannot parse Renyi order '" + s + "'");
  RenyiOrder o = finite(v);
  o.validate();
  return o;
}

}  // namespace rrs
