#include "rrs/certificate.hpp"

#include <cmath>

#include <openssl/sha.h>

namespace rrs {

const char* toolkit_version() { return RRS_VERSION; }

std::string sha256_hex(const std::vector<unsigned char>& bytes) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(bytes.data(), bytes.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char c : md) {
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 15]);
  }
  return out;
}

std::string map_digest(const std::vector<unsigned char>& file_bytes) {
  return "sha256:" + sha256_hex(file_bytes);
}

nlohmann::ordered_json certificate_json(const RobustnessCertificate& c, const std::string& digest) {
  using nlohmann::ordered_json;
  auto optional = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["mode"] = c.mode == CertificateMode::MaxAttackSize ? "max_attack_size" : "max_beta";
  if (std::isinf(c.d_prior))
    j["d_prior"] = "inf";
  else
    j["d_prior"] = c.d_prior;
  j["d_star"] = c.d_star;
  j["sigma"] = c.sigma;
  j["T"] = c.samples > 0 ? ordered_json(c.samples) : ordered_json(nullptr);
  j["n"] = c.n;
  j["k"] = c.k;
  j["beta"] = c.beta;
  j["L"] = c.L;
  j["L_kl_row"] = optional(c.kl_row_L);
  if (c.alpha_star.is_finite())
    j["alpha_star"] = c.alpha_star.value;
  else
    j["alpha_star"] = c.alpha_star.str();
  j["eps_robust"] = c.eps_robust;
  j["eps_lower"] = optional(c.eps_lower);
  j["confidence"] = optional(c.confidence);
  j["dimension_penalty_applied"] = c.dimension_penalty_applied;
  j["sup_at_alpha_cap"] = c.sup_at_cap;
  j["map_digest"] = digest;
  j["toolkit_version"] = toolkit_version();
  return j;
}

std::string certificate_document(const RobustnessCertificate& c, const std::string& digest) {
  return certificate_json(c, digest).dump(2) + "\n";
}

}  // namespace rrs
