#include <gtest/gtest.h>

#include "rrs/certificate.hpp"
#include "rrs/certifier.hpp"
#include "rrs/rrsm.hpp"

namespace rrs {
namespace {

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex({}), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  std::vector<unsigned char> abc{'a', 'b', 'c'};
  EXPECT_EQ(sha256_hex(abc), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(map_digest(abc), "sha256:" + sha256_hex(abc));
}

TEST(CertificateJson, KeyOrderAndValues) {
  std::vector<double> m{0.4, 0.3, 0.2, 0.1};
  auto c = certify_max_attack(m, k0_and_boundary(1, 1.0, 4), 0.1, 2.0);
  auto bytes = encode_map({1, 4, 1}, m);
  auto j = certificate_json(c, map_digest(bytes));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{
      "schema_version", "mode", "d_prior", "d_star", "sigma", "T", "n", "k", "beta", "L",
      "L_kl_row", "alpha_star", "eps_robust", "eps_lower", "confidence",
      "dimension_penalty_applied", "sup_at_alpha_cap", "map_digest", "toolkit_version"};
  EXPECT_EQ(keys, want);
  EXPECT_EQ(j["mode"], "max_attack_size");
  EXPECT_EQ(j["d_prior"], 2.0);
  EXPECT_TRUE(j["T"].is_null());
  EXPECT_TRUE(j["eps_lower"].is_null());
  EXPECT_EQ(j["L"], c.L);
  EXPECT_EQ(j["toolkit_version"], toolkit_version());
  EXPECT_EQ(j["map_digest"].get<std::string>().rfind("sha256:", 0), 0u);
}

TEST(CertificateJson, InfinitePriorAndOnePlus) {
  std::vector<double> m{0.4, 0.3, 0.2, 0.1};
  auto c = certify_max_attack(m, k0_and_boundary(1, 1.0, 4), 0.1,
                              std::numeric_limits<double>::infinity());
  auto j = certificate_json(c, "sha256:x");
  EXPECT_EQ(j["d_prior"], "inf");
  EXPECT_EQ(j["alpha_star"], "1+");
  auto doc = certificate_document(c, "sha256:x");
  EXPECT_EQ(doc.back(), '\n');
  EXPECT_EQ(certificate_document(c, "sha256:x"), doc);
}

}  // namespace
}  // namespace rrs
