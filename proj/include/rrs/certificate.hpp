#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rrs/certifier.hpp"

namespace rrs {

inline constexpr int kCertificateSchemaVersion = 1;

const char* toolkit_version();

std::string sha256_hex(const std::vector<unsigned char>& bytes);

// "sha256:<hex>" over the exact bytes of the certified map file.
std::string map_digest(const std::vector<unsigned char>& file_bytes);

nlohmann::ordered_json certificate_json(const RobustnessCertificate& c, const std::string& digest);

// Pretty-printed with fixed key order and a trailing newline.
std::string certificate_document(const RobustnessCertificate& c, const std::string& digest);

}  // namespace rrs
