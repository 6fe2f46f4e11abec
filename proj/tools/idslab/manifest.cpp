#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "idslab/error.hpp"

#ifndef IDSLAB_VERSION
#define IDSLAB_VERSION "0.0.0"
#endif

namespace idslab::app {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string() + " for checksumming");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount())) != 1)
      throw Error("sha256: update failed");
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw Error("sha256: final failed");
  std::string hex;
  hex.reserve(2 * len);
  char tmp[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(tmp, sizeof tmp, "%02x", md[i]);
    hex += tmp;
  }
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string artifact_version() { return IDSLAB_VERSION; }

nlohmann::json RunManifest::to_json() const {
  return {{"configEcho", config_echo},
          {"artifactVersion", artifact_version},
          {"timestamp", timestamp},
          {"perFileChecksums", checksums},
          {"diagnosticFlags", diagnostic_flags}};
}

RunManifest write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                           const nlohmann::json& config_echo, const std::map<std::string, std::string>& flags) {
  RunManifest m{config_echo, artifact_version(), utc_timestamp(), {}, flags};
  for (const auto& f : files) m.checksums[f] = sha256_file(dir / f);
  const auto tmp = dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << m.to_json().dump(2) << '\n';
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, dir / "manifest.json");
  return m;
}

}  // namespace idslab::app
