#include "manifest.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace plate::cli {

std::string git_blob_sha1(const std::string& text) {
  std::string blob = "blob " + std::to_string(text.size());
  blob.push_back('\0');
  blob += text;
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md.data(), &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

RunManifest make_manifest(const std::string& command, const RunConfig& cfg,
                          const std::filesystem::path& out_dir) {
  RunManifest m;
  m.command = command;
  m.profile = cfg.profile;
  m.out_dir = out_dir;
  m.config_text = to_key_value_text(cfg);
  m.hash = git_blob_sha1(m.config_text);
  return m;
}

void write_manifest(const RunManifest& m) {
  std::filesystem::create_directories(m.out_dir);
  const std::filesystem::path path = m.out_dir / "manifest.txt";
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# command=" << m.command << '\n';
  os << "# profile=" << m.profile << '\n';
  os << "# output_dir=" << m.out_dir.string() << '\n';
  os << "# config_hash=" << m.hash << '\n';
  os << m.config_text;
}

}  // namespace plate::cli
