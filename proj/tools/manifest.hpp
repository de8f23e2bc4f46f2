#pragma once

#include <filesystem>
#include <string>

#include "plate/config.hpp"

namespace plate::cli {

/// SHA-1 of "blob <size>\0<text>", the hash git gives the same content.
std::string git_blob_sha1(const std::string& text);

struct RunManifest {
  std::string command;
  std::string profile;
  std::filesystem::path out_dir;
  std::string config_text;  // every resolved key, sorted
  std::string hash;
};

RunManifest make_manifest(const std::string& command, const RunConfig& cfg,
                          const std::filesystem::path& out_dir);

/// Writes <out_dir>/manifest.txt.
void write_manifest(const RunManifest& m);

}  // namespace plate::cli
