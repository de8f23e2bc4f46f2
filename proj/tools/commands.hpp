#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "plate/config.hpp"

namespace plate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitVerify = 3;

int cmd_kernels(const RunConfig& cfg, const std::filesystem::path& out,
                const std::string& hash, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out,
                 const std::string& hash, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out,
               const std::string& hash, std::ostream& log);

}  // namespace plate::cli
