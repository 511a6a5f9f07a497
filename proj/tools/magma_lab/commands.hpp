#ifndef MAGMA_LAB_COMMANDS_HPP
#define MAGMA_LAB_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace magma::lab {

/// Each command resolves its keys from `cfg`, rejects unknown keys, writes
/// its artifacts plus manifest.json into `out_dir` and prints a short summary.
void cmd_shoot(Config& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_evolve(Config& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_sweep(Config& cfg, const std::filesystem::path& out_dir, std::ostream& log, unsigned jobs);
void cmd_embed(Config& cfg, const std::filesystem::path& out_dir, std::ostream& log);
void cmd_diagnose(Config& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace magma::lab

#endif  // MAGMA_LAB_COMMANDS_HPP
