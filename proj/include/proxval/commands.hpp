// Subcommands of the proxval tool, callable in-process.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxval/config.hpp"
#include "proxval/io.hpp"

namespace proxval {

struct CommandResult {
    int exit_code = 0;  // 0 ok, 2 rejected input rows without permissive
    std::vector<ManifestEntry> manifest;
    std::string summary;
};

std::span<const std::string_view> command_names();

/// Runs one subcommand: checks the output directory, computes, writes every
/// artifact plus config.resolved and MANIFEST.tsv under config.out_dir.
/// Throws on unreadable or malformed input.
CommandResult run_command(std::string_view name, const RunConfig& config);

}  // namespace proxval
