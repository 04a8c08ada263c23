#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bqsearch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Relative --csv/--json paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "BQSEARCH_OUTPUT_DIR";

/// Version tag written into every CSV/JSON header.
inline constexpr int kSchemaVersion = 1;

/// Subcommands: search, curve, sweep, andor, check-facts, baselines.
/// Returns 0 on success, 1 on an invariant violation, 2 on a usage error.
int run_cli(int argc, char** argv);

/// Same, with `args` excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for the config hash stamped on every output row.
std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace bqsearch
