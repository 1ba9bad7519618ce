// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "citeneed/error.hpp"

namespace citeneed::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` and files, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Bad invocation that CLI11 itself cannot detect; maps to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Seed from the flag, else CITENEED_SEED, else models::kDefaultSeed.
/// Throws UsageError for an unparsable environment value.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Values given on the command line next to `run --config`; they win over
/// the file.
struct PipelineOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs, batch, hidden;
  std::optional<std::string> variant, split, embeddings, out;
};

/// Stages build -> train -> evaluate -> report, each stored under the output
/// directory as `<stage>-<digest>.<ext>` where the digest covers the stage
/// parameters and the bytes of its inputs. A stage whose output exists is
/// skipped unless `force`.
int run_pipeline(const std::filesystem::path& config, const PipelineOverrides& overrides, bool force,
                 std::ostream& out, std::ostream& err);

}  // namespace citeneed::cli
