#pragma once

#include <filesystem>
#include <string>

#include "bbench/config.hpp"

namespace bbench {

enum ExitCode : int {
    kExitPass = 0,
    kExitChecksFailed = 1,
    kExitUsage = 2,
    kExitFault = 3,
};

struct CommandOptions {
    std::filesystem::path out_dir;
    bool strict = false;
};

// Each command writes report.json (plus CSVs where relevant) into out_dir and
// returns kExitPass or kExitChecksFailed.  Numerical faults propagate as
// exceptions; cli_main turns them into kExitFault.
int run_verify(const RunConfig& cfg, const CommandOptions& opts);
int run_spectrum(const RunConfig& cfg, const CommandOptions& opts);
int run_evolve(const RunConfig& cfg, const CommandOptions& opts);
int run_stability(const RunConfig& cfg, const CommandOptions& opts);
int run_soliton(const RunConfig& cfg, const CommandOptions& opts);

/// breather-bench <verify|spectrum|evolve|stability|soliton> --config <path> --out <dir> [--strict]
int cli_main(int argc, char** argv);

}  // namespace bbench
