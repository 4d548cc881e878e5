#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "memini/config.hpp"

namespace memini {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOperationalError = 1;
inline constexpr int kExitUserError = 2;

struct QueryOptions {
    std::string text;
    bool json = false;
};

struct AblateOptions {
    bool csv = false;
};

struct TrajectoryOptions {
    std::string label_a;
    std::string label_b;
    std::vector<std::string> models;  // empty: coupled, single, uniform
};

int cmd_fetch(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_ingest(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_query(const RunConfig& config, const QueryOptions& options,
              std::ostream& out, std::ostream& err);
int cmd_ablate(const RunConfig& config, const AblateOptions& options,
               std::ostream& out, std::ostream& err);
int cmd_trajectory(const RunConfig& config, const TrajectoryOptions& options,
                   std::ostream& out, std::ostream& err);

// Full command-line front end (argument parsing plus dispatch); the
// binary's main is a one-line wrapper around this.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace memini
