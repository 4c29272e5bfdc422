// Drives whole episodes from a RunConfig: expert-controlled or replayed
// from an action tape, with optional trajectory output and SVG frames.
#pragma once

#include "tunnel/config_io.hpp"
#include "tunnel/trajectory.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tunnel {

/// Actions per episode, in step order.
using ActionTape = std::vector<std::vector<Action>>;

ActionTape tape_from_trajectory(const Trajectory& trajectory);

struct RunSummary {
    int episodes = 0;
    long steps = 0;
    std::map<std::string, int> outcomes;  // label -> episodes
    double total_reward = 0.0;
};

struct RunOptions {
    std::optional<ActionTape> replay;  // replaces the expert when set
    std::string source;                // header "source"; defaults to the expert name or "replay"
    int jobs = 1;                      // parallel episode workers; output is identical for any value
};

/// Episode i is reset with config.seed + i. Writes config.trajectory_path
/// and frames when configured. Labels: reached_end, collision, diverged,
/// truncated (tunnel); success, trespass, terrain, out_of_bounds, diverged,
/// truncated (mission); tape_end when a replay tape runs out first.
RunSummary run_episodes(const RunConfig& config, const RunOptions& options = {});

Json to_json(const RunSummary& summary);

/// Re-creates frames for every `every`-th record of a trajectory.
/// Returns the number of files written.
std::size_t render_trajectory(const Trajectory& trajectory, const RunConfig& config, const std::string& out_dir,
                              int every);

std::string frame_filename(int episode, int step);

}  // namespace tunnel
