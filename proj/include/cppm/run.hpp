#pragma once

// Runs a scenario to completion and post-processes an output directory.

#include <optional>
#include <string>
#include <vector>

#include "cppm/config.hpp"
#include "cppm/metrics.hpp"

namespace cppm {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitBreakdown = 3 };

struct RunOptions {
  int threads = 1;
  bool quiet = false;
  bool metrics = true;  // post-process into metrics.json after the run
};

struct RunResult {
  int exit_code = kExitOk;
  long steps = 0;
  long audit_failures = 0;
  double wall_seconds = 0.0;
  std::string error;
};

/// Steps the configured scenario, writing into cfg.output.directory:
///   history.csv       one row per step (and step 0)
///   snap_NNNNNNN.*    snapshots every snapshot_interval steps, plus first and last
///   snapshots.csv     step, time_s, file stem
///   crack_front.csv   first time each point's damage exceeded the crack threshold
///   run.json          run description used by compute_metrics
RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& opt = {});

struct MetricsReport {
  std::string name;
  long snapshot_step = 0;
  std::optional<BandMeasurement> band;
  double rotation_ratio = 0.0;          // max |omega| in band / median outside
  double softening_negative_fraction = 0.0;  // top-decile plastic points with negative second-order work
  double peak_reaction = 0.0;
  double peak_time = 0.0;
  double final_reaction = 0.0;
  long reaction_peaks = 0;              // local maxima of |reaction| above 5% prominence
  long reaction_peaks_filtered = 0;     // same, after averaging over one P-wave round trip
  std::optional<BranchTiming> branch;   // seconds
  long audit_failures = 0;

  /// JSON with times in microseconds.
  std::string to_json() const;
};

/// Reads run.json, the last snapshot, history.csv and crack_front.csv.
MetricsReport compute_metrics(const std::string& dir);

/// Number of local maxima of |r| that rise at least `prominence` * max|r|
/// above the surrounding minima.
long count_peaks(const std::vector<double>& r, double prominence);

/// Centred moving average over `width` samples, shrinking at the ends.
std::vector<double> moving_average(const std::vector<double>& r, long width);

}  // namespace cppm
