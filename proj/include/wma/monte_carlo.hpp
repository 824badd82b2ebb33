// Repeated counting experiments over independent random streams, with a
// serial reference implementation and an OpenMP-parallel kernel that is
// guaranteed to produce identical records: repetition i always consumes
// stream (seed, stream_id = i), so the schedule cannot leak into the data.
#pragma once

#include <cstdint>
#include <vector>

#include "wma/detection.hpp"

namespace wma {

struct McConfig {
  PreSelection pre;
  PostSelection post;
  double phi_c = 0.0;
  double theta = 0.0;
  std::uint64_t n_input = 0;
  std::uint64_t seed = 0;
  std::uint64_t repetitions = 0;
};

struct RepetitionRecord {
  std::uint64_t stream_id = 0;
  DetectorCounts counts;
  bool estimate_valid = false;  // false when every photon was rejected
  EstimationResult estimate;    // meaningful only when estimate_valid
};

struct SimulationSummary {
  std::uint64_t valid_repetitions = 0;
  double mean_phi_hat = 0.0;
  double stddev_phi_hat = 0.0;  // sample standard deviation (n−1)
  double mean_theta_hat = 0.0;
  double stddev_theta_hat = 0.0;
  double mean_stderr_theta = 0.0;  // average of the per-repetition predictions
};

// Probabilities shared by every repetition of a configuration.
struct McDerived {
  double p_post = 0.0;
  double phi_true = 0.0;
  double p_r = 0.5;
};

McDerived derive_probabilities(const McConfig& cfg);

// Reference implementation: one repetition after another, in stream order.
std::vector<RepetitionRecord> run_repetitions_serial(const McConfig& cfg);

// OpenMP-parallel kernel. Record i is written by whichever thread draws
// stream i, so the output is bitwise identical to the serial reference.
// Falls back to the plain loop when built without OpenMP.
std::vector<RepetitionRecord> run_repetitions_parallel(const McConfig& cfg);

// Means and sample standard deviations over the valid repetitions. With no
// valid repetitions the statistics are NaN and valid_repetitions is 0.
SimulationSummary summarize(const std::vector<RepetitionRecord>& records);

}  // namespace wma
