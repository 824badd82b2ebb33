#include "wma/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wma {

namespace {

RepetitionRecord run_one(const McConfig& cfg, const McDerived& derived,
                         std::uint64_t stream) {
  SeededRng rng(cfg.seed, stream);
  RepetitionRecord rec;
  rec.stream_id = stream;
  rec.counts = simulate_counts(cfg.n_input, derived.p_post, derived.p_r, rng);
  if (rec.counts.n_post > 0) {
    rec.estimate_valid = true;
    rec.estimate = estimate_phase(rec.counts, cfg.pre, cfg.post, cfg.phi_c);
  }
  return rec;
}

void validate_config(const McConfig& cfg) {
  validate(cfg.pre);
  validate(cfg.post);
  if (cfg.n_input == 0) {
    throw std::invalid_argument("monte carlo: n_input must be positive");
  }
  if (cfg.repetitions == 0) {
    throw std::invalid_argument("monte carlo: need at least one repetition");
  }
}

}  // namespace

McDerived derive_probabilities(const McConfig& cfg) {
  McDerived d;
  // Closed forms of the full pipeline; the equivalence with the state-vector
  // route is covered by the protocol tests.
  const double ag = cfg.pre.alpha * cfg.post.gamma;
  const double be = cfg.pre.beta * cfg.post.eta;
  const Amplitude rot = std::polar(1.0, cfg.phi_c);
  const Amplitude c_h = ag * rot + Amplitude{be, 0.0};
  const Amplitude c_v = ag * rot + be * std::polar(1.0, cfg.theta);
  d.p_post = 0.5 * (std::norm(c_h) + std::norm(c_v));
  d.p_post = std::min(d.p_post, 1.0);
  d.phi_true = compensated_phase(cfg.pre, cfg.post, cfg.phi_c, cfg.theta);
  d.p_r = rl_probabilities(d.phi_true).p_r;
  return d;
}

std::vector<RepetitionRecord> run_repetitions_serial(const McConfig& cfg) {
  validate_config(cfg);
  const McDerived derived = derive_probabilities(cfg);
  std::vector<RepetitionRecord> records(cfg.repetitions);
  for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
    records[i] = run_one(cfg, derived, i);
  }
  return records;
}

std::vector<RepetitionRecord> run_repetitions_parallel(const McConfig& cfg) {
  validate_config(cfg);
  const McDerived derived = derive_probabilities(cfg);
  std::vector<RepetitionRecord> records(cfg.repetitions);
  const std::int64_t reps = static_cast<std::int64_t>(cfg.repetitions);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < reps; ++i) {
    records[static_cast<std::uint64_t>(i)] =
        run_one(cfg, derived, static_cast<std::uint64_t>(i));
  }
  return records;
}

SimulationSummary summarize(const std::vector<RepetitionRecord>& records) {
  SimulationSummary s;
  double sum_phi = 0.0, sum_theta = 0.0, sum_stderr = 0.0;
  for (const auto& rec : records) {
    if (!rec.estimate_valid) continue;
    ++s.valid_repetitions;
    sum_phi += rec.estimate.phi_hat;
    sum_theta += rec.estimate.theta_hat;
    sum_stderr += rec.estimate.stderr_theta;
  }
  if (s.valid_repetitions == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean_phi_hat = s.stddev_phi_hat = nan;
    s.mean_theta_hat = s.stddev_theta_hat = nan;
    s.mean_stderr_theta = nan;
    return s;
  }
  const double n = static_cast<double>(s.valid_repetitions);
  s.mean_phi_hat = sum_phi / n;
  s.mean_theta_hat = sum_theta / n;
  s.mean_stderr_theta = sum_stderr / n;
  if (s.valid_repetitions < 2) {
    s.stddev_phi_hat = 0.0;
    s.stddev_theta_hat = 0.0;
    return s;
  }
  double ss_phi = 0.0, ss_theta = 0.0;
  for (const auto& rec : records) {
    if (!rec.estimate_valid) continue;
    const double d_phi = rec.estimate.phi_hat - s.mean_phi_hat;
    const double d_theta = rec.estimate.theta_hat - s.mean_theta_hat;
    ss_phi += d_phi * d_phi;
    ss_theta += d_theta * d_theta;
  }
  s.stddev_phi_hat = std::sqrt(ss_phi / (n - 1.0));
  s.stddev_theta_hat = std::sqrt(ss_theta / (n - 1.0));
  return s;
}

}  // namespace wma
