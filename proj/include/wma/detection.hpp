// Readout and noise: right/left detection probabilities, reproducible
// photon-counting simulation with post-selection, phase and signal
// estimators with Fisher-information uncertainties, and the quantum-noise
// scaling of the interferometer (shot noise vs radiation pressure).
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wma/protocol.hpp"

namespace wma {

// Name of the random-stream contract implemented by SeededRng. Bump this if
// the generator or the binomial sampling algorithm ever changes: identical
// (seed, stream_id) must keep producing identical counts forever within one
// contract version.
inline constexpr const char* kRngContract = "wma-rng-v1";

// Deterministic, portable random stream.
//
// Contract "wma-rng-v1":
//   * engine: std::mt19937_64 (bit-exact sequence fixed by the C++ standard),
//     seeded with splitmix64(seed XOR (stream_id * 0x9E3779B97F4A7C15)).
//   * uniform(): (next_u64 >> 11) * 2^-53, i.e. 53-bit doubles in [0, 1).
//   * binomial(): the explicit inversion/chunking sampler defined in the
//     implementation — never std::binomial_distribution, whose algorithm is
//     implementation-defined and therefore not reproducible across toolchains.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  double uniform();  // [0, 1)

  // Binomial(n, p) by CDF inversion; large n·p is split into independent
  // chunks so the walk never underflows and stays O(n·p) time.
  std::uint64_t binomial(std::uint64_t n, double p);

 private:
  std::uint64_t inversion_binomial(std::uint64_t n, double p);

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

struct RlProbabilities {
  double p_r = 0.5;
  double p_l = 0.5;
};

// Circular-basis detection probabilities for a pointer with relative phase
// φ: p_R = (1 + sin φ)/2 and p_L = 1 − p_R, so p_R − p_L = sin φ and the two
// sum to 1 exactly in floating point.
RlProbabilities rl_probabilities(double phi);

struct DetectorCounts {
  std::uint64_t n_input = 0;  // photons entering the interferometer
  std::uint64_t n_post = 0;   // photons surviving post-selection
  std::uint64_t n_r = 0;      // right-circular detector
  std::uint64_t n_l = 0;      // left-circular detector
};

// One counting experiment from bare probabilities: n_post ~ B(n_input, p_post)
// followed by n_r ~ B(n_post, p_r). Both probabilities must lie in [0, 1].
DetectorCounts simulate_counts(std::uint64_t n_input, double p_post, double p_r,
                               SeededRng& rng);

// Same, with the probabilities derived from the protocol configuration.
DetectorCounts simulate_counts(std::uint64_t n_input, const PreSelection& pre,
                               const PostSelection& post, double theta,
                               SeededRng& rng);

struct EstimationResult {
  double phi_hat = 0.0;       // arcsine estimate of the readout phase
  double theta_hat = 0.0;     // signal phase recovered by inverting φ(θ)
  double stderr_phi = 0.0;    // 1/√n_post (unit Fisher information per photon)
  double stderr_theta = 0.0;  // stderr_phi / |dφ/dθ| at theta_hat
};

// Invert the counts into phase estimates. phi_hat = arcsin((n_r − n_l)/n_post)
// clamped to [−π/2, π/2]; theta_hat solves compensated_phase(θ) = phi_hat by
// bisection on [−π/2, π/2] to 1e-15 (clamped to the nearer endpoint if the
// readout phase lies outside the map's range there). Throws std::domain_error
// when n_post = 0 (no data).
EstimationResult estimate_phase(const DetectorCounts& counts, const PreSelection& pre,
                                const PostSelection& post, double phi_c = 0.0);

// Fisher information per detected photon of the binary R/L outcome:
// (dp_R/dφ)² (1/p_R + 1/p_L) = cos²φ / (¼(1+sinφ)(1−sinφ) ·4) = 1 for all φ.
double fisher_information_phi();

// Quantum-noise amplitudes with proportionality constants fixed to 1; only
// scaling exponents and ratios are meaningful. Transmission/reflection
// amplitudes enter through their magnitudes.
double shot_noise(double n, double t1, double t2);          // √2/(|t1 t2|√n)
double radiation_pressure_noise(double n, double t1);       // |t1|√n

struct NoiseBudget {
  double n_photons = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double h_rn = 0.0;     // radiation-pressure term
  double h_sn = 0.0;     // shot-noise term
  double h_total = 0.0;  // quadrature sum
};

struct NoiseSweepResult {
  std::vector<NoiseBudget> rows;
  double n_star = 0.0;  // photon number where h_rn = h_sn: √2/(t1² t2)
};

// Log-spaced photon-number sweep (inclusive endpoints) of both noise terms,
// plus the analytic crossover.
NoiseSweepResult noise_budget_sweep(double n_min, double n_max, int points,
                                    double t1, double t2);

// Crossover photon number solving |t1|√N = √2/(|t1 t2|√N).
double noise_crossover(double t1, double t2);

}  // namespace wma
