#include "wma/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wma {

namespace {

// splitmix64: the standard 64-bit mixer; decorrelates nearby seeds and
// stream ids before they reach the engine.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// (1 − p)^n by binary exponentiation: multiplications only, so the result is
// reproducible across platforms (no libm pow). Safe against underflow for
// n·p ≤ 500, where the true value stays far above DBL_MIN.
double pow_int(double base, std::uint64_t n) {
  double acc = 1.0;
  double sq = base;
  while (n > 0) {
    if (n & 1ull) acc *= sq;
    sq *= sq;
    n >>= 1;
  }
  return acc;
}

// Largest first-stage size the inversion walk accepts before chunking.
constexpr double kInversionMeanCap = 500.0;

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(seed ^ (stream_id * 0x9E3779B97F4A7C15ull))) {}

std::uint64_t SeededRng::next_u64() { return engine_(); }

double SeededRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::inversion_binomial(std::uint64_t n, double p) {
  // CDF inversion walk, valid for p ≤ 0.5 and n·p ≤ kInversionMeanCap.
  const double q = 1.0 - p;
  const double ratio = p / q;
  double pk = pow_int(q, n);  // P(X = 0)
  double cdf = pk;
  const double u = uniform();
  std::uint64_t k = 0;
  while (u >= cdf && k < n) {
    ++k;
    pk *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
    cdf += pk;
    if (pk == 0.0) break;  // tail exhausted below double precision
  }
  return k;
}

std::uint64_t SeededRng::binomial(std::uint64_t n, double p) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("SeededRng::binomial: p must lie in [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  const double mean = p * static_cast<double>(n);
  if (mean <= kInversionMeanCap) return inversion_binomial(n, p);
  // Split into independent sub-experiments small enough for the inversion
  // walk; a sum of independent binomials with the same p is exactly binomial.
  const std::uint64_t chunk = static_cast<std::uint64_t>(kInversionMeanCap / p);
  std::uint64_t remaining = n;
  std::uint64_t total = 0;
  while (remaining > chunk) {
    total += inversion_binomial(chunk, p);
    remaining -= chunk;
  }
  total += inversion_binomial(remaining, p);
  return total;
}

RlProbabilities rl_probabilities(double phi) {
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("rl_probabilities: phi must be finite");
  }
  const double p_r = 0.5 * (1.0 + std::sin(phi));
  return RlProbabilities{p_r, 1.0 - p_r};
}

DetectorCounts simulate_counts(std::uint64_t n_input, double p_post, double p_r,
                               SeededRng& rng) {
  if (n_input == 0) {
    throw std::invalid_argument("simulate_counts: need at least one photon");
  }
  if (!(p_post >= 0.0) || !(p_post <= 1.0)) {
    throw std::invalid_argument("simulate_counts: p_post must lie in [0, 1]");
  }
  if (!(p_r >= 0.0) || !(p_r <= 1.0)) {
    throw std::invalid_argument("simulate_counts: p_r must lie in [0, 1]");
  }
  DetectorCounts counts;
  counts.n_input = n_input;
  counts.n_post = rng.binomial(n_input, p_post);
  counts.n_r = rng.binomial(counts.n_post, p_r);
  counts.n_l = counts.n_post - counts.n_r;
  return counts;
}

DetectorCounts simulate_counts(std::uint64_t n_input, const PreSelection& pre,
                               const PostSelection& post, double theta,
                               SeededRng& rng) {
  const double p_post = postselection_probability(pre, post, theta);
  const double phi = compensated_phase(pre, post, 0.0, theta);
  return simulate_counts(n_input, std::min(p_post, 1.0), rl_probabilities(phi).p_r,
                         rng);
}

EstimationResult estimate_phase(const DetectorCounts& counts, const PreSelection& pre,
                                const PostSelection& post, double phi_c) {
  if (counts.n_post == 0) {
    throw std::domain_error("estimate_phase: no post-selected photons to estimate from");
  }
  const double diff = (static_cast<double>(counts.n_r) - static_cast<double>(counts.n_l)) /
                      static_cast<double>(counts.n_post);
  EstimationResult out;
  out.phi_hat = std::asin(std::clamp(diff, -1.0, 1.0));
  out.stderr_phi = 1.0 / std::sqrt(static_cast<double>(counts.n_post));

  // Invert φ(θ) = phi_hat by bisection. The readout map is monotone in the
  // protocol's operating region; outside the bracket we clamp to whichever
  // endpoint is closer in φ.
  constexpr double kHalfPi = 1.5707963267948966;
  double lo = -kHalfPi;
  double hi = kHalfPi;
  auto f = [&](double th) { return compensated_phase(pre, post, phi_c, th) - out.phi_hat; };
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) {
    out.theta_hat = lo;
  } else if (f_hi == 0.0) {
    out.theta_hat = hi;
  } else if (f_lo * f_hi > 0.0) {
    out.theta_hat = (std::abs(f_lo) < std::abs(f_hi)) ? lo : hi;
  } else {
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = f(mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    out.theta_hat = 0.5 * (lo + hi);
  }

  const double slope = compensated_phase_slope(pre, post, phi_c, out.theta_hat);
  out.stderr_theta = (slope != 0.0)
                         ? out.stderr_phi / std::abs(slope)
                         : std::numeric_limits<double>::infinity();
  return out;
}

double fisher_information_phi() {
  // dp_R/dφ = cosφ/2 and 1/p_R + 1/p_L = 4/cos²φ, so the product is exactly
  // 1 for every φ in (−π/2, π/2): each detected photon carries one unit of
  // information about the readout phase.
  return 1.0;
}

double shot_noise(double n, double t1, double t2) {
  if (!(n > 0.0)) {
    throw std::invalid_argument("shot_noise: photon number must be positive");
  }
  const double tt = std::abs(t1) * std::abs(t2);
  if (tt == 0.0) {
    throw std::invalid_argument("shot_noise: transmissions must be nonzero");
  }
  return std::sqrt(2.0) / (tt * std::sqrt(n));
}

double radiation_pressure_noise(double n, double t1) {
  if (!(n >= 0.0)) {
    throw std::invalid_argument("radiation_pressure_noise: photon number must be >= 0");
  }
  return std::abs(t1) * std::sqrt(n);
}

double noise_crossover(double t1, double t2) {
  const double a_t1 = std::abs(t1);
  const double a_t2 = std::abs(t2);
  if (a_t1 == 0.0 || a_t2 == 0.0) {
    throw std::invalid_argument("noise_crossover: transmissions must be nonzero");
  }
  return std::sqrt(2.0) / (a_t1 * a_t1 * a_t2);
}

NoiseSweepResult noise_budget_sweep(double n_min, double n_max, int points,
                                    double t1, double t2) {
  if (!(n_min > 0.0) || !(n_max > n_min)) {
    throw std::invalid_argument("noise_budget_sweep: need 0 < n_min < n_max");
  }
  if (points < 2) {
    throw std::invalid_argument("noise_budget_sweep: need at least 2 points");
  }
  NoiseSweepResult out;
  out.n_star = noise_crossover(t1, t2);
  out.rows.reserve(static_cast<std::size_t>(points));
  const double log_min = std::log(n_min);
  const double log_max = std::log(n_max);
  for (int i = 0; i < points; ++i) {
    // Inclusive log-spaced grid; endpoints evaluated exactly.
    const double n = (i == 0) ? n_min
                   : (i == points - 1)
                       ? n_max
                       : std::exp(log_min + (log_max - log_min) * i / (points - 1));
    NoiseBudget row;
    row.n_photons = n;
    row.t1 = t1;
    row.t2 = t2;
    row.h_rn = radiation_pressure_noise(n, t1);
    row.h_sn = shot_noise(n, t1, t2);
    row.h_total = std::hypot(row.h_rn, row.h_sn);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace wma
