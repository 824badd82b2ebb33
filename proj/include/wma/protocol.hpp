// The amplification protocols end-to-end: pre/post-selection parametrization,
// exact and small-signal readout phases, amplification factor, post-selection
// probability, the full state-vector pipelines (abstract controlled-phase
// scheme and the interferometer realization), and the conventional
// weak-value readout used as a baseline for comparison.
#pragma once

#include "wma/optical_elements.hpp"
#include "wma/quantum_core.hpp"

namespace wma {

// System preparation α|down⟩ + β|up⟩ with real α, β and α² + β² = 1.
struct PreSelection {
  double alpha = 0.0;
  double beta = 0.0;

  static PreSelection from_angle(double u);  // α = cos u, β = sin u
};

// Post-selection target γ|down⟩ + η|up⟩ with real γ, η and γ² + η² = 1.
struct PostSelection {
  double gamma = 0.0;
  double eta = 0.0;

  static PostSelection from_angle(double chi);  // γ = cos χ, η = sin χ
  // Post-selection at the angle χ for which 1 + cot χ equals the given
  // offset exactly (the small-signal denominator below). For offsets < 1 the
  // angle lies just below −π/4, the protocol's operating region.
  static PostSelection from_offset(double delta);
};

// Small positive offset δ: the effective small-signal denominator 1 + cot χ.
// The readout phase obeys φ ≈ θ/δ when |θ| ≪ δ ≪ 1.
struct DeltaOffset {
  double delta = 0.0;
};

// Exact angle with 1 + cot χ = delta (χ just below −π/4 for delta < 1).
double chi_from_delta(const DeltaOffset& d);
// The effective offset 1 + cot χ; +inf when sin χ = 0.
double delta_from_chi(double chi);

void validate(const PreSelection& pre);    // std::invalid_argument on failure
void validate(const PostSelection& post);  // std::invalid_argument on failure

struct AmplificationResult {
  double phi_exact = 0.0;        // readout phase from the exact evolution
  double phi_first_order = 0.0;  // small-signal approximation (see below)
  double h = 0.0;                // amplification factor φ/θ (limit slope at θ=0)
  double p_post = 0.0;           // post-selection success probability
  Qubit pointer_state;           // normalized polarization pointer after post-selection
};

// Relative pointer phase arg(c_V · conj(c_H)), falling back to arg(c_V) when
// c_H vanishes. Using the relative phase (rather than the raw phase of c_V)
// keeps the result continuous at θ = 0 even when the shared pointer
// amplitude is negative.
double relative_pointer_phase(const Amplitude& c_h, const Amplitude& c_v);

// Exact readout phase: φ = atan2(βη sin θ, βη cos θ + αγ), with both
// arguments multiplied by the sign of αγ + βη so the branch matches the
// relative-phase convention above. Throws std::domain_error when both
// arguments are degenerately small (φ undefined).
double amplified_phase_exact(const PreSelection& pre, const PostSelection& post,
                             double theta);

// Small-signal form φ = arctan(θ / (1 + cot χ)), valid for a balanced
// preparation (α = β = 1/√2). Throws std::domain_error when |1 + cot χ| is
// below kNormTolerance — numerically indistinguishable from the cot χ = −1
// pole, where the form is singular; use the exact phase instead there.
double amplified_phase_first_order(double theta, double chi);

// Amplification factor h = φ/θ = arctan(θ/δ)/θ for θ ≠ 0, extended by its
// limit 1/δ at θ = 0. Requires δ > 0.
double amplification_factor(double theta, const DeltaOffset& delta);

// Probability that a photon survives post-selection:
// ‖[(αγ + βη)|H⟩ + (αγ + βη e^{iθ})|V⟩]/√2‖².
double postselection_probability(const PreSelection& pre, const PostSelection& post,
                                 double theta);

// Readout phase and its θ-derivative for the general configuration with a
// compensation phase φc on the down arm. The φc = 0 case reduces exactly to
// amplified_phase_exact's convention. Used by the estimation layer.
double compensated_phase(const PreSelection& pre, const PostSelection& post,
                         double phi_c, double theta);
double compensated_phase_slope(const PreSelection& pre, const PostSelection& post,
                               double phi_c, double theta);

// Full state-vector run of the abstract scheme: prepare path ⊗ |+⟩ pointer,
// apply the controlled phase, post-select the path, normalize the pointer.
// phi_first_order uses the generalized small-signal denominator
// 1 + (αγ)/(βη), which reduces to 1 + cot χ for a balanced preparation;
// h is phi_exact/θ for θ ≠ 0 and the exact θ=0 slope otherwise.
AmplificationResult run_abstract_protocol(const PreSelection& pre,
                                          const PostSelection& post, double theta);

// Full optical composition: beam splitter 1 → signal block → down-arm
// compensation → beam splitter 2 → select the down output port. Equivalent
// to the abstract scheme under (α,β,γ,η) = (r1,t1,r2,t2) when φc = 0.
// Requires t1·t2 ≠ 0 (the post-selection ratio is undefined otherwise).
AmplificationResult run_ligo_pipeline(const BeamSplitterParams& bs1,
                                      const BeamSplitterParams& bs2, double theta,
                                      double phi_c);

// (γα − ηβ)/(γα + ηβ), the post-selected matrix element ratio of the arm
// observable |down⟩⟨down| − |up⟩⟨up|. Throws std::domain_error when the
// pre/post overlap is degenerately small.
Amplitude weak_value(const PreSelection& pre, const PostSelection& post);

// exp(−iθ A⊗σ_y) with A = |down⟩⟨down| − |up⟩⟨up|: the conventional
// von Neumann coupling that rotates the pointer by ±θ depending on the arm.
ElementUnitary von_neumann_coupling(double theta);

// Conventional weak-value readout: evolve |pre⟩ ⊗ |H⟩ under the von Neumann
// coupling, post-select, and measure both balanced pointer observables.
// The first-order fields hold the linear-response predictions 2θ·Re/Im of
// the weak value; they are NaN (and weak_value_defined is false) when the
// pre/post overlap vanishes, while the exact fields are always computed.
struct WvaPointerReadout {
  double exact_sigma_plus = 0.0;
  double exact_sigma_r = 0.0;
  double first_order_sigma_plus = 0.0;
  double first_order_sigma_r = 0.0;
  Amplitude weak_value_ratio{0.0, 0.0};
  bool weak_value_defined = false;
};

WvaPointerReadout wva_pointer_expectations(double theta, const PreSelection& pre,
                                           const PostSelection& post);

}  // namespace wma
