#include "wma/protocol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wma {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(who) + ": parameter must be finite");
  }
}

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

PreSelection PreSelection::from_angle(double u) {
  require_finite(u, "PreSelection::from_angle");
  return PreSelection{std::cos(u), std::sin(u)};
}

PostSelection PostSelection::from_angle(double chi) {
  require_finite(chi, "PostSelection::from_angle");
  return PostSelection{std::cos(chi), std::sin(chi)};
}

PostSelection PostSelection::from_offset(double delta) {
  return from_angle(chi_from_delta(DeltaOffset{delta}));
}

double chi_from_delta(const DeltaOffset& d) {
  require_finite(d.delta, "chi_from_delta");
  if (!(d.delta > 0.0)) {
    throw std::invalid_argument("chi_from_delta: offset must be positive");
  }
  // Invert 1 + cot χ = δ exactly: tan χ = 1/(δ − 1). For δ < 1 this lands
  // just below −π/4; δ = 1 is the χ = −π/2 limit of the same branch.
  if (d.delta == 1.0) return -1.5707963267948966;
  return std::atan(1.0 / (d.delta - 1.0));
}

double delta_from_chi(double chi) {
  require_finite(chi, "delta_from_chi");
  const double s = std::sin(chi);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + std::cos(chi) / s;
}

void validate(const PreSelection& pre) {
  require_finite(pre.alpha, "PreSelection");
  require_finite(pre.beta, "PreSelection");
  if (std::abs(pre.alpha * pre.alpha + pre.beta * pre.beta - 1.0) >= kNormTolerance) {
    throw std::invalid_argument("PreSelection: alpha^2 + beta^2 must equal 1");
  }
}

void validate(const PostSelection& post) {
  require_finite(post.gamma, "PostSelection");
  require_finite(post.eta, "PostSelection");
  if (std::abs(post.gamma * post.gamma + post.eta * post.eta - 1.0) >= kNormTolerance) {
    throw std::invalid_argument("PostSelection: gamma^2 + eta^2 must equal 1");
  }
}

double relative_pointer_phase(const Amplitude& c_h, const Amplitude& c_v) {
  if (c_h == Amplitude{0.0, 0.0}) return std::arg(c_v);
  return std::arg(c_v * std::conj(c_h));
}

double amplified_phase_exact(const PreSelection& pre, const PostSelection& post,
                             double theta) {
  validate(pre);
  validate(post);
  require_finite(theta, "amplified_phase_exact");
  const double ag = pre.alpha * post.gamma;
  const double be = pre.beta * post.eta;
  const double num = be * std::sin(theta);
  const double den = be * std::cos(theta) + ag;
  if (std::abs(num) < kDegenerateNormEpsilon && std::abs(den) < kDegenerateNormEpsilon) {
    throw std::domain_error(
        "amplified_phase_exact: pointer amplitude vanishes, phase undefined");
  }
  // Multiplying both atan2 arguments by sign(αγ + βη) reproduces the phase
  // of c_V relative to c_H = (αγ + βη)/√2, which is what the detector sees;
  // the raw atan2 would jump by π whenever that shared amplitude is negative.
  const double s = sign_of(ag + be);
  if (s == 0.0) return std::atan2(num, den);
  return std::atan2(s * num, s * den);
}

double amplified_phase_first_order(double theta, double chi) {
  require_finite(theta, "amplified_phase_first_order");
  require_finite(chi, "amplified_phase_first_order");
  const double denom = delta_from_chi(chi);
  // Below kNormTolerance the offset cannot be distinguished from the pole of
  // the small-signal form (cot χ = −1), where no finite value exists.
  if (std::abs(denom) < kNormTolerance) {
    throw std::domain_error(
        "amplified_phase_first_order: 1 + cot(chi) is zero to working "
        "precision, the small-signal form is singular; evaluate the exact "
        "phase instead");
  }
  return std::atan(theta / denom);
}

double amplification_factor(double theta, const DeltaOffset& delta) {
  require_finite(theta, "amplification_factor");
  require_finite(delta.delta, "amplification_factor");
  if (!(delta.delta > 0.0)) {
    throw std::invalid_argument("amplification_factor: offset must be positive");
  }
  if (theta == 0.0) return 1.0 / delta.delta;  // limit of arctan(θ/δ)/θ
  return std::atan(theta / delta.delta) / theta;
}

double postselection_probability(const PreSelection& pre, const PostSelection& post,
                                 double theta) {
  validate(pre);
  validate(post);
  require_finite(theta, "postselection_probability");
  const double ag = pre.alpha * post.gamma;
  const double be = pre.beta * post.eta;
  const double re_v = ag + be * std::cos(theta);
  const double im_v = be * std::sin(theta);
  const double sum = ag + be;
  return 0.5 * (sum * sum + re_v * re_v + im_v * im_v);
}

double compensated_phase(const PreSelection& pre, const PostSelection& post,
                         double phi_c, double theta) {
  validate(pre);
  validate(post);
  require_finite(phi_c, "compensated_phase");
  require_finite(theta, "compensated_phase");
  const double ag = pre.alpha * post.gamma;
  const double be = pre.beta * post.eta;
  const Amplitude c_h = ag * std::polar(1.0, phi_c) + Amplitude{be, 0.0};
  const Amplitude c_v = ag * std::polar(1.0, phi_c) + be * std::polar(1.0, theta);
  if (std::norm(c_h) < kDegenerateNormEpsilon &&
      std::norm(c_v) < kDegenerateNormEpsilon) {
    throw std::domain_error(
        "compensated_phase: pointer amplitude vanishes, phase undefined");
  }
  return relative_pointer_phase(c_h, c_v);
}

double compensated_phase_slope(const PreSelection& pre, const PostSelection& post,
                               double phi_c, double theta) {
  validate(pre);
  validate(post);
  require_finite(phi_c, "compensated_phase_slope");
  require_finite(theta, "compensated_phase_slope");
  const double ag = pre.alpha * post.gamma;
  const double be = pre.beta * post.eta;
  // d/dθ arg(αγ e^{iφc} + βη e^{iθ}) = βη · Re[e^{iθ} · conj(c_V)] / |c_V|².
  const Amplitude c_v = ag * std::polar(1.0, phi_c) + be * std::polar(1.0, theta);
  const double n2 = std::norm(c_v);
  if (n2 < kDegenerateNormEpsilon) {
    throw std::domain_error("compensated_phase_slope: pointer amplitude vanishes");
  }
  return be * (std::polar(1.0, theta) * std::conj(c_v)).real() / n2;
}

namespace {

// Shared assembly of an AmplificationResult from the unnormalized pointer.
// reference_slope is the θ=0 readout slope dφ/dθ; the small-signal phase is
// arctan(θ · slope), which reduces to arctan(θ/(1 + cot χ)) for a balanced
// preparation with φc = 0.
AmplificationResult finish_result(const Qubit& raw_pointer, double theta,
                                  double reference_slope) {
  AmplificationResult out;
  out.p_post = norm_squared(raw_pointer);
  if (!(out.p_post > kDegenerateNormEpsilon)) {
    throw std::domain_error(
        "amplification pipeline: degenerate post-selection (probability ~ 0)");
  }
  out.pointer_state = normalize(raw_pointer);
  out.phi_exact = relative_pointer_phase(raw_pointer.c0, raw_pointer.c1);
  out.phi_first_order = std::atan(theta * reference_slope);
  out.h = (theta != 0.0) ? out.phi_exact / theta : reference_slope;
  return out;
}

// θ=0 slope of the readout phase for the compensated configuration:
// βη · Re[conj(A)] / |A|² with A = αγ e^{iφc} + βη. Zero when the θ=0
// pointer vanishes (no expansion point exists; the exact phase still does).
double reference_slope(double ag, double be, double phi_c) {
  const Amplitude a = ag * std::polar(1.0, phi_c) + Amplitude{be, 0.0};
  const double n2 = std::norm(a);
  if (n2 < kDegenerateNormEpsilon) return 0.0;
  return be * a.real() / n2;
}

}  // namespace

AmplificationResult run_abstract_protocol(const PreSelection& pre,
                                          const PostSelection& post, double theta) {
  validate(pre);
  validate(post);
  require_finite(theta, "run_abstract_protocol");
  const Qubit sys = make_path_qubit(pre.alpha, pre.beta);
  const Qubit plus = make_polarization_qubit(kInvSqrt2, kInvSqrt2);
  const CompositeState prepared = tensor_product(sys, plus);
  const CompositeState evolved = apply_unitary(controlled_phase(theta), prepared);
  const Qubit bra = make_path_qubit(post.gamma, post.eta);
  const Qubit raw = partial_project(bra, evolved);
  return finish_result(raw, theta,
                       reference_slope(pre.alpha * post.gamma, pre.beta * post.eta, 0.0));
}

AmplificationResult run_ligo_pipeline(const BeamSplitterParams& bs1,
                                      const BeamSplitterParams& bs2, double theta,
                                      double phi_c) {
  require_finite(theta, "run_ligo_pipeline");
  require_finite(phi_c, "run_ligo_pipeline");
  if (bs1.t * bs2.t == 0.0) {
    throw std::invalid_argument(
        "run_ligo_pipeline: t1*t2 must be nonzero (no signal reaches the readout)");
  }
  // Source photon enters the down port with a balanced pointer.
  const Qubit source = make_path_qubit(1.0, 0.0);
  const Qubit plus = make_polarization_qubit(kInvSqrt2, kInvSqrt2);
  CompositeState state = tensor_product(source, plus);
  state = apply_unitary(beam_splitter(bs1), state);   // split into both arms
  state = apply_unitary(pmi_block(theta), state);     // signal phase on up arm
  state = apply_unitary(compensation(phi_c), state);  // static phase on down arm
  state = apply_unitary(beam_splitter(bs2), state);   // recombine
  // Keep only photons leaving through the down output port.
  const Qubit down_port = make_path_qubit(1.0, 0.0);
  const Qubit raw = partial_project(down_port, state);
  return finish_result(raw, theta, reference_slope(bs1.r * bs2.r, bs1.t * bs2.t, phi_c));
}

Amplitude weak_value(const PreSelection& pre, const PostSelection& post) {
  validate(pre);
  validate(post);
  const double overlap = post.gamma * pre.alpha + post.eta * pre.beta;
  if (std::abs(overlap) < kDegenerateNormEpsilon) {
    throw std::domain_error(
        "weak_value: pre/post-selection overlap vanishes, weak value diverges");
  }
  const double matrix_element = post.gamma * pre.alpha - post.eta * pre.beta;
  return Amplitude{matrix_element / overlap, 0.0};
}

ElementUnitary von_neumann_coupling(double theta) {
  require_finite(theta, "von_neumann_coupling");
  // exp(−iθ σ_y) rotates the pointer by θ in the down arm; the up arm gets
  // the inverse rotation because the arm observable has eigenvalue −1 there.
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ElementUnitary u;
  u.m[0][0] = Amplitude{c, 0.0};
  u.m[0][1] = Amplitude{-s, 0.0};
  u.m[1][0] = Amplitude{s, 0.0};
  u.m[1][1] = Amplitude{c, 0.0};
  u.m[2][2] = Amplitude{c, 0.0};
  u.m[2][3] = Amplitude{s, 0.0};
  u.m[3][2] = Amplitude{-s, 0.0};
  u.m[3][3] = Amplitude{c, 0.0};
  return u;
}

WvaPointerReadout wva_pointer_expectations(double theta, const PreSelection& pre,
                                           const PostSelection& post) {
  validate(pre);
  validate(post);
  require_finite(theta, "wva_pointer_expectations");
  const Qubit sys = make_path_qubit(pre.alpha, pre.beta);
  const Qubit h_pointer = make_polarization_qubit(1.0, 0.0);
  const CompositeState prepared = tensor_product(sys, h_pointer);
  const CompositeState evolved = apply_unitary(von_neumann_coupling(theta), prepared);
  const Qubit bra = make_path_qubit(post.gamma, post.eta);
  const Qubit raw = partial_project(bra, evolved);
  const Qubit pointer = normalize(raw);  // domain_error when fully rejected

  WvaPointerReadout out;
  out.exact_sigma_plus = pauli_expectation(PointerObservable::plus_minus, pointer);
  out.exact_sigma_r = pauli_expectation(PointerObservable::right_left, pointer);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.first_order_sigma_plus = nan;
  out.first_order_sigma_r = nan;
  try {
    out.weak_value_ratio = weak_value(pre, post);
    out.weak_value_defined = true;
    out.first_order_sigma_plus = 2.0 * theta * out.weak_value_ratio.real();
    out.first_order_sigma_r = 2.0 * theta * out.weak_value_ratio.imag();
  } catch (const std::domain_error&) {
    out.weak_value_defined = false;  // exact readout still reported
  }
  return out;
}

}  // namespace wma
