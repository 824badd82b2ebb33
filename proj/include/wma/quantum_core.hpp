// Exact linear algebra for two-qubit (path ⊗ polarization) photon states:
// construction, unitary evolution, partial projection (post-selection),
// norms, and pointer-observable expectations. Everything here is a pure
// function on immutable values; no global state.
#pragma once

#include <array>
#include <complex>

namespace wma {

using Amplitude = std::complex<double>;

// Tolerance for "is this state/matrix normalized/unitary" preconditions.
inline constexpr double kNormTolerance = 1e-12;
// Below this squared norm a vector is treated as degenerate (not normalizable).
inline constexpr double kDegenerateNormEpsilon = 1e-30;

// The two qubit factors. Path: interferometer arm. Polarization: linear basis.
enum class PathBasis { down = 0, up = 1 };
enum class PolarizationBasis { H = 0, V = 1 };

// Which two-state basis a Qubit's components refer to. Carried explicitly so
// that path and polarization arguments cannot be swapped silently.
enum class QubitBasis { path, polarization };

// Single qubit: c0 is the amplitude of |down⟩ or |H⟩, c1 of |up⟩ or |V⟩.
struct Qubit {
  Amplitude c0{0.0, 0.0};
  Amplitude c1{0.0, 0.0};
  QubitBasis basis = QubitBasis::path;
};

Qubit make_path_qubit(Amplitude down, Amplitude up);
Qubit make_polarization_qubit(Amplitude h, Amplitude v);

// Composite path ⊗ polarization state. Component order is fixed everywhere:
// index = 2*path + polarization, i.e. (down,H), (down,V), (up,H), (up,V).
struct CompositeState {
  std::array<Amplitude, 4> a{};
  bool normalized = false;

  static constexpr int index(PathBasis p, PolarizationBasis q) {
    return 2 * static_cast<int>(p) + static_cast<int>(q);
  }
};

// 4x4 unitary acting on a CompositeState; row-major, same basis order.
struct ElementUnitary {
  std::array<std::array<Amplitude, 4>, 4> m{};

  static ElementUnitary identity();
  ElementUnitary adjoint() const;
  // Largest entrywise deviation of U†U from the identity (∞-norm of U†U − I).
  double unitarity_defect() const;
  bool is_unitary(double tol = kNormTolerance) const;
};

// Matrix product lhs·rhs (rhs acts first on the state).
ElementUnitary compose(const ElementUnitary& lhs, const ElementUnitary& rhs);

double norm_squared(const Qubit& q);
double norm_squared(const CompositeState& s);
bool is_normalized(const Qubit& q, double tol = kNormTolerance);
bool is_normalized(const CompositeState& s, double tol = kNormTolerance);

// Throws std::domain_error when the squared norm is below
// kDegenerateNormEpsilon (degenerate post-selection).
Qubit normalize(const Qubit& q);
CompositeState normalize(const CompositeState& s);

// |sys⟩ ⊗ |pointer⟩. Requires a normalized path qubit and a normalized
// polarization qubit (std::invalid_argument otherwise).
CompositeState tensor_product(const Qubit& sys, const Qubit& pointer);

// U|s⟩. Requires U unitary within kNormTolerance; the error message carries
// the largest offending deviation.
CompositeState apply_unitary(const ElementUnitary& u, const CompositeState& s);

// ⟨bra_path| s⟩: contracts the path factor with a normalized path qubit and
// returns the unnormalized polarization pointer. Its squared norm is the
// probability of post-selecting that path state.
Qubit partial_project(const Qubit& bra_path, const CompositeState& s);

// Balanced pointer observables, each with eigenvalues ±1:
//   plus_minus  = |+⟩⟨+| − |−⟩⟨−|   with |±⟩ = (|H⟩ ± |V⟩)/√2
//   right_left  = |R⟩⟨R| − |L⟩⟨L|   with |R/L⟩ = (|H⟩ ± i|V⟩)/√2
//   h_v         = |H⟩⟨H| − |V⟩⟨V|
enum class PointerObservable { plus_minus, right_left, h_v };

// ⟨q|O|q⟩ for a normalized polarization qubit; result lies in [−1, 1].
double pauli_expectation(PointerObservable obs, const Qubit& q);

}  // namespace wma
