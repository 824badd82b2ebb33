#include "wma/quantum_core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wma {

namespace {

double abs2(const Amplitude& z) { return std::norm(z); }

void require_finite(const Amplitude& z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument(std::string(who) + ": amplitude must be finite");
  }
}

}  // namespace

Qubit make_path_qubit(Amplitude down, Amplitude up) {
  require_finite(down, "make_path_qubit");
  require_finite(up, "make_path_qubit");
  return Qubit{down, up, QubitBasis::path};
}

Qubit make_polarization_qubit(Amplitude h, Amplitude v) {
  require_finite(h, "make_polarization_qubit");
  require_finite(v, "make_polarization_qubit");
  return Qubit{h, v, QubitBasis::polarization};
}

ElementUnitary ElementUnitary::identity() {
  ElementUnitary u;
  for (int i = 0; i < 4; ++i) u.m[i][i] = Amplitude{1.0, 0.0};
  return u;
}

ElementUnitary ElementUnitary::adjoint() const {
  ElementUnitary out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.m[i][j] = std::conj(m[j][i]);
  return out;
}

double ElementUnitary::unitarity_defect() const {
  // ∞-norm of U†U − I, checked entrywise.
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Amplitude dot{0.0, 0.0};
      for (int k = 0; k < 4; ++k) dot += std::conj(m[k][i]) * m[k][j];
      if (i == j) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

bool ElementUnitary::is_unitary(double tol) const { return unitarity_defect() < tol; }

ElementUnitary compose(const ElementUnitary& lhs, const ElementUnitary& rhs) {
  ElementUnitary out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Amplitude acc{0.0, 0.0};
      for (int k = 0; k < 4; ++k) acc += lhs.m[i][k] * rhs.m[k][j];
      out.m[i][j] = acc;
    }
  }
  return out;
}

double norm_squared(const Qubit& q) { return abs2(q.c0) + abs2(q.c1); }

double norm_squared(const CompositeState& s) {
  double acc = 0.0;
  for (const auto& z : s.a) acc += abs2(z);
  return acc;
}

bool is_normalized(const Qubit& q, double tol) {
  return std::abs(norm_squared(q) - 1.0) < tol;
}

bool is_normalized(const CompositeState& s, double tol) {
  return std::abs(norm_squared(s) - 1.0) < tol;
}

Qubit normalize(const Qubit& q) {
  const double n2 = norm_squared(q);
  if (!(n2 > kDegenerateNormEpsilon)) {
    throw std::domain_error("normalize: degenerate state (squared norm below epsilon)");
  }
  const double inv = 1.0 / std::sqrt(n2);
  return Qubit{q.c0 * inv, q.c1 * inv, q.basis};
}

CompositeState normalize(const CompositeState& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > kDegenerateNormEpsilon)) {
    throw std::domain_error("normalize: degenerate state (squared norm below epsilon)");
  }
  const double inv = 1.0 / std::sqrt(n2);
  CompositeState out;
  for (int i = 0; i < 4; ++i) out.a[i] = s.a[i] * inv;
  out.normalized = true;
  return out;
}

CompositeState tensor_product(const Qubit& sys, const Qubit& pointer) {
  if (sys.basis != QubitBasis::path || pointer.basis != QubitBasis::polarization) {
    throw std::invalid_argument(
        "tensor_product: expects a path qubit followed by a polarization qubit");
  }
  if (!is_normalized(sys)) {
    throw std::invalid_argument("tensor_product: system qubit must be normalized");
  }
  if (!is_normalized(pointer)) {
    throw std::invalid_argument("tensor_product: pointer qubit must be normalized");
  }
  CompositeState out;
  out.a[0] = sys.c0 * pointer.c0;  // (down, H)
  out.a[1] = sys.c0 * pointer.c1;  // (down, V)
  out.a[2] = sys.c1 * pointer.c0;  // (up,   H)
  out.a[3] = sys.c1 * pointer.c1;  // (up,   V)
  out.normalized = true;
  return out;
}

CompositeState apply_unitary(const ElementUnitary& u, const CompositeState& s) {
  const double defect = u.unitarity_defect();
  if (!(defect < kNormTolerance)) {
    std::ostringstream msg;
    msg << "apply_unitary: matrix is not unitary (max |U†U - I| entry = " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
  CompositeState out;
  for (int i = 0; i < 4; ++i) {
    Amplitude acc{0.0, 0.0};
    for (int k = 0; k < 4; ++k) acc += u.m[i][k] * s.a[k];
    out.a[i] = acc;
  }
  out.normalized = s.normalized;
  return out;
}

Qubit partial_project(const Qubit& bra_path, const CompositeState& s) {
  if (bra_path.basis != QubitBasis::path) {
    throw std::invalid_argument("partial_project: bra must be a path qubit");
  }
  if (!is_normalized(bra_path)) {
    throw std::invalid_argument("partial_project: bra must be normalized");
  }
  // ⟨bra| acts on the path factor only; the polarization components survive.
  const Amplitude d = std::conj(bra_path.c0);
  const Amplitude u = std::conj(bra_path.c1);
  return Qubit{d * s.a[0] + u * s.a[2], d * s.a[1] + u * s.a[3],
               QubitBasis::polarization};
}

double pauli_expectation(PointerObservable obs, const Qubit& q) {
  if (q.basis != QubitBasis::polarization) {
    throw std::invalid_argument("pauli_expectation: expects a polarization qubit");
  }
  if (!is_normalized(q)) {
    throw std::invalid_argument("pauli_expectation: state must be normalized");
  }
  const Amplitude cross = std::conj(q.c0) * q.c1;
  switch (obs) {
    case PointerObservable::plus_minus:
      return 2.0 * cross.real();  // |⟨+|q⟩|² − |⟨−|q⟩|²
    case PointerObservable::right_left:
      return 2.0 * cross.imag();  // |⟨R|q⟩|² − |⟨L|q⟩|²
    case PointerObservable::h_v:
      return std::norm(q.c0) - std::norm(q.c1);
  }
  throw std::invalid_argument("pauli_expectation: unknown observable");
}

}  // namespace wma
