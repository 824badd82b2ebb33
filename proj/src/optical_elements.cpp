#include "wma/optical_elements.hpp"

#include <cmath>
#include <stdexcept>

namespace wma {

namespace {

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(who) + ": parameter must be finite");
  }
}

}  // namespace

ElementUnitary beam_splitter(const BeamSplitterParams& p) {
  require_finite(p.r, "beam_splitter");
  require_finite(p.t, "beam_splitter");
  if (std::abs(p.r * p.r + p.t * p.t - 1.0) >= kNormTolerance) {
    throw std::invalid_argument("beam_splitter: r^2 + t^2 must equal 1");
  }
  // Path block [[r, t], [t, -r]] ⊗ identity on polarization.
  ElementUnitary u;
  for (int pol = 0; pol < 2; ++pol) {
    u.m[0 + pol][0 + pol] = Amplitude{p.r, 0.0};
    u.m[0 + pol][2 + pol] = Amplitude{p.t, 0.0};
    u.m[2 + pol][0 + pol] = Amplitude{p.t, 0.0};
    u.m[2 + pol][2 + pol] = Amplitude{-p.r, 0.0};
  }
  return u;
}

ElementUnitary controlled_phase(double theta) {
  require_finite(theta, "controlled_phase");
  ElementUnitary u = ElementUnitary::identity();
  u.m[3][3] = std::polar(1.0, theta);  // (up, V) component only
  return u;
}

ElementUnitary pmi_block(double theta) { return controlled_phase(theta); }

std::array<std::array<Amplitude, 2>, 2> qwp_double_pass() {
  // H ↔ V swap.
  return {{{Amplitude{0.0, 0.0}, Amplitude{1.0, 0.0}},
           {Amplitude{1.0, 0.0}, Amplitude{0.0, 0.0}}}};
}

ElementUnitary compensation(double phi_c) {
  require_finite(phi_c, "compensation");
  ElementUnitary u = ElementUnitary::identity();
  const Amplitude phase = std::polar(1.0, phi_c);
  u.m[0][0] = phase;  // (down, H)
  u.m[1][1] = phase;  // (down, V)
  return u;
}

}  // namespace wma
