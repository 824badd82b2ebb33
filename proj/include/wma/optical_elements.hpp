// Constructors for the optical elements of the interferometer: beam
// splitters, the controlled-phase weak interaction, the polarizing-Michelson
// signal block, and the down-arm compensation phase. Each returns a 4x4
// unitary in the fixed (down,H), (down,V), (up,H), (up,V) basis.
#pragma once

#include <array>

#include "wma/quantum_core.hpp"

namespace wma {

// Signed real reflection/transmission amplitudes with r² + t² = 1.
struct BeamSplitterParams {
  double r = 0.0;
  double t = 0.0;
};

// Path-space map [[r, t], [t, −r]] (a real orthogonal completion, det = −1),
// tensored with identity on polarization. A photon entering the source port
// leaves as r|down⟩ + t|up⟩.
ElementUnitary beam_splitter(const BeamSplitterParams& p);

// diag(1, 1, 1, e^{iθ}): applies phase θ to the V polarization of the up arm
// only. This is the weak system–pointer interaction.
ElementUnitary controlled_phase(double theta);

// The polarizing-Michelson-interferometer block: a polarizing beam splitter,
// quarter-wave plates, and end mirrors that together imprint e^{iθ} on the
// up arm's V polarization. Its net action equals controlled_phase(theta);
// the alias documents which physical assembly realizes the map.
ElementUnitary pmi_block(double theta);

// Double pass through a quarter-wave plate at 45°: swaps H and V. Returned
// as the bare 2x2 polarization map; used to document the pmi_block
// decomposition, not in the main pipeline.
std::array<std::array<Amplitude, 2>, 2> qwp_double_pass();

// diag(e^{iφc}, e^{iφc}, 1, 1): a polarization-independent phase applied to
// the down arm, used to compensate the static path-length difference.
ElementUnitary compensation(double phi_c);

}  // namespace wma
