#pragma once

#include "synccert/diagnostics.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"

namespace synccert::reference {

/// Four-oscillator depth-two digraph with near-homogeneous dampings, gamma = 1e-6,
/// uniform off-diagonal frustration 1e-6 and K = 780.
[[nodiscard]] OscillatorNetwork four_node_network();

[[nodiscard]] EnsembleState four_node_initial_state();

/// beta = 5 pi / 6, d_infty = 0.1.
[[nodiscard]] CertificateParameters four_node_certificate();

inline constexpr double kFourNodeGamma = 1e-6;
inline constexpr double kFourNodeCoupling = 780.0;
inline constexpr double kFourNodeFrustration = 1e-6;

}  // namespace synccert::reference
