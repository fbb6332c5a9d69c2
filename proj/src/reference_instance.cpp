#include "synccert/reference_instance.hpp"

#include <numbers>

namespace synccert::reference {

OscillatorNetwork four_node_network() {
    OscillatorNetwork net;
    net.damping = {0.9775, 0.9165, 0.9912, 0.9319};
    net.natural_frequency = {0.0013, -0.0040, -0.0022, 0.0005};
    net.inertia.resize(net.damping.size());
    for (std::size_t i = 0; i < net.damping.size(); ++i) net.inertia[i] = kFourNodeGamma * net.damping[i];
    net.coupling = kFourNodeCoupling;
    // Unit diagonal entries are dynamically inert (alpha_ii = 0).
    net.weights = SquareMatrix{
        {1, 1, 0, 0},
        {1, 1, 0, 0},
        {0, 1, 1, 0},
        {0, 1, 1, 1},
    };
    net.frustration = SquareMatrix(4, kFourNodeFrustration);
    for (std::size_t i = 0; i < 4; ++i) net.frustration(i, i) = 0.0;
    return net;
}

EnsembleState four_node_initial_state() {
    EnsembleState s;
    s.time = 0.0;
    s.phase = {2.0742, 0.0706, 0.8886, 1.0262};
    s.frequency = {0.0701, 0.0117, 0.0804, -0.0161};
    return s;
}

CertificateParameters four_node_certificate() { return {5.0 * std::numbers::pi / 6.0, 0.1}; }

}  // namespace synccert::reference
