#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace synccert {

/// Dense row-major n x n matrix of doubles.
class SquareMatrix {
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    [[nodiscard]] const double* row(std::size_t i) const noexcept { return data_.data() + i * n_; }

    bool operator==(const SquareMatrix&) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Static problem instance of the inertial Kuramoto model with frustration.
///
/// weights(i, j) is the weight of the edge *from j to i*; frustration(i, j) is the
/// phase lag inside the corresponding coupling sine.
struct OscillatorNetwork {
    std::vector<double> inertia;
    std::vector<double> damping;
    std::vector<double> natural_frequency;
    double coupling = 0.0;
    SquareMatrix weights;
    SquareMatrix frustration;

    [[nodiscard]] std::size_t size() const noexcept { return damping.size(); }

    bool operator==(const OscillatorNetwork&) const = default;
};

struct Violation {
    std::string field;
    std::string message;
};

/// Returns every violated invariant; an empty result means the network is valid.
[[nodiscard]] std::vector<Violation> validate(const OscillatorNetwork& network);

/// Throws synccert::Error listing all violations when the network is invalid.
void require_valid(const OscillatorNetwork& network);

/// Scalars derived from a network that all synchronization certificates depend on.
struct NetworkConstants {
    std::size_t n = 0;
    double connectivity = 0.0;  // pairwise depth-two connectivity functional
    double psi_u = 0.0;         // max_{i != j} psi_ij / d_i
    double d_omega = 0.0;       // diameter of Omega_i / d_i
    double alpha_bar = 0.0;     // max frustration
    std::optional<double> gamma;  // common m_i / d_i, if homogeneous

    bool operator==(const NetworkConstants&) const = default;
};

/// Relative tolerance on max/min of m_i/d_i under which the ratio counts as homogeneous.
inline constexpr double kGammaHomogeneityTolerance = 1e-12;

[[nodiscard]] NetworkConstants compute_constants(const OscillatorNetwork& network);

/// min over pairs i != j of psi_ij/d_i + psi_ji/d_j + sum_{k != i,j} min(psi_ik/d_i, psi_jk/d_j).
/// Zero for n < 2.
[[nodiscard]] double connectivity_constant(const SquareMatrix& weights, const std::vector<double>& damping);

}  // namespace synccert
