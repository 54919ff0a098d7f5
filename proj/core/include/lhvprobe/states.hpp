#pragma once

#include <array>
#include <cstdint>

#include "lhvprobe/linalg.hpp"

namespace lhvprobe {

/// Normalized vector on C3 (x) C3, flat basis index 3i+j.
struct PureState {
    std::array<Complex, 9> amplitudes{};

    double norm() const;
    Complex inner(const PureState& other) const;  // <this|other>
    ComplexMatrix projector() const;              // |psi><psi|
};

/// 9x9 density operator. Construction validates Hermiticity (1e-10),
/// unit trace (1e-10) and positivity (min eigenvalue >= -1e-9).
class DensityOperator {
public:
    explicit DensityOperator(ComplexMatrix m);

    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
};

/// Six angles parametrizing a unit vector in span{|v5>..|v8>}:
///   a5 = sin(psi) sin(theta) cos(phi)
///   a6 = e^{i chi1} sin(psi) sin(theta) sin(phi)
///   a7 = e^{i chi2} sin(psi) cos(theta)
///   a8 = e^{i chi3} cos(psi)
struct StateAngles {
    double psi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double chi1 = 0.0;
    double chi2 = 0.0;
    double chi3 = 0.0;
};

/// The five Tiles product vectors |v0>..|v4>, orthonormal.
std::array<PureState, 5> tiles_upb();

/// |v5>..|v8>: orthonormal basis of the orthogonal complement of the UPB span.
std::array<PureState, 4> complement_basis();

/// rho_B = (I - P)/4 where P projects onto span(tiles_upb()).
DensityOperator bound_entangled_state();

/// Coefficients (a5, a6, a7, a8) derived from the six angles. Unit norm.
std::array<Complex, 4> coeffs_from_angles(const StateAngles& angles);

/// |psi> = sum_i a_i |v_{5+i}>.
PureState state_from_angles(const StateAngles& angles);

/// Phase convention used for round trips: rotate the global phase so the
/// last nonzero coefficient of (a5,a6,a7,a8), scanned from a8 down, is real
/// and nonnegative.
std::array<Complex, 4> canonical_coeffs(const std::array<Complex, 4>& coeffs);

/// Inverse of coeffs_from_angles up to global phase: the returned angles
/// reproduce canonical_coeffs(coeffs) through the canonical-phase map.
StateAngles angles_from_coeffs(const std::array<Complex, 4>& coeffs);

/// Components of psi in the complement basis: (<v5|psi>, .., <v8|psi>).
std::array<Complex, 4> coeffs_from_state(const PureState& psi);

/// Angles of the canonical state (|v5> + |v6>)/sqrt(2), the maximally
/// entangled vector of the complement span.
StateAngles canonical_psi_angles();

/// rho(F) = (1-F) rho_B + F |psi><psi|. Throws for F outside [0, 1].
DensityOperator admixture(double fraction, const PureState& psi);

/// (3/2) (1 - Tr[(Tr_A |psi><psi|)^2]); 0 for product states, 1 at maximal
/// entanglement.
double linear_entanglement_degree(const PureState& psi);

/// Smallest value of ||P (a (x) b)||^2 found by alternating eigenvector
/// descent from `starts` random product states. Strictly positive for an
/// unextendible product basis.
double min_product_overlap_with_upb(std::uint64_t seed, int starts = 200,
                                    int iterations = 80);

}  // namespace lhvprobe
