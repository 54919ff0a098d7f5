#pragma once

#include <array>
#include <cstdint>

#include "lhvprobe/linalg.hpp"
#include "lhvprobe/rng.hpp"
#include "lhvprobe/states.hpp"

namespace lhvprobe {

/// Euler angles (phi1..phi8) of an SU(3) element, see su3_unitary().
struct Su3Angles {
    std::array<double, 8> phi{};
};

/// Two measurement bases per observer.
struct SettingsQuad {
    Su3Angles a1;
    Su3Angles a2;
    Su3Angles b1;
    Su3Angles b2;
};

enum class SamplingMode { Haar, UniformAngles };

/// 36 joint probabilities, indexed by setting pair in the fixed order
/// (1,1), (1,2), (2,1), (2,2) and by outcome pair via 3*alice + bob.
struct ProbabilityTable {
    std::array<std::array<double, 9>, 4> p{};

    double at(int pair, int alice, int bob) const {
        return p[static_cast<std::size_t>(pair)]
                [static_cast<std::size_t>(3 * alice + bob)];
    }
};

/// Generalized Euler factorization
///   U = R3(p1) R2(p2) R3(p3) R5(p4) R3(p5) R2(p6) R3(p7) R8(p8)
/// with Rg(x) = exp(i x lambda_g) for Gell-Mann generators lambda_g.
/// Surjective onto SU(3).
ComplexMatrix su3_unitary(const Su3Angles& angles);

/// Inverse of su3_unitary: recovers angles with
/// su3_unitary(result) == u entrywise within 1e-10.
/// Requires u unitary with det 1 (within 1e-8).
Su3Angles su3_angles_from_unitary(const ComplexMatrix& u);

/// The three rank-1 projectors onto the columns of su3_unitary(angles).
std::array<ComplexMatrix, 3> measurement_projectors(const Su3Angles& angles);

/// p[(i,j)][k][l] = Tr[(Pi_k^{A,i} (x) Pi_l^{B,j}) rho].
ProbabilityTable probability_table(const DensityOperator& rho,
                                   const SettingsQuad& settings);

/// One Haar-distributed measurement basis (Ginibre draw, Gram-Schmidt QR
/// with positive R diagonal, det-normalized into SU(3)), returned through
/// the inverse Euler factorization so the angles are loggable.
Su3Angles haar_random_basis(Rng& rng);

/// Four independent Haar bases for the quadruple. Same seed, same settings.
SettingsQuad haar_random_settings(std::uint64_t seed);

/// Alternative sampler: each of the 32 angles uniform in [0, 2pi).
SettingsQuad uniform_angle_settings(std::uint64_t seed);

SettingsQuad random_settings(std::uint64_t seed, SamplingMode mode);

}  // namespace lhvprobe
