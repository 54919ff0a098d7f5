#include "lhvprobe/states.hpp"

#include <cmath>
#include <stdexcept>

#include "lhvprobe/rng.hpp"

namespace lhvprobe {

namespace {

constexpr double kPhaseTol = 1e-12;

PureState sparse_state(std::initializer_list<std::pair<int, double>> cells) {
    PureState s;
    for (const auto& [index, value] : cells) {
        s.amplitudes[static_cast<std::size_t>(index)] = Complex(value, 0.0);
    }
    return s;
}

}  // namespace

double PureState::norm() const {
    double sum = 0.0;
    for (const Complex& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
}

Complex PureState::inner(const PureState& other) const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        sum += std::conj(amplitudes[i]) * other.amplitudes[i];
    }
    return sum;
}

ComplexMatrix PureState::projector() const {
    ComplexMatrix p(9, 9);
    for (std::size_t r = 0; r < 9; ++r) {
        for (std::size_t c = 0; c < 9; ++c) {
            p(r, c) = amplitudes[r] * std::conj(amplitudes[c]);
        }
    }
    return p;
}

DensityOperator::DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != 9 || matrix_.cols() != 9) {
        throw std::invalid_argument("density operator must be 9x9");
    }
    if (!matrix_.is_hermitian(kMatrixTol)) {
        throw std::invalid_argument("density operator must be Hermitian");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kMatrixTol) {
        throw std::invalid_argument("density operator must have unit trace");
    }
    if (min_eigenvalue(matrix_) < -1e-9) {
        throw std::invalid_argument("density operator must be positive semidefinite");
    }
}

std::array<PureState, 5> tiles_upb() {
    const double h = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / 3.0;
    return {
        sparse_state({{0, h}, {1, -h}}),   // |0>(|0>-|1>)/sqrt2
        sparse_state({{2, h}, {5, -h}}),   // (|0>-|1>)|2>/sqrt2
        sparse_state({{7, h}, {8, -h}}),   // |2>(|1>-|2>)/sqrt2
        sparse_state({{3, h}, {6, -h}}),   // (|1>-|2>)|0>/sqrt2
        sparse_state({{0, t}, {1, t}, {2, t}, {3, t}, {4, t},
                      {5, t}, {6, t}, {7, t}, {8, t}}),
    };
}

std::array<PureState, 4> complement_basis() {
    const double half = 0.5;
    const double q = 1.0 / (2.0 * std::sqrt(2.0));
    const double e = 1.0 / (6.0 * std::sqrt(2.0));
    const double center = -2.0 * std::sqrt(2.0) / 3.0;
    return {
        sparse_state({{0, half}, {1, half}, {2, -half}, {5, -half}}),
        sparse_state({{7, half}, {8, half}, {3, -half}, {6, -half}}),
        sparse_state({{0, q}, {1, q}, {2, q}, {5, q},
                      {3, -q}, {6, -q}, {7, -q}, {8, -q}}),
        sparse_state({{0, e}, {1, e}, {2, e}, {3, e}, {5, e},
                      {6, e}, {7, e}, {8, e}, {4, center}}),
    };
}

DensityOperator bound_entangled_state() {
    ComplexMatrix m = ComplexMatrix::identity(9);
    for (const PureState& v : tiles_upb()) {
        m -= v.projector();
    }
    m *= 0.25;
    return DensityOperator(std::move(m));
}

std::array<Complex, 4> coeffs_from_angles(const StateAngles& g) {
    const double sp = std::sin(g.psi), cp = std::cos(g.psi);
    const double st = std::sin(g.theta), ct = std::cos(g.theta);
    return {
        Complex(sp * st * std::cos(g.phi), 0.0),
        std::polar(sp * st * std::sin(g.phi), g.chi1),
        std::polar(sp * ct, g.chi2),
        std::polar(cp, g.chi3),
    };
}

PureState state_from_angles(const StateAngles& g) {
    const auto coeffs = coeffs_from_angles(g);
    const auto basis = complement_basis();
    PureState psi;
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < 9; ++i) {
            psi.amplitudes[i] += coeffs[k] * basis[k].amplitudes[i];
        }
    }
    return psi;
}

std::array<Complex, 4> canonical_coeffs(const std::array<Complex, 4>& coeffs) {
    for (int k = 3; k >= 0; --k) {
        const double mag = std::abs(coeffs[static_cast<std::size_t>(k)]);
        if (mag > kPhaseTol) {
            const Complex phase =
                coeffs[static_cast<std::size_t>(k)] / mag;
            std::array<Complex, 4> out;
            for (std::size_t i = 0; i < 4; ++i) {
                out[i] = coeffs[i] * std::conj(phase);
            }
            return out;
        }
    }
    return coeffs;
}

StateAngles angles_from_coeffs(const std::array<Complex, 4>& coeffs) {
    // Magnitudes pin psi, theta, phi inside [0, pi/2]; a global phase is then
    // spent making a5 real nonnegative, and the chi's soak up the rest.
    const double r5 = std::abs(coeffs[0]);
    const double r6 = std::abs(coeffs[1]);
    const double r7 = std::abs(coeffs[2]);
    const double r8 = std::abs(coeffs[3]);

    StateAngles g;
    g.psi = std::atan2(std::sqrt(r5 * r5 + r6 * r6 + r7 * r7), r8);
    g.theta = std::atan2(std::sqrt(r5 * r5 + r6 * r6), r7);
    g.phi = std::atan2(r6, r5);

    double global = 0.0;
    if (r5 > kPhaseTol) {
        global = std::arg(coeffs[0]);
    } else if (r6 > kPhaseTol) {
        global = std::arg(coeffs[1]);
    } else if (r7 > kPhaseTol) {
        global = std::arg(coeffs[2]);
    } else {
        global = std::arg(coeffs[3]);
    }
    auto rel = [&](std::size_t k, double mag) {
        return mag > kPhaseTol ? std::arg(coeffs[k]) - global : 0.0;
    };
    g.chi1 = rel(1, r6);
    g.chi2 = rel(2, r7);
    g.chi3 = rel(3, r8);
    return g;
}

std::array<Complex, 4> coeffs_from_state(const PureState& psi) {
    const auto basis = complement_basis();
    std::array<Complex, 4> c;
    for (std::size_t k = 0; k < 4; ++k) c[k] = basis[k].inner(psi);
    return c;
}

StateAngles canonical_psi_angles() {
    const double half_pi = std::acos(0.0);
    StateAngles g;
    g.psi = half_pi;
    g.theta = half_pi;
    g.phi = half_pi / 2.0;
    return g;
}

DensityOperator admixture(double fraction, const PureState& psi) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("admixture fraction must lie in [0, 1]");
    }
    ComplexMatrix m = bound_entangled_state().matrix();
    m *= (1.0 - fraction);
    ComplexMatrix proj = psi.projector();
    proj *= fraction;
    m += proj;
    return DensityOperator(std::move(m));
}

double linear_entanglement_degree(const PureState& psi) {
    const ComplexMatrix reduced = partial_trace_A(psi.projector());
    const ComplexMatrix squared = reduced * reduced;
    return 1.5 * (1.0 - squared.trace().real());
}

namespace {

std::array<Complex, 3> random_qutrit(Rng& rng) {
    std::array<Complex, 3> v;
    double norm_sq = 0.0;
    for (auto& a : v) {
        a = Complex(rng.gaussian(), rng.gaussian());
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& a : v) a *= inv;
    return v;
}

// 3x3 form obtained by contracting one side of the 9x9 projector with a
// fixed qutrit. contract_second = true pins the B factor.
ComplexMatrix contract_side(const ComplexMatrix& p,
                            const std::array<Complex, 3>& fixed,
                            bool contract_second) {
    ComplexMatrix x(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            Complex sum = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                for (std::size_t l = 0; l < 3; ++l) {
                    const Complex entry = contract_second
                        ? p(3 * i + j, 3 * k + l)
                        : p(3 * j + i, 3 * l + k);
                    sum += std::conj(fixed[j]) * entry * fixed[l];
                }
            }
            x(i, k) = sum;
        }
    }
    return x;
}

std::array<Complex, 3> min_eigvec(const ComplexMatrix& x) {
    const HermitianSpectrum spec = hermitian_eig(x);
    std::array<Complex, 3> v;
    // eigenvalues are stored descending, so the last column is the bottom one
    for (std::size_t i = 0; i < 3; ++i) v[i] = spec.eigenvectors(i, 2);
    return v;
}

double overlap_value(const ComplexMatrix& p, const std::array<Complex, 3>& a,
                     const std::array<Complex, 3>& b) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                for (std::size_t l = 0; l < 3; ++l) {
                    sum += std::conj(a[i] * b[j]) * p(3 * i + j, 3 * k + l) *
                           a[k] * b[l];
                }
            }
        }
    }
    return sum.real();
}

}  // namespace

double min_product_overlap_with_upb(std::uint64_t seed, int starts,
                                    int iterations) {
    ComplexMatrix p(9, 9);
    for (const PureState& v : tiles_upb()) p += v.projector();

    Rng rng(seed);
    double best = 1.0;
    for (int s = 0; s < starts; ++s) {
        std::array<Complex, 3> a = random_qutrit(rng);
        std::array<Complex, 3> b = random_qutrit(rng);
        for (int it = 0; it < iterations; ++it) {
            a = min_eigvec(contract_side(p, b, true));
            b = min_eigvec(contract_side(p, a, false));
        }
        best = std::min(best, overlap_value(p, a, b));
    }
    return best;
}

}  // namespace lhvprobe
