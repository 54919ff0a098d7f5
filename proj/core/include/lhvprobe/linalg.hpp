#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lhvprobe {

using Complex = std::complex<double>;

/// Default absolute tolerance for approximate matrix comparisons.
inline constexpr double kMatrixTol = 1e-10;

/// Dense complex matrix, row-major. Everything in this project is 3x3 or
/// 9x9, so the implementation favours clarity over blocking tricks.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) {
        return entries_[i * cols_ + j];
    }
    const Complex& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    const std::vector<Complex>& entries() const { return entries_; }
    std::vector<Complex>& entries() { return entries_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;

    bool is_hermitian(double tol = kMatrixTol) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }
inline ComplexMatrix transpose(const ComplexMatrix& m) {
    return m.transpose();
}
inline Complex trace(const ComplexMatrix& m) { return m.trace(); }

/// Entrywise max-norm of a - b; the project-wide comparison metric.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double tol = kMatrixTol);

/// Kronecker product. Tensor basis |i>_A |j>_B maps to flat index 3i+j
/// (and its obvious generalisation for other dimensions).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Transpose of the B factor of a 9x9 operator on C3 (x) C3.
ComplexMatrix partial_transpose_B(const ComplexMatrix& m);

/// Trace out the A factor of a 9x9 operator: result_{k,l} = sum_i m_{(i,k),(i,l)}.
ComplexMatrix partial_trace_A(const ComplexMatrix& m);

struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // orthonormal columns, matching order
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws std::invalid_argument if the input is not Hermitian
/// within kMatrixTol.
HermitianSpectrum hermitian_eig(const ComplexMatrix& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace lhvprobe
