#include "lhvprobe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lhvprobe {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix add: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix sub: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

Complex ComplexMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace: non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
                return false;
    return true;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix mul: dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix operator*(Complex scalar, ComplexMatrix m) {
    m *= scalar;
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
    return worst;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           max_abs_diff(a, b) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Complex aij = a(i, j);
            if (aij == Complex(0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix partial_transpose_B(const ComplexMatrix& m) {
    if (m.rows() != 9 || m.cols() != 9)
        throw std::invalid_argument("partial_transpose_B: expected 9x9 input");
    ComplexMatrix out(9, 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    out(3 * i + k, 3 * j + l) = m(3 * i + l, 3 * j + k);
    return out;
}

ComplexMatrix partial_trace_A(const ComplexMatrix& m) {
    if (m.rows() != 9 || m.cols() != 9)
        throw std::invalid_argument("partial_trace_A: expected 9x9 input");
    ComplexMatrix out(3, 3);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t i = 0; i < 3; ++i)
                out(k, l) += m(3 * i + k, 3 * i + l);
    return out;
}

namespace {

// One complex Jacobi rotation zeroing a(p,q). Updates a in place and
// accumulates the rotation into v. Diagonal entries stay real.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p,
                   std::size_t q) {
    const std::size_t n = a.rows();
    Complex apq = a(p, q);
    double r = std::abs(apq);
    if (r == 0.0) return;
    Complex w = apq / r;  // unit phase of the off-diagonal entry

    double app = a(p, p).real();
    double aqq = a(q, q).real();
    double tau = (aqq - app) / (2.0 * r);
    // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0, written without the
    // cancellation-prone subtraction (tau can be huge when r is tiny).
    double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(tau * tau + 1.0))
                            : 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
    double c = 1.0 / std::sqrt(t * t + 1.0);
    double s = t * c;

    // Columns of the rotation in the (p,q) plane:
    //   new_p = c*old_p + s*conj(w)*old_q,  new_q = -s*w*old_p + c*old_q.
    for (std::size_t i = 0; i < n; ++i) {
        Complex aip = a(i, p);
        Complex aiq = a(i, q);
        a(i, p) = c * aip + s * std::conj(w) * aiq;
        a(i, q) = -s * w * aip + c * aiq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        Complex apj = a(p, j);
        Complex aqj = a(q, j);
        a(p, j) = c * apj + s * w * aqj;
        a(q, j) = -s * std::conj(w) * apj + c * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = Complex(a(p, p).real(), 0.0);
    a(q, q) = Complex(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        Complex vip = v(i, p);
        Complex viq = v(i, q);
        v(i, p) = c * vip + s * std::conj(w) * viq;
        v(i, q) = -s * w * vip + c * viq;
    }
}

double off_diagonal_max(const ComplexMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j)));
    return worst;
}

}  // namespace

HermitianSpectrum hermitian_eig(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_eig: non-square matrix");
    if (!m.is_hermitian(kMatrixTol))
        throw std::invalid_argument("hermitian_eig: input is not Hermitian");

    const std::size_t n = m.rows();
    // Symmetrise away sub-tolerance asymmetry before iterating.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    double scale = 0.0;
    for (const auto& e : a.entries()) scale = std::max(scale, std::abs(e));
    const double thresh = std::max(scale, 1.0) * 1e-15;

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_max(a) <= thresh) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > thresh) jacobi_rotate(a, v, p, q);
    }

    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i)
            out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

double min_eigenvalue(const ComplexMatrix& m) {
    return hermitian_eig(m).eigenvalues.back();
}

}  // namespace lhvprobe
