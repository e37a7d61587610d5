#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qlpoly {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Complex>& d);

    std::size_t dim() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    bool finite() const;

    /// Largest entry modulus.
    double max_norm() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigendecomposition of a Hermitian matrix: values ascending, vectors as the
/// columns of a unitary matrix, so H = V diag(values) V†.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
    int sweeps = 0;
};

struct JacobiOptions {
    double tolerance = 1e-13;  ///< off-diagonal Frobenius norm relative to ‖H‖
    int max_sweeps = 100;
};

/// Cyclic complex Jacobi rotations. Only the Hermitian part of `h` is used.
HermitianEigen hermitian_eigen(const ComplexMatrix& h, const JacobiOptions& options = {});

/// V diag(f(λ)) V† for Hermitian h.
template <class F>
ComplexMatrix spectral_apply(const HermitianEigen& e, F&& f) {
    const std::size_t n = e.values.size();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex fk = f(e.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = e.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
        }
    }
    return out;
}

}  // namespace qlpoly
