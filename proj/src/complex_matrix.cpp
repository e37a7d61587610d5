#include "qlpoly/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qlpoly/error.hpp"

namespace qlpoly {

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw DomainError("matrix must be square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool ComplexMatrix::finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

double ComplexMatrix::max_norm() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.n_ != n_) throw DomainError("matrix dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.n_ != n_) throw DomainError("matrix dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DomainError("matrix dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

HermitianEigen hermitian_eigen(const ComplexMatrix& input, const JacobiOptions& options) {
    const std::size_t n = input.dim();
    ComplexMatrix h = (input + input.adjoint()) * Complex(0.5);
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(h(i, j));
        return std::sqrt(s);
    };
    const double scale = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());

    int sweep = 0;
    for (; sweep < options.max_sweeps && off_norm() > options.tolerance * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(h(p, q));
                if (mag == 0.0) continue;
                const Complex phase = h(p, q) / mag;
                const double app = h(p, p).real();
                const double aqq = h(q, q).real();

                // Phase-rotate q so the (p,q) entry is real, then a real
                // Jacobi rotation annihilates it.
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const Complex vpp = c, vpq = s;
                const Complex vqp = -std::conj(phase) * s, vqq = std::conj(phase) * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex hp = h(k, p), hq = h(k, q);
                    h(k, p) = hp * vpp + hq * vqp;
                    h(k, q) = hp * vpq + hq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex hp = h(p, k), hq = h(q, k);
                    h(p, k) = std::conj(vpp) * hp + std::conj(vqp) * hq;
                    h(q, k) = std::conj(vpq) * hp + std::conj(vqq) * hq;
                }
                h(p, q) = h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex xp = v(k, p), xq = v(k, q);
                    v(k, p) = xp * vpp + xq * vqp;
                    v(k, q) = xp * vpq + xq * vqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });

    HermitianEigen out;
    out.sweeps = sweep;
    out.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.push_back(h(order[k], order[k]).real());
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

}  // namespace qlpoly
