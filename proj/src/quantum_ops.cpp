#include "qlpoly/quantum_ops.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "qlpoly/error.hpp"

namespace qlpoly {

namespace {

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).max_norm(); }

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
    if (m_.dim() == 0 || !m_.finite()) throw NotDensityOperator("density operator must be finite and nonempty");
    if (hermiticity_defect(m_) > tolerance) throw NotDensityOperator("density operator is not self-adjoint");
    if (std::abs(m_.trace() - Complex(1.0)) > tolerance)
        throw NotDensityOperator("density operator does not have trace one");
    const auto eig = hermitian_eigen(m_);
    if (eig.values.front() < -tolerance)
        throw NotDensityOperator("density operator is not positive (eigenvalue " +
                                 std::to_string(eig.values.front()) + ")");
}

double gen_prob(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DomainError("density operators differ in dimension");
    const auto& a = rho.matrix();
    const auto& b = sigma.matrix();
    // Sum over unordered index pairs so the result is bit-identical under swap.
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += (a(i, i) * b(i, i)).real();
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            s += (a(i, j) * b(j, i)).real() + (a(j, i) * b(i, j)).real();
    }
    return std::clamp(s, 0.0, 1.0);
}

bool is_normal(const ComplexMatrix& a) {
    const double scale = a.frobenius_norm();
    const ComplexMatrix ah = a.adjoint();
    return (a * ah - ah * a).frobenius_norm() <= 1e-10 * scale * scale;
}

CartesianParts cartesian(const ComplexMatrix& a) {
    const ComplexMatrix ah = a.adjoint();
    return {(a + ah) * Complex(0.5), (a - ah) * Complex(0.0, -0.5)};
}

PolarParts polar(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    const auto eig = hermitian_eigen(a.adjoint() * a);
    const double norm = a.frobenius_norm();
    const double smallest = std::sqrt(std::max(eig.values.front(), 0.0));
    if (n == 0 || !(smallest > 1e-10 * norm))
        throw NonInvertible("polar decomposition needs an invertible operator (smallest singular value " +
                            std::to_string(smallest) + ")");

    auto clamp_root = [](double x) { return std::sqrt(x < 0.0 && x >= -1e-12 ? 0.0 : x); };
    PolarParts parts;
    parts.positive = spectral_apply(eig, [&](double x) { return Complex(clamp_root(x)); });
    ComplexMatrix d = a * spectral_apply(eig, [&](double x) { return Complex(1.0 / clamp_root(x)); });

    // Newton-Schulz steps pull D back onto the unitary group.
    const ComplexMatrix id = ComplexMatrix::identity(n);
    for (int step = 0; step < 8; ++step) {
        const ComplexMatrix gram = d.adjoint() * d;
        if ((gram - id).max_norm() <= 4e-16 * static_cast<double>(n)) break;
        d = d * (Complex(3.0) * id - gram) * Complex(0.5);
    }
    parts.unitary = std::move(d);
    return parts;
}

namespace {

struct Subspace {
    std::vector<std::vector<Complex>> basis;  // orthonormal columns
    std::vector<double> values;               // one per observable processed
};

ComplexMatrix compress(const ComplexMatrix& a, const Subspace& w) {
    const std::size_t k = w.basis.size();
    const std::size_t n = a.dim();
    ComplexMatrix m(k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Complex acol = 0.0;
                for (std::size_t j = 0; j < n; ++j) acol += a(i, j) * w.basis[c][j];
                s += std::conj(w.basis[r][i]) * acol;
            }
            m(r, c) = s;
        }
    return m;
}

ComplexMatrix projector(const Subspace& w, std::size_t n) {
    ComplexMatrix p(n);
    for (const auto& v : w.basis)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) += v[i] * std::conj(v[j]);
    return p;
}

std::vector<double> interpolate(const std::vector<double>& y) {
    // Newton divided differences on nodes 0, 1, ..., m-1, then expansion.
    const std::size_t m = y.size();
    std::vector<double> dd = y;
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / static_cast<double>(level);
    std::vector<double> coeffs(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
        // coeffs <- coeffs * (x - k) + dd[k]
        for (std::size_t p = m - 1; p > 0; --p) coeffs[p] = coeffs[p - 1] - static_cast<double>(k) * coeffs[p];
        coeffs[0] = -static_cast<double>(k) * coeffs[0] + dd[k];
    }
    return coeffs;
}

}  // namespace

ComplexMatrix apply_table(const std::vector<ComplexMatrix>& projectors, const std::vector<double>& table) {
    if (projectors.empty()) return {};
    ComplexMatrix out(projectors.front().dim());
    for (std::size_t j = 0; j < projectors.size(); ++j) out += projectors[j] * Complex(table.at(j));
    return out;
}

ComplexMatrix apply_polynomial(const std::vector<double>& coefficients, const ComplexMatrix& m) {
    ComplexMatrix out(m.dim());
    for (std::size_t k = coefficients.size(); k-- > 0;) out = out * m + ComplexMatrix::identity(m.dim()) * Complex(coefficients[k]);
    return out;
}

ContextOperatorResult context_operator(const std::vector<ComplexMatrix>& ops, const ContextOptions& options) {
    if (ops.empty()) throw DomainError("context operator needs at least one observable");
    const std::size_t n = ops.front().dim();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].dim() != n) throw DomainError("observables differ in dimension");
        if (hermiticity_defect(ops[i]) > options.self_adjoint_tolerance)
            throw NotSelfAdjoint("observable " + std::to_string(i) + " is not self-adjoint");
    }
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            const double c = commutator(ops[i], ops[j]).frobenius_norm();
            const double scale = std::max(1.0, ops[i].frobenius_norm() * ops[j].frobenius_norm());
            if (c > options.commute_tolerance * scale) throw NotCommuting(i, j, c);
        }

    Subspace whole;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Complex> e(n, 0.0);
        e[i] = 1.0;
        whole.basis.push_back(std::move(e));
    }
    std::vector<Subspace> spaces{whole};

    for (const auto& a : ops) {
        const double scale = std::max(1.0, a.max_norm());
        std::vector<Subspace> refined;
        for (const auto& w : spaces) {
            const auto eig = hermitian_eigen(compress(a, w));
            const std::size_t k = eig.values.size();
            std::size_t start = 0;
            while (start < k) {
                std::size_t end = start + 1;
                while (end < k && eig.values[end] - eig.values[end - 1] <= options.cluster_gap * scale) ++end;
                Subspace part;
                part.values = w.values;
                double mean = 0.0;
                for (std::size_t c = start; c < end; ++c) {
                    mean += eig.values[c];
                    std::vector<Complex> v(n, 0.0);
                    for (std::size_t r = 0; r < k; ++r)
                        for (std::size_t i = 0; i < n; ++i) v[i] += w.basis[r][i] * eig.vectors(r, c);
                    part.basis.push_back(std::move(v));
                }
                part.values.push_back(mean / static_cast<double>(end - start));
                refined.push_back(std::move(part));
                start = end;
            }
        }
        spaces = std::move(refined);
    }

    std::vector<double> scales;
    for (const auto& a : ops) scales.push_back(options.cluster_gap * std::max(1.0, a.max_norm()));
    std::sort(spaces.begin(), spaces.end(), [&](const Subspace& x, const Subspace& y) {
        for (std::size_t i = 0; i < scales.size(); ++i) {
            if (std::abs(x.values[i] - y.values[i]) > scales[i]) return x.values[i] < y.values[i];
        }
        return false;
    });

    ContextOperatorResult result;
    result.context = ComplexMatrix(n);
    result.values.assign(ops.size(), {});
    for (std::size_t j = 0; j < spaces.size(); ++j) {
        result.projectors.push_back(projector(spaces[j], n));
        result.context += result.projectors.back() * Complex(static_cast<double>(j));
        for (std::size_t i = 0; i < ops.size(); ++i) result.values[i].push_back(spaces[j].values[i]);
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        result.polynomials.push_back(interpolate(result.values[i]));
        const double residual = (ops[i] - apply_table(result.projectors, result.values[i])).max_norm();
        if (residual > options.verify_tolerance)
            throw OperatorError("observable " + std::to_string(i) +
                                " is not reproduced by the context operator (residual " +
                                std::to_string(residual) + ")");
    }
    return result;
}

ComplexMatrix parse_matrix(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError("matrix must be an object");
    for (const auto& [key, value] : doc.items())
        if (key != "dim" && key != "entries") throw ParseError("unknown key \"" + key + "\"");
    if (!doc.contains("dim") || !doc["dim"].is_number_unsigned())
        throw ParseError("matrix needs a nonnegative integer \"dim\"");
    const auto n = doc["dim"].get<std::size_t>();
    const auto& rows = doc.value("entries", nlohmann::json());
    if (!rows.is_array() || rows.size() != n) throw ParseError("\"entries\" must hold dim rows");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("matrix row has wrong length");
        for (std::size_t j = 0; j < n; ++j) {
            const auto& z = rows[i][j];
            if (z.is_number()) {
                m(i, j) = z.get<double>();
            } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
                m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
            } else {
                throw ParseError("matrix entries must be [re, im] pairs");
            }
        }
    }
    if (!m.finite()) throw ParseError("matrix entries must be finite");
    return m;
}

std::string to_json(const ComplexMatrix& m) {
    nlohmann::json doc;
    doc["dim"] = m.dim();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    return doc.dump();
}

}  // namespace qlpoly
