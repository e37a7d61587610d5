#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qlpoly/complex_matrix.hpp"

namespace qlpoly {

inline constexpr double kDensityTolerance = 1e-10;

/// Self-adjoint, positive, trace-one operator. Construction checks all three
/// properties in max-norm to within `tolerance` and throws
/// NotDensityOperator otherwise.
class DensityOperator {
public:
    explicit DensityOperator(ComplexMatrix m, double tolerance = kDensityTolerance);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.dim(); }

private:
    ComplexMatrix m_;
};

/// Re Tr(ρσ), clamped to [0,1]. Both operands enter symmetrically.
double gen_prob(const DensityOperator& rho, const DensityOperator& sigma);

/// ‖AA† − A†A‖_F ≤ 1e-10·‖A‖_F².
bool is_normal(const ComplexMatrix& a);

struct CartesianParts {
    ComplexMatrix real_part;  ///< B = (A + A†)/2
    ComplexMatrix imag_part;  ///< C = (A − A†)/2i
};

/// A = B + iC with B, C self-adjoint.
CartesianParts cartesian(const ComplexMatrix& a);

struct PolarParts {
    ComplexMatrix unitary;   ///< D
    ComplexMatrix positive;  ///< E = √(A†A)
};

/// A = DE. Throws NonInvertible when the smallest singular value is at most
/// 1e-10·‖A‖_F.
PolarParts polar(const ComplexMatrix& a);

struct ContextOptions {
    double self_adjoint_tolerance = 1e-10;
    double commute_tolerance = 1e-8;   ///< relative to max(1, ‖A_i‖‖A_j‖)
    double cluster_gap = 1e-8;         ///< relative eigenvalue gap
    double verify_tolerance = 1e-8;
};

/// C and the observables as functions of it. C has eigenvalue j on the j-th
/// joint eigenspace; eigenspaces are ordered lexicographically by the values
/// the observables take on them.
struct ContextOperatorResult {
    ComplexMatrix context;
    std::vector<ComplexMatrix> projectors;       ///< onto each joint eigenspace
    /// values[i][j]: value of observable i on eigenspace j, i.e. f_i(j).
    std::vector<std::vector<double>> values;
    /// Monomial coefficients (ascending powers) of the interpolating
    /// polynomial through (j, values[i][j]).
    std::vector<std::vector<double>> polynomials;
};

/// Throws NotSelfAdjoint or NotCommuting.
ContextOperatorResult context_operator(const std::vector<ComplexMatrix>& ops,
                                       const ContextOptions& options = {});

/// Σ_j table[j]·P_j.
ComplexMatrix apply_table(const std::vector<ComplexMatrix>& projectors, const std::vector<double>& table);
/// Σ_k c_k·M^k.
ComplexMatrix apply_polynomial(const std::vector<double>& coefficients, const ComplexMatrix& m);

/// `{"dim":n,"entries":[[[re,im],...],...]}`.
ComplexMatrix parse_matrix(std::string_view text);
std::string to_json(const ComplexMatrix& m);

}  // namespace qlpoly
