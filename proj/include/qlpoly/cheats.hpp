#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qlpoly {

inline constexpr double kPi = 3.14159265358979323846;

enum class CheatKind { Quantum, Classical, Stq };

/// Bijective reparameterization between a proper angle θ and a cheat
/// parameter. For the quantum cheat (δ) and classical cheat (φ), `forward`
/// maps θ to the cheat parameter. For the stq cheat, `forward` is the series
/// map Δ ↦ θ(Δ) and `inverse` recovers Δ where that map is monotone.
class CheatTransform {
public:
    static CheatTransform quantum() { return CheatTransform(CheatKind::Quantum, 0); }
    static CheatTransform classical() { return CheatTransform(CheatKind::Classical, 0); }
    static CheatTransform stq(int order);

    CheatKind kind() const noexcept { return kind_; }
    int order() const noexcept { return order_; }
    std::string name() const;

    double forward(double x) const;
    /// Throws DomainError outside the image, NonMonotone (stq) where the
    /// preimage is not unique or the map is not increasing.
    double inverse(double x) const;
    /// Cheat parameter to proper angle: the inverse for quantum/classical
    /// cheats, the series map for the stq cheat.
    double to_proper(double x) const;

    bool operator==(const CheatTransform&) const = default;

private:
    CheatTransform(CheatKind kind, int order) : kind_(kind), order_(order) {}

    CheatKind kind_;
    int order_;
};

/// Intervals of [0, π] on which the stq forward map is strictly increasing
/// on a 10^4-point grid.
std::vector<std::pair<double, double>> monotone_intervals(const CheatTransform& t);

enum class LawKind { Classical, Quantum, Stq, StqLimit, Cheated };

/// Joint (agreement) probability as a function of the angle in [0, π].
class ProbabilityLaw {
public:
    static ProbabilityLaw classical() { return ProbabilityLaw(LawKind::Classical, 0); }
    static ProbabilityLaw quantum() { return ProbabilityLaw(LawKind::Quantum, 0); }
    static ProbabilityLaw stq(int order);
    /// The n → ∞ step function H(2θ/π − 1).
    static ProbabilityLaw stq_limit() { return ProbabilityLaw(LawKind::StqLimit, 0); }
    /// base evaluated at transform.to_proper(x).
    static ProbabilityLaw cheated(const ProbabilityLaw& base, const CheatTransform& transform);

    LawKind kind() const noexcept { return kind_; }
    int order() const noexcept { return order_; }
    const ProbabilityLaw* base() const noexcept { return base_.get(); }
    const std::optional<CheatTransform>& transform() const noexcept { return transform_; }
    std::string name() const;

    /// Domain [0, π] (1e-12 slack); stq values are not clamped.
    double operator()(double theta) const;

private:
    ProbabilityLaw(LawKind kind, int order) : kind_(kind), order_(order) {}
    double raw(double theta) const;

    LawKind kind_;
    int order_;
    std::shared_ptr<const ProbabilityLaw> base_;
    std::optional<CheatTransform> transform_;
};

double law_eval(const ProbabilityLaw& law, double theta);

/// classical, quantum, stq<n>, stq-limit, cheat-quantum (quantum-cheated
/// classical), cheat-classical (classical-cheated quantum), cheat-stq<n>.
ProbabilityLaw parse_law(std::string_view name);
/// quantum-cheat, classical-cheat, stq-cheat<n>.
CheatTransform parse_transform(std::string_view name);

/// Partial sum Σ_{k=0}^{n} sin((2k+1)u)/(2k+1).
double square_wave_partial_sum(double u, int order);

enum class ChConvention { Full, Half };
std::string_view to_string(ChConvention c);
ChConvention parse_convention(std::string_view s);

struct ChAngles {
    double a1, b1, a2, b2;
};

struct ChResult {
    double s = 0.0;
    bool lower_violated = false;
    bool upper_violated = false;
    double p_a1b1 = 0.0, p_a1b2 = 0.0, p_a2b2 = 0.0, p_a2b1 = 0.0;
    double p_a1 = 0.5, p_b2 = 0.5;
    ChConvention convention = ChConvention::Full;
};

inline constexpr double kChStrictness = 1e-12;

/// S = P(A1B1)+P(A1B2)+P(A2B2)−P(A2B1)−P(A1)−P(B2) with marginals 1/2 and
/// P(XY) = law(|x−y|·c), c = 1 (full) or 1/2 (half). Violation flags are
/// strict beyond 1e-12. Throws DomainError if a difference leaves [0, π].
ChResult ch_value(const ProbabilityLaw& law, const ChAngles& angles, ChConvention convention);

struct ChScan {
    double max_s = 0.0;
    double x = 0.0;
    ChAngles angles{};
    std::size_t evaluated = 0;
};

/// Grid search over angles (0, x, 2x, 3x), x = k·step ∈ (0, π/3]; ties go to
/// the smallest x. Deterministic for any thread count.
ChScan scan_ch(const ProbabilityLaw& law, ChConvention convention, double step, unsigned threads = 1);

using CurveSource = std::variant<ProbabilityLaw, CheatTransform>;

struct CurveTable {
    std::vector<std::string> header;  ///< "theta", then one name per source
    std::vector<std::vector<double>> rows;
};

/// Uniform grid over [0, π] including both endpoints. Laws are evaluated,
/// transforms contribute their forward map.
CurveTable sample_curves(const std::vector<CurveSource>& sources, std::size_t samples);
/// CSV with 15 significant digits and LF line endings.
std::string to_csv(const CurveTable& table);

struct StqDiagnostics {
    double max_value = 0.0;
    double min_value = 0.0;
    double overshoot = 0.0;   ///< max(0, max_value − 1)
    double undershoot = 0.0;  ///< max(0, −min_value)
};

/// Extremes of the stq(n) law on a uniform grid of `samples` points.
StqDiagnostics stq_diagnostics(int order, std::size_t samples = 10001);

}  // namespace qlpoly
