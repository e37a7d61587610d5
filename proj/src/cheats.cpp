#include "qlpoly/cheats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>

#include "qlpoly/error.hpp"

namespace qlpoly {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr std::size_t kMonotoneGrid = 10000;

double checked_angle(double theta, std::string_view what) {
    if (!(theta >= -kAngleSlack && theta <= kPi + kAngleSlack))
        throw DomainError(std::string(what) + " " + std::to_string(theta) + " outside [0, pi]");
    return std::clamp(theta, 0.0, kPi);
}

double stq_series(double theta, int order) {
    return 0.5 + (2.0 / kPi) * square_wave_partial_sum(2.0 * theta / kPi - 1.0, order);
}

double arcsin_sqrt(double x) { return std::asin(std::sqrt(std::clamp(x, 0.0, 1.0))); }

int parse_order(std::string_view digits, std::string_view full) {
    int value = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || value < 0)
        throw DomainError("bad series order in \"" + std::string(full) + "\"");
    return value;
}

std::vector<double> grid(std::size_t intervals) {
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        g[i] = kPi * static_cast<double>(i) / static_cast<double>(intervals);
    return g;
}

}  // namespace

double square_wave_partial_sum(double u, int order) {
    double s = 0.0;
    for (int k = 0; k <= order; ++k) {
        const double m = 2.0 * k + 1.0;
        s += std::sin(m * u) / m;
    }
    return s;
}

// --- transforms -----------------------------------------------------------

CheatTransform CheatTransform::stq(int order) {
    if (order < 0) throw DomainError("stq series order must be nonnegative");
    return CheatTransform(CheatKind::Stq, order);
}

std::string CheatTransform::name() const {
    switch (kind_) {
        case CheatKind::Quantum: return "quantum-cheat";
        case CheatKind::Classical: return "classical-cheat";
        case CheatKind::Stq: return "stq-cheat" + std::to_string(order_);
    }
    return {};
}

double CheatTransform::forward(double x) const {
    x = checked_angle(x, "transform argument");
    switch (kind_) {
        case CheatKind::Quantum: return 2.0 * arcsin_sqrt(x / kPi);
        case CheatKind::Classical: {
            const double s = std::sin(x / 2.0);
            return kPi * s * s;
        }
        case CheatKind::Stq: return kPi / 2.0 + 2.0 * square_wave_partial_sum(2.0 * x / kPi - 1.0, order_);
    }
    return 0.0;
}

double CheatTransform::inverse(double x) const {
    if (kind_ == CheatKind::Quantum) return CheatTransform::classical().forward(x);
    if (kind_ == CheatKind::Classical) return CheatTransform::quantum().forward(x);

    if (!std::isfinite(x)) throw DomainError("stq inverse argument must be finite");
    const auto g = grid(kMonotoneGrid);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = forward(g[i]);

    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        if (std::min(f[i], f[i + 1]) <= x && x <= std::max(f[i], f[i + 1])) hits.push_back(i);
    if (hits.empty()) throw DomainError("value " + std::to_string(x) + " outside the stq transform image");

    const std::size_t first = hits.front();
    std::size_t last = first;
    for (std::size_t h = 1; h < hits.size(); ++h) {
        if (hits[h] != last + 1) {
            // A second, separate preimage: the map turns back in between.
            for (std::size_t i = last; i < hits[h]; ++i)
                if (f[i + 1] <= f[i]) throw NonMonotone(g[i], g[i + 1]);
            throw NonMonotone(g[last], g[hits[h]]);
        }
        last = hits[h];
    }
    for (std::size_t i = first; i <= last; ++i)
        if (f[i + 1] <= f[i]) throw NonMonotone(g[i], g[i + 1]);

    double lo = g[first], hi = g[last + 1];
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (forward(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double CheatTransform::to_proper(double x) const {
    return kind_ == CheatKind::Stq ? forward(x) : inverse(x);
}

std::vector<std::pair<double, double>> monotone_intervals(const CheatTransform& t) {
    const auto g = grid(kMonotoneGrid);
    std::vector<std::pair<double, double>> out;
    std::optional<std::size_t> start;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const bool up = t.forward(g[i + 1]) > t.forward(g[i]);
        if (up && !start) start = i;
        if (!up && start) {
            out.emplace_back(g[*start], g[i]);
            start.reset();
        }
    }
    if (start) out.emplace_back(g[*start], g.back());
    return out;
}

// --- laws -----------------------------------------------------------------

ProbabilityLaw ProbabilityLaw::stq(int order) {
    if (order < 0) throw DomainError("stq series order must be nonnegative");
    return ProbabilityLaw(LawKind::Stq, order);
}

ProbabilityLaw ProbabilityLaw::cheated(const ProbabilityLaw& base, const CheatTransform& transform) {
    ProbabilityLaw law(LawKind::Cheated, 0);
    law.base_ = std::make_shared<const ProbabilityLaw>(base);
    law.transform_ = transform;
    return law;
}

std::string ProbabilityLaw::name() const {
    switch (kind_) {
        case LawKind::Classical: return "classical";
        case LawKind::Quantum: return "quantum";
        case LawKind::Stq: return "stq" + std::to_string(order_);
        case LawKind::StqLimit: return "stq-limit";
        case LawKind::Cheated: break;
    }
    const auto& t = *transform_;
    if (base_->kind() == LawKind::Classical && t.kind() == CheatKind::Quantum) return "cheat-quantum";
    if (base_->kind() == LawKind::Quantum && t.kind() == CheatKind::Classical) return "cheat-classical";
    if (base_->kind() == LawKind::Classical && t.kind() == CheatKind::Stq)
        return "cheat-stq" + std::to_string(t.order());
    return base_->name() + "@" + t.name();
}

double ProbabilityLaw::raw(double theta) const {
    switch (kind_) {
        case LawKind::Classical: return theta / kPi;
        case LawKind::Quantum: {
            const double s = std::sin(theta / 2.0);
            return s * s;
        }
        case LawKind::Stq: return stq_series(theta, order_);
        case LawKind::StqLimit: {
            const double u = 2.0 * theta / kPi - 1.0;
            return u > 0.0 ? 1.0 : (u < 0.0 ? 0.0 : 0.5);
        }
        case LawKind::Cheated: return base_->raw(transform_->to_proper(theta));
    }
    return 0.0;
}

double ProbabilityLaw::operator()(double theta) const { return raw(checked_angle(theta, "angle")); }

double law_eval(const ProbabilityLaw& law, double theta) { return law(theta); }

ProbabilityLaw parse_law(std::string_view name) {
    if (name == "classical") return ProbabilityLaw::classical();
    if (name == "quantum") return ProbabilityLaw::quantum();
    if (name == "stq-limit") return ProbabilityLaw::stq_limit();
    if (name == "cheat-quantum")
        return ProbabilityLaw::cheated(ProbabilityLaw::classical(), CheatTransform::quantum());
    if (name == "cheat-classical")
        return ProbabilityLaw::cheated(ProbabilityLaw::quantum(), CheatTransform::classical());
    if (name.starts_with("cheat-stq"))
        return ProbabilityLaw::cheated(ProbabilityLaw::classical(),
                                       CheatTransform::stq(parse_order(name.substr(9), name)));
    if (name.starts_with("stq")) return ProbabilityLaw::stq(parse_order(name.substr(3), name));
    throw DomainError("unknown law \"" + std::string(name) + "\"");
}

CheatTransform parse_transform(std::string_view name) {
    if (name == "quantum-cheat") return CheatTransform::quantum();
    if (name == "classical-cheat") return CheatTransform::classical();
    if (name.starts_with("stq-cheat")) return CheatTransform::stq(parse_order(name.substr(9), name));
    throw DomainError("unknown transform \"" + std::string(name) + "\"");
}

// --- Clauser-Horne ---------------------------------------------------------

std::string_view to_string(ChConvention c) { return c == ChConvention::Full ? "full" : "half"; }

ChConvention parse_convention(std::string_view s) {
    if (s == "full") return ChConvention::Full;
    if (s == "half") return ChConvention::Half;
    throw DomainError("convention must be \"full\" or \"half\"");
}

ChResult ch_value(const ProbabilityLaw& law, const ChAngles& angles, ChConvention convention) {
    const double c = convention == ChConvention::Full ? 1.0 : 0.5;
    auto joint = [&](double x, double y) {
        const double d = std::abs(x - y);
        if (!(d <= kPi + kAngleSlack))
            throw DomainError("angle difference " + std::to_string(d) + " outside [0, pi]");
        return law(std::min(d, kPi) * c);
    };
    ChResult r;
    r.convention = convention;
    r.p_a1b1 = joint(angles.a1, angles.b1);
    r.p_a1b2 = joint(angles.a1, angles.b2);
    r.p_a2b2 = joint(angles.a2, angles.b2);
    r.p_a2b1 = joint(angles.a2, angles.b1);
    r.s = r.p_a1b1 + r.p_a1b2 + r.p_a2b2 - r.p_a2b1 - r.p_a1 - r.p_b2;
    r.upper_violated = r.s > 0.0 + kChStrictness;
    r.lower_violated = r.s < -1.0 - kChStrictness;
    return r;
}

ChScan scan_ch(const ProbabilityLaw& law, ChConvention convention, double step, unsigned threads) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("scan step must be positive");
    const auto count = static_cast<std::size_t>(std::floor(kPi / 3.0 / step + 1e-9));
    auto angles_at = [step](std::size_t k) {
        const double x = static_cast<double>(k) * step;
        return ChAngles{0.0, x, 2.0 * x, 3.0 * x};
    };

    std::vector<double> s(count);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) s[i] = ch_value(law, angles_at(i + 1), convention).s;
    };
    const std::size_t workers = std::max(1u, std::min<unsigned>(threads, 64u));
    if (workers == 1 || count < 2 * workers) {
        fill(0, count);
    } else {
        std::vector<std::future<void>> jobs;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t b = 0; b < count; b += chunk)
            jobs.push_back(std::async(std::launch::async, fill, b, std::min(count, b + chunk)));
        for (auto& j : jobs) j.get();
    }

    ChScan scan;
    scan.evaluated = count;
    for (std::size_t i = 0; i < count; ++i) {
        if (i == 0 || s[i] > scan.max_s) {
            scan.max_s = s[i];
            scan.angles = angles_at(i + 1);
            scan.x = scan.angles.b1;
        }
    }
    return scan;
}

// --- curves ----------------------------------------------------------------

CurveTable sample_curves(const std::vector<CurveSource>& sources, std::size_t samples) {
    if (samples < 2) throw DomainError("need at least two samples");
    CurveTable table;
    table.header.push_back("theta");
    for (const auto& src : sources)
        table.header.push_back(std::visit([](const auto& s) { return s.name(); }, src));

    const auto g = grid(samples - 1);
    for (double theta : g) {
        std::vector<double> row{theta};
        for (const auto& src : sources) {
            if (const auto* law = std::get_if<ProbabilityLaw>(&src)) row.push_back((*law)(theta));
            else row.push_back(std::get<CheatTransform>(src).forward(theta));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string to_csv(const CurveTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    char buf[64];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            // -0 prints as 0 so output is stable across platforms.
            std::snprintf(buf, sizeof buf, "%.15g", row[i] == 0.0 ? 0.0 : row[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

StqDiagnostics stq_diagnostics(int order, std::size_t samples) {
    const auto law = ProbabilityLaw::stq(order);
    StqDiagnostics d{-1e300, 1e300, 0.0, 0.0};
    for (double theta : grid(std::max<std::size_t>(samples, 2) - 1)) {
        const double v = law(theta);
        d.max_value = std::max(d.max_value, v);
        d.min_value = std::min(d.min_value, v);
    }
    d.overshoot = std::max(0.0, d.max_value - 1.0);
    d.undershoot = std::max(0.0, -d.min_value);
    return d;
}

}  // namespace qlpoly
