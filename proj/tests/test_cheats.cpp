#include <doctest.h>

#include <cmath>

#include "qlpoly/cheats.hpp"
#include "qlpoly/error.hpp"

using namespace qlpoly;

namespace {

// Term-by-term summation of the square-wave series, written out directly.
double stq_direct(double theta, int n) {
    const double u = 2.0 * theta / kPi - 1.0;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) sum += std::sin((2 * k + 1) * u) / (2 * k + 1);
    return 0.5 + 2.0 / kPi * sum;
}

double step(double theta) { return 2.0 * theta / kPi - 1.0 > 0 ? 1.0 : (theta == kPi / 2 ? 0.5 : 0.0); }

double sin2(double x) { return std::sin(x) * std::sin(x); }

const ChAngles kListed{0, kPi / 4, kPi / 2, 3 * kPi / 4};

}  // namespace

TEST_CASE("basic laws") {
    CHECK(ProbabilityLaw::quantum()(kPi / 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ProbabilityLaw::classical()(kPi / 4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(ProbabilityLaw::quantum()(-0.1), DomainError);
    CHECK_THROWS_AS(ProbabilityLaw::classical()(3.5), DomainError);
    CHECK_THROWS_AS(ProbabilityLaw::stq(-1), DomainError);
}

TEST_CASE("stq series") {
    for (int n : {0, 1, 11, 50}) CHECK(ProbabilityLaw::stq(n)(kPi / 2) == 0.5);
    const double v = ProbabilityLaw::stq(11)(0.0);
    CHECK(std::abs(v) <= 0.05);
    CHECK(v == doctest::Approx(stq_direct(0.0, 11)).epsilon(1e-14));
    for (int k = 0; k <= 1000; ++k) {
        const double t = kPi * k / 1000;
        CHECK(std::abs(ProbabilityLaw::stq(11)(t) - stq_direct(t, 11)) <= 1e-13);
    }
}

TEST_CASE("stq convergence away from the jump") {
    // The largest deviation the direct summation shows on this region is 0.0146.
    double worst = 0.0;
    const auto law = ProbabilityLaw::stq(50);
    for (int k = 0; k <= 100000; ++k) {
        const double t = kPi * k / 100000;
        if (std::abs(2 * t / kPi - 1) < 0.2) continue;
        worst = std::max(worst, std::abs(law(t) - step(t)));
        CHECK(std::abs(law(t) - stq_direct(t, 50)) <= 1e-12);
    }
    CHECK(worst <= 0.05);
    CHECK(worst == doctest::Approx(0.01453).epsilon(0.01));
}

TEST_CASE("stq values are not clamped") {
    const auto d = stq_diagnostics(11);
    CHECK(d.max_value > 1.0);
    CHECK(d.min_value < 0.0);
    CHECK(d.overshoot == doctest::Approx(d.max_value - 1.0));
    CHECK(d.undershoot == doctest::Approx(-d.min_value));
}

TEST_CASE("cheat transforms in closed form") {
    const auto q = CheatTransform::quantum();
    const auto c = CheatTransform::classical();
    CHECK(std::abs(q.forward(kPi / 2) - kPi / 2) <= 1e-12);
    CHECK(std::abs(q.forward(kPi / 4) - kPi / 3) <= 1e-12);
    CHECK(std::abs(c.forward(kPi / 3) - kPi / 4) <= 1e-12);
    CHECK(std::abs(2 * q.forward(kPi / 4) - 2 * kPi / 3) <= 1e-12);
    CHECK(std::abs(2 * q.forward(kPi / 4) - q.forward(kPi / 2)) > 1e-12);
    CHECK(q.forward(0.0) == 0.0);
    CHECK(std::abs(q.forward(kPi) - kPi) <= 1e-12);
    CHECK_THROWS_AS(q.forward(4.0), DomainError);
    CHECK_THROWS_AS(c.inverse(-1.0), DomainError);
}

TEST_CASE("cheated laws and round trips on a 1000-point grid") {
    const auto q = CheatTransform::quantum();
    const auto c = CheatTransform::classical();
    const auto cheat_cl = ProbabilityLaw::cheated(ProbabilityLaw::classical(), q);
    const auto cheat_qm = ProbabilityLaw::cheated(ProbabilityLaw::quantum(), c);
    for (int k = 0; k < 1000; ++k) {
        const double x = kPi * k / 999;
        CHECK(std::abs(cheat_cl(x) - sin2(x / 2)) <= 1e-12);
        CHECK(std::abs(cheat_qm(x) - x / kPi) <= 1e-12);
        CHECK(std::abs(q.forward(q.inverse(x)) - x) <= 1e-12);
        CHECK(std::abs(q.inverse(q.forward(x)) - x) <= 1e-12);
        CHECK(std::abs(c.forward(c.inverse(x)) - x) <= 1e-12);
        CHECK(std::abs(c.inverse(c.forward(x)) - x) <= 1e-12);
    }
}

TEST_CASE("stq cheat transform") {
    const auto t0 = CheatTransform::stq(0);
    CHECK(t0.forward(kPi / 2) == doctest::Approx(kPi / 2));
    // Order zero: pi/2 + 2 sin u is increasing on the whole range.
    const auto iv = monotone_intervals(t0);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].first == 0.0);
    CHECK(iv[0].second == doctest::Approx(kPi));
    for (int k = 0; k <= 1000; ++k) {
        const double d = kPi * k / 1000;
        CHECK(std::abs(t0.inverse(t0.forward(d)) - d) <= 1e-12);
    }
    CHECK_THROWS_AS(t0.inverse(100.0), DomainError);

    const auto t11 = CheatTransform::stq(11);
    CHECK(monotone_intervals(t11).size() > 1);
    // Values reached on several branches have no unique preimage.
    CHECK_THROWS_AS(t11.inverse(t11.forward(0.05 * kPi)), NonMonotone);
    for (const auto& [lo, hi] : monotone_intervals(t11)) CHECK(lo < hi);

    const auto cheat = ProbabilityLaw::cheated(ProbabilityLaw::classical(), t0);
    CHECK(cheat(kPi / 2) == doctest::Approx(0.5));
}

TEST_CASE("law and transform names") {
    for (const char* name :
         {"classical", "quantum", "stq0", "stq11", "stq-limit", "cheat-quantum", "cheat-classical", "cheat-stq3"})
        CHECK(parse_law(name).name() == name);
    for (const char* name : {"quantum-cheat", "classical-cheat", "stq-cheat7"}) CHECK(parse_transform(name).name() == name);
    CHECK_THROWS_AS(parse_law("bogus"), Error);
    CHECK_THROWS_AS(parse_law("stqx"), Error);
    CHECK_THROWS_AS(parse_transform("nope"), Error);
    CHECK(parse_convention("half") == ChConvention::Half);
    CHECK(to_string(ChConvention::Full) == "full");
}

TEST_CASE("CH values at the listed angles") {
    const auto law = parse_law("cheat-quantum");
    const auto half = ch_value(law, kListed, ChConvention::Half);
    CHECK(half.s == doctest::Approx(sin2(kPi / 16) + sin2(3 * kPi / 16) - 1).epsilon(1e-14));
    CHECK(half.s == doctest::Approx(-0.6532814824381883).epsilon(1e-12));
    CHECK_FALSE(half.lower_violated);
    CHECK_FALSE(half.upper_violated);

    const auto full = ch_value(law, kListed, ChConvention::Full);
    CHECK(std::abs(full.s) <= 1e-12);
    CHECK_FALSE(full.lower_violated);
    CHECK_FALSE(full.upper_violated);
}

TEST_CASE("CH value for the closed-form optimum") {
    // The optimum of sin^2(x/2)+sin^2(3x/2)-1 needs a difference 3x > pi.
    const double x = std::asin(std::sqrt(5.0 / 6.0));
    CHECK(sin2(x / 2) + sin2(3 * x / 2) - 1 == doctest::Approx(0.2721655269759087).epsilon(1e-12));
    CHECK(3 * x > kPi);
    CHECK_THROWS_AS(ch_value(parse_law("cheat-quantum"), {0, x, 2 * x, 3 * x}, ChConvention::Full), DomainError);
}

TEST_CASE("CH with the step limit and finite orders") {
    const ChAngles a{0, 0.65 * kPi, 0.3 * kPi, 0.9 * kPi};
    const auto limit = ch_value(ProbabilityLaw::stq_limit(), a, ChConvention::Full);
    CHECK(std::abs(limit.s - 2.0) <= 1e-9);
    CHECK(limit.upper_violated);
    CHECK(std::abs(ch_value(ProbabilityLaw::stq(101), a, ChConvention::Full).s - 2.0) <= 0.05);
}

TEST_CASE("CH scans") {
    const auto cheat = parse_law("cheat-quantum");
    const auto s = scan_ch(cheat, ChConvention::Full, 1e-4);
    CHECK(std::abs(s.max_s - 0.25) <= 1e-4);  // grid stops at the last multiple of the step
    CHECK(s.x == doctest::Approx(kPi / 3).epsilon(1e-4));
    CHECK(s.angles.b2 == doctest::Approx(3 * s.x));
    const auto threaded = scan_ch(cheat, ChConvention::Full, 1e-4, 4);
    CHECK(threaded.max_s == s.max_s);
    CHECK(threaded.x == s.x);

    const auto cl_full = scan_ch(ProbabilityLaw::classical(), ChConvention::Full, 1e-3);
    CHECK(std::abs(cl_full.max_s - 1.0 / 3) <= 4.0 / kPi * 1e-3);
    const auto cl_half = scan_ch(ProbabilityLaw::classical(), ChConvention::Half, 1e-3);
    CHECK(cl_half.max_s <= 1e-12);

    const auto qm_half = scan_ch(ProbabilityLaw::quantum(), ChConvention::Half, 1e-3);
    const auto qm_full = scan_ch(ProbabilityLaw::quantum(), ChConvention::Full, 1e-3);
    CHECK(qm_half.max_s < qm_full.max_s);
}

TEST_CASE("curve sampling") {
    const auto t = sample_curves({ProbabilityLaw::classical(), ProbabilityLaw::quantum(), ProbabilityLaw::stq(11)}, 5);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.header == std::vector<std::string>{"theta", "classical", "quantum", "stq11"});
    for (std::size_t j = 1; j < 4; ++j) CHECK(t.rows[2][j] == doctest::Approx(0.5).epsilon(1e-15));

    const auto e = sample_curves({CheatTransform::quantum()}, 2);
    CHECK(e.rows[0][1] == 0.0);
    CHECK(e.rows[1][1] == doctest::Approx(kPi));
    const auto csv = to_csv(e);
    CHECK(csv.rfind("theta,quantum-cheat\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
}
