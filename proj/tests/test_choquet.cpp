#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refmeasure/choquet.hpp"
#include "refmeasure/supports.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace refmeasure;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a refmeasure::Error");
    return ErrorCode::DomainError;
}

std::vector<double> random_values(std::mt19937& rng, int n, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = dist(rng);
    return v;
}

Game random_monotone_game(std::mt19937& rng, SpacePtr space) {
    const int n = space->n();
    std::uniform_real_distribution<double> dist(0.0, 0.2);
    std::vector<double> table(std::size_t{1} << n, 0.0);
    for (std::uint64_t m = 1; m < table.size(); ++m) {
        double floor_val = 0.0;
        for (int i = 0; i < n; ++i)
            if (m & (1ull << i)) floor_val = std::max(floor_val, table[m & ~(1ull << i)]);
        table[m] = floor_val + dist(rng);
    }
    return Game::from_table(std::move(space), std::move(table), "random_monotone");
}

}  // namespace

TEST_CASE("choquet integral, fixed values") {
    auto u2 = build_space_uniform(2);
    const Game g = Game::from_table(u2, {0.0, 0.3, 0.6, 1.0});

    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {1.0, 0.0})) == doctest::Approx(0.3));
    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {0.0, 1.0})) == doctest::Approx(0.6));
    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {1.0, 1.0})) == doctest::Approx(1.0));
    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {0.0, 0.0})) == 0.0);
    // Distinct values 2 > -1: (2 - (-1)) * v({X >= 2}) + (-1) * v(full).
    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {2.0, -1.0})) == doctest::Approx(-0.1));
    // Constants scale by v(full).
    CHECK(choquet_integral(g, SimpleRandomVariable(u2, {-2.5, -2.5})) == doctest::Approx(-2.5));

    auto u3 = build_space_uniform(3);
    CHECK(code_of([&] {
        choquet_integral(g, SimpleRandomVariable(u3, {0.0, 0.0, 0.0}));
    }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("choquet integral properties on random games") {
    std::mt19937 rng(2024);
    auto u5 = build_space_uniform(5);
    for (int trial = 0; trial < 15; ++trial) {
        const Game g = random_monotone_game(rng, u5);
        // Indicators recover the game.
        for (std::uint64_t m = 0; m < 32; ++m) {
            const Event a = Event::from_mask(m, 5);
            CHECK(choquet_integral(g, SimpleRandomVariable::indicator(u5, a)) ==
                  doctest::Approx(g.value_mask(m)).epsilon(1e-12));
        }
        const SimpleRandomVariable x(u5, random_values(rng, 5));
        const double base = choquet_integral(g, x);
        // Translativity and positive homogeneity.
        std::vector<double> shifted = x.values();
        for (auto& v : shifted) v += 0.7;
        CHECK(choquet_integral(g, SimpleRandomVariable(u5, shifted)) ==
              doctest::Approx(base + 0.7 * g.total()).epsilon(1e-12));
        std::vector<double> scaled = x.values();
        for (auto& v : scaled) v *= 3.25;
        CHECK(choquet_integral(g, SimpleRandomVariable(u5, scaled)) ==
              doctest::Approx(3.25 * base).epsilon(1e-12));
        // Monotone games give monotone integrals.
        std::vector<double> dominated = x.values();
        for (auto& v : dominated) v -= 0.1;
        CHECK(choquet_integral(g, SimpleRandomVariable(u5, dominated)) <= base + 1e-12);
    }
}

TEST_CASE("riskmetric evaluation, fixed values") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const SimpleRandomVariable x(u4, {0.0, 1.0, 2.0, 3.0});

    CHECK(evaluate_riskmetric({RiskFamily::Var, Rational(1, 2), 0.0}, p, x) == 1.0);
    CHECK(evaluate_riskmetric({RiskFamily::Rvar, Rational(1, 2), 0.0}, p, x) == 2.0);
    CHECK(evaluate_riskmetric({RiskFamily::Var, Rational(1, 4), 0.0}, p, x) == 0.0);
    CHECK(evaluate_riskmetric({RiskFamily::Var, Rational(3, 4), 0.0}, p, x) == 2.0);
    CHECK(evaluate_riskmetric({RiskFamily::Es, Rational(1, 2), 0.0}, p, x) ==
          doctest::Approx(2.5));
    CHECK(evaluate_riskmetric({RiskFamily::Es, Rational(0), 0.0}, p, x) ==
          doctest::Approx(1.5));  // beta = 0 is the mean
    CHECK(evaluate_riskmetric({RiskFamily::Es, Rational(3, 4), 0.0}, p, x) ==
          doctest::Approx(3.0));

    const SimpleRandomVariable ind(u4, {1.0, 0.0, 0.0, 0.0});
    CHECK(evaluate_riskmetric({RiskFamily::Entropic, Rational(0), 1.0}, p, ind) ==
          doctest::Approx(std::log(0.25 * std::exp(1.0) + 0.75)).epsilon(1e-15));
    CHECK(evaluate_riskmetric({RiskFamily::Entropic, Rational(0), 1.0}, p, ind) ==
          doctest::Approx(0.35737401950878844).epsilon(1e-15));

    CHECK(code_of([&] { evaluate_riskmetric({RiskFamily::Var, Rational(0), 0.0}, p, x); }) ==
          ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { evaluate_riskmetric({RiskFamily::Var, Rational(1), 0.0}, p, x); }) ==
          ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { evaluate_riskmetric({RiskFamily::Es, Rational(1), 0.0}, p, x); }) ==
          ErrorCode::ParameterOutOfRange);
    CHECK(code_of([&] { evaluate_riskmetric({RiskFamily::Entropic, Rational(0), 0.0}, p, x); }) ==
          ErrorCode::ParameterOutOfRange);
}

TEST_CASE("riskmetrics agree with their distortion games") {
    std::mt19937 rng(31);
    auto u5 = build_space_uniform(5);
    const auto p = declared_probability(u5);
    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(2, 5)}, p);
    const Game var = build_family({FamilySpec::Kind::Var, 0.0, Rational(2, 5)}, p);
    const Game rvar = build_family({FamilySpec::Kind::Rvar, 0.0, Rational(2, 5)}, p);
    for (int trial = 0; trial < 60; ++trial) {
        // Mix ties into the values now and then to stress the quantile edges.
        std::vector<double> vals = random_values(rng, 5);
        if (trial % 3 == 0) vals[static_cast<std::size_t>(trial % 5)] = vals[0];
        const SimpleRandomVariable x(u5, vals);
        CHECK(choquet_integral(es, x) ==
              doctest::Approx(evaluate_riskmetric({RiskFamily::Es, Rational(2, 5), 0.0}, p, x))
                  .epsilon(1e-10));
        CHECK(choquet_integral(var, x) ==
              doctest::Approx(evaluate_riskmetric({RiskFamily::Var, Rational(2, 5), 0.0}, p, x))
                  .epsilon(1e-10));
        CHECK(choquet_integral(rvar, x) ==
              doctest::Approx(evaluate_riskmetric({RiskFamily::Rvar, Rational(2, 5), 0.0}, p, x))
                  .epsilon(1e-10));
    }
}

TEST_CASE("riskmetrics on weighted spaces") {
    auto w = build_space_weighted({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    const auto p = declared_probability(w);
    const SimpleRandomVariable x(w, {1.0, 2.0, 3.0});
    // Cumulative masses: P(X <= 1) = 1/2, P(X <= 2) = 3/4, P(X <= 3) = 1.
    CHECK(evaluate_riskmetric({RiskFamily::Var, Rational(1, 2), 0.0}, p, x) == 1.0);
    CHECK(evaluate_riskmetric({RiskFamily::Rvar, Rational(1, 2), 0.0}, p, x) == 2.0);
    CHECK(evaluate_riskmetric({RiskFamily::Var, Rational(3, 4), 0.0}, p, x) == 2.0);
    // ES at 1/2: 2 * (2 * 1/4 + 3 * 1/4) = 2.5.
    CHECK(evaluate_riskmetric({RiskFamily::Es, Rational(1, 2), 0.0}, p, x) ==
          doctest::Approx(2.5));
}

TEST_CASE("functional oracles") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const SimpleRandomVariable x(u4, {4.0, -1.0, 0.5, 2.0});

    const auto exp_oracle = expectation_oracle(p);
    CHECK(exp_oracle.eval(x) == doctest::Approx((4.0 - 1.0 + 0.5 + 2.0) / 4.0));

    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 2)}, p);
    const auto choq = choquet_oracle(es);
    const auto risk = riskmetric_oracle({RiskFamily::Es, Rational(1, 2), 0.0}, p);
    CHECK(choq.eval(x) == doctest::Approx(risk.eval(x)).epsilon(1e-10));
}

TEST_CASE("comonotonic additivity sampler") {
    auto u5 = build_space_uniform(5);
    const auto p = declared_probability(u5);

    // Choquet functionals are comonotone additive.
    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 2)}, p);
    CHECK(comonotonic_additivity_test(choquet_oracle(es), u5, 60, 7).passes);
    CHECK(comonotonic_additivity_test(expectation_oracle(p), u5, 60, 7).passes);

    // The entropic functional is not; the sampler must produce a witness that
    // actually violates additivity.
    const auto ent = riskmetric_oracle({RiskFamily::Entropic, Rational(0), 2.0}, p);
    const auto res = comonotonic_additivity_test(ent, u5, 200, 7);
    CHECK_FALSE(res.passes);
    REQUIRE(res.witness.has_value());
    std::vector<double> sum(5);
    for (int i = 0; i < 5; ++i) sum[static_cast<std::size_t>(i)] =
        res.witness->x(i) + res.witness->y(i);
    const double lhs = ent.eval(SimpleRandomVariable(u5, sum));
    const double rhs = ent.eval(res.witness->x) + ent.eval(res.witness->y);
    CHECK(std::abs(lhs - rhs) > 1e-7);
}

TEST_CASE("functional invariance test") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const Dictionary dict = make_dictionary(u4, "indicators");

    CHECK(functional_invariance_test(riskmetric_oracle({RiskFamily::Es, Rational(1, 2), 0.0}, p),
                                     p, dict)
              .invariant);
    CHECK(functional_invariance_test(expectation_oracle(p), p, dict).invariant);

    // A coordinate functional is not law invariant; the witness pair must be
    // equidistributed but split by the functional.
    const FunctionalOracle coord{[](const SimpleRandomVariable& v) { return v(0); }, "coord0"};
    const auto res = functional_invariance_test(coord, p, dict);
    CHECK_FALSE(res.invariant);
    REQUIRE(res.witness.has_value());
    CHECK(coord.eval(res.witness->x) != doctest::Approx(coord.eval(res.witness->y)));

    // Weighted space: rearrangements must respect exact masses.
    auto w = build_space_weighted({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    const auto pw = declared_probability(w);
    const Dictionary dw = make_dictionary(w, "indicators");
    CHECK(functional_invariance_test(
              riskmetric_oracle({RiskFamily::Es, Rational(1, 2), 0.0}, pw), pw, dw)
              .invariant);
    const FunctionalOracle coord1{[](const SimpleRandomVariable& v) { return v(1); }, "coord1"};
    const auto resw = functional_invariance_test(coord1, pw, dw);
    CHECK_FALSE(resw.invariant);

    // A functional invariant for the wrong measure is caught under the right
    // one: expectation w.r.t. q is not law invariant w.r.t. p.
    const ProbabilityCharge q(u4, {Rational(1, 2), Rational(1, 6), Rational(1, 6),
                                   Rational(1, 6)});
    CHECK_FALSE(functional_invariance_test(expectation_oracle(q), p, dict).invariant);
}
