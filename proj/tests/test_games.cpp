#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refmeasure/games.hpp"

#include <atomic>
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

}  // namespace

TEST_CASE("distortion families, exact boundary behavior") {
    const auto ent = entropic_distortion(1.0);
    CHECK(ent.eval(Rational(0)) == 0.0);
    CHECK(ent.eval(Rational(1)) == doctest::Approx(1.0).epsilon(1e-15));
    // h_alpha(x) = log(1 + (e^alpha - 1) x) / alpha, checked against a direct
    // formula at x = 1/4.
    CHECK(ent.eval(Rational(1, 4)) ==
          doctest::Approx(std::log1p(std::expm1(1.0) * 0.25)).epsilon(1e-15));
    CHECK(ent.eval(Rational(1, 4)) == doctest::Approx(0.35737401950878844).epsilon(1e-15));

    const auto es = es_distortion(Rational(3, 4));
    CHECK(es.eval(Rational(0)) == 0.0);
    CHECK(es.eval(Rational(1, 8)) == doctest::Approx(0.5));
    CHECK(es.eval(Rational(1, 4)) == 1.0);  // kink exactly at 1 - beta
    CHECK(es.eval(Rational(1, 2)) == 1.0);

    // var uses the strict threshold, rvar the non-strict one; at the exact
    // rational boundary x = 1 - gamma they must differ.
    const auto var = var_distortion(Rational(1, 2));
    const auto rvar = rvar_distortion(Rational(1, 2));
    CHECK(var.eval(Rational(1, 2)) == 0.0);
    CHECK(rvar.eval(Rational(1, 2)) == 1.0);
    CHECK(var.eval(Rational(1, 2) + Rational(1, 1000000)) == 1.0);
    CHECK(rvar.eval(Rational(1, 2) - Rational(1, 1000000)) == 0.0);
    CHECK(var.eval(Rational(0)) == 0.0);
    CHECK(rvar.eval(Rational(0)) == 0.0);
    CHECK(var.eval(Rational(1)) == 1.0);

    const auto pow2 = power_distortion(2.0);
    CHECK(pow2.eval(Rational(1, 2)) == doctest::Approx(0.25));
    CHECK(pow2.eval(Rational(1)) == 1.0);

    CHECK(code_of([] { entropic_distortion(0.0); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { entropic_distortion(-1.0); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { es_distortion(Rational(1)); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { es_distortion(Rational(-1, 2)); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { var_distortion(Rational(0)); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { var_distortion(Rational(1)); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { rvar_distortion(Rational(1)); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { power_distortion(0.0); }) == ErrorCode::ParameterOutOfRange);
}

TEST_CASE("game tables") {
    auto u2 = build_space_uniform(2);
    const Game g = Game::from_table(u2, {0.0, 0.25, 0.5, 1.0}, "demo");
    CHECK(g.materialized());
    CHECK(g.value_mask(0b01) == 0.25);
    CHECK(g.value(Event::of({1})) == 0.5);
    CHECK(g.total() == 1.0);
    CHECK(g.tag() == "demo");
    CHECK(g.table() == std::vector<double>{0.0, 0.25, 0.5, 1.0});

    CHECK(code_of([&] { Game::from_table(u2, {0.1, 0.0, 0.0, 1.0}); }) ==
          ErrorCode::DomainError);  // v(empty) must be 0
    CHECK(code_of([&] { Game::from_table(u2, {0.0, 0.0, 1.0}); }) == ErrorCode::SpaceMismatch);

    // Closures materialize up to the table cap and stay lazy above it.
    const Game small = Game::from_closure(u2, [](std::uint64_t m) { return double(m); }, "lazy");
    CHECK(small.materialized());
    CHECK(small.value_mask(3) == 3.0);

    auto big = build_space_uniform(17);
    std::atomic<int> calls{0};
    const Game lazy = Game::from_closure(
        big,
        [&calls](std::uint64_t m) {
            ++calls;
            return static_cast<double>(std::popcount(m)) / 17.0;
        },
        "lazy17");
    CHECK_FALSE(lazy.materialized());
    CHECK(calls.load() == 1);  // construction validates v(empty) = 0
    CHECK(lazy.value_mask(0b111) == doctest::Approx(3.0 / 17.0));
    CHECK(lazy.value_mask(0b111) == doctest::Approx(3.0 / 17.0));
    CHECK(calls.load() == 2);  // second lookup is memoized
    CHECK(code_of([&] { (void)lazy.table(); }) == ErrorCode::TooManyAtoms);
}

TEST_CASE("probability table in mask order") {
    auto u3 = build_space_uniform(3);
    const auto table = probability_table(declared_probability(u3));
    const std::vector<Rational> expected{0,
                                         Rational(1, 3),
                                         Rational(1, 3),
                                         Rational(2, 3),
                                         Rational(1, 3),
                                         Rational(2, 3),
                                         Rational(2, 3),
                                         Rational(1)};
    CHECK(table == expected);
}

TEST_CASE("distortion games") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);

    const Game identity = build_distortion({[](const Rational& x) { return to_double(x); },
                                            "identity"},
                                           p);
    for (std::uint64_t m = 0; m < 16; ++m)
        CHECK(identity.value_mask(m) == doctest::Approx(std::popcount(m) / 4.0));
    REQUIRE(identity.reference() != nullptr);
    CHECK(identity.reference()->masses() == p.masses());

    const Game sq = build_distortion(power_distortion(2.0), p);
    CHECK(sq.value(Event::of({0, 1})) == doctest::Approx(0.25));

    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 2)}, p);
    CHECK(es.value(Event::of({0})) == doctest::Approx(0.5));
    CHECK(es.value(Event::of({0, 1})) == doctest::Approx(1.0));
    CHECK(es.value(Event::of({0, 1, 2})) == doctest::Approx(1.0));

    const Game ent = build_family({FamilySpec::Kind::Entropic, 1.0, Rational(0)}, p);
    CHECK(ent.value(Event::of({2})) == doctest::Approx(0.35737401950878844));

    const Game var = build_family({FamilySpec::Kind::Var, 0.0, Rational(1, 2)}, p);
    const Game rvar = build_family({FamilySpec::Kind::Rvar, 0.0, Rational(1, 2)}, p);
    CHECK(var.value(Event::of({0, 1})) == 0.0);   // P = 1/2, strict threshold
    CHECK(rvar.value(Event::of({0, 1})) == 1.0);  // non-strict
    CHECK(var.value(Event::of({0, 1, 2})) == 1.0);
}

TEST_CASE("property classification") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);

    const Game var = build_family({FamilySpec::Kind::Var, 0.0, Rational(1, 2)}, p);
    const auto vr = classify_properties(var);
    CHECK(vr.monotone);
    CHECK(vr.superadditive);
    CHECK_FALSE(vr.subadditive);
    CHECK_FALSE(vr.submodular);
    CHECK(vr.invariant_wrt_p);
    CHECK(vr.continuous_at_empty);
    REQUIRE(vr.subadditive_witness.has_value());
    {
        // The witness must reproduce the violated inequality.
        const Event a = vr.subadditive_witness->a, b = vr.subadditive_witness->b;
        const std::uint64_t ma = a.mask(4), mb = b.mask(4);
        CHECK((ma & mb) == 0);
        CHECK(var.value_mask(ma | mb) > var.value_mask(ma) + var.value_mask(mb) + 1e-9);
    }
    REQUIRE(vr.submodular_witness.has_value());
    {
        const std::uint64_t ma = vr.submodular_witness->a.mask(4);
        const std::uint64_t mb = vr.submodular_witness->b.mask(4);
        CHECK(var.value_mask(ma | mb) + var.value_mask(ma & mb) >
              var.value_mask(ma) + var.value_mask(mb) + 1e-9);
    }

    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 2)}, p);
    const auto er = classify_properties(es);
    CHECK(er.monotone);
    CHECK_FALSE(er.superadditive);
    CHECK(er.subadditive);
    CHECK(er.submodular);
    CHECK(er.invariant_wrt_p);
    REQUIRE(er.superadditive_witness.has_value());

    const Game add = build_distortion({[](const Rational& x) { return to_double(x); }, "id"}, p);
    const auto ar = classify_properties(add);
    CHECK(ar.superadditive);
    CHECK(ar.subadditive);
    CHECK(ar.submodular);

    // Asymmetric table: not invariant, and the witness events must have equal
    // probability but different values.
    const Game skew = Game::from_table(u4, {0, 0.9, 0.1, 1, 0.1, 1, 1, 1,
                                            0.1, 1, 1, 1, 1, 1, 1, 1});
    const auto sr = classify_properties(skew);
    CHECK_FALSE(sr.invariant_wrt_p);
    REQUIRE(sr.invariance_witness.has_value());
    CHECK(event_probability(*u4, sr.invariance_witness->a) ==
          event_probability(*u4, sr.invariance_witness->b));
    CHECK(skew.value(sr.invariance_witness->a) != skew.value(sr.invariance_witness->b));

    // Non-monotone table.
    auto u2 = build_space_uniform(2);
    const Game drop = Game::from_table(u2, {0.0, 0.8, 0.3, 0.5});
    const auto dr = classify_properties(drop);
    CHECK_FALSE(dr.monotone);
    REQUIRE(dr.monotone_witness.has_value());

    CHECK(code_of([] {
        classify_properties(Game::from_closure(build_space_uniform(13),
                                               [](std::uint64_t) { return 0.0; }, "big"));
    }) == ErrorCode::TooManyAtoms);
}

TEST_CASE("invariance check against an explicit charge") {
    auto u3 = build_space_uniform(3);
    const auto p = declared_probability(u3);
    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 3)}, p);
    CHECK(check_invariance(es, p).invariant);

    // The same table is not invariant w.r.t. a skewed charge.
    const ProbabilityCharge q(u3, {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    const auto res = check_invariance(es, q);
    CHECK_FALSE(res.invariant);
    REQUIRE(res.witness.has_value());
    CHECK(q.prob(res.witness->a) == q.prob(res.witness->b));
}

TEST_CASE("conjugation") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const Game es = build_family({FamilySpec::Kind::Es, 0.0, Rational(1, 2)}, p);
    const Game conj = conjugate_game(es);
    for (std::uint64_t m = 0; m < 16; ++m) {
        CHECK(conj.value_mask(m) ==
              doctest::Approx(es.total() - es.value_mask(15 & ~m)).epsilon(1e-12));
    }
    // Involution.
    const Game back = conjugate_game(conj);
    for (std::uint64_t m = 0; m < 16; ++m)
        CHECK(back.value_mask(m) == doctest::Approx(es.value_mask(m)).epsilon(1e-12));

    // var and rvar at the same level are conjugate to each other.
    const Game var = build_family({FamilySpec::Kind::Var, 0.0, Rational(1, 2)}, p);
    const Game rvar = build_family({FamilySpec::Kind::Rvar, 0.0, Rational(1, 2)}, p);
    const Game cv = conjugate_game(var);
    for (std::uint64_t m = 0; m < 16; ++m)
        CHECK(cv.value_mask(m) == doctest::Approx(rvar.value_mask(m)).epsilon(1e-12));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> table(16);
        for (std::size_t i = 1; i < 16; ++i) table[i] = dist(rng);
        const Game g = Game::from_table(u4, table);
        const Game gg = conjugate_game(conjugate_game(g));
        for (std::uint64_t m = 0; m < 16; ++m)
            CHECK(gg.value_mask(m) == doctest::Approx(g.value_mask(m)).epsilon(1e-12));
    }
}

TEST_CASE("envelopes of charge families") {
    auto u3 = build_space_uniform(3);
    const SignedCharge mu(u3, {1.0, 0.0, 0.0});
    const SignedCharge nu(u3, {0.0, 1.0, 0.0});
    const Game lower = envelope(EnvelopeMode::Lower, {mu, nu});
    const Game upper = envelope(EnvelopeMode::Upper, {mu, nu});
    CHECK(lower.value(Event::of({0})) == 0.0);      // min(1, 0)
    CHECK(upper.value(Event::of({0})) == 1.0);      // max(1, 0)
    CHECK(lower.value(Event::of({0, 1})) == 1.0);   // min(1, 1)
    CHECK(upper.value(Event::of({2})) == 0.0);
    CHECK(lower.total() == 1.0);
    CHECK(code_of([] { envelope(EnvelopeMode::Lower, {}); }) == ErrorCode::EmptyList);

    // The lower envelope dominates no member from above and the upper none
    // from below.
    for (std::uint64_t m = 0; m < 8; ++m) {
        const Event a = Event::from_mask(m, 3);
        CHECK(lower.value(a) <= std::min(mu.value(a), nu.value(a)) + 1e-12);
        CHECK(upper.value(a) >= std::max(mu.value(a), nu.value(a)) - 1e-12);
    }
}
