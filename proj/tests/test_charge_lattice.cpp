#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refmeasure/charge.hpp"

#include <algorithm>
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

// Independent evaluation of sup / inf of mu over events of exact probability p,
// by scanning all events.
std::pair<double, double> brute_envelopes(const SignedCharge& mu, const ProbabilityCharge& p,
                                          const Rational& level) {
    const int n = mu.space()->n();
    double hi = -1e300, lo = 1e300;
    bool seen = false;
    for (std::uint64_t m = 0; m < (1ull << n); ++m) {
        const Event a = Event::from_mask(m, n);
        if (p.prob(a) != level) continue;
        const double v = mu.value(a);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
        seen = true;
    }
    REQUIRE(seen);
    return {hi, lo};
}

}  // namespace

TEST_CASE("signed charge basics") {
    auto u3 = build_space_uniform(3);
    const SignedCharge mu(u3, {1.0, -2.0, 3.0});
    CHECK(mu.atom(1) == -2.0);
    CHECK(mu.value(Event::of({0, 2})) == 4.0);
    CHECK(mu.value(Event()) == 0.0);
    CHECK(mu.total() == 2.0);
    CHECK(zero_charge(u3).total() == 0.0);
    CHECK(total_variation(mu) == 6.0);
    CHECK(code_of([&] { SignedCharge(u3, {1.0, 2.0}); }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("lattice operations, fixed values") {
    auto u3 = build_space_uniform(3);
    const SignedCharge mu(u3, {1.0, -2.0, 3.0});
    const SignedCharge nu(u3, {0.0, 4.0, -1.0});

    CHECK(lattice_combine(LatticeMode::Join, mu, &nu).atom_values() ==
          std::vector<double>{1.0, 4.0, 3.0});
    CHECK(lattice_combine(LatticeMode::Meet, mu, &nu).atom_values() ==
          std::vector<double>{0.0, -2.0, -1.0});
    CHECK(lattice_combine(LatticeMode::Abs, mu, nullptr).atom_values() ==
          std::vector<double>{1.0, 2.0, 3.0});
    CHECK(lattice_combine(LatticeMode::PositivePart, mu, nullptr).atom_values() ==
          std::vector<double>{1.0, 0.0, 3.0});
    CHECK(lattice_combine(LatticeMode::NegativePart, mu, nullptr).atom_values() ==
          std::vector<double>{0.0, 2.0, 0.0});

    CHECK(code_of([&] { lattice_combine(LatticeMode::Join, mu, nullptr); }) ==
          ErrorCode::SpaceMismatch);
    auto u2 = build_space_uniform(2);
    const SignedCharge other(u2, {1.0, 0.0});
    CHECK(code_of([&] { lattice_combine(LatticeMode::Meet, mu, &other); }) ==
          ErrorCode::SpaceMismatch);
}

TEST_CASE("lattice identities on random charges") {
    std::mt19937 rng(12345);
    auto u6 = build_space_uniform(6);
    for (int trial = 0; trial < 40; ++trial) {
        const SignedCharge mu(u6, random_values(rng, 6));
        const SignedCharge nu(u6, random_values(rng, 6));
        const auto join = lattice_combine(LatticeMode::Join, mu, &nu);
        const auto meet = lattice_combine(LatticeMode::Meet, mu, &nu);
        const auto pos = lattice_combine(LatticeMode::PositivePart, mu, nullptr);
        const auto neg = lattice_combine(LatticeMode::NegativePart, mu, nullptr);
        const auto abs = lattice_combine(LatticeMode::Abs, mu, nullptr);

        for (std::uint64_t m = 0; m < (1ull << 6); ++m) {
            const Event a = Event::from_mask(m, 6);
            // Join value at A agrees with the partition formula
            // sup { mu(B) + nu(A \ B) : B subset of A }.
            CHECK(join.value(a) ==
                  doctest::Approx(join_partition_value(mu, nu, a)).epsilon(1e-12));
            // Modularity: join + meet = mu + nu, setwise.
            CHECK(join.value(a) + meet.value(a) ==
                  doctest::Approx(mu.value(a) + nu.value(a)).epsilon(1e-12));
        }
        // Jordan decomposition: mu = mu+ - mu-, |mu| = mu+ + mu-.
        for (int i = 0; i < 6; ++i) {
            CHECK(pos.atom(i) - neg.atom(i) == doctest::Approx(mu.atom(i)));
            CHECK(pos.atom(i) + neg.atom(i) == doctest::Approx(abs.atom(i)));
        }
        CHECK(total_variation(mu) == doctest::Approx(abs.total()));
    }
}

TEST_CASE("absolute continuity split") {
    auto w = build_space_weighted({Rational(1, 2), Rational(1, 2), 0});
    const auto p = declared_probability(w);

    const SignedCharge mu(w, {1.0, 2.0, 3.0});
    const auto rel = relations(mu, p);
    CHECK_FALSE(rel.absolutely_continuous);
    CHECK(rel.continuous_part.atom_values() == std::vector<double>{1.0, 2.0, 0.0});
    CHECK(rel.singular_part.atom_values() == std::vector<double>{0.0, 0.0, 3.0});

    const SignedCharge nu(w, {1.0, -2.0, 0.0});
    const auto rel2 = relations(nu, p);
    CHECK(rel2.absolutely_continuous);
    CHECK(rel2.singular_part.atom_values() == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("rearrangement envelopes, fixed values") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const SignedCharge mu(u4, {1.0, 2.0, 3.0, 4.0});
    const auto stats = rearrangement_stats(mu, p);

    REQUIRE(stats.s_values.size() == 5);  // p = 0, 1/4, 1/2, 3/4, 1
    CHECK(stats.s_values.at(Rational(0)) == 0.0);
    CHECK(stats.s_values.at(Rational(1, 4)) == 4.0);
    CHECK(stats.s_values.at(Rational(1, 2)) == 7.0);
    CHECK(stats.s_values.at(Rational(3, 4)) == 9.0);
    CHECK(stats.s_values.at(Rational(1)) == 10.0);
    CHECK(stats.iota_values.at(Rational(1, 4)) == 1.0);
    CHECK(stats.iota_values.at(Rational(1, 2)) == 3.0);
    CHECK(stats.iota_values.at(Rational(3, 4)) == 6.0);
    CHECK(stats.iota_values.at(Rational(1)) == 10.0);
}

TEST_CASE("rearrangement envelopes vs event scan, uniform and weighted") {
    std::mt19937 rng(777);
    auto u6 = build_space_uniform(6);
    auto w = build_space_weighted({Rational(1, 2), Rational(1, 4), Rational(1, 8),
                                   Rational(1, 16), Rational(1, 32), Rational(1, 32)});
    for (const auto& space : {u6, w}) {
        const auto p = declared_probability(space);
        for (int trial = 0; trial < 25; ++trial) {
            const SignedCharge mu(space, random_values(rng, 6));
            const auto stats = rearrangement_stats(mu, p);
            REQUIRE(stats.s_values.size() == stats.iota_values.size());
            for (const auto& [level, s] : stats.s_values) {
                const auto [hi, lo] = brute_envelopes(mu, p, level);
                CHECK(s == doctest::Approx(hi).epsilon(1e-12));
                CHECK(stats.iota_values.at(level) == doctest::Approx(lo).epsilon(1e-12));
            }
            // Conjugacy: s(p) = mu(full) - iota(1 - p) at every attainable level.
            const double total = mu.total();
            for (const auto& [level, s] : stats.s_values) {
                CHECK(s == doctest::Approx(total - stats.iota_values.at(Rational(1) - level))
                               .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("rho on uniform spaces") {
    auto u4 = build_space_uniform(4);
    const auto p = declared_probability(u4);
    const SignedCharge mu(u4, {1.0, 2.0, 3.0, 4.0});
    const SimpleRandomVariable x(u4, {10.0, 20.0, 30.0, 40.0});
    CHECK(rho(mu, p, x) == doctest::Approx(300.0));  // sorted dot product
    CHECK(rho_by_permutations(mu, p, x) == doctest::Approx(300.0));

    // rho only depends on mu through its value multiset (uniform space).
    const SignedCharge mu2(u4, {4.0, 3.0, 2.0, 1.0});
    CHECK(rho(mu2, p, x) == doctest::Approx(300.0));

    std::mt19937 rng(99);
    for (int n = 2; n <= 7; ++n) {
        auto un = build_space_uniform(n);
        const auto pn = declared_probability(un);
        for (int trial = 0; trial < 20; ++trial) {
            const SignedCharge m(un, random_values(rng, n));
            const SimpleRandomVariable y(un, random_values(rng, n, -3.0, 3.0));
            CHECK(rho(m, pn, y) == doctest::Approx(rho_by_permutations(m, pn, y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rho on weighted spaces") {
    auto w = build_space_weighted({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    const auto p = declared_probability(w);
    const SignedCharge mu(w, {0.0, 1.0, 2.0});
    const SimpleRandomVariable x(w, {1.0, 2.0, 3.0});
    // The atom of weight 1/2 must keep the value of mass 1/2; the other two
    // values can swap, and the better assignment pairs 2 with the value 3.
    CHECK(rho(mu, p, x) == doctest::Approx(8.0));

    // Repeated values across different weights still match by exact masses.
    const SimpleRandomVariable y(w, {5.0, 5.0, -1.0});
    // Y must give mass 3/4 to the value 5 and 1/4 to -1: either atoms {0,1}
    // or atoms {0,2} carry the 5s.
    CHECK(rho(mu, p, y) == doctest::Approx(std::max(0.0 * 5 + 1 * 5 - 2, 0.0 * 5 - 1 + 2 * 5)));

    auto z = build_space_weighted({Rational(1, 2), Rational(1, 2), 0});
    const auto pz = declared_probability(z);
    const SignedCharge bad(z, {1.0, 1.0, 0.5});
    const SimpleRandomVariable xz(z, {1.0, 2.0, 3.0});
    CHECK(code_of([&] { rho(bad, pz, xz); }) == ErrorCode::NotAbsolutelyContinuous);
}
