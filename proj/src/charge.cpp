#include "refmeasure/charge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace refmeasure {

SignedCharge::SignedCharge(SpacePtr space, std::vector<double> atom_values)
    : space_(std::move(space)), values_(std::move(atom_values)) {
    if (static_cast<int>(values_.size()) != space_->n())
        fail(ErrorCode::SpaceMismatch, "atom value vector length differs from atom count");
    for (double v : values_)
        if (!std::isfinite(v)) fail(ErrorCode::DomainError, "charge values must be finite");
}

double SignedCharge::value(const Event& a) const {
    require_event(*space_, a);
    double s = 0.0;
    for (auto i : a.indices()) s += values_[i];
    return s;
}

double SignedCharge::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool SignedCharge::operator==(const SignedCharge& other) const {
    return space_->same_space(*other.space_) && values_ == other.values_;
}

SignedCharge zero_charge(SpacePtr space) {
    std::vector<double> v(static_cast<std::size_t>(space->n()), 0.0);
    return SignedCharge(std::move(space), std::move(v));
}

static void require_same_space(const SignedCharge& mu, const SignedCharge& nu) {
    if (!mu.space()->same_space(*nu.space()))
        fail(ErrorCode::SpaceMismatch, "charges live on different spaces");
}

SignedCharge lattice_combine(LatticeMode mode, const SignedCharge& mu, const SignedCharge* nu) {
    const auto& a = mu.atom_values();
    std::vector<double> out(a.size());
    switch (mode) {
        case LatticeMode::Join:
        case LatticeMode::Meet: {
            if (nu == nullptr)
                fail(ErrorCode::SpaceMismatch, "join and meet need a second charge");
            require_same_space(mu, *nu);
            const auto& b = nu->atom_values();
            for (std::size_t i = 0; i < a.size(); ++i)
                out[i] = mode == LatticeMode::Join ? std::max(a[i], b[i]) : std::min(a[i], b[i]);
            break;
        }
        case LatticeMode::Abs:
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i]);
            break;
        case LatticeMode::PositivePart:
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], 0.0);
            break;
        case LatticeMode::NegativePart:
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(-a[i], 0.0);
            break;
    }
    return SignedCharge(mu.space(), std::move(out));
}

double join_partition_value(const SignedCharge& mu, const SignedCharge& nu, const Event& a) {
    require_same_space(mu, nu);
    require_event(*mu.space(), a);
    const auto& idx = a.indices();
    const int k = static_cast<int>(idx.size());
    if (k > FiniteSpace::kEnumerationCap)
        fail(ErrorCode::TooManyAtoms, "partition formula enumerates subsets; event too large");
    const double nu_a = nu.value(a);
    double best = nu_a;  // B empty
    for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
        double v = nu_a;
        for (int j = 0; j < k; ++j) {
            if (sub >> j & 1)
                v += mu.atom_values()[idx[static_cast<std::size_t>(j)]] -
                     nu.atom_values()[idx[static_cast<std::size_t>(j)]];
        }
        best = std::max(best, v);
    }
    return best;
}

double total_variation(const SignedCharge& mu) {
    double s = 0.0;
    for (double v : mu.atom_values()) s += std::abs(v);
    return s;
}

ChargeRelations relations(const SignedCharge& mu, const ProbabilityCharge& p) {
    if (!mu.space()->same_space(*p.space()))
        fail(ErrorCode::SpaceMismatch, "charge and probability live on different spaces");
    const auto& values = mu.atom_values();
    std::vector<double> cont(values.size(), 0.0), sing(values.size(), 0.0);
    bool ac = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (p.masses()[i] == 0) {
            sing[i] = values[i];
            if (values[i] != 0.0) ac = false;
        } else {
            cont[i] = values[i];
        }
    }
    return ChargeRelations{ac, SignedCharge(mu.space(), std::move(cont)),
                           SignedCharge(mu.space(), std::move(sing))};
}

RearrangementStats rearrangement_stats(const SignedCharge& mu, const ProbabilityCharge& p) {
    if (!mu.space()->same_space(*p.space()))
        fail(ErrorCode::SpaceMismatch, "charge and probability live on different spaces");
    const int n = mu.space()->n();
    RearrangementStats stats;
    const bool uniform_masses =
        std::all_of(p.masses().begin(), p.masses().end(),
                    [&](const Rational& m) { return m == p.masses().front(); });
    if (uniform_masses) {
        // Probability classes are cardinality classes: sort once, prefix-sum.
        std::vector<double> sorted = mu.atom_values();
        std::sort(sorted.begin(), sorted.end());
        double lo = 0.0, hi = 0.0;
        stats.s_values[Rational(0)] = 0.0;
        stats.iota_values[Rational(0)] = 0.0;
        for (int k = 1; k <= n; ++k) {
            lo += sorted[static_cast<std::size_t>(k - 1)];
            hi += sorted[static_cast<std::size_t>(n - k)];
            const Rational prob = Rational(k, n);
            stats.s_values[prob] = hi;
            stats.iota_values[prob] = lo;
        }
        return stats;
    }
    require_enumerable(*mu.space(), "rearrangement_stats");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Rational prob = 0;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1) {
                prob += p.masses()[static_cast<std::size_t>(i)];
                v += mu.atom_values()[static_cast<std::size_t>(i)];
            }
        }
        auto [s_it, s_new] = stats.s_values.try_emplace(prob, v);
        if (!s_new) s_it->second = std::max(s_it->second, v);
        auto [i_it, i_new] = stats.iota_values.try_emplace(prob, v);
        if (!i_new) i_it->second = std::min(i_it->second, v);
    }
    return stats;
}

static void require_ac(const SignedCharge& mu, const ProbabilityCharge& p) {
    if (!relations(mu, p).absolutely_continuous)
        fail(ErrorCode::NotAbsolutelyContinuous,
             "rho needs the charge to vanish on null atoms of P");
}

namespace {

struct RhoSearch {
    const std::vector<double>* mu;
    const std::vector<std::uint32_t>* atoms;  // P-positive atoms, to assign
    const std::vector<Rational>* masses;
    const std::vector<double>* values;        // distinct values of X
    std::vector<Rational> remaining;          // unassigned mass per value
    double best = 0.0;
    bool any = false;

    void dfs(std::size_t pos, double acc) {
        if (pos == atoms->size()) {
            if (!any || acc > best) best = acc;
            any = true;
            return;
        }
        const std::uint32_t atom = (*atoms)[pos];
        const Rational& w = (*masses)[atom];
        for (std::size_t j = 0; j < values->size(); ++j) {
            if (remaining[j] < w) continue;
            remaining[j] -= w;
            dfs(pos + 1, acc + (*mu)[atom] * (*values)[j]);
            remaining[j] += w;
        }
    }
};

}  // namespace

double rho(const SignedCharge& mu, const ProbabilityCharge& p, const SimpleRandomVariable& x) {
    if (!mu.space()->same_space(*p.space()) || !mu.space()->same_space(*x.space()))
        fail(ErrorCode::SpaceMismatch, "rho arguments live on different spaces");
    require_ac(mu, p);
    const int n = mu.space()->n();
    const bool uniform_masses =
        std::all_of(p.masses().begin(), p.masses().end(),
                    [&](const Rational& m) { return m == p.masses().front(); });
    if (uniform_masses) {
        std::vector<double> a = mu.atom_values(), b = x.values();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        return s;
    }
    require_pair_scannable(*mu.space(), "rho");
    // Distribution of X over P-positive atoms, with exact masses.
    std::map<double, Rational> dist;
    std::vector<std::uint32_t> atoms;
    for (int i = 0; i < n; ++i) {
        if (p.masses()[static_cast<std::size_t>(i)] == 0) continue;
        atoms.push_back(static_cast<std::uint32_t>(i));
        dist[x.values()[static_cast<std::size_t>(i)]] +=
            p.masses()[static_cast<std::size_t>(i)];
    }
    std::vector<double> values;
    std::vector<Rational> budget;
    for (const auto& [v, m] : dist) {
        values.push_back(v);
        budget.push_back(m);
    }
    RhoSearch search;
    search.mu = &mu.atom_values();
    search.atoms = &atoms;
    search.masses = &p.masses();
    search.values = &values;
    search.remaining = std::move(budget);
    search.dfs(0, 0.0);
    if (!search.any)
        fail(ErrorCode::DomainError, "no exact mass-matching rearrangement exists");
    return search.best;
}

double rho_by_permutations(const SignedCharge& mu, const ProbabilityCharge& p,
                           const SimpleRandomVariable& x) {
    if (!mu.space()->same_space(*p.space()) || !mu.space()->same_space(*x.space()))
        fail(ErrorCode::SpaceMismatch, "rho arguments live on different spaces");
    const int n = mu.space()->n();
    if (n > 7) fail(ErrorCode::TooManyAtoms, "permutation enumeration is capped at n = 7");
    if (!std::all_of(p.masses().begin(), p.masses().end(),
                     [&](const Rational& m) { return m == p.masses().front(); }))
        fail(ErrorCode::DomainError, "permutation enumeration needs uniform masses");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    bool first = true;
    do {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += mu.atom_values()[static_cast<std::size_t>(i)] *
                 x.values()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        if (first || s > best) best = s;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace refmeasure
