#pragma once

#include "refmeasure/charge.hpp"
#include "refmeasure/choquet.hpp"
#include "refmeasure/games.hpp"

#include <optional>
#include <string>
#include <vector>

namespace refmeasure {

enum class ExtremumStatus { Exists, Unbounded, Empty };
enum class ExtremumMethod { ClosedForm, Lp };

struct ExtremumReport {
    ExtremumStatus status = ExtremumStatus::Exists;
    std::optional<SignedCharge> extremum;
    std::vector<double> per_atom_values;
    ExtremumMethod method = ExtremumMethod::ClosedForm;
    std::vector<std::string> certificates;  // binding constraints, one note per atom
    std::vector<int> offending_atoms;       // unbounded coordinates
};

enum class ExtremumSide { AnticoreSup, CoreInf };

/// Coordinatewise supremum of the loose anticore {mu : mu <= v setwise} or
/// infimum of the loose core {mu : mu >= v setwise}. On a finite space both
/// equal the singleton profile atom -> v({atom}), because every other
/// coordinate can be pushed arbitrarily far without breaking one-sided
/// domination. With lp_cross_check each coordinate is recomputed by a per-atom
/// LP and agreement within 1e-9 is asserted.
ExtremumReport loose_extremum(const Game& v, ExtremumSide side, bool lp_cross_check = false);

/// Same extrema over the core/anticore proper (total pinned to v(full)),
/// computed by one LP per atom over all 2^n domination constraints. Empty
/// sets are reported, not raised.
ExtremumReport strict_extremum(const Game& v, ExtremumSide side);

enum class DictionarySide { LowerSup, UpperInf };

/// Extrema of the supporting sets of a functional: charges with
/// <mu, X> <= phi(X) on the whole dictionary (lower side; >= for upper),
/// optionally pinned by the equality <mu, c> = phi(c) for a constant
/// dictionary member c.
ExtremumReport dictionary_extremum(const FunctionalOracle& phi, const Dictionary& dictionary,
                                   DictionarySide side,
                                   const std::optional<SimpleRandomVariable>& pin = std::nullopt);

struct SandwichConstants {
    std::optional<double> a_star;  // largest a with a*P <= v
    std::optional<double> b_star;  // smallest b with b*P >= v
};

/// a* = min v(A)/P(A) over P(A) > 0, valid only when v >= 0 on P-null events;
/// b* = max v(A)/P(A), valid only when v <= 0 on P-null events. Invalid sides
/// are reported absent.
SandwichConstants sandwich_constants(const Game& v, const ProbabilityCharge& p);

struct GrowthPoint {
    int n = 0;
    double singleton_total = 0.0;  // n * h(1/n) on uniform(n)
    bool core_empty = false;
    std::string core_method;       // "lp", "symmetrization", or both
};

/// Growth series of the distortion game's singleton profile across uniform
/// refinements. A diverging series certifies that the anticore supremum
/// cannot stabilize; core emptiness per n comes from the strict LP (n <= 12)
/// and from the symmetric-candidate criterion k*h(1)/n >= h(k/n), which is
/// exact for distortion games and cross-checked against the LP where both run.
std::vector<GrowthPoint> diagnose_existence(const DistortionFunction& h,
                                            const std::vector<int>& n_values);

struct SupportSpec {
    enum class Side { Lower, Upper };
    enum class Normalization { None, TotalEquals, Pin };

    Side side = Side::Lower;
    std::optional<Game> game;
    std::optional<FunctionalOracle> oracle;
    std::optional<Dictionary> dictionary;
    Normalization normalization = Normalization::None;
    double total = 0.0;                                // TotalEquals
    std::optional<SimpleRandomVariable> pin_variable;  // Pin

    static SupportSpec game_side(Game v, Side side);
    static SupportSpec core_of(Game v);      // upper side, total pinned
    static SupportSpec anticore_of(Game v);  // lower side, total pinned
    static SupportSpec functional_side(FunctionalOracle phi, Dictionary d, Side side);
};

/// Checks every defining inequality/equality of the specified set at mu,
/// within 1e-9.
bool membership(const SignedCharge& mu, const SupportSpec& spec);

/// Dictionary generation strategies: "indicators", "signed_indicators",
/// "indicators_plus_constants", "random_simple" (count values in [-1, 1]).
Dictionary make_dictionary(SpacePtr space, const std::string& strategy, int count = 0,
                           unsigned seed = 42);

}  // namespace refmeasure
