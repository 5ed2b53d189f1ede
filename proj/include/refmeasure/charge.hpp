#pragma once

#include "refmeasure/random_variable.hpp"
#include "refmeasure/space.hpp"

#include <map>
#include <vector>

namespace refmeasure {

/// Bounded signed charge on a finite space, stored as one real per atom.
/// On finite spaces countable and finite additivity coincide, so this single
/// type covers both; likewise the setwise order coincides with the atomwise
/// order, which is what the lattice operations below exploit.
class SignedCharge {
  public:
    SignedCharge(SpacePtr space, std::vector<double> atom_values);

    const SpacePtr& space() const { return space_; }
    const std::vector<double>& atom_values() const { return values_; }
    double atom(int i) const { return values_.at(static_cast<std::size_t>(i)); }

    double value(const Event& a) const;
    double total() const;

    bool operator==(const SignedCharge& other) const;

  private:
    SpacePtr space_;
    std::vector<double> values_;
};

SignedCharge zero_charge(SpacePtr space);

enum class LatticeMode { Join, Meet, Abs, PositivePart, NegativePart };

/// Atomwise lattice operation. Join/Meet need both arguments on one space;
/// the unary modes ignore `nu`.
SignedCharge lattice_combine(LatticeMode mode, const SignedCharge& mu, const SignedCharge* nu);

/// Partition-formula value of the join at one event:
/// sup { mu(B) + nu(A \ B) : B subset of A }, by enumeration of subsets of A.
/// Verification path for the atomwise join; |A| is capped at 24 atoms.
double join_partition_value(const SignedCharge& mu, const SignedCharge& nu, const Event& a);

double total_variation(const SignedCharge& mu);

/// Null-atom split of mu against P. On a finite space, absolute continuity in
/// the epsilon-delta sense and in the vanishing-on-null-sets sense coincide.
struct ChargeRelations {
    bool absolutely_continuous;
    SignedCharge continuous_part;
    SignedCharge singular_part;
};

ChargeRelations relations(const SignedCharge& mu, const ProbabilityCharge& p);

/// The extremal rearrangement envelopes of a charge: for each attainable
/// probability level p, s(p) = max mu over events of probability exactly p and
/// iota(p) = min. s and iota are conjugate: s(p) = mu(total) - iota(1-p).
struct RearrangementStats {
    std::map<Rational, double> s_values;
    std::map<Rational, double> iota_values;
};

RearrangementStats rearrangement_stats(const SignedCharge& mu, const ProbabilityCharge& p);

/// sup E_mu[Y] over Y with the same P-distribution as X. Uniform spaces use
/// the sorted dot product; general spaces enumerate exact mass-matching value
/// assignments (n <= 12). Requires mu absolutely continuous w.r.t. P.
double rho(const SignedCharge& mu, const ProbabilityCharge& p, const SimpleRandomVariable& x);

/// Permutation-enumeration evaluation of rho on uniform spaces, n <= 7.
double rho_by_permutations(const SignedCharge& mu, const ProbabilityCharge& p,
                           const SimpleRandomVariable& x);

}  // namespace refmeasure
