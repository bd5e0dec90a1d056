#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlambda/iwasawa.hpp"
#include "qlambda/qfield.hpp"

namespace qlambda {

enum class TwistViolation { NotOneMod4, MeetsQ, EvenOrdAtPrime, NotCoprimeChecks };

std::string violation_name(TwistViolation v);

/// Outcome of the twist admissibility checks: R = 1 mod 4 in the maximal
/// order, coprime to (sqrt(-q)), and of odd valuation at each of its primes.
struct TwistRecord {
    QuadElem R;
    bool valid = false;
    std::vector<TwistViolation> violations;
};

TwistRecord validate_twist(const QuadElem& R, const FactorConfig& cfg = {},
                           const AdaptivePrecision& prec = {});
TwistRecord validate_twist(const QuadField& field, const Integer& R, const FactorConfig& cfg = {},
                           const AdaptivePrecision& prec = {});

enum class RankOneLabel { CaseI, CaseII, CaseIII, None };

std::string rank_one_label_name(RankOneLabel label);

/// Structured consequences for the rank-one cases: Selmer corank behaviour
/// over the finite layers and the forced L-value vanishing in case iii.
struct RankOneConsequences {
    bool base_selmer_finite = false;
    std::string corank_over_layers;       // "at_most_1" or "exactly_1"
    bool corank_one_iff_L_vanishes = false;
    bool L_vanishes_all_layers = false;
};

struct RankOneCase {
    RankOneLabel label = RankOneLabel::None;
    std::optional<Integer> r;  // the odd prime in cases ii/iii
    std::optional<RankOneConsequences> consequences;
    std::string reason;  // why the label is None, when it is
};

/// Classification of squarefree rational twists with exactly two primes of
/// the tower above sqrt(-q) R.
RankOneCase classify_rank_one(const QuadField& field, const Integer& R,
                              const FactorConfig& cfg = {});

/// Order of the ray class group of the field modulo the square of the
/// conjugate dyadic prime, via the unit-image exact sequence.
Integer ray_class_order(const QuadField& field);

/// Generators certifying the splitting count from below: alpha_i generating
/// a_i^{h'} with embedding 1 mod 4 on the conjugate side, the last one the
/// exact quotient of (-sqrt(-q) R)^{h'} by the others.
struct WitnessSet {
    Integer h_prime;
    std::vector<QuadElem> alphas;
    std::vector<PrimeIdeal> supports;
    std::vector<unsigned long> exponents;  // odd valuation of sqrt(-q) R at each support
};

/// Applicable only when every support prime has splitting count 1, so the
/// base field already realizes the full splitting; otherwise NotApplicable.
WitnessSet construct_witnesses(const QuadElem& R, const AdaptivePrecision& prec = {},
                               EntryCache* cache = nullptr);

struct WitnessVerification {
    bool ideal_equalities = false;   // (alpha_i) = a_i^{h'}
    bool congruences = false;        // conjugate embedding of alpha_i is 1 mod 4
    bool product_relation = false;   // prod alpha_i = (-sqrt(-q) R)^{h'}
    bool distinct_supports = false;  // pairwise coprime a_i
    bool odd_orders = false;         // odd valuation at each support
    std::vector<std::string> failures;

    bool all() const {
        return ideal_equalities && congruences && product_relation && distinct_supports &&
               odd_orders;
    }
};

WitnessVerification verify_witnesses(const QuadElem& R, const WitnessSet& witnesses,
                                     const AdaptivePrecision& prec = {});

/// One enumerated twist with its validation, invariants, and classification.
struct ScanRow {
    Integer R;
    TwistRecord record;
    LambdaReport lambda;
    RankOneCase classification;
};

/// Squarefree rational candidates |R| <= bound with R = 1 mod 4 and
/// gcd(R, 2q) = 1, ascending by |R|.
std::vector<Integer> twist_candidates(const QuadField& field, const Integer& bound);

ScanRow scan_one(const QuadField& field, const Integer& R, const AdaptivePrecision& prec = {},
                 EntryCache* cache = nullptr);

/// Full scan in deterministic order; jobs > 1 fans rows out to worker threads
/// and merges by candidate index.
std::vector<ScanRow> enumerate_twists(const QuadField& field, const Integer& bound, int jobs = 1,
                                      const AdaptivePrecision& prec = {});

}  // namespace qlambda
