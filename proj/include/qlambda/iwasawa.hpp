#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "qlambda/qfield.hpp"

namespace qlambda {

/// Per-prime splitting data in the 2-adic tower: the normalized generator w
/// of P^h, ord = ord2 of its embedding minus one, and the count 2^{ord-2} of
/// primes of the tower above P.
struct SplittingEntry {
    PrimeIdeal prime;
    QuadElem generator;
    long ord = 0;
    Integer count;
    long precision_used = 0;
};

/// Memoizes splitting entries per prime; safe for concurrent scan workers.
class EntryCache {
  public:
    std::optional<SplittingEntry> find(const PrimeIdeal& P) const;
    void store(const PrimeIdeal& P, const SplittingEntry& entry);

  private:
    using Key = std::tuple<Integer, Integer, int, Integer>;
    static Key key_of(const PrimeIdeal& P);

    mutable std::mutex mu_;
    std::map<Key, SplittingEntry> entries_;
};

/// Splitting entry for a prime P distinct from the distinguished dyadic
/// prime. The embedding valuation is computed at adaptive precision and never
/// silently truncated.
SplittingEntry splitting_entry(const PrimeIdeal& P, const AdaptivePrecision& prec = {},
                               EntryCache* cache = nullptr);

struct SInfinity {
    Integer s_inf;
    std::vector<SplittingEntry> entries;  // (sqrt(-q)) first, then by residual prime
};

/// Number of primes of the tower dividing sqrt(-q) R, with per-prime entries.
/// R must satisfy the twist admissibility conditions (see twistlab).
SInfinity s_infinity(const QuadElem& R, const AdaptivePrecision& prec = {},
                     EntryCache* cache = nullptr);

struct LambdaReport {
    Integer q;
    QuadElem R;
    Integer s_inf;
    std::vector<SplittingEntry> entries;
    Integer lambda_F;
    std::optional<Integer> lambda_Fprime;  // present iff q = 7 mod 16
    std::optional<Integer> lambda_J;       // present iff q = 7 mod 16
    long q_mod_16 = 0;
    long max_precision_used = 0;
};

LambdaReport lambda_invariants(const QuadElem& R, const AdaptivePrecision& prec = {},
                               EntryCache* cache = nullptr);

struct SelmerReport {
    Integer corank_F_inf;                   // s_inf - 1
    std::optional<Integer> corank_J_inf;    // 2 s_inf - 1 when q = 7 mod 16
    std::string identity_F;                 // g + e over the quadratic tower
    std::string identity_J;
};

SelmerReport selmer_report(const LambdaReport& report);
SelmerReport selmer_report(const QuadElem& R, const AdaptivePrecision& prec = {},
                           EntryCache* cache = nullptr);

/// Rank additivity across the biquadratic layer: lambda_J plus twice the rank
/// over the base (zero) must equal lambda_F + lambda_F' + rank over the
/// imaginary branch (zero). Only defined for q = 7 mod 16.
bool rank_identity_check(const LambdaReport& report);

}  // namespace qlambda
