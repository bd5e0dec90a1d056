#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qlambda/arith.hpp"
#include "qlambda/dyadic.hpp"
#include "qlambda/errors.hpp"

namespace qlambda {

/// The imaginary quadratic field of discriminant -q, q prime, q = 7 mod 8.
/// Its maximal order is Z[(1 + sqrt(-q))/2] and 2 splits.
class QuadField {
  public:
    explicit QuadField(Integer q);

    const Integer& q() const { return q_; }
    bool operator==(const QuadField& other) const { return q_ == other.q_; }

  private:
    Integer q_;
};

/// Element (a + b sqrt(-q))/2 of the maximal order; a = b mod 2.
class QuadElem {
  public:
    QuadElem(const QuadField& field, Integer a, Integer b);

    static QuadElem from_integer(const QuadField& field, const Integer& n);
    static QuadElem sqrt_gen(const QuadField& field);  // sqrt(-q) itself

    const Integer& q() const { return q_; }
    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }

    Integer norm() const;  // (a^2 + q b^2)/4, exact
    QuadElem conjugate() const;
    QuadElem negate() const;
    QuadElem pow(unsigned long e) const;
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    /// Rational value when b = 0 (a is then even).
    std::optional<Integer> as_integer() const;

    /// Exact quotient in the maximal order, or absent when not divisible.
    std::optional<QuadElem> div_exact(const QuadElem& d) const;
    std::optional<QuadElem> div_exact(const Integer& d) const;

    Dyadic embed(long k) const;       // image under the normalized embedding
    Dyadic embed_star(long k) const;  // image under the conjugate embedding

    bool operator==(const QuadElem& other) const;
    std::string to_string() const;

  private:
    struct Raw {};
    QuadElem(Raw, Integer q, Integer a, Integer b)
        : q_(std::move(q)), a_(std::move(a)), b_(std::move(b)) {}

    friend QuadElem operator*(const QuadElem& x, const QuadElem& y);
    friend QuadElem operator*(const QuadElem& x, const Integer& n);

    Integer q_, a_, b_;
};

QuadElem operator*(const QuadElem& x, const QuadElem& y);
QuadElem operator*(const QuadElem& x, const Integer& n);

enum class Kind { Split, Inert, Ramified, DyadicP, DyadicPStar };

std::string kind_name(Kind kind);

/// Prime of the maximal order, determined by its residual prime and kind;
/// split primes carry the residue u with sqrt(-q) = u on the quotient.
class PrimeIdeal {
  public:
    static PrimeIdeal inert(const QuadField& field, Integer ell);
    static PrimeIdeal split(const QuadField& field, Integer ell, Integer u);
    static PrimeIdeal ramified(const QuadField& field);  // the ideal (sqrt(-q))
    static PrimeIdeal dyadic(const QuadField& field, bool star);

    const Integer& q() const { return q_; }
    const Integer& ell() const { return ell_; }
    Kind kind() const { return kind_; }
    const Integer& u() const { return u_; }  // split only

    Integer ideal_norm() const;  // ell^2 when inert, ell otherwise
    long residue_degree() const { return kind_ == Kind::Inert ? 2 : 1; }
    PrimeIdeal conjugate() const;

    bool contains(const QuadElem& x) const;
    bool operator==(const PrimeIdeal& other) const;
    bool operator<(const PrimeIdeal& other) const;  // deterministic report order

    std::string to_string() const;

  private:
    PrimeIdeal(Integer q, Integer ell, Kind kind, Integer u)
        : q_(std::move(q)), ell_(std::move(ell)), kind_(kind), u_(std::move(u)) {}

    Integer q_, ell_;
    Kind kind_;
    Integer u_;
};

/// Factored principal ideal: pairwise distinct primes with positive exponents.
struct IdealFactorization {
    std::vector<std::pair<PrimeIdeal, unsigned long>> entries;
};

/// How the rational prime ell factors in the maximal order.
Kind splitting_kind(const QuadField& field, const Integer& ell);

/// The primes above ell: conjugate split pair (smaller residue first), the
/// single inert or ramified prime, or the dyadic pair for ell = 2.
std::vector<PrimeIdeal> primes_above(const QuadField& field, const Integer& ell);

/// Class number as the count of reduced binary quadratic forms of
/// discriminant -q.
Integer class_number(const QuadField& field);

/// Exact valuation of x at the prime P.
long ord_at(const QuadElem& x, const PrimeIdeal& P, const AdaptivePrecision& prec = {});

inline const std::set<Kind> kAllKinds{Kind::Split, Kind::Inert, Kind::Ramified, Kind::DyadicP,
                                      Kind::DyadicPStar};

/// Factorization of the principal ideal (x). Throws DisallowedKind when a
/// factor's kind is outside `allow`.
IdealFactorization factor_ideal(const QuadElem& x, const std::set<Kind>& allow = kAllKinds,
                                const FactorConfig& cfg = {}, const AdaptivePrecision& prec = {});
IdealFactorization factor_ideal(const QuadField& field, const Integer& x,
                                const std::set<Kind>& allow = kAllKinds,
                                const FactorConfig& cfg = {}, const AdaptivePrecision& prec = {});

struct GeneratorSearchConfig {
    unsigned long max_iterations = 200'000'000;  // norm-equation loop bound
};

/// Generator w of P^e, for P distinct from the distinguished dyadic prime and
/// e a multiple of the order of P's ideal class. The sign is normalized so the
/// embedding of w is 1 mod 4. Split and dyadic generators come from the norm
/// equation a^2 + q b^2 = 4 ell^{e f} with imprimitive solutions discarded and
/// the conjugate selected by the membership test.
QuadElem generator_of_power(const PrimeIdeal& P, unsigned long e,
                            const GeneratorSearchConfig& cfg = {});

}  // namespace qlambda
