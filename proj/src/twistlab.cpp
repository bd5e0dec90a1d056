#include "qlambda/twistlab.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace qlambda {

std::string violation_name(TwistViolation v) {
    switch (v) {
        case TwistViolation::NotOneMod4: return "not_1_mod_4";
        case TwistViolation::MeetsQ: return "meets_q";
        case TwistViolation::EvenOrdAtPrime: return "even_ord_at_prime";
        case TwistViolation::NotCoprimeChecks: return "not_coprime_checks";
    }
    return "?";
}

std::string rank_one_label_name(RankOneLabel label) {
    switch (label) {
        case RankOneLabel::CaseI: return "case_i";
        case RankOneLabel::CaseII: return "case_ii";
        case RankOneLabel::CaseIII: return "case_iii";
        case RankOneLabel::None: return "none";
    }
    return "?";
}

TwistRecord validate_twist(const QuadElem& R, const FactorConfig& cfg,
                           const AdaptivePrecision& prec) {
    if (R.is_zero()) throw InvalidInput("validate_twist: R must be nonzero");
    QuadField field(R.q());
    TwistRecord rec{R, false, {}};

    // R = 1 mod 4 in the maximal order: (R - 1)/4 must be integral.
    QuadElem r_minus_1(field, R.a() - 2, R.b());
    if (!r_minus_1.is_zero() && !r_minus_1.div_exact(Integer(4)).has_value())
        rec.violations.push_back(TwistViolation::NotOneMod4);

    IdealFactorization f = factor_ideal(R, kAllKinds, cfg, prec);
    bool meets_q = false, even_ord = false, meets_two = false;
    for (const auto& [P, e] : f.entries) {
        switch (P.kind()) {
            case Kind::Ramified: meets_q = true; break;
            case Kind::DyadicP:
            case Kind::DyadicPStar: meets_two = true; break;
            default:
                if (e % 2 == 0) even_ord = true;
        }
    }
    if (meets_q) rec.violations.push_back(TwistViolation::MeetsQ);
    if (even_ord) rec.violations.push_back(TwistViolation::EvenOrdAtPrime);
    if (meets_two) rec.violations.push_back(TwistViolation::NotCoprimeChecks);
    rec.valid = rec.violations.empty();
    return rec;
}

TwistRecord validate_twist(const QuadField& field, const Integer& R, const FactorConfig& cfg,
                           const AdaptivePrecision& prec) {
    return validate_twist(QuadElem::from_integer(field, R), cfg, prec);
}

RankOneCase classify_rank_one(const QuadField& field, const Integer& R, const FactorConfig& cfg) {
    RankOneCase out;
    if (R == 0) {
        out.reason = "R must be nonzero";
        return out;
    }
    Factorization f = factorize(R, cfg);
    for (const auto& [p, e] : f.factors) {
        if (e > 1) {
            out.reason = "R is not squarefree";
            return out;
        }
    }
    TwistRecord rec = validate_twist(field, R, cfg);
    if (!rec.valid) {
        out.reason = "twist admissibility fails";
        return out;
    }

    const long q16 = mod_pos(field.q(), 16).get_si();
    const long q32 = mod_pos(field.q(), 32).get_si();
    if (R == 1 && q32 == 15) {
        out.label = RankOneLabel::CaseI;
    } else if (q16 == 7 && R > 1 && is_prime(R) && mod_pos(R, 8) == 5 &&
               splitting_kind(field, R) == Kind::Inert) {
        out.label = RankOneLabel::CaseII;
        out.r = R;
    } else if (q16 == 7 && R < -1 && is_prime(-R) && mod_pos(-R, 8) == 3 &&
               splitting_kind(field, -R) == Kind::Inert) {
        out.label = RankOneLabel::CaseIII;
        out.r = -R;
    } else {
        out.reason = "no rank-one case matches";
        return out;
    }

    RankOneConsequences cons;
    if (out.label == RankOneLabel::CaseIII) {
        cons.base_selmer_finite = false;
        cons.corank_over_layers = "exactly_1";
        cons.corank_one_iff_L_vanishes = false;
        cons.L_vanishes_all_layers = true;
    } else {
        cons.base_selmer_finite = true;
        cons.corank_over_layers = "at_most_1";
        cons.corank_one_iff_L_vanishes = true;
        cons.L_vanishes_all_layers = false;
    }
    out.consequences = cons;
    return out;
}

Integer ray_class_order(const QuadField& field) {
    Integer h = class_number(field);
    // Residues modulo the square of the conjugate dyadic prime form Z/4, so
    // the ray modulus contributes a unit group of order 2.
    const Integer local_units = 2;
    // Image of the global units {+-1}: -1 maps to 3 mod 4, which is trivial
    // only if the two classes coincide.
    Dyadic minus_one = embed_coords(field.q(), -2, 0, 6, /*star=*/true);
    Integer unit_image = mod_pos(minus_one.residue, 4) == 1 ? 1 : 2;
    return h * local_units / unit_image;
}

namespace {

// Support of sqrt(-q) R in witness order: odd primes ascending, the ramified
// prime last so the quotient witness lands on it.
std::vector<std::pair<PrimeIdeal, unsigned long>> witness_support(const QuadElem& R,
                                                                  const AdaptivePrecision& prec) {
    QuadField field(R.q());
    QuadElem x = R * QuadElem::sqrt_gen(field);
    IdealFactorization f =
        factor_ideal(x, {Kind::Split, Kind::Inert, Kind::Ramified}, FactorConfig{}, prec);
    std::vector<std::pair<PrimeIdeal, unsigned long>> support;
    std::optional<std::pair<PrimeIdeal, unsigned long>> ramified;
    for (const auto& entry : f.entries) {
        if (entry.first.kind() == Kind::Ramified)
            ramified = entry;
        else
            support.push_back(entry);
    }
    if (!ramified) throw std::logic_error("witness_support: ramified prime missing");
    support.push_back(*ramified);
    return support;
}

// Flip the sign so the conjugate-side embedding is 1 mod 4.
QuadElem normalize_sign_star(const QuadElem& x) {
    Integer m4 = mod_pos(x.embed_star(8).residue, 4);
    if (m4 == 1) return x;
    if (m4 == 3) return x.negate();
    throw std::logic_error("normalize_sign_star: image is not a unit");
}

}  // namespace

WitnessSet construct_witnesses(const QuadElem& R, const AdaptivePrecision& prec,
                               EntryCache* cache) {
    QuadField field(R.q());
    TwistRecord rec = validate_twist(R);
    if (!rec.valid) throw InvalidInput("construct_witnesses: R fails twist admissibility");

    auto support = witness_support(R, prec);
    for (const auto& [P, e] : support) {
        SplittingEntry entry = splitting_entry(P, prec, cache);
        if (entry.count != 1)
            throw NotApplicable("construct_witnesses: prime " + P.to_string() +
                                " splits into " + entry.count.get_str() +
                                " primes of the tower; base-level construction needs count 1");
    }

    WitnessSet out;
    out.h_prime = ray_class_order(field);
    const unsigned long hp = out.h_prime.get_ui();

    QuadElem product = QuadElem::from_integer(field, 1);
    for (std::size_t i = 0; i + 1 < support.size(); ++i) {
        const auto& [P, e] = support[i];
        QuadElem alpha = normalize_sign_star(generator_of_power(P, hp * e));
        product = product * alpha;
        out.alphas.push_back(alpha);
        out.supports.push_back(P);
        out.exponents.push_back(e);
    }
    QuadElem base = (R * QuadElem::sqrt_gen(field)).negate();
    QuadElem power = base.pow(hp);
    auto last = power.div_exact(product);
    if (!last) throw std::logic_error("construct_witnesses: quotient witness is not integral");
    out.alphas.push_back(*last);
    out.supports.push_back(support.back().first);
    out.exponents.push_back(support.back().second);
    return out;
}

WitnessVerification verify_witnesses(const QuadElem& R, const WitnessSet& witnesses,
                                     const AdaptivePrecision& prec) {
    QuadField field(R.q());
    WitnessVerification v;
    const std::size_t s = witnesses.alphas.size();
    if (s == 0 || witnesses.supports.size() != s || witnesses.exponents.size() != s) {
        v.failures.push_back("witness set is malformed");
        return v;
    }
    const unsigned long hp = witnesses.h_prime.get_ui();

    v.ideal_equalities = true;
    for (std::size_t i = 0; i < s; ++i) {
        IdealFactorization f = factor_ideal(witnesses.alphas[i], kAllKinds, FactorConfig{}, prec);
        bool ok = f.entries.size() == 1 && f.entries[0].first == witnesses.supports[i] &&
                  f.entries[0].second == hp * witnesses.exponents[i];
        if (!ok) {
            v.ideal_equalities = false;
            v.failures.push_back("(alpha_" + std::to_string(i + 1) + ") != a_" +
                                 std::to_string(i + 1) + "^h'");
        }
    }

    v.congruences = true;
    for (std::size_t i = 0; i < s; ++i) {
        if (mod_pos(witnesses.alphas[i].embed_star(8).residue, 4) != 1) {
            v.congruences = false;
            v.failures.push_back("alpha_" + std::to_string(i + 1) +
                                 " is not 1 mod 4 on the conjugate side");
        }
    }

    QuadElem product = QuadElem::from_integer(field, 1);
    for (const auto& alpha : witnesses.alphas) product = product * alpha;
    QuadElem expected = (R * QuadElem::sqrt_gen(field)).negate().pow(hp);
    v.product_relation = product == expected;
    if (!v.product_relation) v.failures.push_back("product relation fails");

    v.distinct_supports = true;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (witnesses.supports[i] == witnesses.supports[j]) v.distinct_supports = false;
    if (!v.distinct_supports) v.failures.push_back("supports are not pairwise distinct");

    v.odd_orders = true;
    for (std::size_t i = 0; i < s; ++i) {
        long ord = ord_at(witnesses.alphas[i], witnesses.supports[i], prec);
        if (ord % 2 == 0) {
            v.odd_orders = false;
            v.failures.push_back("alpha_" + std::to_string(i + 1) +
                                 " has even order at its support prime");
        }
    }
    return v;
}

std::vector<Integer> twist_candidates(const QuadField& field, const Integer& bound) {
    std::vector<Integer> out;
    for (Integer n = 1; n <= bound; n += 2) {
        if (mpz_divisible_p(n.get_mpz_t(), field.q().get_mpz_t())) continue;
        Factorization f = factorize(n);
        bool squarefree = std::all_of(f.factors.begin(), f.factors.end(),
                                      [](const auto& pe) { return pe.second == 1; });
        if (!squarefree) continue;
        out.push_back(mod_pos(n, 4) == 1 ? n : -n);
    }
    return out;
}

ScanRow scan_one(const QuadField& field, const Integer& R, const AdaptivePrecision& prec,
                 EntryCache* cache) {
    QuadElem elem = QuadElem::from_integer(field, R);
    return ScanRow{R, validate_twist(elem), lambda_invariants(elem, prec, cache),
                   classify_rank_one(field, R)};
}

std::vector<ScanRow> enumerate_twists(const QuadField& field, const Integer& bound, int jobs,
                                      const AdaptivePrecision& prec) {
    std::vector<Integer> candidates = twist_candidates(field, bound);
    std::vector<std::optional<ScanRow>> slots(candidates.size());
    EntryCache cache;
    if (jobs <= 1) {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            slots[i] = scan_one(field, candidates[i], prec, &cache);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= candidates.size()) return;
                slots[i] = scan_one(field, candidates[i], prec, &cache);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<ScanRow> rows;
    rows.reserve(slots.size());
    for (auto& slot : slots) rows.push_back(std::move(*slot));
    return rows;
}

}  // namespace qlambda
