#include "qlambda/iwasawa.hpp"

#include <algorithm>

namespace qlambda {

EntryCache::Key EntryCache::key_of(const PrimeIdeal& P) {
    return {P.q(), P.ell(), static_cast<int>(P.kind()), P.u()};
}

std::optional<SplittingEntry> EntryCache::find(const PrimeIdeal& P) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key_of(P));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EntryCache::store(const PrimeIdeal& P, const SplittingEntry& entry) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.emplace(key_of(P), entry);
}

SplittingEntry splitting_entry(const PrimeIdeal& P, const AdaptivePrecision& prec,
                               EntryCache* cache) {
    if (P.kind() == Kind::DyadicP)
        throw InvalidInput("splitting_entry: undefined for the distinguished dyadic prime");
    if (cache) {
        if (auto hit = cache->find(P)) return *hit;
    }
    QuadField field(P.q());
    Integer h = class_number(field);
    QuadElem w = generator_of_power(P, h.get_ui());
    long used = 0;
    long ord = adaptive_ord2([&](long k) { return w.embed(k) - Integer(1); }, prec, &used);
    if (ord < 2) throw std::logic_error("splitting_entry: sign normalization guarantees ord >= 2");
    SplittingEntry entry{P, w, ord, Integer(1) << (ord - 2), used};
    if (cache) cache->store(P, entry);
    return entry;
}

SInfinity s_infinity(const QuadElem& R, const AdaptivePrecision& prec, EntryCache* cache) {
    QuadField field(R.q());
    QuadElem x = R * QuadElem::sqrt_gen(field);
    // A valid twist keeps the support away from the primes above 2.
    IdealFactorization f =
        factor_ideal(x, {Kind::Split, Kind::Inert, Kind::Ramified}, FactorConfig{}, prec);
    std::vector<SplittingEntry> entries;
    for (const auto& [P, e] : f.entries) {
        if (P.kind() == Kind::Ramified)
            entries.insert(entries.begin(), splitting_entry(P, prec, cache));
        else
            entries.push_back(splitting_entry(P, prec, cache));
    }
    SInfinity out;
    out.s_inf = 0;
    for (const auto& entry : entries) out.s_inf += entry.count;
    out.entries = std::move(entries);
    return out;
}

LambdaReport lambda_invariants(const QuadElem& R, const AdaptivePrecision& prec,
                               EntryCache* cache) {
    SInfinity s = s_infinity(R, prec, cache);
    LambdaReport rep{R.q(),       R, s.s_inf, std::move(s.entries), s.s_inf - 1,
                     std::nullopt, std::nullopt, 0, 0};
    rep.q_mod_16 = mod_pos(R.q(), 16).get_si();
    if (rep.q_mod_16 == 7) {
        rep.lambda_Fprime = rep.s_inf;
        rep.lambda_J = 2 * rep.s_inf - 1;
    }
    for (const auto& entry : rep.entries)
        rep.max_precision_used = std::max(rep.max_precision_used, entry.precision_used);
    return rep;
}

SelmerReport selmer_report(const LambdaReport& report) {
    SelmerReport out;
    out.corank_F_inf = report.s_inf - 1;
    out.identity_F = "g_F_inf + e_F_inf = " + out.corank_F_inf.get_str();
    if (report.q_mod_16 == 7) {
        out.corank_J_inf = 2 * report.s_inf - 1;
        out.identity_J = "g_J_inf + e_J_inf = " + out.corank_J_inf->get_str();
    }
    return out;
}

SelmerReport selmer_report(const QuadElem& R, const AdaptivePrecision& prec, EntryCache* cache) {
    return selmer_report(lambda_invariants(R, prec, cache));
}

bool rank_identity_check(const LambdaReport& report) {
    if (report.q_mod_16 != 7)
        throw InapplicableCongruence("rank_identity_check: requires q = 7 mod 16");
    // Ranks over the base tower and over the sqrt(-1) branch both vanish here.
    const Integer rank_base = 0;
    const Integer rank_D = 0;
    return *report.lambda_J + 2 * rank_base == report.lambda_F + *report.lambda_Fprime + rank_D;
}

}  // namespace qlambda
