#include "qlambda/qfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace qlambda {

namespace {

// Valuation of n at p; zero is divisible by everything.
long val_at(const Integer& n, const Integer& p) {
    if (n == 0) return std::numeric_limits<long>::max();
    Integer m = abs(n);
    long v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return v;
}

}  // namespace

QuadField::QuadField(Integer q) : q_(std::move(q)) {
    if (q_ < 7 || mod_pos(q_, 8) != 7 || !is_prime(q_))
        throw InvalidInput("QuadField: q must be a prime congruent to 7 mod 8");
}

QuadElem::QuadElem(const QuadField& field, Integer a, Integer b)
    : q_(field.q()), a_(std::move(a)), b_(std::move(b)) {
    if (mod_pos(a_ - b_, 2) != 0)
        throw InvalidInput("QuadElem: coordinates must have equal parity");
}

QuadElem QuadElem::from_integer(const QuadField& field, const Integer& n) {
    return QuadElem(field, 2 * n, 0);
}

QuadElem QuadElem::sqrt_gen(const QuadField& field) { return QuadElem(field, 0, 2); }

Integer QuadElem::norm() const {
    Integer n = a_ * a_ + q_ * b_ * b_;
    Integer r;
    mpz_divexact_ui(r.get_mpz_t(), n.get_mpz_t(), 4);
    return r;
}

QuadElem QuadElem::conjugate() const {
    QuadElem r = *this;
    r.b_ = -r.b_;
    return r;
}

QuadElem QuadElem::negate() const {
    QuadElem r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

std::optional<Integer> QuadElem::as_integer() const {
    if (b_ != 0) return std::nullopt;
    return a_ / 2;
}

QuadElem operator*(const QuadElem& x, const QuadElem& y) {
    if (x.q() != y.q()) throw InvalidInput("QuadElem: mixed fields");
    // (a1 a2 - q b1 b2)/2 and (a1 b2 + a2 b1)/2 are integral by the parity
    // invariant.
    Integer na = x.a() * y.a() - x.q() * x.b() * y.b();
    Integer nb = x.a() * y.b() + y.a() * x.b();
    Integer ra, rb;
    mpz_divexact_ui(ra.get_mpz_t(), na.get_mpz_t(), 2);
    mpz_divexact_ui(rb.get_mpz_t(), nb.get_mpz_t(), 2);
    return QuadElem(QuadElem::Raw{}, x.q(), std::move(ra), std::move(rb));
}

QuadElem operator*(const QuadElem& x, const Integer& n) {
    return QuadElem(QuadElem::Raw{}, x.q(), x.a() * n, x.b() * n);
}

QuadElem QuadElem::pow(unsigned long e) const {
    QuadElem acc(Raw{}, q_, 2, 0);
    QuadElem base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

std::optional<QuadElem> QuadElem::div_exact(const QuadElem& d) const {
    if (d.is_zero()) throw InvalidInput("QuadElem: division by zero");
    QuadElem num = *this * d.conjugate();
    return num.div_exact(d.norm());
}

std::optional<QuadElem> QuadElem::div_exact(const Integer& d) const {
    if (d == 0) throw InvalidInput("QuadElem: division by zero");
    if (!mpz_divisible_p(a_.get_mpz_t(), d.get_mpz_t()) ||
        !mpz_divisible_p(b_.get_mpz_t(), d.get_mpz_t()))
        return std::nullopt;
    Integer na = a_ / d, nb = b_ / d;
    if (mod_pos(na - nb, 2) != 0) return std::nullopt;
    return QuadElem(Raw{}, q_, std::move(na), std::move(nb));
}

Dyadic QuadElem::embed(long k) const { return embed_coords(q_, a_, b_, k, false); }

Dyadic QuadElem::embed_star(long k) const { return embed_coords(q_, a_, b_, k, true); }

bool QuadElem::operator==(const QuadElem& other) const {
    return q_ == other.q_ && a_ == other.a_ && b_ == other.b_;
}

std::string QuadElem::to_string() const {
    std::ostringstream os;
    if (b_ == 0) {
        os << Integer(a_ / 2).get_str();
        return os.str();
    }
    if (mpz_even_p(a_.get_mpz_t()) && mpz_even_p(b_.get_mpz_t())) {
        Integer ha = a_ / 2, hb = b_ / 2;
        if (ha != 0) os << ha.get_str();
        if (hb == 1)
            os << (ha != 0 ? "+" : "") << "sqrt(-" << q_.get_str() << ")";
        else if (hb == -1)
            os << "-sqrt(-" << q_.get_str() << ")";
        else
            os << (hb > 0 && ha != 0 ? "+" : "") << hb.get_str() << "*sqrt(-" << q_.get_str()
               << ")";
        return os.str();
    }
    os << "(" << a_.get_str() << (b_ >= 0 ? "+" : "") << b_.get_str() << "*sqrt(-" << q_.get_str()
       << "))/2";
    return os.str();
}

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::Split: return "split";
        case Kind::Inert: return "inert";
        case Kind::Ramified: return "ramified";
        case Kind::DyadicP: return "dyadic_p";
        case Kind::DyadicPStar: return "dyadic_pstar";
    }
    return "?";
}

PrimeIdeal PrimeIdeal::inert(const QuadField& field, Integer ell) {
    return PrimeIdeal(field.q(), std::move(ell), Kind::Inert, 0);
}

PrimeIdeal PrimeIdeal::split(const QuadField& field, Integer ell, Integer u) {
    PrimeIdeal p(field.q(), std::move(ell), Kind::Split, std::move(u));
    if (mod_pos(p.u_ * p.u_ + field.q(), p.ell_) != 0)
        throw InvalidInput("PrimeIdeal: residue does not satisfy u^2 = -q");
    return p;
}

PrimeIdeal PrimeIdeal::ramified(const QuadField& field) {
    return PrimeIdeal(field.q(), field.q(), Kind::Ramified, 0);
}

PrimeIdeal PrimeIdeal::dyadic(const QuadField& field, bool star) {
    return PrimeIdeal(field.q(), 2, star ? Kind::DyadicPStar : Kind::DyadicP, 0);
}

Integer PrimeIdeal::ideal_norm() const { return kind_ == Kind::Inert ? ell_ * ell_ : ell_; }

PrimeIdeal PrimeIdeal::conjugate() const {
    switch (kind_) {
        case Kind::Split: return PrimeIdeal(q_, ell_, Kind::Split, ell_ - u_);
        case Kind::DyadicP: return PrimeIdeal(q_, ell_, Kind::DyadicPStar, 0);
        case Kind::DyadicPStar: return PrimeIdeal(q_, ell_, Kind::DyadicP, 0);
        default: return *this;
    }
}

bool PrimeIdeal::contains(const QuadElem& x) const {
    switch (kind_) {
        case Kind::Inert:
            return mod_pos(x.a(), ell_) == 0 && mod_pos(x.b(), ell_) == 0;
        case Kind::Ramified:
            return mod_pos(x.a(), q_) == 0;
        case Kind::Split:
            // (a + b sqrt(-q))/2 lies in (ell, sqrt(-q) - u) iff a + b u = 0
            // mod ell; 2 is invertible since ell is odd.
            return mod_pos(x.a() + x.b() * u_, ell_) == 0;
        case Kind::DyadicP:
        case Kind::DyadicPStar: {
            Dyadic img = kind_ == Kind::DyadicP ? x.embed(8) : x.embed_star(8);
            return mpz_even_p(img.residue.get_mpz_t());
        }
    }
    return false;
}

bool PrimeIdeal::operator==(const PrimeIdeal& other) const {
    return q_ == other.q_ && ell_ == other.ell_ && kind_ == other.kind_ && u_ == other.u_;
}

bool PrimeIdeal::operator<(const PrimeIdeal& other) const {
    return std::tie(ell_, kind_, u_) < std::tie(other.ell_, other.kind_, other.u_);
}

std::string PrimeIdeal::to_string() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Inert: os << "(" << ell_.get_str() << ")"; break;
        case Kind::Ramified: os << "(sqrt(-" << q_.get_str() << "))"; break;
        case Kind::Split:
            os << "(" << ell_.get_str() << ", sqrt(-" << q_.get_str() << ")-" << u_.get_str()
               << ")";
            break;
        case Kind::DyadicP: os << "p"; break;
        case Kind::DyadicPStar: os << "p*"; break;
    }
    return os.str();
}

Kind splitting_kind(const QuadField& field, const Integer& ell) {
    if (!is_prime(ell)) throw InvalidInput("splitting_kind: ell must be prime");
    if (ell == 2) return Kind::Split;  // q = 7 mod 8, so 2 always splits
    if (ell == field.q()) return Kind::Ramified;
    int k = kronecker(-field.q(), ell);
    return k == 1 ? Kind::Split : Kind::Inert;
}

std::vector<PrimeIdeal> primes_above(const QuadField& field, const Integer& ell) {
    Kind kind = splitting_kind(field, ell);
    if (ell == 2)
        return {PrimeIdeal::dyadic(field, false), PrimeIdeal::dyadic(field, true)};
    switch (kind) {
        case Kind::Ramified:
            return {PrimeIdeal::ramified(field)};
        case Kind::Inert:
            return {PrimeIdeal::inert(field, ell)};
        default: {
            Integer u = sqrt_mod_prime(mod_pos(-field.q(), ell), ell);
            Integer u2 = ell - u;
            if (u > u2) std::swap(u, u2);
            return {PrimeIdeal::split(field, ell, u), PrimeIdeal::split(field, ell, u2)};
        }
    }
}

Integer class_number(const QuadField& field) {
    // Count reduced forms a x^2 + b x y + c y^2 of discriminant -q:
    // |b| <= a <= c with b odd, and b > 0 on the boundary a = |b| or a = c.
    const Integer& q = field.q();
    Integer h = 0;
    for (Integer b = 1; 3 * b * b <= q; b += 2) {
        Integer n = (b * b + q) / 4;
        for (Integer a = b; a * a <= n; ++a) {
            if (a == 0 || !mpz_divisible_p(n.get_mpz_t(), a.get_mpz_t())) continue;
            Integer c = n / a;
            h += (a == b || a == c) ? 1 : 2;
        }
    }
    return h;
}

long ord_at(const QuadElem& x, const PrimeIdeal& P, const AdaptivePrecision& prec) {
    if (x.is_zero()) throw InvalidInput("ord_at: zero element");
    switch (P.kind()) {
        case Kind::Inert:
            return std::min(val_at(x.a(), P.ell()), val_at(x.b(), P.ell()));
        case Kind::Ramified:
            return val_at(x.norm(), P.ell());
        case Kind::Split: {
            long t = std::min(val_at(x.a(), P.ell()), val_at(x.b(), P.ell()));
            Integer pe = pow_ui(P.ell(), static_cast<unsigned long>(t));
            QuadElem y = *x.div_exact(pe);
            if (!P.contains(y)) return t;
            return t + val_at(y.norm(), P.ell());
        }
        case Kind::DyadicP:
        case Kind::DyadicPStar: {
            bool star = P.kind() == Kind::DyadicPStar;
            return adaptive_ord2(
                [&](long k) { return star ? x.embed_star(k) : x.embed(k); }, prec);
        }
    }
    throw std::logic_error("ord_at: unreachable");
}

IdealFactorization factor_ideal(const QuadElem& x, const std::set<Kind>& allow,
                                const FactorConfig& cfg, const AdaptivePrecision& prec) {
    if (x.is_zero()) throw InvalidInput("factor_ideal: zero element");
    QuadField field(x.q());
    IdealFactorization out;
    Factorization nf = factorize(x.norm(), cfg);
    for (const auto& [ell, e] : nf.factors) {
        Kind kind = splitting_kind(field, ell);
        if (ell == 2) {
            PrimeIdeal p = PrimeIdeal::dyadic(field, false);
            long vp = ord_at(x, p, prec);
            long vs = static_cast<long>(e) - vp;
            if (vp > 0) out.entries.emplace_back(p, static_cast<unsigned long>(vp));
            if (vs > 0)
                out.entries.emplace_back(PrimeIdeal::dyadic(field, true),
                                         static_cast<unsigned long>(vs));
        } else if (kind == Kind::Inert) {
            out.entries.emplace_back(PrimeIdeal::inert(field, ell), e / 2);
        } else if (kind == Kind::Ramified) {
            out.entries.emplace_back(PrimeIdeal::ramified(field), e);
        } else {
            auto pair = primes_above(field, ell);
            long v0 = ord_at(x, pair[0], prec);
            long v1 = static_cast<long>(e) - v0;
            if (v0 > 0) out.entries.emplace_back(pair[0], static_cast<unsigned long>(v0));
            if (v1 > 0) out.entries.emplace_back(pair[1], static_cast<unsigned long>(v1));
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    for (const auto& [p, e] : out.entries) {
        if (!allow.count(p.kind()))
            throw DisallowedKind("factor_ideal: factor " + p.to_string() + " has disallowed kind " +
                                 kind_name(p.kind()));
    }
    return out;
}

IdealFactorization factor_ideal(const QuadField& field, const Integer& x,
                                const std::set<Kind>& allow, const FactorConfig& cfg,
                                const AdaptivePrecision& prec) {
    return factor_ideal(QuadElem::from_integer(field, x), allow, cfg, prec);
}

namespace {

// Sign normalization: flip x so that its image under the normalized embedding
// is 1 mod 4. Requires the image to be a unit.
QuadElem normalize_sign(const QuadElem& x) {
    Dyadic img = x.embed(8);
    Integer m4 = mod_pos(img.residue, 4);
    if (m4 == 1) return x;
    if (m4 == 3) return x.negate();
    throw std::logic_error("normalize_sign: image is not a 2-adic unit");
}

struct NormEquationSolution {
    Integer a, b;
};

// Enumerate solutions of a^2 + q b^2 = 4 target with a, b of equal parity and
// a >= 0, b >= 0; `take` receives each and returns true to stop.
template <typename Take>
void enumerate_norm_equation(const Integer& q, const Integer& target, unsigned long max_iter,
                             Take&& take) {
    Integer four_t = 4 * target;
    Integer bmax_sq = four_t / q;
    // 64-bit fast path for the common desk-scale searches.
    if (mpz_sizeinbase(four_t.get_mpz_t(), 2) <= 62) {
        const std::uint64_t ft = mpz_get_ui(four_t.get_mpz_t());
        const std::uint64_t qq = mpz_get_ui(q.get_mpz_t());
        unsigned long iter = 0;
        for (std::uint64_t b = 0;; ++b) {
            unsigned __int128 qb2 = (unsigned __int128)qq * b * b;
            if (qb2 > ft) break;
            if (++iter > max_iter) throw SearchBoundExceeded("norm equation search too long");
            std::uint64_t rem = static_cast<std::uint64_t>(ft - qb2);
            std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(rem)));
            while (r > 0 && r * r > rem) --r;
            while ((r + 1) * (r + 1) <= rem) ++r;
            if (r * r != rem) continue;
            if (((r ^ b) & 1) != 0) continue;
            if (take(NormEquationSolution{Integer(static_cast<unsigned long>(r)),
                                          Integer(static_cast<unsigned long>(b))}))
                return;
        }
        return;
    }
    unsigned long iter = 0;
    for (Integer b = 0; b * b <= bmax_sq; ++b) {
        if (++iter > max_iter) throw SearchBoundExceeded("norm equation search too long");
        Integer rem = four_t - q * b * b;
        auto root = sqrt_exact(rem);
        if (!root) continue;
        if (mod_pos(*root - b, 2) != 0) continue;
        if (take(NormEquationSolution{*root, b})) return;
    }
}

}  // namespace

QuadElem generator_of_power(const PrimeIdeal& P, unsigned long e,
                            const GeneratorSearchConfig& cfg) {
    if (e == 0) throw InvalidInput("generator_of_power: exponent must be positive");
    QuadField field(P.q());
    const Integer& q = field.q();

    switch (P.kind()) {
        case Kind::Inert:
            return normalize_sign(QuadElem::from_integer(field, pow_ui(P.ell(), e)));
        case Kind::Ramified: {
            // (sqrt(-q))^e up to sign.
            unsigned long t = e / 2;
            QuadElem w = QuadElem::from_integer(field, pow_ui(q, t));
            if (e % 2) w = w * QuadElem::sqrt_gen(field);
            return normalize_sign(w);
        }
        case Kind::DyadicP:
            throw InvalidInput(
                "generator_of_power: the distinguished dyadic prime admits no normalized "
                "generator");
        case Kind::DyadicPStar:
        case Kind::Split: {
            Integer target = pow_ui(P.ell(), e);
            std::optional<QuadElem> found;
            enumerate_norm_equation(q, target, cfg.max_iterations,
                                    [&](const NormEquationSolution& sol) {
                QuadElem cand(field, sol.a, sol.b);
                // Reject imprimitive solutions: they generate mixed powers of
                // the conjugate pair.
                if (P.kind() == Kind::Split) {
                    if (mod_pos(sol.a, P.ell()) == 0 && mod_pos(sol.b, P.ell()) == 0) return false;
                } else {
                    if (cand.div_exact(Integer(2)).has_value()) return false;
                }
                for (const QuadElem& x : {cand, cand.conjugate()}) {
                    if (P.contains(x)) {
                        found = x;
                        return true;
                    }
                }
                return false;
            });
            if (!found)
                throw NotPrincipal("generator_of_power: no primitive solution; " +
                                   P.to_string() + "^" + std::to_string(e) + " is not principal");
            return normalize_sign(*found);
        }
    }
    throw std::logic_error("generator_of_power: unreachable");
}

}  // namespace qlambda
