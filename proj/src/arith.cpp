#include "qlambda/arith.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace qlambda {

Integer Factorization::value() const {
    Integer v = sign;
    for (const auto& [p, e] : factors) v *= pow_ui(p, e);
    return v;
}

Integer mod_pos(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer pow_ui(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

long val2(const Integer& n) {
    if (n == 0) throw InvalidInput("val2: zero has infinite 2-adic valuation");
    Integer m = abs(n);
    return static_cast<long>(mpz_scan1(m.get_mpz_t(), 0));
}

int kronecker(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::optional<Integer> sqrt_exact(const Integer& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Strong-pseudoprime test for one witness.
bool witness_passes(u64 n, u64 a, u64 d, int s) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// Brent's variant of Pollard rho with a fixed polynomial constant.
// Returns a nontrivial factor or 0 when the iteration cap is reached.
u64 brent_rho(u64 n, u64 c, unsigned long max_iter) {
    if (n % 2 == 0) return 2;
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 m = 128;
    unsigned long iters = 0;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            const u64 lim = std::min(m, r - k);
            for (u64 i = 0; i < lim; ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u64(q, n);
            k += m;
            iters += lim;
            if (iters > max_iter) return 0;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

bool fits_u64(const Integer& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64 && n >= 0; }

u64 to_u64(const Integer& n) {
    u64 lo = mpz_get_ui(n.get_mpz_t());
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 8 * sizeof(unsigned long)) {
        Integer hi = n >> 32;
        lo |= u64(mpz_get_ui(hi.get_mpz_t())) << 32;  // not reached on LP64
    }
    return lo;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // The first twelve primes form a deterministic witness set for every n
    // below 3.3e24, which covers the full 64-bit range.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!witness_passes(n, a, d, s)) return false;
    }
    return true;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (!fits_u64(n)) {
        throw SizeUnsupported("is_prime: size unsupported (inputs above 64 bits are rejected)");
    }
    return is_prime_u64(to_u64(n));
}

Factorization factorize(const Integer& n, const FactorConfig& cfg) {
    if (n == 0) throw InvalidInput("factorize: n must be nonzero");
    Factorization out;
    out.sign = n < 0 ? -1 : 1;
    Integer m = abs(n);

    auto strip = [&](const Integer& p) {
        unsigned long e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            ++e;
        }
        if (e) out.factors.emplace_back(p, e);
    };

    strip(2);
    strip(3);
    for (unsigned long d = 5; d <= cfg.trial_bound && m > 1; d += 6) {
        if (Integer(d) * d > m) break;
        strip(Integer(d));
        strip(Integer(d + 2));
    }

    if (m > 1) {
        const Integer trial_sq = Integer(cfg.trial_bound) * Integer(cfg.trial_bound);
        std::vector<Integer> pending;
        if (m <= trial_sq) {
            // No factor below the trial bound remains, so m is prime.
            out.factors.emplace_back(m, 1);
        } else {
            pending.push_back(m);
        }
        std::vector<std::pair<Integer, unsigned long>> extra;
        while (!pending.empty()) {
            Integer c = pending.back();
            pending.pop_back();
            if (!fits_u64(c)) {
                throw FactorizationTooLarge("factorize: cofactor exceeds 64 bits");
            }
            u64 cv = to_u64(c);
            if (is_prime_u64(cv)) {
                extra.emplace_back(c, 1);
                continue;
            }
            u64 f = 0;
            for (u64 cc = 1; cc <= 24 && f == 0; ++cc) f = brent_rho(cv, cc, cfg.rho_max_iter);
            if (f == 0 || f == cv) {
                throw FactorizationTooLarge("factorize: rho iteration cap exceeded");
            }
            pending.emplace_back(f);
            pending.emplace_back(cv / f);
        }
        for (auto& pe : extra) {
            bool merged = false;
            for (auto& known : out.factors) {
                if (known.first == pe.first) {
                    known.second += pe.second;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.factors.push_back(pe);
        }
    }

    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

Integer sqrt_mod_prime(const Integer& a0, const Integer& p) {
    Integer a = mod_pos(a0, p);
    if (a == 0) return 0;
    if (kronecker(a, p) != 1) throw InvalidInput("sqrt_mod_prime: a is not a square mod p");
    auto powm = [&](const Integer& b, const Integer& e) {
        Integer r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    if (mod_pos(p, 4) == 3) return powm(a, (p + 1) / 4);

    Integer q = p - 1;
    long s = val2(q);
    q >>= s;
    Integer z = 2;
    while (kronecker(z, p) != -1) ++z;
    Integer m = s, c = powm(z, q), t = powm(a, q), r = powm(a, (q + 1) / 2);
    while (t != 1) {
        Integer t2 = t;
        long i = 0;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Integer b = c;
        for (long j = 0; j < m.get_si() - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

}  // namespace qlambda
