#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qlambda/errors.hpp"

namespace qlambda {

using Integer = mpz_class;

/// Complete factorization of a nonzero integer: sign times prime powers,
/// primes strictly increasing.
struct Factorization {
    int sign = 1;
    std::vector<std::pair<Integer, unsigned long>> factors;

    Integer value() const;
};

struct FactorConfig {
    unsigned long trial_bound = 1'000'000;
    // Brent-rho iteration cap per constant; constants tried in a fixed order,
    // so factorization is deterministic.
    unsigned long rho_max_iter = 4'000'000;
};

/// Deterministic primality. Exact for all inputs that fit in 64 bits
/// (fixed Miller-Rabin witness set); larger inputs are rejected with
/// SizeUnsupported rather than answered probabilistically.
bool is_prime(const Integer& n);
bool is_prime_u64(std::uint64_t n);

/// Factor n != 0 by trial division up to cfg.trial_bound, then Brent rho on
/// 64-bit cofactors. Throws FactorizationTooLarge when a cofactor resists.
Factorization factorize(const Integer& n, const FactorConfig& cfg = {});

/// Kronecker symbol (a|n).
int kronecker(const Integer& a, const Integer& n);

/// Exact integer square root: m with m*m == n, or absent.
std::optional<Integer> sqrt_exact(const Integer& n);

/// Square root of a modulo an odd prime p (Tonelli-Shanks).
/// Requires kronecker(a, p) != -1; returns r in [0, p) with r*r = a mod p.
Integer sqrt_mod_prime(const Integer& a, const Integer& p);

/// 2-adic valuation of n != 0.
long val2(const Integer& n);

/// Nonnegative residue of a mod m (m > 0).
Integer mod_pos(const Integer& a, const Integer& m);

Integer pow_ui(const Integer& base, unsigned long e);

}  // namespace qlambda
