#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlambda/arith.hpp"
#include "qlambda/errors.hpp"

namespace qlambda {

// A reported 2-adic valuation is only trusted when it sits this many bits
// below the working precision.
inline constexpr long kOrdGuardBits = 4;

/// 2-adic integer known modulo 2^precision.
struct Dyadic {
    Integer residue;  // reduced to [0, 2^precision)
    long precision = 0;

    Dyadic() = default;
    Dyadic(Integer value, long k);

    /// Exact halving; the residue must be even. Costs one bit of precision.
    Dyadic half() const;

    std::string to_string() const;
};

Dyadic operator+(const Dyadic& x, const Dyadic& y);
Dyadic operator-(const Dyadic& x, const Dyadic& y);
Dyadic operator*(const Dyadic& x, const Dyadic& y);
Dyadic operator-(const Dyadic& x, const Integer& n);
bool congruent_mod(const Dyadic& x, const Dyadic& y, long bits);

/// 2-adic valuation of d. Throws PrecisionExhausted when the residue is zero
/// at the working precision or the valuation reaches the guard band.
long ord2(const Dyadic& d);

/// Truncation of the 2-adic square root of -q that is congruent to 1 mod 4,
/// for q = 7 mod 8. Produced by forced bitwise lifting from the base residue.
Dyadic sqrt_minus_q(const Integer& q, long k);

/// Image of (a + b*sqrt(-q))/2 under the embedding sending sqrt(-q) to the
/// normalized root (star = false) or its negative (star = true).
/// Returns precision k-1: the halving spends one bit.
Dyadic embed_coords(const Integer& q, const Integer& a, const Integer& b, long k,
                    bool star = false);

/// Retry policy for valuation computations whose required precision is not
/// known in advance: start small, double on PrecisionExhausted, give up at cap.
struct AdaptivePrecision {
    long start = 16;
    long cap = 4096;
};

template <typename MakeDyadic>
long adaptive_ord2(MakeDyadic&& make, const AdaptivePrecision& prec = {},
                   long* precision_used = nullptr) {
    for (long k = prec.start; k <= prec.cap; k *= 2) {
        try {
            long v = ord2(make(k));
            if (precision_used) *precision_used = k;
            return v;
        } catch (const PrecisionExhausted&) {
        }
    }
    throw PrecisionExhausted("adaptive_ord2: precision cap reached");
}

/// Unramified extension of the 2-adic field presented as polynomial residues
/// modulo (2^k, g) for a monic g irreducible mod 2.
struct UnramifiedExt {
    int degree = 1;
    std::vector<int> poly;  // g = x^d + poly[d-1] x^{d-1} + ... + poly[0], entries 0/1

    static UnramifiedExt standard(int degree);
};

bool irreducible_mod2(const std::vector<int>& monic_poly);

struct NormClassWitness {
    std::uint64_t target_residue = 0;  // class representative 1 + 2^m t mod 2^k
    bool covered = false;
    std::vector<std::uint64_t> preimage_coeffs;  // alpha = 1 + 2^m * sum c_j x^j
};

struct NormSurjectivityReport {
    int degree = 1;
    int m = 2;
    int k = 4;
    std::vector<int> poly;
    bool surjective = false;
    std::vector<NormClassWitness> classes;
    std::uint64_t elements_enumerated = 0;
};

/// Checks that the norm map of the degree-d unramified extension carries
/// 1 + 2^m O onto 1 + 2^m Z_2, working modulo 2^k. The image is enumerated
/// exhaustively over all 2^{d(k-m)} residue representatives; norms are
/// computed as determinants of the multiplication action on the power basis.
/// Bounds: 1 <= d <= 4, m >= 2, m+2 <= k <= m+8.
NormSurjectivityReport verify_norm_surjectivity(int degree, int m, int k);
NormSurjectivityReport verify_norm_surjectivity(const UnramifiedExt& ext, int m, int k);

}  // namespace qlambda
