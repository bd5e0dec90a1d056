#include "qlambda/dyadic.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace qlambda {

namespace {

Integer two_pow(long k) { return Integer(1) << k; }

}  // namespace

Dyadic::Dyadic(Integer value, long k) : precision(k) {
    if (k < 1) throw InvalidInput("Dyadic: precision must be positive");
    residue = mod_pos(value, two_pow(k));
}

Dyadic Dyadic::half() const {
    if (mpz_odd_p(residue.get_mpz_t()))
        throw std::logic_error("Dyadic::half: residue is odd");
    if (precision < 2) throw PrecisionExhausted("Dyadic::half: no precision left");
    return Dyadic(residue >> 1, precision - 1);
}

std::string Dyadic::to_string() const {
    std::ostringstream os;
    os << residue.get_str() << " mod 2^" << precision;
    return os.str();
}

Dyadic operator+(const Dyadic& x, const Dyadic& y) {
    long k = std::min(x.precision, y.precision);
    return Dyadic(x.residue + y.residue, k);
}

Dyadic operator-(const Dyadic& x, const Dyadic& y) {
    long k = std::min(x.precision, y.precision);
    return Dyadic(x.residue - y.residue, k);
}

Dyadic operator*(const Dyadic& x, const Dyadic& y) {
    long k = std::min(x.precision, y.precision);
    return Dyadic(x.residue * y.residue, k);
}

Dyadic operator-(const Dyadic& x, const Integer& n) { return Dyadic(x.residue - n, x.precision); }

bool congruent_mod(const Dyadic& x, const Dyadic& y, long bits) {
    if (bits > x.precision || bits > y.precision)
        throw PrecisionExhausted("congruent_mod: insufficient precision");
    return mod_pos(x.residue - y.residue, two_pow(bits)) == 0;
}

long ord2(const Dyadic& d) {
    if (d.residue == 0)
        throw PrecisionExhausted("ord2: residue vanishes at the working precision");
    long v = val2(d.residue);
    if (v >= d.precision - kOrdGuardBits)
        throw PrecisionExhausted("ord2: valuation inside the guard band");
    return v;
}

Dyadic sqrt_minus_q(const Integer& q, long k) {
    if (mod_pos(q, 8) != 7) throw InvalidInput("sqrt_minus_q: q must be 7 mod 8");
    if (k < 1) throw InvalidInput("sqrt_minus_q: precision must be positive");
    // Invariant: after step j, r is determined mod 2^j and r^2 = -q mod 2^{j+1}.
    // Exactly one of r, r + 2^{j-1} squares to -q modulo the next power, and
    // bit j of r^2 + q decides which; the base r = 1 pins the root to 1 mod 4.
    Integer r = 1;
    for (long j = 3; j <= k; ++j) {
        Integer t = r * r + q;
        if (mpz_tstbit(t.get_mpz_t(), static_cast<mp_bitcnt_t>(j))) r += two_pow(j - 1);
    }
    return Dyadic(r, k);
}

Dyadic embed_coords(const Integer& q, const Integer& a, const Integer& b, long k, bool star) {
    if (k < 2) throw PrecisionExhausted("embed_coords: need at least 2 bits");
    Dyadic s = sqrt_minus_q(q, k);
    Integer root = star ? two_pow(k) - s.residue : s.residue;
    Integer t = mod_pos(a + b * root, two_pow(k));
    if (mpz_odd_p(t.get_mpz_t()))
        throw std::logic_error("embed_coords: coordinates violate the parity invariant");
    return Dyadic(t >> 1, k - 1);
}

UnramifiedExt UnramifiedExt::standard(int degree) {
    UnramifiedExt ext;
    ext.degree = degree;
    switch (degree) {
        case 1: ext.poly = {1}; break;                 // x + 1
        case 2: ext.poly = {1, 1}; break;              // x^2 + x + 1
        case 3: ext.poly = {1, 1, 0}; break;           // x^3 + x + 1
        case 4: ext.poly = {1, 1, 0, 0}; break;        // x^4 + x + 1
        default: throw InvalidInput("UnramifiedExt: degree must be between 1 and 4");
    }
    return ext;
}

bool irreducible_mod2(const std::vector<int>& p) {
    const int d = static_cast<int>(p.size());
    if (d < 1 || d > 4) return false;
    auto eval = [&](int x) {
        int acc = 1;  // monic leading term
        for (int i = d - 1; i >= 0; --i) acc = (acc * x + p[i]) & 1;
        return acc;
    };
    if (d == 1) return true;
    if (eval(0) == 0 || eval(1) == 0) return false;  // no roots in F_2
    if (d < 4) return true;
    // Degree 4 without roots factors nontrivially only as the square of the
    // unique irreducible quadratic: x^4 + x^2 + 1.
    return !(p[0] == 1 && p[1] == 0 && p[2] == 1 && p[3] == 0);
}

namespace {

using u64 = std::uint64_t;

// Determinant of a d x d matrix with entries taken modulo 2^64; the result is
// exact modulo any smaller power of two after masking.
u64 det_small(const std::array<std::array<u64, 4>, 4>& A, int d) {
    switch (d) {
        case 1:
            return A[0][0];
        case 2:
            return A[0][0] * A[1][1] - A[0][1] * A[1][0];
        case 3:
            return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                   A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                   A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
        default: {
            auto minor2 = [&](int r0, int r1, int c0, int c1) {
                return A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0];
            };
            u64 p01 = minor2(0, 1, 0, 1), p02 = minor2(0, 1, 0, 2), p03 = minor2(0, 1, 0, 3);
            u64 p12 = minor2(0, 1, 1, 2), p13 = minor2(0, 1, 1, 3), p23 = minor2(0, 1, 2, 3);
            u64 q01 = minor2(2, 3, 0, 1), q02 = minor2(2, 3, 0, 2), q03 = minor2(2, 3, 0, 3);
            u64 q12 = minor2(2, 3, 1, 2), q13 = minor2(2, 3, 1, 3), q23 = minor2(2, 3, 2, 3);
            return p01 * q23 - p02 * q13 + p03 * q12 + p12 * q03 - p13 * q02 + p23 * q01;
        }
    }
}

}  // namespace

NormSurjectivityReport verify_norm_surjectivity(int degree, int m, int k) {
    return verify_norm_surjectivity(UnramifiedExt::standard(degree), m, k);
}

NormSurjectivityReport verify_norm_surjectivity(const UnramifiedExt& ext, int m, int k) {
    const int d = ext.degree;
    if (d < 1 || d > 4) throw InvalidInput("verify_norm_surjectivity: degree must be in [1,4]");
    if (m < 2) throw InvalidInput("verify_norm_surjectivity: m must be at least 2");
    if (k < m + 2 || k > m + 8)
        throw InvalidInput("verify_norm_surjectivity: precision must satisfy m+2 <= k <= m+8");
    if (static_cast<int>(ext.poly.size()) != d || !irreducible_mod2(ext.poly))
        throw InvalidInput("verify_norm_surjectivity: defining polynomial not irreducible mod 2");

    NormSurjectivityReport rep;
    rep.degree = d;
    rep.m = m;
    rep.k = k;
    rep.poly = ext.poly;

    const int w = k - m;                   // free bits per coefficient
    const u64 coeff_count = u64(1) << w;   // representatives per coefficient
    const u64 mask_k = (u64(1) << k) - 1;
    const u64 total = u64(1) << (w * d);

    rep.classes.resize(coeff_count);
    for (u64 t = 0; t < coeff_count; ++t)
        rep.classes[t].target_residue = (1 + (t << m)) & mask_k;

    u64 covered = 0;
    std::array<u64, 4> coeff{};
    for (u64 idx = 0; idx < total; ++idx) {
        u64 bits = idx;
        for (int j = 0; j < d; ++j) {
            coeff[j] = bits & (coeff_count - 1);
            bits >>= w;
        }
        // alpha = 1 + 2^m * sum_j coeff[j] x^j; columns of the multiplication
        // matrix are alpha * x^j reduced by the monic defining polynomial.
        std::array<u64, 4> col{};
        for (int j = 0; j < d; ++j) col[j] = coeff[j] << m;
        col[0] = (col[0] + 1) & mask_k;
        std::array<std::array<u64, 4>, 4> A{};
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) A[i][j] = col[i];
            if (j + 1 < d) {
                u64 top = col[d - 1];
                for (int i = d - 1; i > 0; --i) col[i] = col[i - 1];
                col[0] = 0;
                for (int i = 0; i < d; ++i)
                    col[i] = (col[i] - top * u64(ext.poly[i])) & mask_k;
            }
        }
        u64 norm = det_small(A, d) & mask_k;
        u64 cls = ((norm - 1) >> m) & (coeff_count - 1);
        if (((norm - 1) & ((u64(1) << m) - 1)) != 0)
            throw std::logic_error("verify_norm_surjectivity: norm escaped 1 + 2^m Z_2");
        if (!rep.classes[cls].covered) {
            rep.classes[cls].covered = true;
            rep.classes[cls].preimage_coeffs.assign(coeff.begin(), coeff.begin() + d);
            ++covered;
        }
    }
    rep.elements_enumerated = total;
    rep.surjective = (covered == coeff_count);
    return rep;
}

}  // namespace qlambda
