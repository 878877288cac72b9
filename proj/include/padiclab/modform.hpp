#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "padiclab/errors.hpp"

namespace padiclab {

// integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct EllipticCurve {
    long long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

    long long b2() const { return a1 * a1 + 4 * a2; }
    long long b4() const { return 2 * a4 + a1 * a3; }
    long long b6() const { return a3 * a3 + 4 * a6; }
    long long b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    long long c4() const { return b2() * b2() - 24 * b4(); }
    __int128 discriminant() const {
        __int128 B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }
};

// number of projective F_l points of the (possibly singular) cubic
inline long long count_points(const EllipticCurve& E, long long l) {
    if (l == 2) {
        long long cnt = 1; // infinity
        for (long long x = 0; x < 2; ++x)
            for (long long y = 0; y < 2; ++y) {
                long long lhs = (y * y + E.a1 * x * y + E.a3 * y) % 2;
                long long rhs = (x * x * x + E.a2 * x * x + E.a4 * x + E.a6) % 2;
                if (((lhs - rhs) % 2 + 2) % 2 == 0) ++cnt;
            }
        return cnt;
    }
    // complete the square: u^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, swept with
    // finite differences so the inner loop is division free
    long long B = ((E.b2() % l) + l) % l;
    long long C = ((2 * (E.b4() % l)) % l + l) % l;
    long long A6 = ((E.b6() % l) + l) % l;
    std::vector<std::uint8_t> issq(l, 0);
    {
        long long sq = 0, step = 1; // (t+1)^2 = t^2 + 2t + 1
        for (long long t = 0; t <= l / 2; ++t) {
            issq[sq] = 1;
            sq += step;
            if (sq >= l) sq -= l;
            if (sq >= l) sq -= l;
            step += 2;
            if (step >= l) step -= l;
        }
    }
    long long f = A6 % l;
    long long d1 = (4 + B + C) % l;
    long long d2 = (24 + 2 * B) % l;
    const long long d3 = 24 % l;
    long long cnt = 1; // infinity
    for (long long x = 0; x < l; ++x) {
        cnt += (f == 0) ? 1 : (issq[f] ? 2 : 0);
        f += d1;
        if (f >= l) f -= l;
        d1 += d2;
        if (d1 >= l) d1 -= l;
        d2 += d3;
        if (d2 >= l) d2 -= l;
    }
    return cnt;
}

// a_l from point counting; for bad primes a_l = l - #E_ns with the unique
// singular point removed
inline long long curve_ap(const EllipticCurve& E, long long l) {
    bool good = (E.discriminant() % l) != 0;
    long long pts = count_points(E, l);
    if (good) return l + 1 - pts;
    return l - (pts - 1);
}

// Fourier coefficients of a weight-2 newform, a_1 = 1, extended to all
// indices by the Hecke relations
class CoefficientTable {
public:
    std::string label;
    long long level = 0;    // N
    std::vector<long long> an; // 1-based; an[0] unused

    long long a(long long n) const {
        if (n < 1 || n >= static_cast<long long>(an.size()))
            throw precision_error("insufficient-coefficients: raise the table length");
        return an[n];
    }
    long long max_index() const { return static_cast<long long>(an.size()) - 1; }

    bool ordinary_at(long long p) const {
        if (level % p == 0) throw domain_error("ordinarity is asked at a good prime");
        return a(p) % p != 0;
    }

    void check_invariants() const {
        if (max_index() < 1 || an[1] != 1) throw domain_error("invalid-input: a_1 must be 1");
        for (long long l = 2; l <= max_index(); ++l) {
            if (!is_prime(l)) continue;
            if (level % l == 0) continue;
            if (static_cast<double>(an[l]) * an[l] > 4.0 * l)
                throw domain_error("invalid-input: Hasse bound fails at a good prime");
        }
    }

    static bool is_prime(long long n) {
        if (n < 2) return false;
        for (long long q = 2; q * q <= n; ++q)
            if (n % q == 0) return false;
        return true;
    }

    // fill composite indices from prime data via multiplicativity and the
    // weight-2 recursion at prime powers
    void extend_multiplicatively(long long n_max) {
        std::vector<long long> spf(n_max + 1, 0);
        for (long long i = 2; i <= n_max; ++i)
            if (!spf[i])
                for (long long j = i; j <= n_max; j += i)
                    if (!spf[j]) spf[j] = i;
        std::vector<long long> out(n_max + 1, 0);
        out[1] = 1;
        for (long long n = 2; n <= n_max; ++n) {
            long long l = spf[n];
            long long q = l, m = n / l;
            while (m % l == 0) { q *= l; m /= l; }
            if (m > 1) {
                out[n] = out[q] * out[m];
                continue;
            }
            // n = l^k
            if (n == l) { out[n] = an.size() > static_cast<std::size_t>(l) ? an[l] : 0; continue; }
            long long prev = out[n / l], prev2 = (n / l / l >= 1) ? out[n / l / l] : 0;
            if (level % l == 0) out[n] = out[l] * prev;
            else out[n] = out[l] * prev - l * prev2;
        }
        an = std::move(out);
        // restore 1-based layout: an[0] unused
        an[0] = 0;
    }
};

using CoefficientsPtr = std::shared_ptr<const CoefficientTable>;

// curve mode: a_l by point counting for all primes, then the Hecke extension
inline CoefficientsPtr coefficients_from_curve(const EllipticCurve& E, long long n_max,
                                               long long level_hint = 0,
                                               const std::string& label = "") {
    auto T = std::make_shared<CoefficientTable>();
    T->label = label;
    __int128 disc = E.discriminant();
    if (disc == 0) throw domain_error("invalid-input: singular Weierstrass model");

    // conductor: multiplicative primes contribute l, additive ones l^2
    // (valid for l >= 5; for additive reduction at 2 or 3 a level hint is required)
    long long N = 1;
    auto bad_prime = [&](long long l) {
        long long c4l = ((E.c4() % l) + l) % l;
        if (c4l != 0) N *= l; // node: multiplicative reduction
        else {
            if (l < 5 && level_hint == 0)
                throw domain_error(
                    "invalid-input: additive reduction at 2 or 3 needs an explicit level");
            N *= l * l;
        }
    };
    __int128 d = disc < 0 ? -disc : disc;
    for (long long l = 2; static_cast<__int128>(l) * l <= d; ++l) {
        if (d % l != 0) continue;
        while (d % l == 0) d /= l;
        bad_prime(l);
    }
    if (d > 1) bad_prime(static_cast<long long>(d));
    if (level_hint != 0) N = level_hint;
    T->level = N;

    T->an.assign(n_max + 1, 0);
    T->an[1] = 1;
    for (long long l = 2; l <= n_max; ++l) {
        if (!CoefficientTable::is_prime(l)) continue;
        T->an[l] = curve_ap(E, l);
    }
    T->extend_multiplicatively(n_max);
    T->check_invariants();
    return T;
}

inline CoefficientsPtr coefficients_from_list(const std::string& label, long long level,
                                              const std::vector<long long>& an_from_1,
                                              long long n_max) {
    if (an_from_1.empty() || an_from_1[0] != 1)
        throw domain_error("invalid-input: a_1 must be 1");
    if (n_max > static_cast<long long>(an_from_1.size()))
        throw precision_error("insufficient-coefficients: the file covers fewer indices");
    auto T = std::make_shared<CoefficientTable>();
    T->label = label;
    T->level = level;
    T->an.assign(an_from_1.size() + 1, 0);
    for (std::size_t i = 0; i < an_from_1.size(); ++i) T->an[i + 1] = an_from_1[i];
    // rebuild from the prime entries and insist the composites agree
    CoefficientTable check = *T;
    check.extend_multiplicatively(T->max_index());
    for (long long n = 1; n <= T->max_index(); ++n)
        if (check.an[n] != T->an[n])
            throw domain_error("invalid-input: coefficients violate the Hecke relations");
    T->check_invariants();
    return T;
}

// small built-in registry for the CLI
inline EllipticCurve curve_by_label(const std::string& label) {
    if (label == "11a" || label == "11a1") return EllipticCurve{0, -1, 1, -10, -20};
    if (label == "14a" || label == "14a1") return EllipticCurve{1, 0, 1, 4, -6};
    if (label == "15a" || label == "15a1") return EllipticCurve{1, 1, 1, -10, -10};
    if (label == "17a" || label == "17a1") return EllipticCurve{1, -1, 1, -1, -14};
    if (label == "37a" || label == "37a1") return EllipticCurve{0, 0, 1, -1, 0};
    throw domain_error("unknown curve label: " + label);
}

} // namespace padiclab
