#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "padiclab/errors.hpp"

namespace padiclab {

// Kronecker symbol (a|n), Cohen Algorithm 1.4.10.
inline int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    static const int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1}; // (2|a) for a mod 8
    int k = 1;
    long long v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    if (v & 1) k = tab2[((a % 8) + 8) % 8];
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    for (;;) {
        if (a == 0) return (n > 1) ? 0 : k;
        v = 0;
        while ((a & 1) == 0) { a >>= 1; ++v; }
        if (v & 1) k *= tab2[((n % 8) + 8) % 8];
        if (a & n & 2) k = -k; // reciprocity
        long long r = a < 0 ? -a : a;
        a = n % r;
        n = r;
    }
}

// fundamental discriminant check: D < 0, D = 1 mod 4 squarefree, or
// D = 4m with m = 2,3 mod 4 squarefree
inline bool is_fundamental_discriminant(long long D) {
    if (D >= 0) return false;
    auto squarefree = [](long long n) {
        n = n < 0 ? -n : n;
        for (long long q = 2; q * q <= n; ++q)
            if (n % (q * q) == 0) return false;
        return true;
    };
    long long r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(D);
    if (r == 0) {
        long long m = D / 4;
        long long mr = ((m % 4) + 4) % 4;
        return (mr == 2 || mr == 3) && squarefree(m);
    }
    return false;
}

struct QuadField {
    long long D; // fundamental discriminant < 0
    int w;       // unit count: 6 for D=-3, 4 for D=-4, else 2

    explicit QuadField(long long disc) : D(disc) {
        if (!is_fundamental_discriminant(disc))
            throw domain_error("not a negative fundamental discriminant");
        w = (D == -3) ? 6 : (D == -4) ? 4 : 2;
    }

    int omega(long long n) const { return kronecker(D, n); }
};

// primitive positive-definite reduced binary quadratic form a x^2 + b xy + c y^2
struct QuadForm {
    long long a, b, c;
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    long long disc() const { return b * b - 4 * a * c; }
};

inline QuadForm reduce_form(QuadForm f) {
    for (;;) {
        // normalize: -a < b <= a
        if (f.b > f.a || f.b <= -f.a) {
            long long r = f.b % (2 * f.a);
            if (r > f.a) r -= 2 * f.a;
            if (r <= -f.a) r += 2 * f.a;
            long long q = (f.b - r) / (2 * f.a);
            f.c = f.c - q * (f.b + r) / 2;
            f.b = r;
        }
        if (f.a > f.c) {
            f = QuadForm{f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        if (f.b == -f.a) f.b = f.a; // cannot happen after normalization; guard
        return f;
    }
}

// all primitive reduced forms of discriminant Delta < 0
inline std::vector<QuadForm> reduced_forms(long long Delta) {
    if (Delta >= 0 || (((Delta % 4) + 4) % 4 != 0 && ((Delta % 4) + 4) % 4 != 1))
        throw domain_error("discriminant must be negative and 0 or 1 mod 4");
    std::vector<QuadForm> forms;
    for (long long a = 1; 3 * a * a <= -Delta; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            long long num = b * b - Delta;
            if (num % (4 * a) != 0) continue;
            long long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            forms.push_back(QuadForm{a, b, c});
        }
    }
    std::sort(forms.begin(), forms.end());
    return forms;
}

namespace detail {
// search a primitive value of f coprime to m, returning the equivalent form
// with that value as leading coefficient
inline QuadForm represent_coprime(const QuadForm& f, long long m) {
    for (long long bound = 1; bound <= 16; ++bound) {
        for (long long x = -bound; x <= bound; ++x)
            for (long long y = -bound; y <= bound; ++y) {
                if (std::max(std::llabs(x), std::llabs(y)) != bound && bound > 1) continue;
                if (std::gcd(x, y) != 1) continue;
                long long v = f.a * x * x + f.b * x * y + f.c * y * y;
                if (std::gcd(v, m) != 1) continue;
                // complete (x, y) to a unimodular matrix [[x, z], [y, w]]
                long long z = 0, w = 0;
                {
                    long long old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
                    while (r != 0) {
                        long long q = old_r / r;
                        std::swap(old_r -= q * r, r);
                        std::swap(old_s -= q * s, s);
                        std::swap(old_t -= q * t, t);
                    }
                    // old_s*x + old_t*y = gcd = +-1
                    long long g = old_r;
                    z = -old_t * g;
                    w = old_s * g;
                }
                if (x * w - y * z != 1) { z = -z; w = -w; }
                if (x * w - y * z != 1) throw domain_error("unimodular completion failed");
                long long aa = v;
                long long bb = 2 * f.a * x * z + f.b * (x * w + y * z) + 2 * f.c * y * w;
                long long cc = f.a * z * z + f.b * z * w + f.c * w * w;
                return QuadForm{aa, bb, cc};
            }
    }
    throw domain_error("no representation coprime to modulus found");
}
} // namespace detail

// Gaussian composition via united forms: bring both factors to coprime
// leading coefficients, align the middle coefficients by CRT, multiply.
inline QuadForm compose_forms(const QuadForm& f1, const QuadForm& f2) {
    if (f1.disc() != f2.disc()) throw domain_error("composition needs equal discriminants");
    long long Delta = f1.disc();
    QuadForm g1 = f1;
    QuadForm g2 = detail::represent_coprime(f2, 2 * f1.a);
    // find B = b1 mod 2a1, B = b2 mod 2a2 (solvable: b1, b2 have the parity of Delta)
    long long a1 = g1.a, a2 = g2.a;
    long long m1 = 2 * a1;
    // B = b1 + m1 * t with t = (b2 - b1)/2 * inv(a1) mod a2... work mod m2/2 pairs
    long long db = g2.b - g1.b;
    if (db % 2 != 0) throw domain_error("parity mismatch in composition");
    // solve m1 * t = db mod m2  <=>  2 a1 t = db mod 2 a2  <=>  a1 t = db/2 mod a2
    long long rhs = ((db / 2) % a2 + a2) % a2;
    long long inv = 0;
    {
        long long a = ((a1 % a2) + a2) % a2, b = a2;
        long long x0 = 1, x1 = 0;
        long long aa = a, bb = b;
        while (bb != 0) {
            long long q = aa / bb;
            std::swap(aa -= q * bb, bb);
            std::swap(x0 -= q * x1, x1);
        }
        if (aa != 1 && aa != -1) throw domain_error("leading coefficients not coprime");
        inv = (aa == 1) ? x0 : -x0;
        inv = ((inv % a2) + a2) % a2;
    }
    long long t = (__int128(rhs) * inv) % a2;
    long long B = g1.b + m1 * t;
    long long A = a1 * a2;
    // normalize B mod 2A before computing C
    long long BB = B % (2 * A);
    if (BB < 0) BB += 2 * A;
    __int128 num = __int128(BB) * BB - Delta;
    if (num % (__int128(4) * A) != 0) throw domain_error("composition alignment failed");
    long long C = static_cast<long long>(num / (__int128(4) * A));
    return reduce_form(QuadForm{A, BB, C});
}

// Pic(O_c) for the order of conductor c in the field of discriminant D,
// realized on the sorted list of primitive reduced forms of disc c^2 D.
class OrderClassGroup {
public:
    OrderClassGroup(const QuadField& field, long long conductor)
        : field_(field), c_(conductor), disc_(conductor * conductor * field.D) {
        if (conductor < 1) throw domain_error("conductor must be >= 1");
        forms_ = reduced_forms(disc_);
        h_ = static_cast<long>(forms_.size());
        table_.assign(h_ * h_, -1);
        for (long i = 0; i < h_; ++i)
            for (long j = i; j < h_; ++j) {
                long k = index_of(compose_forms(forms_[i], forms_[j]));
                table_[i * h_ + j] = k;
                table_[j * h_ + i] = k;
            }
        id_ = index_of(reduce_form(QuadForm{1, (disc_ % 2 == 0) ? 0 : 1,
                                            (disc_ % 2 == 0) ? -disc_ / 4 : (1 - disc_) / 4}));
    }

    const QuadField& field() const { return field_; }
    long long conductor() const { return c_; }
    long long disc() const { return disc_; }
    long size() const { return h_; }
    long identity() const { return id_; }
    const std::vector<QuadForm>& forms() const { return forms_; }

    long index_of(const QuadForm& f) const {
        auto it = std::lower_bound(forms_.begin(), forms_.end(), f);
        if (it == forms_.end() || !(*it == f)) throw domain_error("form not reduced/listed");
        return static_cast<long>(it - forms_.begin());
    }

    long compose(long i, long j) const { return table_[i * h_ + j]; }

    long inverse(long i) const {
        return index_of(reduce_form(QuadForm{forms_[i].a, -forms_[i].b, forms_[i].c}));
    }
    // complex conjugation on classes is inversion
    long conjugate(long i) const { return inverse(i); }

    long power(long i, long long k) const {
        long r = id_, b = i;
        long long kk = ((k % exponent_bound()) + exponent_bound()) % exponent_bound();
        while (kk > 0) {
            if (kk & 1) r = compose(r, b);
            b = compose(b, b);
            kk >>= 1;
        }
        return r;
    }

    long order_of(long i) const {
        long r = i;
        long n = 1;
        while (r != id_) { r = compose(r, i); ++n; }
        return n;
    }

    // number of units in the order: +-1 except for the maximal orders of
    // Q(i) and Q(sqrt(-3))
    int unit_count() const { return c_ == 1 ? field_.w : 2; }

    // r_A(n): proper ideals of norm n in the class of forms_[i], counted by
    // lattice representations f(x, y) = n divided by the unit count
    long ideal_count(long i, long long n) const {
        if (n <= 0) throw domain_error("norm must be positive");
        if (std::gcd(n, c_) != 1)
            throw domain_error("ideal counts require gcd(n, conductor) = 1");
        return representation_count(forms_[i], n) / unit_count();
    }

    long long representation_count(const QuadForm& f, long long n) const {
        // 4a*f(x,y) = (2ax + by)^2 + |Delta| y^2
        long long count = 0;
        long long fourAn = 4 * f.a * n;
        long long ad = -disc_;
        for (long long y = 0; y * y * ad <= fourAn; ++y) {
            long long rest = fourAn - y * y * ad;
            long long s = static_cast<long long>(std::llround(std::sqrt(double(rest))));
            while (s * s < rest) ++s;
            while (s > 0 && s * s > rest) --s;
            if (s * s != rest) continue;
            // 2ax + by = +-s
            for (int sign = 0; sign < (s == 0 ? 1 : 2); ++sign) {
                long long rhs = (sign == 0 ? s : -s) - f.b * y;
                if (rhs % (2 * f.a) != 0) continue;
                count += (y == 0) ? 1 : 2; // (x, y) and (-x, -y) for y > 0
            }
        }
        return count;
    }

private:
    long long exponent_bound() const { return h_; }

    QuadField field_;
    long long c_;
    long long disc_;
    std::vector<QuadForm> forms_;
    std::vector<long> table_;
    long h_ = 0;
    long id_ = 0;
};

// class number of the order of conductor c from the maximal-order class
// number: h(O_c) = h(D) * c * prod_{l | c} (1 - (D|l)/l) / [O_K^* : O_c^*]
inline long order_class_number_formula(const QuadField& K, long long h_max, long long c) {
    long long h = h_max * c;
    long long denom = 1;
    long long cc = c;
    for (long long l = 2; l * l <= cc; ++l) {
        if (cc % l) continue;
        h -= (h / l) * K.omega(l);
        while (cc % l == 0) cc /= l;
    }
    if (cc > 1) h -= (h / cc) * K.omega(cc);
    if (c > 1) denom = K.w / 2;
    return static_cast<long>(h / denom);
}

} // namespace padiclab
