#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <tuple>

#include "padiclab/errors.hpp"

namespace padiclab {

// Exact root-of-unity label e^(2*pi*i*exp/order), kept in lowest terms.
// Character values are carried around symbolically as labels and only
// realized (as complex doubles or as p-adic elements) on demand.
struct RootOfUnity {
    long long order = 1; // exact multiplicative order after reduction
    long long exp = 0;   // exponent, 0 <= exp < order, gcd(exp, order) == 1 unless exp == 0

    RootOfUnity() = default;
    RootOfUnity(long long d, long long k) : order(d), exp(k) { reduce(); }

    static RootOfUnity one() { return RootOfUnity(); }
    static RootOfUnity minus_one() { return RootOfUnity(2, 1); }

    void reduce() {
        if (order <= 0) throw domain_error("root of unity: order must be positive");
        exp %= order;
        if (exp < 0) exp += order;
        if (exp == 0) { order = 1; return; }
        long long g = std::gcd(exp, order);
        exp /= g;
        order /= g;
    }

    bool is_one() const { return order == 1; }

    friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
        long long l = std::lcm(a.order, b.order);
        return RootOfUnity(l, a.exp * (l / a.order) + b.exp * (l / b.order));
    }

    RootOfUnity pow(long long k) const {
        long long r = k % order;
        return RootOfUnity(order, r * 1LL * exp % order * 1LL); // order <= ~1e6 at desk scale
    }

    RootOfUnity inverse() const { return RootOfUnity(order, order - exp); }
    RootOfUnity conj() const { return inverse(); }

    bool operator==(const RootOfUnity& o) const { return order == o.order && exp == o.exp; }
    bool operator!=(const RootOfUnity& o) const { return !(*this == o); }

    std::complex<double> to_complex() const {
        return std::polar(1.0, 2.0 * 3.14159265358979323846 * double(exp) / double(order));
    }

    // true when the label is +1 or -1
    bool is_real_sign() const { return order <= 2; }
    int real_sign() const {
        if (order == 1) return 1;
        if (order == 2) return -1;
        throw domain_error("root of unity is not +-1");
    }
};

} // namespace padiclab
