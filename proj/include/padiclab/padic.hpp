#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "padiclab/errors.hpp"
#include "padiclab/rootu.hpp"

namespace padiclab {

class PadicRing;
using RingPtr = std::shared_ptr<const PadicRing>;

// Coefficient ring Z_p (level 0) or the cyclotomic Eisenstein extension
// Z_p[x]/(Phi_{p^m}(x+1)) with uniformizer pi = x (level m >= 1).  Every
// character value of p-power order that the library needs lives in one of
// these rings, so no other extensions are represented.
//
// Elements are polynomials in pi of degree < e, e = phi(p^m), with an
// absolute precision N: the element is known modulo pi^N, coefficients
// reduced modulo p^ceil(N/e).  Rings are immutable after construction.
class PadicRing : public std::enable_shared_from_this<PadicRing> {
public:
    long p;
    int level;                      // m
    long e;                         // ramification index phi(p^m)
    std::vector<mpz_class> modulus; // Phi_{p^m}(x+1), monic, size e+1 (level >= 1)

    static RingPtr make(long p, int m) {
        return RingPtr(new PadicRing(p, m));
    }

    bool same_as(const PadicRing& o) const { return p == o.p && level == o.level; }

    const mpz_class& p_power(long k) const {
        if (k < 0) throw domain_error("negative p power");
        if (k < static_cast<long>(p_powers_.size())) return p_powers_[k];
        throw precision_error("requested precision exceeds ring table; raise ring cap");
    }

    // modulus coefficients divided by p (Eisenstein), used for pi^e = -p*w0
    const std::vector<mpz_class>& eisenstein_quotient() const { return eis_div_p_; }

    long smallest_primitive_root() const { return prim_root_; }

private:
    PadicRing(long p_, int m) : p(p_), level(m) {
        if (p < 5 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) == 0)
            throw domain_error("p must be a prime >= 5");
        if (m < 0) throw domain_error("extension level must be >= 0");
        e = 1;
        for (int i = 0; i < m - 1; ++i) e *= p;
        if (m >= 1) e *= (p - 1);
        if (m >= 1) build_modulus();
        // coefficient moduli p^K; K = ceil(N/e) stays small at desk scale,
        // the cap only bounds the cached table
        long cap = 4 * kDefaultPrecisionPerE + 68;
        p_powers_.resize(cap + 1);
        p_powers_[0] = 1;
        for (long k = 1; k <= cap; ++k) p_powers_[k] = p_powers_[k - 1] * p;
        prim_root_ = find_primitive_root();
    }

    void build_modulus() {
        // Phi_{p^m}(x) = sum_{i<p} x^(i*p^(m-1)); expand at x+1
        long step = e / (p - 1); // p^(m-1)
        std::vector<mpz_class> phi(e + 1, 0);
        // accumulate (x+1)^(i*step) for i = 0..p-1
        for (long i = 0; i < p; ++i) {
            long n = i * step;
            mpz_class binom = 1;
            for (long j = 0; j <= n; ++j) {
                phi[j] += binom;
                // binom(n, j+1) = binom(n, j) * (n - j) / (j + 1)
                binom *= (n - j);
                binom /= (j + 1);
            }
        }
        modulus = std::move(phi);
        if (modulus[e] != 1) throw domain_error("cyclotomic modulus not monic");
        eis_div_p_.resize(e);
        for (long i = 0; i < e; ++i) {
            if (modulus[i] % p != 0) throw domain_error("modulus not Eisenstein");
            eis_div_p_[i] = modulus[i] / p;
        }
        if (eis_div_p_[0] != 1) throw domain_error("modulus constant term is not p");
    }

    long find_primitive_root() const {
        std::vector<long> qs;
        long n = p - 1;
        for (long q = 2; q * q <= n; ++q)
            if (n % q == 0) {
                qs.push_back(q);
                while (n % q == 0) n /= q;
            }
        if (n > 1) qs.push_back(n);
        for (long g = 2; g < p; ++g) {
            bool ok = true;
            for (long q : qs) {
                mpz_class r;
                mpz_powm_ui(r.get_mpz_t(), mpz_class(g).get_mpz_t(), (p - 1) / q,
                            mpz_class(p).get_mpz_t());
                if (r == 1) { ok = false; break; }
            }
            if (ok) return g;
        }
        throw domain_error("no primitive root found");
    }

    std::vector<mpz_class> p_powers_;
    std::vector<mpz_class> eis_div_p_;
    long prim_root_ = 0;

public:
    static constexpr long kDefaultPrecisionPerE = 20;
    long default_precision() const { return kDefaultPrecisionPerE * e; }
};

inline RingPtr make_ring(long p, int m) { return PadicRing::make(p, m); }

namespace detail {
inline long pow_long(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
} // namespace detail

class PadicElement {
public:
    PadicElement() = default;

    PadicElement(RingPtr ring, long prec) : ring_(std::move(ring)), prec_(prec), c_(ring_->e, 0) {
        if (prec_ < 0) throw domain_error("negative precision");
    }

    static PadicElement from_integer(const RingPtr& ring, const mpz_class& v, long prec) {
        PadicElement x(ring, prec);
        x.c_[0] = v;
        x.reduce();
        return x;
    }
    static PadicElement from_integer(const RingPtr& ring, long v, long prec) {
        return from_integer(ring, mpz_class(v), prec);
    }
    static PadicElement from_coeffs(const RingPtr& ring, std::vector<mpz_class> cs, long prec) {
        PadicElement x(ring, prec);
        if (static_cast<long>(cs.size()) > ring->e) throw domain_error("coefficient vector too long");
        for (std::size_t i = 0; i < cs.size(); ++i) x.c_[i] = cs[i];
        x.reduce();
        return x;
    }

    const RingPtr& ring() const { return ring_; }
    long precision() const { return prec_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }

    long coeff_modulus_exponent() const { return (prec_ + ring_->e - 1) / ring_->e; }

    bool is_zero_at_precision() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }

    // pi-adic valuation of the reduced representative, capped at the
    // precision; nullopt means zero at precision ("v >= N")
    std::optional<long> valuation() const {
        long best = -1;
        for (long i = 0; i < ring_->e; ++i) {
            if (c_[i] == 0) continue;
            mpz_class t = c_[i];
            long vp = 0;
            while (mpz_divisible_ui_p(t.get_mpz_t(), ring_->p)) {
                t /= ring_->p;
                ++vp;
            }
            long v = ring_->e * vp + i;
            if (best < 0 || v < best) best = v;
        }
        if (best < 0 || best >= prec_) return std::nullopt;
        return best;
    }

    // valuation lower bound used by precision propagation (zero -> N)
    long valuation_floor() const {
        auto v = valuation();
        return v ? *v : prec_;
    }

    PadicElement with_precision(long new_prec) const {
        if (new_prec > prec_)
            throw precision_error("cannot increase precision of a p-adic element");
        PadicElement r = *this;
        r.prec_ = new_prec;
        r.reduce();
        return r;
    }

    PadicElement clamp_precision(long cap) const {
        return cap >= prec_ ? *this : with_precision(cap);
    }

    friend PadicElement operator+(const PadicElement& a, const PadicElement& b) {
        a.check_same_ring(b);
        PadicElement r(a.ring_, std::min(a.prec_, b.prec_));
        for (long i = 0; i < a.ring_->e; ++i) r.c_[i] = a.c_[i] + b.c_[i];
        r.reduce();
        return r;
    }
    friend PadicElement operator-(const PadicElement& a, const PadicElement& b) {
        a.check_same_ring(b);
        PadicElement r(a.ring_, std::min(a.prec_, b.prec_));
        for (long i = 0; i < a.ring_->e; ++i) r.c_[i] = a.c_[i] - b.c_[i];
        r.reduce();
        return r;
    }
    PadicElement operator-() const {
        PadicElement r(ring_, prec_);
        for (long i = 0; i < ring_->e; ++i) r.c_[i] = -c_[i];
        r.reduce();
        return r;
    }

    friend PadicElement operator*(const PadicElement& a, const PadicElement& b) {
        a.check_same_ring(b);
        long e = a.ring_->e;
        long prec = std::min(a.valuation_floor() + b.prec_, b.valuation_floor() + a.prec_);
        PadicElement r(a.ring_, prec);
        if (e == 1) {
            r.c_[0] = a.c_[0] * b.c_[0];
        } else {
            std::vector<mpz_class> t(2 * e - 1, 0);
            for (long i = 0; i < e; ++i) {
                if (a.c_[i] == 0) continue;
                for (long j = 0; j < e; ++j) {
                    if (b.c_[j] == 0) continue;
                    t[i + j] += a.c_[i] * b.c_[j];
                }
            }
            // reduce modulo the monic Eisenstein modulus
            const auto& mod = a.ring_->modulus;
            for (long d = 2 * e - 2; d >= e; --d) {
                if (t[d] == 0) continue;
                for (long j = 0; j < e; ++j) t[d - e + j] -= t[d] * mod[j];
                t[d] = 0;
            }
            for (long i = 0; i < e; ++i) r.c_[i] = t[i];
        }
        r.reduce();
        return r;
    }

    PadicElement scaled(const mpz_class& k) const {
        PadicElement r(ring_, prec_);
        for (long i = 0; i < ring_->e; ++i) r.c_[i] = c_[i] * k;
        r.reduce();
        return r;
    }

    // multiplicative inverse of a unit (valuation 0), by Hensel lifting
    PadicElement invert() const {
        auto v = valuation();
        if (!v || *v != 0) throw domain_error("cannot invert a non-unit p-adic element");
        long K = coeff_modulus_exponent();
        // inverse of the residue mod pi: constant term mod p
        mpz_class a0 = c_[0] % ring_->p;
        if (a0 < 0) a0 += ring_->p;
        mpz_class inv0;
        if (mpz_invert(inv0.get_mpz_t(), a0.get_mpz_t(), mpz_class(ring_->p).get_mpz_t()) == 0)
            throw domain_error("cannot invert a non-unit p-adic element");
        PadicElement y = from_integer(ring_, inv0, prec_);
        PadicElement two = from_integer(ring_, 2, prec_);
        // each pass doubles the pi-adic accuracy of y
        long passes = 1;
        while ((1L << passes) < prec_ + 1 && passes < 62) ++passes;
        for (long i = 0; i <= passes; ++i) {
            PadicElement t = two - (*this) * y;
            y = (y * t).with_precision(prec_);
        }
        (void)K;
        return y;
    }

    PadicElement pow(long k) const {
        if (k < 0) return invert().pow(-k);
        PadicElement r = from_integer(ring_, 1, prec_);
        PadicElement b = *this;
        while (k > 0) {
            if (k & 1) r = (r * b).with_precision(std::min(r.precision(), prec_));
            b = (b * b).with_precision(std::min(b.precision(), prec_ + ring_->e));
            k >>= 1;
        }
        return r.with_precision(std::min(r.precision(), prec_));
    }

    bool equals_at_precision(const PadicElement& o) const {
        check_same_ring(o);
        return (*this - o).is_zero_at_precision();
    }

private:
    void check_same_ring(const PadicElement& o) const {
        if (!ring_ || !o.ring_ || !ring_->same_as(*o.ring_))
            throw domain_error("mixed-ring arithmetic requires an explicit embedding");
    }

    // canonical representative of O/pi^N: coefficient of pi^i is reduced
    // modulo p^ceil((N-i)/e), so v(x) >= N holds exactly when all stored
    // coefficients are zero
    void reduce() {
        long e = ring_->e;
        for (long i = 0; i < e; ++i) {
            long Ki = prec_ > i ? (prec_ - i + e - 1) / e : 0;
            if (Ki <= 0) { c_[i] = 0; continue; }
            const mpz_class& pk = ring_->p_power(Ki);
            c_[i] %= pk;
            if (c_[i] < 0) c_[i] += pk;
        }
    }

    RingPtr ring_;
    long prec_ = 0;
    std::vector<mpz_class> c_;

    friend PadicElement uniformizer(const RingPtr&, long);
    friend PadicElement div_uniformizer_pow(const PadicElement&, long);
};

inline PadicElement uniformizer(const RingPtr& ring, long prec) {
    PadicElement x(ring, prec);
    if (ring->e == 1) x.c_[0] = ring->p;
    else x.c_[1] = 1;
    x.reduce();
    return x;
}

// zeta_{p^m} = pi + 1
inline PadicElement principal_root(const RingPtr& ring, long prec) {
    if (ring->level == 0) return PadicElement::from_integer(ring, 1, prec);
    return uniformizer(ring, prec) + PadicElement::from_integer(ring, 1, prec);
}

// exact division by pi^mu; requires valuation >= mu
inline PadicElement div_uniformizer_pow(const PadicElement& x, long mu) {
    if (mu == 0) return x;
    if (mu < 0) throw domain_error("negative uniformizer exponent");
    const RingPtr& R = x.ring();
    if (x.valuation_floor() < mu)
        throw domain_error("division by pi^mu needs valuation >= mu");
    long N = x.precision();
    if (N <= mu) throw precision_error("insufficient precision for division by pi^mu");
    if (R->e == 1) {
        PadicElement r(R, N - mu);
        mpz_class q = x.coeffs()[0];
        const mpz_class& pm = R->p_power(mu);
        if (!mpz_divisible_p(q.get_mpz_t(), pm.get_mpz_t()))
            throw domain_error("representative not divisible by p^mu");
        r.c_[0] = q / pm;
        r.reduce();
        return r;
    }
    // x / pi^mu = (-1)^mu * (x * pi^((e-1)mu) / p^mu) * w0^(-mu), pi^e = -p*w0
    long e = R->e;
    PadicElement pi = uniformizer(R, N + e * mu);
    PadicElement y = x * pi.pow((e - 1) * mu); // precision N + (e-1)mu
    PadicElement w0(R, N);
    {
        const auto& q = R->eisenstein_quotient();
        std::vector<mpz_class> cs(e);
        for (long i = 0; i < e; ++i) cs[i] = q[i];
        w0 = PadicElement::from_coeffs(R, cs, N);
    }
    PadicElement z(R, y.precision() - e * mu);
    {
        const mpz_class& pm = R->p_power(mu);
        std::vector<mpz_class> cs(e);
        for (long i = 0; i < e; ++i) {
            mpz_class q = y.coeffs()[i];
            if (!mpz_divisible_p(q.get_mpz_t(), pm.get_mpz_t()))
                throw domain_error("representative not divisible by p^mu");
            cs[i] = q / pm;
        }
        z = PadicElement::from_coeffs(R, cs, y.precision() - e * mu);
    }
    PadicElement w = w0.invert().pow(mu);
    PadicElement r = (z * w).with_precision(N - mu);
    if (mu & 1) r = -r;
    return r;
}

// Teichmuller lift: the (p-1)-st root of unity congruent to k mod p
inline PadicElement teichmuller(const RingPtr& ring, long k, long prec) {
    long p = ring->p;
    long kp = k % p;
    if (kp < 0) kp += p;
    if (kp == 0) throw domain_error("teichmuller lift needs k coprime to p");
    long K = (prec + ring->e - 1) / ring->e;
    const mpz_class& pk = ring->p_power(K);
    mpz_class t(kp), prev;
    for (long i = 0; i <= K + 1; ++i) {
        prev = t;
        mpz_powm_ui(t.get_mpz_t(), t.get_mpz_t(), p, pk.get_mpz_t());
        if (t == prev) break;
    }
    return PadicElement::from_integer(ring, t, ring->e * K).with_precision(prec);
}

// embed an element of Z_p (level 0) or a lower-level ring into `target`
inline PadicElement embed(const PadicElement& x, const RingPtr& target) {
    const RingPtr& S = x.ring();
    if (S->p != target->p) throw domain_error("embedding requires equal residue characteristic");
    if (S->level > target->level) throw domain_error("cannot embed into a smaller ring");
    if (S->level == target->level) return x;
    long scale = target->e / S->e;
    long new_prec = x.precision() * scale;
    if (S->level == 0) {
        return PadicElement::from_integer(target, x.coeffs()[0], new_prec);
    }
    // pi_S maps to (1+pi_T)^(p^(mT-mS)) - 1
    long steps = 1;
    for (int i = 0; i < target->level - S->level; ++i) steps *= target->p;
    PadicElement img = principal_root(target, new_prec).pow(steps) -
                       PadicElement::from_integer(target, 1, new_prec);
    PadicElement acc(target, new_prec);
    for (long i = S->e - 1; i >= 0; --i) {
        acc = acc * img + PadicElement::from_integer(target, x.coeffs()[i], new_prec);
        acc = acc.with_precision(std::min(acc.precision(), new_prec));
    }
    return acc;
}

// realize an exact root-of-unity label in `ring`; the tame part goes through
// the Teichmuller lift of the smallest primitive root mod p, the wild part
// through powers of zeta_{p^m} = pi + 1
inline PadicElement realize(const RootOfUnity& z, const RingPtr& ring, long prec) {
    long long d = z.order;
    long long ps = 1;
    while (d % ring->p == 0) { d /= ring->p; ps *= ring->p; }
    long long dt = d; // tame order
    if ((ring->p - 1) % dt != 0)
        throw precision_error("ring-too-small: tame character order does not divide p-1");
    long s = 0;
    {
        long long t = ps;
        while (t > 1) { t /= ring->p; ++s; }
    }
    if (s > ring->level)
        throw precision_error("ring-too-small: raise the cyclotomic level of the ring");
    // split the exponent: k/order = (k*u)/dt + (k*v)/p^s with u*p^s + v*dt = 1
    long long u = 0, v = 0;
    {
        long long a = ps, b = dt;
        long long x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (b != 0) {
            long long q = a / b;
            long long r = a - q * b;
            a = b; b = r;
            long long nx = x0 - q * x1; x0 = x1; x1 = nx;
            long long ny = y0 - q * y1; y0 = y1; y1 = ny;
        }
        u = x0; v = y0; // u*ps + v*dt = 1
    }
    PadicElement out = PadicElement::from_integer(ring, 1, prec);
    if (dt > 1) {
        long long et = ((z.exp % dt) * ((u % dt) + dt)) % dt;
        PadicElement prim = teichmuller(ring, ring->smallest_primitive_root(), prec);
        out = out * prim.pow((ring->p - 1) / dt * et);
    }
    if (s > 0) {
        long long ew = ((z.exp % ps) * ((v % ps) + ps)) % ps;
        long steps = 1;
        for (long i = 0; i < ring->level - s; ++i) steps *= ring->p;
        PadicElement zz = principal_root(ring, prec).pow(steps); // order p^s
        out = out * zz.pow(ew);
    }
    return out.with_precision(prec);
}

inline PadicElement random_element(const RingPtr& ring, long prec, std::mt19937_64& rng) {
    PadicElement x(ring, prec);
    long K = (prec + ring->e - 1) / ring->e;
    const mpz_class& pk = ring->p_power(K);
    std::vector<mpz_class> cs(ring->e);
    for (auto& c : cs) {
        mpz_class acc = 0;
        for (int limb = 0; limb < (K * 3) / 18 + 1; ++limb)
            acc = (acc << 32) + static_cast<unsigned long>(rng() & 0xffffffffULL);
        c = acc % pk;
    }
    return PadicElement::from_coeffs(ring, cs, prec);
}

inline PadicElement random_unit(const RingPtr& ring, long prec, std::mt19937_64& rng) {
    for (;;) {
        PadicElement x = random_element(ring, prec, rng);
        auto v = x.valuation();
        if (v && *v == 0) return x;
    }
}

} // namespace padiclab
