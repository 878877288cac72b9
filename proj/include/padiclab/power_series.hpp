#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "padiclab/padic.hpp"

namespace padiclab {

// One-variable power series over a PadicRing, truncated at T^t_order.
// All coefficients are held at one common absolute precision.
class TruncatedSeries1 {
public:
    TruncatedSeries1() = default;
    TruncatedSeries1(RingPtr ring, long t_order, long prec)
        : ring_(std::move(ring)), t_(t_order), prec_(prec),
          c_(t_, PadicElement(ring_, prec_)) {
        if (t_ <= 0) throw domain_error("truncation order must be positive");
    }
    static TruncatedSeries1 from_coeffs(RingPtr ring, std::vector<PadicElement> cs) {
        if (cs.empty()) throw domain_error("empty coefficient list");
        long prec = cs[0].precision();
        for (const auto& c : cs) prec = std::min(prec, c.precision());
        TruncatedSeries1 s(std::move(ring), static_cast<long>(cs.size()), prec);
        for (std::size_t k = 0; k < cs.size(); ++k) s.c_[k] = cs[k].with_precision(prec);
        return s;
    }

    const RingPtr& ring() const { return ring_; }
    long t_order() const { return t_; }
    long precision() const { return prec_; }
    const PadicElement& operator[](long k) const { return c_[k]; }
    void set(long k, const PadicElement& v) { c_[k] = v.with_precision(prec_); }

    bool is_zero_at_precision() const {
        return std::all_of(c_.begin(), c_.end(),
                           [](const PadicElement& x) { return x.is_zero_at_precision(); });
    }

    TruncatedSeries1 with_precision(long np) const {
        TruncatedSeries1 r(ring_, t_, np);
        for (long k = 0; k < t_; ++k) r.c_[k] = c_[k].with_precision(np);
        return r;
    }
    TruncatedSeries1 truncated(long nt) const {
        TruncatedSeries1 r(ring_, nt, prec_);
        for (long k = 0; k < std::min(nt, t_); ++k) r.c_[k] = c_[k];
        return r;
    }

    friend TruncatedSeries1 operator+(const TruncatedSeries1& a, const TruncatedSeries1& b) {
        long t = std::min(a.t_, b.t_);
        TruncatedSeries1 r(a.ring_, t, std::min(a.prec_, b.prec_));
        for (long k = 0; k < t; ++k) r.c_[k] = (a.c_[k] + b.c_[k]).with_precision(r.prec_);
        return r;
    }
    friend TruncatedSeries1 operator-(const TruncatedSeries1& a, const TruncatedSeries1& b) {
        long t = std::min(a.t_, b.t_);
        TruncatedSeries1 r(a.ring_, t, std::min(a.prec_, b.prec_));
        for (long k = 0; k < t; ++k) r.c_[k] = (a.c_[k] - b.c_[k]).with_precision(r.prec_);
        return r;
    }
    // minimal coefficient valuation (the series precision when zero)
    long min_valuation_floor() const {
        long v = prec_;
        for (const auto& c : c_) v = std::min(v, c.valuation_floor());
        return v;
    }

    friend TruncatedSeries1 operator*(const TruncatedSeries1& a, const TruncatedSeries1& b) {
        long t = std::min(a.t_, b.t_);
        // high-valuation factors carry their pi-power into the precision
        long prec = std::min(a.min_valuation_floor() + b.prec_,
                             b.min_valuation_floor() + a.prec_);
        TruncatedSeries1 r(a.ring_, t, prec);
        for (long i = 0; i < t; ++i) {
            if (a.c_[i].is_zero_at_precision()) continue;
            for (long j = 0; i + j < t; ++j) {
                if (b.c_[j].is_zero_at_precision()) continue;
                r.c_[i + j] = (r.c_[i + j] + a.c_[i] * b.c_[j]).clamp_precision(prec);
            }
        }
        return r;
    }

    TruncatedSeries1 scaled(const PadicElement& u) const {
        std::vector<PadicElement> cs;
        cs.reserve(t_);
        for (long k = 0; k < t_; ++k) cs.push_back(c_[k] * u);
        return from_coeffs(ring_, std::move(cs));
    }

    // substitute T := z, |z| < 1 (positive valuation or zero at precision);
    // the discarded tail contributes pi^(v(z) * t_order)
    PadicElement evaluate(const PadicElement& z) const {
        long vz = z.valuation_floor();
        if (!z.is_zero_at_precision() && vz <= 0)
            throw domain_error("divergent substitution: value must lie in the maximal ideal");
        long cap = (vz >= (prec_ + t_ - 1) / t_) ? prec_ : std::min(prec_, vz * t_);
        PadicElement zz = (vz >= cap) ? PadicElement(ring_, cap) : z;
        PadicElement acc(ring_, cap);
        for (long k = t_ - 1; k >= 0; --k)
            acc = (acc * zz + c_[k]).clamp_precision(cap);
        return acc;
    }

    bool equals_at_precision(const TruncatedSeries1& o) const {
        long t = std::min(t_, o.t_);
        for (long k = 0; k < t; ++k)
            if (!c_[k].equals_at_precision(o.c_[k])) return false;
        return true;
    }

private:
    RingPtr ring_;
    long t_ = 0;
    long prec_ = 0;
    std::vector<PadicElement> c_;
};

inline TruncatedSeries1 series_one(const RingPtr& ring, long t, long prec) {
    TruncatedSeries1 s(ring, t, prec);
    s.set(0, PadicElement::from_integer(ring, 1, prec));
    return s;
}

// multiplicative inverse of a unit series (unit constant term)
inline TruncatedSeries1 invert_series(const TruncatedSeries1& b) {
    auto v0 = b[0].valuation();
    if (!v0 || *v0 != 0) throw domain_error("series inverse needs a unit constant term");
    long t = b.t_order(), prec = b.precision();
    PadicElement u0 = b[0].invert();
    TruncatedSeries1 r(b.ring(), t, prec);
    r.set(0, u0);
    for (long k = 1; k < t; ++k) {
        PadicElement acc(b.ring(), prec);
        for (long j = 1; j <= k; ++j)
            acc = (acc + b[j] * r[k - j]).with_precision(prec);
        r.set(k, (-(u0 * acc)).with_precision(prec));
    }
    return r;
}

// divide every coefficient by pi^mu
inline TruncatedSeries1 series_div_uniformizer(const TruncatedSeries1& s, long mu) {
    if (mu == 0) return s;
    std::vector<PadicElement> cs;
    cs.reserve(s.t_order());
    for (long k = 0; k < s.t_order(); ++k) cs.push_back(div_uniformizer_pow(s[k], mu));
    return TruncatedSeries1::from_coeffs(s.ring(), std::move(cs));
}

// infinite Weierstrass degree is the stated convention for series that are
// zero at the working precision
struct WDegree {
    bool finite = true;
    long value = 0;
    static WDegree infinite() { return WDegree{false, 0}; }
    bool operator==(const WDegree& o) const {
        return finite == o.finite && (!finite || value == o.value);
    }
};

struct ValuationScan {
    long mu;     // minimal coefficient valuation
    long lambda; // first index attaining mu
};

inline std::optional<ValuationScan> scan_valuations(const TruncatedSeries1& g) {
    long mu = -1, lambda = -1;
    for (long k = 0; k < g.t_order(); ++k) {
        auto v = g[k].valuation();
        if (!v) continue;
        if (mu < 0 || *v < mu) { mu = *v; lambda = k; }
    }
    if (mu < 0) return std::nullopt;
    return ValuationScan{mu, lambda};
}

// lambda from the valuation scan; infinite when zero at precision
inline WDegree weierstrass_degree(const TruncatedSeries1& g) {
    auto s = scan_valuations(g);
    if (!s) return WDegree::infinite();
    return WDegree{true, s->lambda};
}

struct WeierstrassFactorization {
    long mu = 0;                             // uniformizer exponent
    std::vector<PadicElement> distinguished; // monic, lower coefficients in (pi)
    TruncatedSeries1 unit;                   // unit power series
    long lambda = 0;                         // degree of the distinguished factor
};

// Weierstrass division: h = q*g + r with deg r < lambda, g of minimal
// coefficient valuation 0 attained first at `lambda`.  The quotient is
// refined by repeated splitting at degree lambda; every pass gains at
// least one power of pi, so at most prec passes are needed.
inline void weierstrass_divide(const TruncatedSeries1& h, const TruncatedSeries1& g, long lambda,
                               TruncatedSeries1& q_out, std::vector<PadicElement>& r_out) {
    long t = g.t_order();
    long prec = std::min(h.precision(), g.precision());
    const RingPtr& R = g.ring();
    // g = A + T^lambda * B with A of degree < lambda (coefficients in (pi)), B a unit series
    TruncatedSeries1 B(R, t, prec);
    for (long k = lambda; k < t; ++k) B.set(k - lambda, g[k]);
    TruncatedSeries1 Binv = invert_series(B);
    TruncatedSeries1 A(R, t, prec);
    for (long k = 0; k < lambda; ++k) A.set(k, g[k]);

    TruncatedSeries1 q(R, t, prec);
    TruncatedSeries1 rem = h.truncated(t).with_precision(prec);
    long max_pass = 2 * prec + 4;
    for (long pass = 0; pass < max_pass; ++pass) {
        // rem = r + T^lambda * s
        TruncatedSeries1 s(R, t, rem.precision());
        bool s_zero = true;
        for (long k = lambda; k < t; ++k) {
            s.set(k - lambda, rem[k]);
            if (!rem[k].is_zero_at_precision()) s_zero = false;
        }
        if (s_zero) break;
        TruncatedSeries1 dq = s * Binv;
        q = (q + dq).with_precision(prec);
        // rem <- rem - dq*(A + T^lambda B); the T^(>=lambda) part of the
        // update cancels s exactly, leaving -dq*A which gains a pi
        TruncatedSeries1 upd = dq * A;
        TruncatedSeries1 nrem(R, t, std::min(rem.precision(), upd.precision()));
        for (long k = 0; k < lambda; ++k) nrem.set(k, rem[k] - upd[k]);
        for (long k = lambda; k < t; ++k) nrem.set(k, -upd[k]); // high part of rem cancels s
        rem = nrem;
        if (pass + 1 == max_pass)
            throw precision_error("weierstrass division did not stabilize at precision");
    }
    q_out = q;
    r_out.clear();
    for (long k = 0; k < lambda; ++k) r_out.push_back(rem[k]);
}

// g = pi^mu * f * u with f distinguished of degree lambda and u a unit.
inline WeierstrassFactorization weierstrass_prepare(const TruncatedSeries1& g) {
    auto scan = scan_valuations(g);
    if (!scan)
        throw precision_error("insufficient-precision: all coefficients vanish at precision");
    long mu = scan->mu, lambda = scan->lambda;
    TruncatedSeries1 g1 = mu ? series_div_uniformizer(g, mu) : g;
    if (lambda >= g1.t_order())
        throw precision_error("insufficient-truncation: distinguished degree reaches t_order");

    // divide T^lambda by g1: T^lambda = q*g1 + r, then f = T^lambda - r = q*g1
    TruncatedSeries1 h(g1.ring(), g1.t_order(), g1.precision());
    h.set(lambda, PadicElement::from_integer(g1.ring(), 1, g1.precision()));
    TruncatedSeries1 q(g1.ring(), g1.t_order(), g1.precision());
    std::vector<PadicElement> r;
    weierstrass_divide(h, g1, lambda, q, r);

    WeierstrassFactorization out;
    out.mu = mu;
    out.lambda = lambda;
    out.distinguished.reserve(lambda + 1);
    for (long k = 0; k < lambda; ++k) out.distinguished.push_back(-r[k]);
    out.distinguished.push_back(PadicElement::from_integer(g1.ring(), 1, g1.precision()));
    for (long k = 0; k < lambda; ++k) {
        auto v = out.distinguished[k].valuation();
        if (v && *v == 0)
            throw precision_error("weierstrass division produced a non-distinguished factor");
    }
    out.unit = invert_series(q);
    return out;
}

inline TruncatedSeries1 poly_to_series(const RingPtr& R, const std::vector<PadicElement>& f,
                                       long t, long prec) {
    for (const auto& x : f) prec = std::min(prec, x.precision());
    TruncatedSeries1 s(R, t, prec);
    for (std::size_t k = 0; k < f.size() && static_cast<long>(k) < t; ++k)
        s.set(static_cast<long>(k), f[k].with_precision(prec));
    return s;
}

inline TruncatedSeries1 reconstruct(const WeierstrassFactorization& w, long t) {
    const RingPtr& R = w.unit.ring();
    long prec = w.unit.precision();
    TruncatedSeries1 f = poly_to_series(R, w.distinguished, t, prec);
    TruncatedSeries1 g = f * w.unit.truncated(t);
    PadicElement pimu = uniformizer(R, prec + w.mu).pow(w.mu);
    return g.scaled(pimu);
}

// ---------------------------------------------------------------------------
// two-variable series

// Truncated element of O[[T1, T2]], coefficient of T1^i T2^j at (i, j),
// row-major with ascending powers.
class TruncatedSeries2 {
public:
    TruncatedSeries2() = default;
    TruncatedSeries2(RingPtr ring, long t1, long t2, long prec)
        : ring_(std::move(ring)), t1_(t1), t2_(t2), prec_(prec),
          c_(t1_ * t2_, PadicElement(ring_, prec_)) {
        if (t1 <= 0 || t2 <= 0) throw domain_error("truncation orders must be positive");
    }

    const RingPtr& ring() const { return ring_; }
    long t1() const { return t1_; }
    long t2() const { return t2_; }
    long precision() const { return prec_; }
    const PadicElement& at(long i, long j) const { return c_[i * t2_ + j]; }
    void set(long i, long j, const PadicElement& v) { c_[i * t2_ + j] = v.clamp_precision(prec_); }

    bool is_zero_at_precision() const {
        return std::all_of(c_.begin(), c_.end(),
                           [](const PadicElement& x) { return x.is_zero_at_precision(); });
    }

    // coefficient series of T_series_axis^k, a series in the other variable
    TruncatedSeries1 coefficient_series(int series_axis, long k) const {
        if (series_axis == 1) {
            TruncatedSeries1 s(ring_, t2_, prec_);
            for (long j = 0; j < t2_; ++j) s.set(j, at(k, j));
            return s;
        }
        TruncatedSeries1 s(ring_, t1_, prec_);
        for (long i = 0; i < t1_; ++i) s.set(i, at(i, k));
        return s;
    }

    friend TruncatedSeries2 operator+(const TruncatedSeries2& a, const TruncatedSeries2& b) {
        TruncatedSeries2 r(a.ring_, std::min(a.t1_, b.t1_), std::min(a.t2_, b.t2_),
                           std::min(a.prec_, b.prec_));
        for (long i = 0; i < r.t1_; ++i)
            for (long j = 0; j < r.t2_; ++j) r.set(i, j, a.at(i, j) + b.at(i, j));
        return r;
    }

    long min_valuation_floor() const {
        long v = prec_;
        for (const auto& c : c_) v = std::min(v, c.valuation_floor());
        return v;
    }

    friend TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b) {
        TruncatedSeries2 r(a.ring_, std::min(a.t1_, b.t1_), std::min(a.t2_, b.t2_),
                           std::min(a.min_valuation_floor() + b.prec_,
                                    b.min_valuation_floor() + a.prec_));
        for (long i1 = 0; i1 < std::min(a.t1_, r.t1_); ++i1)
            for (long j1 = 0; j1 < std::min(a.t2_, r.t2_); ++j1) {
                if (a.at(i1, j1).is_zero_at_precision()) continue;
                for (long i2 = 0; i1 + i2 < r.t1_ && i2 < b.t1_; ++i2)
                    for (long j2 = 0; j1 + j2 < r.t2_ && j2 < b.t2_; ++j2) {
                        if (b.at(i2, j2).is_zero_at_precision()) continue;
                        r.set(i1 + i2, j1 + j2,
                              r.at(i1 + i2, j1 + j2) + a.at(i1, j1) * b.at(i2, j2));
                    }
            }
        return r;
    }

    bool equals_at_precision(const TruncatedSeries2& o) const {
        for (long i = 0; i < std::min(t1_, o.t1_); ++i)
            for (long j = 0; j < std::min(t2_, o.t2_); ++j)
                if (!at(i, j).equals_at_precision(o.at(i, j))) return false;
        return true;
    }

private:
    RingPtr ring_;
    long t1_ = 0, t2_ = 0;
    long prec_ = 0;
    std::vector<PadicElement> c_;
};

// substitute the chosen variable by z (in the maximal ideal); returns a
// series in the remaining variable
inline TruncatedSeries1 specialize_axis(const TruncatedSeries2& F, int axis,
                                        const PadicElement& z) {
    long vz = z.valuation_floor();
    if (!z.is_zero_at_precision() && vz <= 0)
        throw domain_error("divergent substitution: value must lie in the maximal ideal");
    long keep = (axis == 1) ? F.t2() : F.t1();
    std::vector<PadicElement> out;
    out.reserve(keep);
    for (long k = 0; k < keep; ++k) {
        TruncatedSeries1 s = F.coefficient_series(axis == 1 ? 2 : 1, k);
        out.push_back(s.evaluate(z));
    }
    return TruncatedSeries1::from_coeffs(F.ring(), std::move(out));
}

// ---------------------------------------------------------------------------
// distinguished-polynomial gcd, content extraction, degree relation

struct ContentFactorization {
    long mu = 0;                      // pi-power part of the content
    std::vector<PadicElement> varpi;  // distinguished content polynomial in T_i
    long varpi_degree = 0;
    TruncatedSeries2 quotient;        // F / (pi^mu * varpi)
    long series_degree = 0;           // Weierstrass degree of the quotient in T_j
    long supported_precision = 0;     // precision to which quotient data is pinned
};

// A truncated series determines the distinguished factor of its preparation
// only modulo pi^((t - lambda)/lambda): the discarded tail feeds back into
// the low coefficients one pi per lambda degrees.  Degrees and valuations
// are exact at any truncation; coefficient-level content data is reported
// at this supported precision.
inline long truncation_supported_precision(long t, long lambda, long prec) {
    if (lambda <= 0) return prec;
    return std::max<long>(1, std::min(prec, (t - lambda) / lambda - 1));
}

// Factor F = pi^mu * varpi(T_i) * (distinguished-in-T_j * unit), viewing F as
// a series in T_j with coefficients in O[[T_i]]; `content_axis` is i.
//
// The degree data (mu, deg varpi, Weierstrass degree in T_j) comes from the
// valuation profile of the coefficient series: both the minimal valuation
// and the first index attaining it are additive under products, so
// lambda(a_k) = deg(varpi) + lambda(quotient_k) holds exactly at any
// truncation.  varpi itself is the distinguished part of the first
// coefficient series whose quotient is a unit.
inline ContentFactorization content_factor(const TruncatedSeries2& F, int content_axis) {
    if (F.is_zero_at_precision())
        throw precision_error("insufficient-precision: series vanishes at precision");
    int series_axis = content_axis == 1 ? 2 : 1;
    long nk = (series_axis == 1) ? F.t1() : F.t2();
    long nother = (series_axis == 1) ? F.t2() : F.t1();
    const RingPtr& R = F.ring();
    long prec = F.precision();

    std::vector<std::optional<ValuationScan>> scans(nk);
    long mu = -1, dvarpi = -1;
    for (long k = 0; k < nk; ++k) {
        scans[k] = scan_valuations(F.coefficient_series(series_axis, k));
        if (!scans[k]) continue;
        if (mu < 0 || scans[k]->mu < mu) mu = scans[k]->mu;
        if (dvarpi < 0 || scans[k]->lambda < dvarpi) dvarpi = scans[k]->lambda;
    }
    long series_degree = -1;
    for (long k = 0; k < nk; ++k)
        if (scans[k] && scans[k]->mu == mu && scans[k]->lambda == dvarpi) {
            series_degree = k;
            break;
        }
    if (series_degree < 0)
        throw precision_error(
            "insufficient-truncation: no coefficient becomes a unit after removing content");

    // varpi from the coefficient at series_degree: a = pi^mu * varpi * unit
    WeierstrassFactorization wr =
        weierstrass_prepare(F.coefficient_series(series_axis, series_degree));
    std::vector<PadicElement> varpi = std::move(wr.distinguished);

    long psup = truncation_supported_precision(nother, dvarpi, prec - mu);

    // quotient: divide every coefficient series by pi^mu * varpi, checking
    // the remainders at the supported precision
    TruncatedSeries2 Q(R, series_axis == 1 ? nk : nother, series_axis == 1 ? nother : nk,
                       psup);
    TruncatedSeries1 vs = poly_to_series(R, varpi, nother, prec - mu);
    for (long k = 0; k < nk; ++k) {
        if (!scans[k]) continue;
        TruncatedSeries1 a = F.coefficient_series(series_axis, k);
        if (mu > 0) a = series_div_uniformizer(a, mu);
        TruncatedSeries1 qk(R, nother, a.precision());
        if (dvarpi == 0) {
            qk = a;
        } else {
            std::vector<PadicElement> rem;
            weierstrass_divide(a, vs, dvarpi, qk, rem);
            for (const auto& rc : rem)
                if (rc.valuation_floor() < std::min(psup, rc.precision()))
                    throw precision_error(
                        "insufficient-truncation: no stable common content at this order");
        }
        for (long l = 0; l < nother; ++l) {
            if (series_axis == 1) Q.set(k, l, qk[l].clamp_precision(psup));
            else Q.set(l, k, qk[l].clamp_precision(psup));
        }
    }

    ContentFactorization out;
    out.mu = mu;
    out.varpi = std::move(varpi);
    out.varpi_degree = dvarpi;
    out.quotient = std::move(Q);
    out.series_degree = series_degree;
    out.supported_precision = psup;
    return out;
}

struct RelationReport {
    long r1 = 0;          // Weierstrass degree in T1 over O[[T2]]
    long r2 = 0;          // Weierstrass degree in T2 over O[[T1]]
    long deg_varpi1 = 0;  // degree of the T1-content
    long deg_varpi2 = 0;  // degree of the T2-content
    long mu = 0;
    bool holds = false;   // r1 * deg_varpi2 == r2 * deg_varpi1
};

inline RelationReport check_degree_relation(const TruncatedSeries2& F) {
    ContentFactorization c2 = content_factor(F, 2); // series in T1, content in T2
    ContentFactorization c1 = content_factor(F, 1); // series in T2, content in T1
    RelationReport r;
    r.r1 = c2.series_degree;
    r.r2 = c1.series_degree;
    r.deg_varpi2 = c2.varpi_degree;
    r.deg_varpi1 = c1.varpi_degree;
    r.mu = c2.mu;
    r.holds = (r.r1 * r.deg_varpi2 == r.r2 * r.deg_varpi1);
    return r;
}

} // namespace padiclab
