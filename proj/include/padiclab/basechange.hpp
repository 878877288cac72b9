#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padiclab/power_series.hpp"

namespace padiclab {

enum class BasechangeVariant { complete, incomplete, norm_composed };

inline const char* variant_name(BasechangeVariant v) {
    switch (v) {
        case BasechangeVariant::complete: return "complete";
        case BasechangeVariant::incomplete: return "incomplete";
        default: return "norm_composed";
    }
}

// Product of cyclotomic specializations of a two-variable series, kept in the
// base anticyclotomic variable.  The lifted-variable reading divides degrees
// by the index of the lift; with the compatible-generator convention pinned
// as the coordinate identity on exponents, the lifted degree of a
// norm-composed element is literally the degree of the pre-substitution
// series.
struct BasechangeElement {
    BasechangeVariant variant;
    int level = 0;         // n
    long index = 1;        // variable rescaling of the lift
    RingPtr ring;          // coefficient ring of `base` (Z_p after descent)
    TruncatedSeries1 base; // series in the base variable
    WDegree base_degree;
    std::optional<long> lifted_degree; // base_degree / index when that is exact
    bool lifted_exact = true;
    std::optional<TruncatedSeries1> lifted_series; // norm_composed only
};

namespace detail {

// a coefficient of the extension ring that lies in Z_p descends to the
// constant digit; products over full Galois orbits of roots always do
inline PadicElement descend_to_base(const PadicElement& x, const RingPtr& base) {
    const RingPtr& R = x.ring();
    if (R->level == 0) return x;
    long e = R->e;
    for (long i = 1; i < e; ++i)
        if (x.coeffs()[i] != 0)
            throw precision_error("basechange product is not rational over Z_p");
    return PadicElement::from_integer(base, x.coeffs()[0],
                                      std::max<long>(1, (x.precision() + e - 1) / e));
}

inline TruncatedSeries1 descend_series(const TruncatedSeries1& s, const RingPtr& base) {
    std::vector<PadicElement> cs;
    cs.reserve(s.t_order());
    for (long k = 0; k < s.t_order(); ++k) cs.push_back(descend_to_base(s[k], base));
    return TruncatedSeries1::from_coeffs(base, std::move(cs));
}

// product of specializations of F(T1, T2) at T2 = zeta - 1 over the chosen
// set of p^n-th roots of unity
inline TruncatedSeries1 specialization_product(const TruncatedSeries2& F, int n,
                                               bool include_trivial) {
    const RingPtr& base = F.ring();
    if (base->level != 0)
        throw domain_error("basechange expects a two-variable series over Z_p");
    long p = base->p;
    long pn = pow_long(p, n);
    RingPtr R = n >= 1 ? make_ring(p, n) : base;
    long prec = F.precision() * R->e;

    TruncatedSeries2 FE(R, F.t1(), F.t2(), prec);
    if (n >= 1) {
        for (long i = 0; i < F.t1(); ++i)
            for (long j = 0; j < F.t2(); ++j) FE.set(i, j, embed(F.at(i, j), R));
    } else {
        FE = F;
    }

    TruncatedSeries1 prod = series_one(R, F.t1(), prec);
    PadicElement one = PadicElement::from_integer(R, 1, prec);
    for (long a = 0; a < pn; ++a) {
        if (a == 0 && !include_trivial) continue;
        PadicElement z = realize(RootOfUnity(pn, a), R, prec) - one;
        TruncatedSeries1 factor = specialize_axis(FE, 2, z);
        if (factor.is_zero_at_precision())
            return TruncatedSeries1(R, F.t1(), factor.precision()); // identically zero
        prod = prod * factor;
    }
    return prod;
}

} // namespace detail

// complete product over all p^n cyclotomic characters of the layer
inline BasechangeElement basechange_product(const TruncatedSeries2& F, int n) {
    BasechangeElement out;
    out.variant = BasechangeVariant::complete;
    out.level = n;
    out.index = detail::pow_long(F.ring()->p, n);
    TruncatedSeries1 prod = detail::specialization_product(F, n, true);
    out.ring = F.ring();
    out.base = (n >= 1) ? detail::descend_series(prod, F.ring()) : prod;
    out.base_degree = weierstrass_degree(out.base);
    if (out.base_degree.finite) {
        out.lifted_exact = (out.base_degree.value % out.index) == 0;
        if (out.lifted_exact) out.lifted_degree = out.base_degree.value / out.index;
    }
    return out;
}

// incomplete product: the trivial character is omitted, so the element
// survives the eps = -1 regime; it lives at its own level with index 1
inline BasechangeElement incomplete_product(const TruncatedSeries2& F, int n) {
    if (n < 1) throw domain_error("incomplete basechange products need level >= 1");
    BasechangeElement out;
    out.variant = BasechangeVariant::incomplete;
    out.level = n;
    out.index = 1;
    TruncatedSeries1 prod = detail::specialization_product(F, n, false);
    out.ring = F.ring();
    out.base = detail::descend_series(prod, F.ring());
    out.base_degree = weierstrass_degree(out.base);
    if (out.base_degree.finite) out.lifted_degree = out.base_degree.value;
    return out;
}

// push the level-1 incomplete element to level n along the norm: the base
// series picks up the substitution T -> (1+T)^(p^(n-1)) - 1 while the lifted
// reading keeps the original series
inline BasechangeElement norm_compose(const BasechangeElement& elem, int n) {
    if (elem.variant != BasechangeVariant::incomplete || elem.level != 1)
        throw domain_error("norm_compose expects the level-1 incomplete element");
    if (n < 1) throw domain_error("norm_compose needs a level >= 1");
    long I = detail::pow_long(elem.ring->p, n - 1);
    BasechangeElement out;
    out.variant = BasechangeVariant::norm_composed;
    out.level = n;
    out.index = I;
    out.ring = elem.ring;
    out.lifted_series = elem.base;
    out.lifted_degree = elem.base_degree.finite ? std::optional<long>(elem.base_degree.value)
                                                : std::nullopt;
    // substitute u = (1+T)^I - 1 into the lifted series, truncated to see the
    // rescaled degree
    long need = elem.base_degree.finite ? I * (elem.base_degree.value + 2) : elem.base.t_order();
    long t_out = std::max<long>(elem.base.t_order(), std::min<long>(need, 4096));
    long prec = elem.base.precision();
    const RingPtr& R = elem.ring;
    TruncatedSeries1 u(R, t_out, prec);
    {
        mpz_class bi = 1;
        for (long x = 0; x <= I && x < t_out; ++x) {
            PadicElement c = PadicElement::from_integer(R, bi, prec);
            if (x == 0) c = c - PadicElement::from_integer(R, 1, prec); // (1+T)^I - 1
            u.set(x, c);
            bi *= (I - x);
            bi /= (x + 1);
        }
    }
    TruncatedSeries1 acc(R, t_out, prec);
    for (long k = elem.base.t_order() - 1; k >= 0; --k) {
        acc = acc * u;
        TruncatedSeries1 c(R, t_out, prec);
        c.set(0, elem.base[k]);
        acc = acc + c;
    }
    out.base = acc;
    out.base_degree = weierstrass_degree(out.base);
    return out;
}

struct InvarianceRow {
    int n = 0;
    std::string variant;
    bool base_finite = false;
    long base_degree = 0;
    bool has_lifted = false;
    long lifted_degree = 0;
    bool expected_finite = false;
    long expected_base = 0;
    bool pass = false;
};

struct InvarianceReport {
    long r1 = 0;               // Weierstrass degree of the input in the base variable
    long deg_varpi2 = 0;       // degree of the cyclotomic content
    int n0 = 0;                // all content zeros lie at levels < n0
    std::vector<int> zero_levels;
    bool zeros_exhausted = true;
    std::vector<InvarianceRow> rows;
    bool all_pass = true;
};

// machine check of the degree bookkeeping across levels: the complete
// product scales the base degree by p^n, the incomplete one by phi(p^n),
// norm composition preserves the lifted degree
inline InvarianceReport verify_degree_invariance(const TruncatedSeries2& F, int n_max) {
    InvarianceReport rep;
    ContentFactorization c2 = content_factor(F, 2);
    rep.r1 = c2.series_degree;
    rep.deg_varpi2 = c2.varpi_degree;
    long p = F.ring()->p;

    // zeros of the content among cyclotomic points: a zero at level q brings
    // phi(p^q) conjugates, so levels with phi(p^q) > deg varpi2 are clean and
    // the scan below is complete
    int q_bound = 0;
    while (detail::pow_long(p, std::max(0, q_bound - 1)) * (q_bound >= 1 ? (p - 1) : 1) <=
           rep.deg_varpi2)
        ++q_bound;
    int scan_to = std::max(n_max, q_bound);
    for (int q = 0; q <= scan_to; ++q) {
        RingPtr R = q >= 1 ? make_ring(p, q) : F.ring();
        long prec = F.precision() * R->e;
        PadicElement z = q == 0 ? PadicElement(R, prec)
                                : realize(RootOfUnity(detail::pow_long(p, q), 1), R, prec) -
                                      PadicElement::from_integer(R, 1, prec);
        PadicElement val(R, prec);
        for (long k = static_cast<long>(c2.varpi.size()) - 1; k >= 0; --k) {
            PadicElement ck = q >= 1 ? embed(c2.varpi[k], R) : c2.varpi[k];
            val = (val * z + ck).clamp_precision(prec);
        }
        if (val.is_zero_at_precision()) rep.zero_levels.push_back(q);
    }
    rep.n0 = rep.zero_levels.empty() ? 0 : rep.zero_levels.back() + 1;

    auto has_zero_in = [&](int lo, int hi) {
        for (int q : rep.zero_levels)
            if (q >= lo && q <= hi) return true;
        return false;
    };

    BasechangeElement star1;
    bool have_star1 = false;
    for (int n = 1; n <= n_max; ++n) {
        {
            InvarianceRow row;
            row.n = n;
            row.variant = "complete";
            auto el = basechange_product(F, n);
            row.base_finite = el.base_degree.finite;
            row.base_degree = el.base_degree.finite ? el.base_degree.value : 0;
            row.expected_finite = !has_zero_in(0, n);
            row.expected_base = detail::pow_long(p, n) * rep.r1;
            if (row.expected_finite)
                row.pass = el.base_degree.finite && el.base_degree.value == row.expected_base &&
                           el.lifted_degree && *el.lifted_degree == rep.r1;
            else
                row.pass = !el.base_degree.finite;
            row.has_lifted = el.lifted_degree.has_value();
            row.lifted_degree = el.lifted_degree.value_or(0);
            rep.rows.push_back(row);
        }
        {
            InvarianceRow row;
            row.n = n;
            row.variant = "incomplete";
            auto el = incomplete_product(F, n);
            row.base_finite = el.base_degree.finite;
            row.base_degree = el.base_degree.finite ? el.base_degree.value : 0;
            // p^n - 1 nontrivial characters contribute one factor each
            row.expected_finite = !has_zero_in(1, n);
            row.expected_base = (detail::pow_long(p, n) - 1) * rep.r1;
            if (row.expected_finite)
                row.pass = el.base_degree.finite && el.base_degree.value == row.expected_base;
            else
                row.pass = !el.base_degree.finite;
            row.has_lifted = el.lifted_degree.has_value();
            row.lifted_degree = el.lifted_degree.value_or(0);
            rep.rows.push_back(row);
            if (n == 1 && el.base_degree.finite) {
                star1 = el;
                have_star1 = true;
            }
        }
        if (have_star1) {
            InvarianceRow row;
            row.n = n;
            row.variant = "norm_composed";
            auto g = norm_compose(star1, n);
            row.base_finite = g.base_degree.finite;
            row.base_degree = g.base_degree.finite ? g.base_degree.value : 0;
            row.expected_finite = true;
            long I = detail::pow_long(p, n - 1);
            row.expected_base = I * star1.base_degree.value;
            row.has_lifted = g.lifted_degree.has_value();
            row.lifted_degree = g.lifted_degree.value_or(0);
            row.pass = g.base_degree.finite && g.base_degree.value == row.expected_base &&
                       g.lifted_degree && *g.lifted_degree == star1.base_degree.value;
            rep.rows.push_back(row);
        }
    }
    for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

} // namespace padiclab
