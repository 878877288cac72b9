#pragma once

#include <map>
#include <vector>

#include "padiclab/abelian.hpp"
#include "padiclab/power_series.hpp"

namespace padiclab {

// The Galois group the measures live on: a finite torsion part given by
// invariant factors, times a free rank-2 part with fixed topological
// generators (anticyclotomic and cyclotomic).
struct GaloisGroupSpec {
    long p = 5;
    std::vector<long> torsion; // invariant factors of the torsion subgroup

    long torsion_size() const {
        long n = 1;
        for (long d : torsion) n *= d;
        return n;
    }
    bool operator==(const GaloisGroupSpec& o) const {
        return p == o.p && torsion == o.torsion;
    }
};

// finite-order character of the group: labels on the torsion generators and
// on the two free generators (p-power orders)
struct GroupCharacter {
    std::vector<RootOfUnity> tame; // one per invariant factor
    RootOfUnity anti;              // value on the anticyclotomic generator
    RootOfUnity cyc;               // value on the cyclotomic generator

    bool operator==(const GroupCharacter& o) const {
        return tame == o.tame && anti == o.anti && cyc == o.cyc;
    }
    bool is_trivial() const {
        for (const auto& t : tame)
            if (!t.is_one()) return false;
        return anti.is_one() && cyc.is_one();
    }
};

// Element of the completed group ring at a finite level (a, b): an O-valued
// table on torsion x Z/p^a x Z/p^b, identified with a finitely supported
// measure on representative points.  Summing fibers reproduces any coarser
// level, which realizes the projective-limit compatibility.
class GroupMeasure {
public:
    GroupMeasure(GaloisGroupSpec spec, RingPtr ring, int level_a, int level_b, long prec)
        : spec_(std::move(spec)), ring_(std::move(ring)), a_(level_a), b_(level_b),
          prec_(prec) {
        if (a_ < 0 || b_ < 0) throw domain_error("negative measure level");
        pa_ = detail::pow_long(spec_.p, a_);
        pb_ = detail::pow_long(spec_.p, b_);
        table_.assign(spec_.torsion_size() * pa_ * pb_, PadicElement(ring_, prec_));
    }

    const GaloisGroupSpec& group() const { return spec_; }
    const RingPtr& ring() const { return ring_; }
    int level_a() const { return a_; }
    int level_b() const { return b_; }
    long pa() const { return pa_; }
    long pb() const { return pb_; }
    long precision() const { return prec_; }
    long size() const { return static_cast<long>(table_.size()); }

    long torsion_index(const std::vector<long>& g0) const {
        if (g0.size() != spec_.torsion.size())
            throw domain_error("torsion coordinate arity mismatch");
        long idx = 0;
        for (std::size_t i = 0; i < g0.size(); ++i) {
            long d = spec_.torsion[i];
            long c = ((g0[i] % d) + d) % d;
            idx = idx * d + c;
        }
        return idx;
    }
    std::vector<long> torsion_coords(long idx) const {
        std::vector<long> g0(spec_.torsion.size(), 0);
        for (long i = static_cast<long>(spec_.torsion.size()) - 1; i >= 0; --i) {
            g0[i] = idx % spec_.torsion[i];
            idx /= spec_.torsion[i];
        }
        return g0;
    }

    const PadicElement& at(long t, long i, long j) const {
        return table_[(t * pa_ + i) * pb_ + j];
    }
    void set(long t, long i, long j, const PadicElement& v) {
        table_[(t * pa_ + i) * pb_ + j] = v.clamp_precision(prec_);
    }
    void add_to(long t, long i, long j, const PadicElement& v) {
        auto& slot = table_[(t * pa_ + i) * pb_ + j];
        slot = (slot + v).clamp_precision(prec_);
    }

    bool equals_at_precision(const GroupMeasure& o) const {
        if (!(spec_ == o.spec_) || a_ != o.a_ || b_ != o.b_) return false;
        for (long k = 0; k < size(); ++k)
            if (!table_[k].equals_at_precision(o.table_[k])) return false;
        return true;
    }

private:
    GaloisGroupSpec spec_;
    RingPtr ring_;
    int a_, b_;
    long pa_ = 1, pb_ = 1;
    long prec_;
    std::vector<PadicElement> table_;
};

inline GroupMeasure dirac(const GaloisGroupSpec& spec, const RingPtr& ring, int level_a,
                          int level_b, long prec, const std::vector<long>& g0, long i, long j) {
    GroupMeasure m(spec, ring, level_a, level_b, prec);
    long ii = ((i % m.pa()) + m.pa()) % m.pa();
    long jj = ((j % m.pb()) + m.pb()) % m.pb();
    m.set(m.torsion_index(g0), ii, jj, PadicElement::from_integer(ring, 1, prec));
    return m;
}

// re-express the same finitely supported measure at a finer level
inline GroupMeasure level_raise(const GroupMeasure& m, int a, int b) {
    if (a < m.level_a() || b < m.level_b())
        throw domain_error("level_raise cannot lower a level");
    GroupMeasure out(m.group(), m.ring(), a, b, m.precision());
    for (long t = 0; t < m.group().torsion_size(); ++t)
        for (long i = 0; i < m.pa(); ++i)
            for (long j = 0; j < m.pb(); ++j) out.set(t, i, j, m.at(t, i, j));
    return out;
}

// push forward to a coarser level by summing fibers
inline GroupMeasure level_lower(const GroupMeasure& m, int a, int b) {
    if (a > m.level_a() || b > m.level_b())
        throw domain_error("level_lower cannot raise a level");
    GroupMeasure out(m.group(), m.ring(), a, b, m.precision());
    for (long t = 0; t < m.group().torsion_size(); ++t)
        for (long i = 0; i < m.pa(); ++i)
            for (long j = 0; j < m.pb(); ++j)
                out.add_to(t, i % out.pa(), j % out.pb(), m.at(t, i, j));
    return out;
}

// group-ring product; levels are reconciled to the finer of the two
inline GroupMeasure convolve(const GroupMeasure& m1, const GroupMeasure& m2) {
    if (!(m1.group() == m2.group())) throw domain_error("convolution needs one group");
    int a = std::max(m1.level_a(), m2.level_a());
    int b = std::max(m1.level_b(), m2.level_b());
    GroupMeasure x = level_raise(m1, a, b), y = level_raise(m2, a, b);
    GroupMeasure out(m1.group(), m1.ring(), a, b, std::min(x.precision(), y.precision()));
    long ts = m1.group().torsion_size();
    const auto& factors = m1.group().torsion;
    for (long t1 = 0; t1 < ts; ++t1) {
        auto c1 = out.torsion_coords(t1);
        for (long t2 = 0; t2 < ts; ++t2) {
            auto c2 = out.torsion_coords(t2);
            std::vector<long> c(c1.size());
            for (std::size_t k = 0; k < c.size(); ++k) c[k] = (c1[k] + c2[k]) % factors[k];
            long t = out.torsion_index(c);
            for (long i1 = 0; i1 < x.pa(); ++i1)
                for (long j1 = 0; j1 < x.pb(); ++j1) {
                    if (x.at(t1, i1, j1).is_zero_at_precision()) continue;
                    for (long i2 = 0; i2 < y.pa(); ++i2)
                        for (long j2 = 0; j2 < y.pb(); ++j2) {
                            if (y.at(t2, i2, j2).is_zero_at_precision()) continue;
                            out.add_to(t, (i1 + i2) % x.pa(), (j1 + j2) % x.pb(),
                                       x.at(t1, i1, j1) * y.at(t2, i2, j2));
                        }
                }
        }
    }
    return out;
}

namespace detail {
inline long p_order_exp(const RootOfUnity& z, long p) {
    long long o = z.order;
    int e = 0;
    while (o % p == 0) { o /= p; ++e; }
    if (o != 1) throw domain_error("character value is not of p-power order");
    return e;
}
} // namespace detail

// the finite sum of the measure against the character values
inline PadicElement specialize(const GroupMeasure& m, const GroupCharacter& W) {
    const auto& spec = m.group();
    if (W.tame.size() != spec.torsion.size())
        throw domain_error("character arity does not match the torsion part");
    if (detail::p_order_exp(W.anti, spec.p) > m.level_a() ||
        detail::p_order_exp(W.cyc, spec.p) > m.level_b())
        throw precision_error("insufficient-level: character does not factor through the level");

    const RingPtr& R = m.ring();
    long prec = m.precision();
    std::vector<PadicElement> anti_pows(m.pa(), PadicElement(R, prec));
    std::vector<PadicElement> cyc_pows(m.pb(), PadicElement(R, prec));
    PadicElement va = realize(W.anti, R, prec), vc = realize(W.cyc, R, prec);
    anti_pows[0] = PadicElement::from_integer(R, 1, prec);
    for (long i = 1; i < m.pa(); ++i) anti_pows[i] = (anti_pows[i - 1] * va).clamp_precision(prec);
    cyc_pows[0] = PadicElement::from_integer(R, 1, prec);
    for (long j = 1; j < m.pb(); ++j) cyc_pows[j] = (cyc_pows[j - 1] * vc).clamp_precision(prec);

    long ts = spec.torsion_size();
    PadicElement acc(R, prec);
    for (long t = 0; t < ts; ++t) {
        auto g0 = m.torsion_coords(t);
        RootOfUnity tv;
        for (std::size_t k = 0; k < g0.size(); ++k) tv = tv * W.tame[k].pow(g0[k]);
        PadicElement tval = realize(tv, R, prec);
        for (long i = 0; i < m.pa(); ++i)
            for (long j = 0; j < m.pb(); ++j) {
                if (m.at(t, i, j).is_zero_at_precision()) continue;
                acc = (acc + m.at(t, i, j) * tval * anti_pows[i] * cyc_pows[j])
                          .clamp_precision(prec);
            }
    }
    return acc;
}

// all characters factoring through level (a, b) with full torsion dual
inline std::vector<GroupCharacter> characters_at_level(const GaloisGroupSpec& spec, int a,
                                                       int b) {
    std::vector<GroupCharacter> out;
    long pa = detail::pow_long(spec.p, a), pb = detail::pow_long(spec.p, b);
    std::vector<long> te(spec.torsion.size(), 0);
    for (;;) {
        GroupCharacter W;
        W.tame.resize(spec.torsion.size());
        for (std::size_t k = 0; k < te.size(); ++k)
            W.tame[k] = RootOfUnity(spec.torsion[k], te[k]);
        for (long ea = 0; ea < pa; ++ea)
            for (long eb = 0; eb < pb; ++eb) {
                W.anti = RootOfUnity(pa, ea);
                W.cyc = RootOfUnity(pb, eb);
                out.push_back(W);
            }
        long i = static_cast<long>(te.size()) - 1;
        while (i >= 0 && ++te[i] == spec.torsion[i]) te[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// decompose along the torsion dual: one measure on the free part per tame
// character, values sum_{g0} W0(g0) * m(g0, ., .)
inline std::vector<std::pair<std::vector<RootOfUnity>, GroupMeasure>> tame_decompose(
    const GroupMeasure& m) {
    const auto& spec = m.group();
    GaloisGroupSpec free_spec{spec.p, {}};
    std::vector<std::pair<std::vector<RootOfUnity>, GroupMeasure>> out;
    std::vector<long> te(spec.torsion.size(), 0);
    for (;;) {
        std::vector<RootOfUnity> tame(spec.torsion.size());
        for (std::size_t k = 0; k < te.size(); ++k)
            tame[k] = RootOfUnity(spec.torsion[k], te[k]);
        GroupMeasure comp(free_spec, m.ring(), m.level_a(), m.level_b(), m.precision());
        for (long t = 0; t < spec.torsion_size(); ++t) {
            auto g0 = m.torsion_coords(t);
            RootOfUnity tv;
            for (std::size_t k = 0; k < g0.size(); ++k) tv = tv * tame[k].pow(g0[k]);
            PadicElement tval = realize(tv, m.ring(), m.precision());
            for (long i = 0; i < m.pa(); ++i)
                for (long j = 0; j < m.pb(); ++j)
                    comp.add_to({}, i, j, m.at(t, i, j) * tval);
        }
        out.push_back({std::move(tame), std::move(comp)});
        long i = static_cast<long>(te.size()) - 1;
        while (i >= 0 && ++te[i] == spec.torsion[i]) te[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

namespace detail {
inline void check_free(const GroupMeasure& m) {
    if (m.group().torsion_size() != 1)
        throw domain_error("operation needs a measure supported on the free part");
}
} // namespace detail

// reassemble a measure from its tame components (finite Fourier inversion
// on the torsion part)
inline GroupMeasure tame_reassemble(
    const GaloisGroupSpec& spec, const RingPtr& ring,
    const std::vector<std::pair<std::vector<RootOfUnity>, GroupMeasure>>& comps) {
    if (comps.empty()) throw domain_error("no components");
    int a = comps[0].second.level_a(), b = comps[0].second.level_b();
    long prec = comps[0].second.precision();
    GroupMeasure out(spec, ring, a, b, prec);
    long ts = spec.torsion_size();
    if (static_cast<long>(comps.size()) != ts)
        throw domain_error("component count must equal the torsion dual size");
    mpz_class tsz(ts);
    for (long t = 0; t < ts; ++t) {
        auto g0 = out.torsion_coords(t);
        for (long i = 0; i < out.pa(); ++i)
            for (long j = 0; j < out.pb(); ++j) {
                PadicElement acc(ring, prec);
                for (const auto& [tame, comp] : comps) {
                    RootOfUnity tv;
                    for (std::size_t k = 0; k < g0.size(); ++k)
                        tv = tv * tame[k].pow(g0[k]);
                    acc = (acc + comp.at(0, i, j) * realize(tv.inverse(), ring, prec))
                              .clamp_precision(prec);
                }
                // |G0| is prime to p in every realizable ring
                PadicElement inv = PadicElement::from_integer(ring, tsz, prec).invert();
                out.set(t, i, j, acc * inv);
            }
    }
    return out;
}

// generators map to 1 + T: the table entry at (i, j) contributes
// c * (1+T1)^i (1+T2)^j
inline TruncatedSeries2 to_power_series(const GroupMeasure& m, long t1 = 0, long t2 = 0) {
    detail::check_free(m);
    if (t1 == 0) t1 = m.pa();
    if (t2 == 0) t2 = m.pb();
    if (t1 < m.pa() || t2 < m.pb())
        throw precision_error("insufficient-truncation: level exceeds the truncation order");
    const RingPtr& R = m.ring();
    long prec = m.precision();
    TruncatedSeries2 F(R, t1, t2, prec);
    // binomial rows up to pa resp. pb
    for (long i = 0; i < m.pa(); ++i)
        for (long j = 0; j < m.pb(); ++j) {
            const PadicElement& c = m.at(0, i, j);
            if (c.is_zero_at_precision()) continue;
            // c * (1+T1)^i (1+T2)^j
            mpz_class bi = 1;
            for (long x = 0; x <= i && x < t1; ++x) {
                mpz_class bj = 1;
                for (long y = 0; y <= j && y < t2; ++y) {
                    F.set(x, y, F.at(x, y) + c.scaled(bi * bj));
                    bj *= (j - y);
                    bj /= (y + 1);
                }
                bi *= (i - x);
                bi /= (x + 1);
            }
        }
    return F;
}

// interpolation fixture: recover the measure from its specializations at the
// full character dual of a level quotient (finite Fourier inversion).
// Characters absent from the target list get the zero target.  Targets that
// are not the specializations of an O-valued measure are rejected.
inline GroupMeasure synthesize_interpolating_measure(
    const GaloisGroupSpec& spec, const RingPtr& ring, int a, int b, long prec,
    const std::vector<std::pair<GroupCharacter, PadicElement>>& targets) {
    long pa = detail::pow_long(spec.p, a), pb = detail::pow_long(spec.p, b);
    long ts = spec.torsion_size();

    auto all = characters_at_level(spec, a, b);
    std::vector<PadicElement> vals(all.size(), PadicElement(ring, prec));
    std::vector<bool> given(all.size(), false);
    for (const auto& [W, v] : targets) {
        bool placed = false;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (all[k] == W) {
                if (given[k] && !vals[k].equals_at_precision(v))
                    throw domain_error("inconsistent duplicate interpolation targets");
                vals[k] = v.clamp_precision(prec);
                given[k] = true;
                placed = true;
                break;
            }
        if (!placed)
            throw domain_error("target character does not factor through the level");
    }

    long mu = ring->e * (a + b); // pi-valuation of p^(a+b)
    if (prec <= mu) throw precision_error("insufficient precision for inversion at this level");
    // pi^mu / p^(a+b) is a unit; dividing by it converts the exact pi-power
    // division into the division by p^(a+b)
    PadicElement unit_fix = PadicElement::from_integer(ring, 1, prec - mu);
    if (mu > 0) {
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), spec.p, a + b);
        PadicElement ppow = PadicElement::from_integer(ring, pw, prec + mu);
        unit_fix = div_uniformizer_pow(ppow, mu).invert().clamp_precision(prec - mu);
    }
    PadicElement tinv = PadicElement::from_integer(ring, mpz_class(ts), prec).invert();

    GroupMeasure out(spec, ring, a, b, prec - mu);
    for (long t = 0; t < ts; ++t) {
        auto g0 = out.torsion_coords(t);
        for (long i = 0; i < pa; ++i)
            for (long j = 0; j < pb; ++j) {
                PadicElement acc(ring, prec);
                for (std::size_t k = 0; k < all.size(); ++k) {
                    if (vals[k].is_zero_at_precision()) continue;
                    const auto& W = all[k];
                    RootOfUnity conj;
                    for (std::size_t l = 0; l < g0.size(); ++l)
                        conj = conj * W.tame[l].pow(g0[l]);
                    conj = conj * W.anti.pow(i) * W.cyc.pow(j);
                    acc = (acc + vals[k] * realize(conj.inverse(), ring, prec))
                              .clamp_precision(prec);
                }
                acc = (acc * tinv).clamp_precision(prec);
                if (acc.is_zero_at_precision()) {
                    out.set(t, i, j, PadicElement(ring, prec - mu));
                    continue;
                }
                if (acc.valuation_floor() < mu)
                    throw domain_error(
                        "targets are not interpolated by any integral measure at this level");
                out.set(t, i, j, (div_uniformizer_pow(acc, mu) * unit_fix)
                                     .clamp_precision(prec - mu));
            }
    }
    return out;
}

} // namespace padiclab
