#include <catch2/catch_amalgamated.hpp>

#include "padiclab/io.hpp"
#include "padiclab/iwasawa.hpp"
#include "padiclab/rng.hpp"

using namespace padiclab;

namespace {

GroupMeasure random_measure(const GaloisGroupSpec& spec, const RingPtr& ring, int a, int b,
                            long prec, std::mt19937_64& rng) {
    GroupMeasure m(spec, ring, a, b, prec);
    for (long t = 0; t < spec.torsion_size(); ++t)
        for (long i = 0; i < m.pa(); ++i)
            for (long j = 0; j < m.pb(); ++j) m.set(t, i, j, random_element(ring, prec, rng));
    return m;
}

// polynomial remainder of a one-variable slice by (1+T)^q - 1, monic of degree q
TruncatedSeries2 reduce_mod_level(const TruncatedSeries2& F, long qa, long qb) {
    // reduce in T1 then in T2 by long division with the monic binomial poly
    const RingPtr& R = F.ring();
    long prec = F.precision();
    auto binom_poly = [&](long q) {
        std::vector<PadicElement> g(q + 1, PadicElement(R, prec));
        mpz_class bi = 1;
        for (long x = 0; x <= q; ++x) {
            g[x] = PadicElement::from_integer(R, bi, prec);
            bi *= (q - x);
            bi /= (x + 1);
        }
        g[0] = g[0] - PadicElement::from_integer(R, 1, prec); // (1+T)^q - 1
        return g;
    };
    auto g1 = binom_poly(qa), g2 = binom_poly(qb);
    TruncatedSeries2 out = F;
    // T1 direction
    for (long d = F.t1() - 1; d >= qa; --d)
        for (long j = 0; j < F.t2(); ++j) {
            PadicElement q = out.at(d, j);
            if (q.is_zero_at_precision()) continue;
            for (long x = 0; x <= qa; ++x)
                out.set(d - qa + x, j, out.at(d - qa + x, j) - q * g1[x]);
        }
    for (long d = F.t2() - 1; d >= qb; --d)
        for (long i = 0; i < F.t1(); ++i) {
            PadicElement q = out.at(i, d);
            if (q.is_zero_at_precision()) continue;
            for (long y = 0; y <= qb; ++y)
                out.set(i, d - qb + y, out.at(i, d - qb + y) - q * g2[y]);
        }
    return out;
}

} // namespace

TEST_CASE("dirac specializations") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto id = dirac(spec, R, 1, 1, N, {}, 0, 0);
    auto g1 = dirac(spec, R, 1, 1, N, {}, 1, 0);
    auto g1g2 = dirac(spec, R, 1, 1, N, {}, 1, 1);
    auto one = PadicElement::from_integer(R, 1, N);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        CHECK(specialize(id, W).equals_at_precision(one));
        CHECK(specialize(g1, W).equals_at_precision(realize(W.anti, R, N)));
        CHECK(specialize(g1g2, W)
                  .equals_at_precision(realize(W.anti * W.cyc, R, N)));
    }
}

TEST_CASE("convolution is the group law on diracs") {
    GaloisGroupSpec spec{5, {2}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto d1 = dirac(spec, R, 1, 1, N, {1}, 2, 3);
    auto d2 = dirac(spec, R, 1, 1, N, {1}, 4, 4);
    auto prod = convolve(d1, d2);
    auto expect = dirac(spec, R, 1, 1, N, {0}, 6 % 5, 7 % 5);
    CHECK(prod.equals_at_precision(expect));

    auto rng = child_rng(11, 0);
    auto m = random_measure(spec, R, 1, 1, N, rng);
    auto idm = dirac(spec, R, 1, 1, N, {0}, 0, 0);
    CHECK(convolve(m, idm).equals_at_precision(m));
}

TEST_CASE("specialization is multiplicative under convolution") {
    GaloisGroupSpec spec{5, {2}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(12, 1);
    auto m1 = random_measure(spec, R, 1, 1, N, rng);
    auto m2 = random_measure(spec, R, 1, 1, N, rng);
    auto m12 = convolve(m1, m2);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        auto lhs = specialize(m12, W);
        auto rhs = specialize(m1, W) * specialize(m2, W);
        CHECK(lhs.equals_at_precision(rhs.clamp_precision(lhs.precision())));
    }
}

TEST_CASE("specialization commutes with level lowering") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 2);
    long N = R->default_precision();
    auto rng = child_rng(13, 2);
    auto m = random_measure(spec, R, 2, 2, N, rng);
    auto low = level_lower(m, 1, 1);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        auto a = specialize(m, W);
        auto b = specialize(low, W);
        CHECK(a.equals_at_precision(b.clamp_precision(a.precision())));
    }
    // raising then lowering is the identity
    CHECK(level_lower(level_raise(low, 2, 2), 1, 1).equals_at_precision(low));
    // a level-(1,1) character does not see the raise
    auto raised = level_raise(low, 2, 2);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        auto a = specialize(low, W);
        auto b = specialize(raised, W);
        CHECK(a.equals_at_precision(b.clamp_precision(a.precision())));
    }
}

TEST_CASE("insufficient level and ring errors") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto m = dirac(spec, R, 1, 1, N, {}, 1, 0);
    GroupCharacter deep{{}, RootOfUnity(25, 1), RootOfUnity()};
    CHECK_THROWS_AS(specialize(m, deep), precision_error); // level too coarse
    GroupCharacter fine{{}, RootOfUnity(5, 1), RootOfUnity()};
    auto m2 = level_raise(m, 2, 1);
    CHECK_THROWS_AS(specialize(m2, GroupCharacter{{}, RootOfUnity(25, 1), RootOfUnity()}),
                    precision_error); // ring lacks zeta_25

    GaloisGroupSpec spec3{5, {3}};
    auto d3 = dirac(spec3, R, 0, 0, N, {0}, 0, 0);
    GroupCharacter w3{{RootOfUnity(3, 1)}, RootOfUnity(), RootOfUnity()};
    CHECK_THROWS_AS(specialize(d3, w3), precision_error); // 3 does not divide p-1
}

TEST_CASE("tame decomposition and reassembly") {
    auto R = make_ring(5, 1);
    long N = R->default_precision();

    // trivial torsion: single component equal to the measure
    GaloisGroupSpec free{5, {}};
    auto rng = child_rng(14, 3);
    auto m = random_measure(free, R, 1, 1, N, rng);
    auto comps = tame_decompose(m);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].second.equals_at_precision(m));

    // dirac at g0: every component is the constant W0(g0) at the identity
    GaloisGroupSpec spec{5, {2}};
    auto d = dirac(spec, R, 1, 1, N, {1}, 0, 0);
    for (const auto& [tame, comp] : tame_decompose(d)) {
        auto expect = dirac(free, R, 1, 1, N, {}, 0, 0);
        PadicElement v = realize(tame[0], R, N);
        for (const auto& W : characters_at_level(free, 1, 1)) {
            auto got = specialize(comp, W);
            auto want = (specialize(expect, W) * v).clamp_precision(got.precision());
            CHECK(got.equals_at_precision(want));
        }
    }

    // |G0| = 2: inverse Fourier sum recovers the measure
    auto m2 = random_measure(spec, R, 1, 1, N, rng);
    auto parts = tame_decompose(m2);
    auto back = tame_reassemble(spec, R, parts);
    CHECK(back.equals_at_precision(m2));
}

TEST_CASE("to_power_series basics") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto one = PadicElement::from_integer(R, 1, N);

    auto g1 = dirac(spec, R, 1, 1, N, {}, 1, 0);
    auto F = to_power_series(g1);
    CHECK(F.at(0, 0).equals_at_precision(one));
    CHECK(F.at(1, 0).equals_at_precision(one));
    CHECK(F.at(0, 1).is_zero_at_precision());

    // dirac(gamma1^-1) at level 1: (1+T1)^4, binomial oracle
    auto ginv = dirac(spec, R, 1, 1, N, {}, -1, 0);
    auto G = to_power_series(ginv);
    long expect[5] = {1, 4, 6, 4, 1};
    for (long x = 0; x < 5; ++x)
        CHECK(G.at(x, 0).equals_at_precision(PadicElement::from_integer(R, expect[x], N)));

    CHECK_THROWS_AS(to_power_series(ginv, 3, 3), precision_error);
}

TEST_CASE("specialization agrees with series evaluation") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(15, 4);
    auto m = random_measure(spec, R, 1, 1, N, rng);
    auto F = to_power_series(m);
    auto one = PadicElement::from_integer(R, 1, N);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        auto direct = specialize(m, W);
        auto z2 = realize(W.cyc, R, N) - one;
        auto z1 = realize(W.anti, R, N) - one;
        auto s = specialize_axis(F, 2, z2).evaluate(z1);
        CHECK(direct.clamp_precision(s.precision()).equals_at_precision(s));
    }
}

TEST_CASE("group ring to series is a ring isomorphism at level") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(16, 5);
    auto m1 = random_measure(spec, R, 1, 1, N, rng);
    auto m2 = random_measure(spec, R, 1, 1, N, rng);
    // addition: tables add, series add
    auto F1 = to_power_series(m1, 10, 10), F2 = to_power_series(m2, 10, 10);
    auto Fprod = reduce_mod_level(F1 * F2, 5, 5);
    auto Fconv = to_power_series(convolve(m1, m2), 10, 10);
    CHECK(Fprod.equals_at_precision(Fconv));
}

TEST_CASE("group ring to series is a ring isomorphism at level (2,2)") {
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 0); // coefficients only; no character values needed
    long N = 20;
    auto rng = child_rng(160, 6);
    auto m1 = random_measure(spec, R, 2, 2, N, rng);
    auto m2 = random_measure(spec, R, 2, 2, N, rng);
    auto F1 = to_power_series(m1, 50, 50), F2 = to_power_series(m2, 50, 50);
    auto Fprod = reduce_mod_level(F1 * F2, 25, 25);
    auto Fconv = to_power_series(convolve(m1, m2), 50, 50);
    CHECK(Fprod.equals_at_precision(Fconv));
}

TEST_CASE("interpolating measure synthesis") {
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    GaloisGroupSpec spec{5, {}};

    // single target at level (0, 0): the constant measure
    GroupCharacter triv{{}, RootOfUnity(), RootOfUnity()};
    auto m0 = synthesize_interpolating_measure(spec, R, 0, 0, N,
                                               {{triv, PadicElement::from_integer(R, 1, N)}});
    CHECK(specialize(m0, triv).equals_at_precision(
        PadicElement::from_integer(R, 1, m0.precision())));

    // round trip: targets from dirac(gamma1) recover dirac(gamma1)
    auto g1 = dirac(spec, R, 1, 1, N, {}, 1, 0);
    std::vector<std::pair<GroupCharacter, PadicElement>> targets;
    for (const auto& W : characters_at_level(spec, 1, 1))
        targets.push_back({W, specialize(g1, W)});
    auto back = synthesize_interpolating_measure(spec, R, 1, 1, N, targets);
    CHECK(back.equals_at_precision(g1));

    // random measure: all 25 prescribed targets are reproduced exactly
    auto rng = child_rng(17, 6);
    auto m = random_measure(spec, R, 1, 1, N, rng);
    targets.clear();
    for (const auto& W : characters_at_level(spec, 1, 1))
        targets.push_back({W, specialize(m, W)});
    auto syn = synthesize_interpolating_measure(spec, R, 1, 1, N, targets);
    CHECK(syn.equals_at_precision(m));
    for (const auto& [W, v] : targets)
        CHECK(specialize(syn, W).equals_at_precision(v.clamp_precision(syn.precision())));

    // p^2-scaled random targets are always realizable
    targets.clear();
    mpz_class p2(25);
    for (const auto& W : characters_at_level(spec, 1, 1))
        targets.push_back({W, random_element(R, N, rng).scaled(p2)});
    auto syn2 = synthesize_interpolating_measure(spec, R, 1, 1, N, targets);
    for (const auto& [W, v] : targets) {
        auto got = specialize(syn2, W);
        CHECK(got.equals_at_precision(v.clamp_precision(got.precision())));
    }

    // generic unscaled random targets are not integral
    targets.clear();
    for (const auto& W : characters_at_level(spec, 1, 1))
        targets.push_back({W, random_unit(R, N, rng)});
    CHECK_THROWS_AS(synthesize_interpolating_measure(spec, R, 1, 1, N, targets), domain_error);

    // duplicate characters with different values are rejected
    GroupCharacter W0{{}, RootOfUnity(5, 1), RootOfUnity()};
    CHECK_THROWS_AS(
        synthesize_interpolating_measure(
            spec, R, 1, 1, N,
            {{W0, PadicElement::from_integer(R, 1, N)},
             {W0, PadicElement::from_integer(R, 2, N)}}),
        domain_error);
}

TEST_CASE("measure json round trip") {
    GaloisGroupSpec spec{5, {2}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(18, 7);
    auto m = random_measure(spec, R, 1, 1, N, rng);
    auto j = measure_to_json(m);
    auto back = measure_from_json(j);
    CHECK(back.equals_at_precision(m));
    CHECK(measure_to_json(back) == j);
}
