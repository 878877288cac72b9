#include <catch2/catch_amalgamated.hpp>

#include "padiclab/padic.hpp"
#include "padiclab/rng.hpp"

using namespace padiclab;

TEST_CASE("ring construction") {
    auto z5 = make_ring(5, 0);
    CHECK(z5->e == 1);

    auto r = make_ring(5, 1);
    CHECK(r->e == 4);
    // Phi_5(x+1) = x^4 + 5x^3 + 10x^2 + 10x + 5, checked against a direct
    // expansion of sum (x+1)^i
    std::vector<long> expect{5, 10, 10, 5, 1};
    REQUIRE(r->modulus.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(r->modulus[i] == expect[i]);

    auto r72 = make_ring(7, 2);
    CHECK(r72->e == 42);

    CHECK_THROWS_AS(make_ring(4, 0), domain_error);
    CHECK_THROWS_AS(make_ring(3, 0), domain_error);
    CHECK_THROWS_AS(make_ring(91, 0), domain_error);
}

TEST_CASE("modulus expansion oracle") {
    // independent check: evaluate Phi_{p^m}(x+1) at a few integers x and
    // compare with the cyclotomic definition sum_{i<p} (x+1)^(i p^(m-1))
    for (auto [p, m] : {std::pair<long, int>{5, 1}, {5, 2}, {7, 1}}) {
        auto r = make_ring(p, m);
        long step = r->e / (p - 1);
        for (long x = -3; x <= 3; ++x) {
            mpz_class direct = 0;
            for (long i = 0; i < p; ++i) {
                mpz_class t;
                mpz_pow_ui(t.get_mpz_t(), mpz_class(x + 1).get_mpz_t(), i * step);
                direct += t;
            }
            mpz_class horner = 0;
            for (long d = r->e; d >= 0; --d) horner = horner * x + r->modulus[d];
            CHECK(horner == direct);
        }
    }
}

TEST_CASE("valuation basics") {
    auto z5 = make_ring(5, 0);
    auto x = PadicElement::from_integer(z5, 5, 20);
    REQUIRE(x.valuation());
    CHECK(*x.valuation() == 1);

    auto r = make_ring(5, 1);
    long N = r->default_precision();
    auto zeta = principal_root(r, N);
    auto one = PadicElement::from_integer(r, 1, N);
    auto pi = zeta - one;
    REQUIRE(pi.valuation());
    CHECK(*pi.valuation() == 1);

    auto zero = PadicElement(z5, 20);
    CHECK(zero.is_zero_at_precision());
    CHECK(!zero.valuation());
    CHECK(zero.precision() == 20);

    // v(5) in Z_5[zeta_5] is e = 4
    auto five = PadicElement::from_integer(r, 5, N);
    CHECK(*five.valuation() == 4);
}

TEST_CASE("ring axioms at precision, ultrametric valuation") {
    for (auto [p, m] : {std::pair<long, int>{5, 0}, {5, 1}, {7, 1}}) {
        auto R = make_ring(p, m);
        long N = R->default_precision();
        auto rng = child_rng(1234, 10 * p + m);
        for (int it = 0; it < 40; ++it) {
            auto x = random_element(R, N, rng);
            auto y = random_element(R, N, rng);
            auto z = random_element(R, N, rng);
            CHECK(((x + y) + z).equals_at_precision(x + (y + z)));
            CHECK((x * (y + z)).equals_at_precision(x * y + x * z));
            CHECK((x * y).equals_at_precision(y * x));

            long vx = x.valuation_floor(), vy = y.valuation_floor();
            long vs = (x + y).valuation_floor();
            CHECK(vs >= std::min(vx, vy));
            if (vx != vy) CHECK(vs == std::min(vx, vy));
            if (!x.is_zero_at_precision() && !y.is_zero_at_precision()) {
                auto vp = (x * y).valuation();
                if (vx + vy < (x * y).precision()) {
                    REQUIRE(vp);
                    CHECK(*vp == vx + vy);
                }
            }
        }
    }
}

TEST_CASE("precision propagation rules") {
    auto z5 = make_ring(5, 0);
    auto a = PadicElement::from_integer(z5, 7, 20);
    auto b = PadicElement::from_integer(z5, 3, 15);
    CHECK((a + b).precision() == 15);
    CHECK((a * b).precision() == 15);
    // v(x) + prec(y) rule: 5 * (unit known mod 5^15) is known mod 5^16
    auto five = PadicElement::from_integer(z5, 5, 20);
    CHECK((five * b).precision() == 16);
}

TEST_CASE("inversion and division by uniformizer") {
    for (auto [p, m] : {std::pair<long, int>{5, 0}, {5, 1}, {7, 1}}) {
        auto R = make_ring(p, m);
        long N = R->default_precision();
        auto rng = child_rng(77, 10 * p + m);
        auto one = PadicElement::from_integer(R, 1, N);
        for (int it = 0; it < 12; ++it) {
            auto u = random_unit(R, N, rng);
            CHECK((u * u.invert()).equals_at_precision(one));
        }
        // divide pi^k * unit by pi^k
        auto pi = uniformizer(R, N + 3 * R->e);
        auto u = random_unit(R, N, rng);
        auto x = u * pi.pow(3);
        auto q = div_uniformizer_pow(x, 3);
        CHECK(q.equals_at_precision(u.with_precision(q.precision())));
    }
}

TEST_CASE("zeta is a primitive p^m-th root of unity") {
    for (auto [p, m] : {std::pair<long, int>{5, 1}, {5, 2}, {7, 1}}) {
        auto R = make_ring(p, m);
        long N = R->default_precision();
        auto zeta = principal_root(R, N);
        auto one = PadicElement::from_integer(R, 1, N);
        long pm = 1;
        for (int i = 0; i < m; ++i) pm *= p;
        CHECK(zeta.pow(pm).equals_at_precision(one));
        CHECK(!zeta.pow(pm / p).equals_at_precision(one));
    }
}

TEST_CASE("teichmuller lifts") {
    auto z5 = make_ring(5, 0);
    auto w2 = teichmuller(z5, 2, 20);
    auto one = PadicElement::from_integer(z5, 1, 20);
    CHECK(w2.pow(4).equals_at_precision(one));
    CHECK((w2.coeffs()[0] - 2) % 5 == 0);
    CHECK(teichmuller(z5, 1, 20).equals_at_precision(one));
    CHECK_THROWS_AS(teichmuller(z5, 10, 20), domain_error);

    // embedded lift: same relation holds in the extension
    auto r = make_ring(5, 1);
    long N = r->default_precision();
    auto w = teichmuller(r, 2, N);
    auto oneX = PadicElement::from_integer(r, 1, N);
    CHECK(w.pow(4).equals_at_precision(oneX));
    CHECK(embed(w2, r).equals_at_precision(w.with_precision(embed(w2, r).precision())));
}

TEST_CASE("root of unity realization is multiplicative") {
    auto r = make_ring(5, 2);
    long N = r->default_precision();
    auto a = RootOfUnity(20, 3);
    auto b = RootOfUnity(25, 7);
    auto va = realize(a, r, N);
    auto vb = realize(b, r, N);
    auto vab = realize(a * b, r, N);
    CHECK((va * vb).equals_at_precision(vab.with_precision((va * vb).precision())));

    // order is exact
    auto z = realize(RootOfUnity(25, 5), r, N); // reduces to order 5
    auto one = PadicElement::from_integer(r, 1, N);
    CHECK(z.pow(5).equals_at_precision(one));
    CHECK(!z.equals_at_precision(one));

    CHECK_THROWS_AS(realize(RootOfUnity(3, 1), r, N), precision_error);
    CHECK_THROWS_AS(realize(RootOfUnity(125, 1), r, N), precision_error);
}

TEST_CASE("mixed ring arithmetic is rejected") {
    auto z5 = make_ring(5, 0);
    auto r = make_ring(5, 1);
    auto a = PadicElement::from_integer(z5, 1, 20);
    auto b = PadicElement::from_integer(r, 1, 80);
    CHECK_THROWS_AS(a + b, domain_error);
    CHECK((embed(a, r) + b).precision() == 80);
}
