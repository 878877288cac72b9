#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "padiclab/characters.hpp"

using namespace padiclab;

TEST_CASE("cyclotomic character enumeration and conductors") {
    auto c51 = enumerate_cyclotomic(5, 1);
    REQUIRE(c51.size() == 4);
    long exact = 0, trivial = 0;
    for (const auto& x : c51) {
        if (x.conductor_exp() == 1) ++exact;
        if (x.is_trivial()) ++trivial;
    }
    CHECK(exact == 3);
    CHECK(trivial == 1);

    auto c52 = enumerate_cyclotomic(5, 2);
    REQUIRE(c52.size() == 20);
    long order5 = 0;
    for (const auto& x : c52)
        if (x.order() == 5) {
            ++order5;
            CHECK(x.conductor_exp() == 2); // all order-5 characters are primitive mod 25
        }
    CHECK(order5 == 4);

    auto c70 = enumerate_cyclotomic(7, 0);
    REQUIRE(c70.size() == 1);
    CHECK(c70[0].is_trivial());
}

TEST_CASE("conductor exactness by brute force") {
    for (const auto& x : enumerate_cyclotomic(5, 2)) {
        // smallest f with chi constant on residue classes mod 5^f
        int brute = 2;
        for (int f = 0; f <= 2; ++f) {
            long pf = 1;
            for (int i = 0; i < f; ++i) pf *= 5;
            bool constant = true;
            for (long a = 1; a < 25 && constant; ++a) {
                if (a % 5 == 0) continue;
                for (long b = a; b < 25; b += pf) {
                    if (b % 5 == 0) continue;
                    if (b % pf != a % pf) continue;
                    if (*x.value(a) != *x.value(b)) { constant = false; break; }
                }
            }
            if (constant) { brute = f; break; }
        }
        CHECK(x.conductor_exp() == brute);
    }
}

TEST_CASE("dirichlet tame/wild split recomposes") {
    for (const auto& x : enumerate_cyclotomic(5, 2)) {
        auto t = x.tame_part();
        auto w = x.wild_part();
        CHECK(std::gcd(t.order(), 5L) == 1);
        CHECK((w.order() == 1 || w.order() % 5 == 0));
        for (long a = 1; a < 25; ++a) {
            if (a % 5 == 0) continue;
            CHECK(*x.value(a) == (*t.value(a)) * (*w.value(a)));
        }
    }
}

TEST_CASE("ring class towers over Q(i)") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    CHECK(tower->group(0).size() == 1);
    CHECK(tower->group(1).size() == 2);
    CHECK(tower->group(2).size() == 10);

    // pushforward maps are surjective group homomorphisms with the right kernels
    for (int k = 1; k <= 2; ++k) {
        const auto& Gk = tower->group(k);
        const auto& Gj = tower->group(k - 1);
        std::vector<long> hits(Gj.size(), 0);
        for (long i = 0; i < Gk.size(); ++i) hits[tower->push_class(k, i, k - 1)]++;
        for (long j = 0; j < Gj.size(); ++j) CHECK(hits[j] == Gk.size() / Gj.size());
        for (long a = 0; a < Gk.size(); ++a)
            for (long b = 0; b < Gk.size(); ++b)
                CHECK(tower->push_class(k, Gk.compose(a, b), k - 1) ==
                      Gj.compose(tower->push_class(k, a, k - 1), tower->push_class(k, b, k - 1)));
    }

    // characters at level 1: two of them, one of exact conductor 5
    auto r1 = enumerate_ring_class(tower, 1);
    REQUIRE(r1.size() == 2);
    long exact = 0;
    for (const auto& r : r1)
        if (r.conductor_exp() == 1) ++exact;
    CHECK(exact == 1);

    // level 2: dual of Z/10
    auto r2 = enumerate_ring_class(tower, 2);
    REQUIRE(r2.size() == 10);
    long maxord = 0;
    for (const auto& r : r2) maxord = std::max(maxord, r.order());
    CHECK(maxord == 10);

    // level 0 with h = 1: trivial character only
    auto r0 = enumerate_ring_class(tower, 0);
    REQUIRE(r0.size() == 1);
    CHECK(r0[0].is_trivial());
}

TEST_CASE("ring class characters are conjugation equivariant") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    for (int level = 0; level <= 2; ++level) {
        const auto& G = tower->group(level);
        for (const auto& r : enumerate_ring_class(tower, level))
            for (long i = 0; i < G.size(); ++i)
                CHECK(r.value_class(G.conjugate(i)) == r.value_class(i).inverse());
    }
}

TEST_CASE("decompose: factorizations of Hecke characters") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);

    // trivial W
    auto W1 = trivial_hecke(tower);
    auto d1 = decompose(W1);
    CHECK(d1.tame.is_trivial());
    CHECK(d1.wild.is_trivial());

    // W = chi o N with chi of conductor 25 and order 5: wholly wild
    DirichletCharacter chi5(5, 2, 4);
    REQUIRE(chi5.order() == 5);
    HeckeCharacter W2{W1.rho, chi5};
    auto d2 = decompose(W2);
    CHECK(d2.tame.is_trivial());
    CHECK(d2.wild.chi == chi5);
    CHECK(d2.wild.rho.is_trivial());

    // W = rho (exact conductor 5) * chi (conductor 5, order 4): rho has
    // order 2, so both parts are tame and Ww is trivial
    auto rhos = enumerate_ring_class(tower, 1);
    RingClassCharacter rho_nontriv = rhos[0].is_trivial() ? rhos[1] : rhos[0];
    DirichletCharacter chi4(5, 1, 1);
    REQUIRE(chi4.order() == 4);
    HeckeCharacter W3{rho_nontriv, chi4};
    auto d3 = decompose(W3);
    CHECK(d3.wild.is_trivial());
    CHECK(d3.tame.rho.order() == 2);
    CHECK(d3.tame.chi.order() == 4);

    // recomposition: tame * wild reproduces W on classes and on units
    auto r2 = enumerate_ring_class(tower, 2);
    auto chis = enumerate_cyclotomic(5, 2);
    const auto& G2 = tower->group(2);
    for (std::size_t i = 0; i < r2.size(); i += 3)
        for (std::size_t j = 0; j < chis.size(); j += 7) {
            HeckeCharacter W{r2[i], chis[j]};
            auto d = decompose(W);
            for (long cls = 0; cls < G2.size(); ++cls)
                CHECK(W.rho.value_class(cls) ==
                      d.tame.rho.value_class(cls) * d.wild.rho.value_class(cls));
            for (long u = 1; u < 25; ++u) {
                if (u % 5 == 0) continue;
                CHECK(*W.chi.value(u) == (*d.tame.chi.value(u)) * (*d.wild.chi.value(u)));
            }
        }
}

TEST_CASE("orbits with fixed tame part") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    TameKey trivial_key = tame_key(trivial_hecke(tower));

    // c = 1, q = 25, trivial tame part: the four order-5 characters mod 25
    auto P = orbit(tower, 0, 2, trivial_key);
    REQUIRE(P.size() == 4);
    for (const auto& W : P) {
        CHECK(W.chi.order() == 5);
        CHECK(W.rho.is_trivial());
    }

    // c = q = 1: the trivial character alone
    auto P0 = orbit(tower, 0, 0, trivial_key);
    REQUIRE(P0.size() == 1);
    CHECK(P0[0].is_trivial());

    // c = 25, q = 1, trivial tame part: the four order-5 ring class characters
    auto P25 = orbit(tower, 2, 0, trivial_key);
    REQUIRE(P25.size() == 4);
    for (const auto& W : P25) {
        CHECK(W.rho.order() == 5);
        CHECK(W.chi.is_trivial());
    }
}

TEST_CASE("orbit sizes agree with direct enumeration") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    for (int c_exp = 0; c_exp <= 2; ++c_exp)
        for (int q_exp = 0; q_exp <= 2; ++q_exp) {
            // partition all primitive (c, q) characters by tame key
            std::vector<std::pair<TameKey, long>> sizes;
            for (const auto& r : enumerate_ring_class(tower, c_exp)) {
                if (r.conductor_exp() != c_exp) continue;
                for (const auto& x : enumerate_cyclotomic(5, q_exp)) {
                    if (x.conductor_exp() != q_exp) continue;
                    TameKey k = tame_key(HeckeCharacter{r, x});
                    bool found = false;
                    for (auto& [key, cnt] : sizes)
                        if (key == k) { ++cnt; found = true; break; }
                    if (!found) sizes.push_back({k, 1});
                }
            }
            for (const auto& [key, cnt] : sizes) {
                auto P = orbit(tower, c_exp, q_exp, key);
                CHECK(static_cast<long>(P.size()) == cnt);
            }
        }
}

TEST_CASE("wild values on the fixed generators") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    // the anticyclotomic generator at level 2 has order 5 in Pic(O_25)
    CHECK(tower->group(2).order_of(tower->anticyclotomic_generator(2)) == 5);

    for (const auto& r : enumerate_ring_class(tower, 2)) {
        auto v = HeckeCharacter{r, DirichletCharacter()}.anticyclotomic_wild_value();
        if (r.order() % 5 == 0) CHECK(v.order == 5);
        else CHECK(v.is_one());
    }
    // cyclotomic wild value: chi_w(1 + p)
    for (const auto& x : enumerate_cyclotomic(5, 2)) {
        auto W = HeckeCharacter{enumerate_ring_class(tower, 0)[0], x};
        auto v = W.cyclotomic_wild_value();
        if (x.order() % 5 == 0) CHECK(v.order == 5);
        else CHECK(v.is_one());
    }
}

TEST_CASE("ramified primes are rejected") {
    QuadField K(-5 * 4); // D = -20, 5 ramified
    CHECK_THROWS_AS(make_tower(K, 5, 1), domain_error);
}

TEST_CASE("basechange lift of a ring class character") {
    QuadField K(-4);
    auto tower = make_tower(K, 5, 2);
    auto rhos = enumerate_ring_class(tower, 2);
    for (const auto& r : rhos) {
        auto lifted = basechange_char(r, 3);
        CHECK(lifted.order() == r.order());
        CHECK(lifted.value_on_lifted_generator_power(1) ==
              r.wild_part().anticyclotomic_value());
        if (r.is_trivial()) CHECK(lifted.value_on_lifted_generator_power(1).is_one());
    }
}
