#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "padiclab/quad_orders.hpp"

using namespace padiclab;

namespace {

// Euler-criterion Legendre symbol, independent of the kronecker routine
int legendre_oracle(long long a, long long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long long r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = (r * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

// class of a prime ideal of norm l via the form (l, b, (b^2 - Delta)/4l)
long prime_ideal_class(const OrderClassGroup& G, long long l) {
    for (long long b = 0; b < 2 * l; ++b) {
        long long num = b * b - G.disc();
        if (num % (4 * l) == 0) {
            QuadForm f{l, b, num / (4 * l)};
            return G.index_of(reduce_form(f));
        }
    }
    throw std::runtime_error("no prime ideal of this norm");
}

// ideal counts by walking prime factorizations: split primes contribute
// P^i Pbar^(e-i), inert primes need even exponent, ramified P^e
std::vector<long> ideal_count_oracle(const OrderClassGroup& G, long long n) {
    std::vector<long> counts(G.size(), 0);
    std::map<long long, int> fac;
    long long m = n;
    for (long long q = 2; q * q <= m; ++q)
        while (m % q == 0) { fac[q]++; m /= q; }
    if (m > 1) fac[m]++;

    std::vector<std::pair<long, long>> acc{{G.identity(), 1}}; // (class, multiplicity)
    for (auto [l, e] : fac) {
        int om = kronecker(G.disc(), l);
        std::vector<std::pair<long, long>> loc;
        if (om == 1) {
            long P = prime_ideal_class(G, l);
            for (int i = 0; i <= e; ++i)
                loc.push_back({G.compose(G.power(P, i), G.power(G.inverse(P), e - i)), 1});
        } else if (om == -1) {
            if (e % 2) return counts; // no ideals of this norm
            loc.push_back({G.identity(), 1});
        } else {
            long P = prime_ideal_class(G, l);
            loc.push_back({G.power(P, e), 1});
        }
        std::vector<std::pair<long, long>> next;
        for (auto [c1, m1] : acc)
            for (auto [c2, m2] : loc) next.push_back({G.compose(c1, c2), m1 * m2});
        acc = std::move(next);
    }
    for (auto [cls, mult] : acc) counts[cls] += mult;
    return counts;
}

} // namespace

TEST_CASE("kronecker symbol") {
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-4, 11) == -1);
    CHECK(kronecker(-7, 11) == 1);
    CHECK(kronecker(-4, 2) == 0);
    // against the Euler criterion at odd primes
    for (long long p : {3LL, 5LL, 7LL, 11LL, 13LL, 101LL})
        for (long long a = -30; a <= 30; ++a) {
            if (a % p == 0) continue;
            CHECK(kronecker(a, p) == legendre_oracle(a, p));
        }
    // total multiplicativity in the bottom argument
    for (long long D : {-4LL, -23LL})
        for (long long m = 1; m <= 40; ++m)
            for (long long n = 1; n <= 40; ++n)
                CHECK(kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n));
}

TEST_CASE("reduced forms of small discriminants") {
    CHECK(reduced_forms(-4) == std::vector<QuadForm>{{1, 0, 1}});
    CHECK(reduced_forms(-23) == std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(reduced_forms(-47) ==
          std::vector<QuadForm>{{1, 1, 12}, {2, -1, 6}, {2, 1, 6}, {3, -1, 4}, {3, 1, 4}});
    CHECK_THROWS_AS(reduced_forms(5), domain_error);
}

TEST_CASE("class numbers match the order formula") {
    std::map<long long, long> h_max{{-3, 1}, {-4, 1}, {-7, 1}, {-8, 1},
                                    {-11, 1}, {-23, 3}, {-47, 5}};
    for (auto [D, h] : h_max) {
        QuadField K(D);
        CHECK(static_cast<long>(reduced_forms(D).size()) == h);
        for (long long c : {1LL, 5LL, 7LL, 25LL}) {
            OrderClassGroup G(K, c);
            CHECK(G.size() == order_class_number_formula(K, h, c));
        }
    }
}

TEST_CASE("composition group law") {
    QuadField K(-23);
    OrderClassGroup G(K, 1);
    REQUIRE(G.size() == 3);
    long id = G.identity();
    long a = G.index_of({2, 1, 3});
    long b = G.index_of({2, -1, 3});
    CHECK(G.compose(id, a) == a);
    CHECK(G.compose(a, b) == id); // inverse classes
    CHECK(G.compose(a, a) == b);  // order-3 group
    CHECK(G.inverse(a) == b);

    // abelian group axioms, exhaustively, over several groups
    for (auto [D, c] : std::vector<std::pair<long long, long long>>{
             {-4, 5}, {-4, 25}, {-7, 5}, {-23, 1}, {-47, 1}, {-8, 3}}) {
        OrderClassGroup H(QuadField(D), c);
        long n = H.size();
        REQUIRE(n <= 16);
        for (long i = 0; i < n; ++i) {
            CHECK(H.compose(H.identity(), i) == i);
            CHECK(H.compose(i, H.inverse(i)) == H.identity());
            for (long j = 0; j < n; ++j) {
                CHECK(H.compose(i, j) == H.compose(j, i));
                for (long k = 0; k < n; ++k)
                    CHECK(H.compose(H.compose(i, j), k) == H.compose(i, H.compose(j, k)));
            }
        }
    }
}

TEST_CASE("ideal counts: gaussian examples") {
    QuadField K(-4);
    OrderClassGroup G(K, 1);
    CHECK(G.ideal_count(0, 5) == 2);
    CHECK(G.ideal_count(0, 3) == 0);
    CHECK(G.ideal_count(0, 4) == 1);
    CHECK(G.ideal_count(0, 1) == 1);

    QuadField K23(-23);
    OrderClassGroup G23(K23, 1);
    long principal = G23.identity();
    CHECK(G23.ideal_count(principal, 2) == 0);
    for (long i = 0; i < 3; ++i)
        if (i != principal) CHECK(G23.ideal_count(i, 2) == 1);

    CHECK_THROWS_AS(OrderClassGroup(K, 5).ideal_count(0, 10), domain_error);
}

TEST_CASE("r_A(1) detects the principal class") {
    for (long long D : {-4LL, -23LL, -47LL}) {
        OrderClassGroup G(QuadField(D), 1);
        for (long i = 0; i < G.size(); ++i)
            CHECK(G.ideal_count(i, 1) == (i == G.identity() ? 1 : 0));
    }
}

TEST_CASE("ideal counts match the prime-splitting oracle") {
    for (auto [D, c] : std::vector<std::pair<long long, long long>>{
             {-4, 1}, {-23, 1}, {-47, 1}, {-4, 5}}) {
        OrderClassGroup G(QuadField(D), c);
        for (long long n = 1; n <= 500; ++n) {
            if (std::gcd(n, c) != 1) continue;
            auto oracle = ideal_count_oracle(G, n);
            for (long i = 0; i < G.size(); ++i) CHECK(G.ideal_count(i, n) == oracle[i]);
        }
    }
}

TEST_CASE("mass identity over divisor sums") {
    for (long long D : {-3LL, -4LL, -7LL, -8LL, -11LL, -23LL, -47LL}) {
        QuadField K(D);
        OrderClassGroup G(K, 1);
        for (long long n = 1; n <= 2000; ++n) {
            if (std::gcd(n, D) != 1) continue;
            long total = 0;
            for (long i = 0; i < G.size(); ++i) total += G.ideal_count(i, n);
            long divisor_sum = 0;
            for (long long d = 1; d <= n; ++d)
                if (n % d == 0) divisor_sum += K.omega(d);
            CHECK(total == divisor_sum);
        }
    }
}
