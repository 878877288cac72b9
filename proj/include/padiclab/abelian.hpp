#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "padiclab/errors.hpp"
#include "padiclab/rootu.hpp"

namespace padiclab {

// Basis decomposition of a finite abelian group given by a multiplication
// law on indices 0..n-1.  Elements get coordinates with respect to a direct
// sum of cyclic factors; the dual group is enumerated as exponent tuples.
struct FiniteAbelianGroup {
    long n = 1;
    std::vector<long> basis;               // element index of each cyclic generator
    std::vector<long> orders;              // order of each generator
    std::vector<std::vector<long>> coords; // coords[x][i]: exponent of basis[i] in x

    long rank() const { return static_cast<long>(basis.size()); }

    RootOfUnity character_value(const std::vector<long>& char_exps, long x) const {
        RootOfUnity v;
        for (long i = 0; i < rank(); ++i)
            v = v * RootOfUnity(orders[i], char_exps[i] * coords[x][i]);
        return v;
    }

    // all characters as exponent tuples, odometer order
    std::vector<std::vector<long>> dual() const {
        std::vector<std::vector<long>> out;
        std::vector<long> e(rank(), 0);
        for (;;) {
            out.push_back(e);
            long i = rank() - 1;
            while (i >= 0 && ++e[i] == orders[i]) e[i--] = 0;
            if (i < 0) break;
        }
        return out;
    }
};

inline FiniteAbelianGroup analyze_abelian(long n, const std::function<long(long, long)>& mul,
                                          long id) {
    FiniteAbelianGroup G;
    G.n = n;
    if (n == 1) {
        G.coords.assign(1, {});
        return G;
    }
    std::vector<long> order(n, 0);
    for (long x = 0; x < n; ++x) {
        long r = x, o = 1;
        while (r != id) { r = mul(r, x); ++o; }
        order[x] = o;
    }
    std::vector<long> cand(n);
    for (long i = 0; i < n; ++i) cand[i] = i;
    std::sort(cand.begin(), cand.end(), [&](long a, long b) {
        return order[a] != order[b] ? order[a] > order[b] : a < b;
    });

    auto closure = [&](const std::vector<long>& gens) {
        std::set<long> S{id};
        std::vector<long> work{id};
        while (!work.empty()) {
            long x = work.back();
            work.pop_back();
            for (long g : gens) {
                long y = mul(x, g);
                if (S.insert(y).second) work.push_back(y);
            }
        }
        return S;
    };

    // backtracking search for a direct-sum generating set, largest orders first
    std::vector<long> basis, orders;
    std::function<bool(std::set<long>&)> extend = [&](std::set<long>& sub) -> bool {
        long size = static_cast<long>(sub.size());
        if (size == n) return true;
        for (long g : cand) {
            if (sub.count(g)) continue;
            if ((size * order[g]) > n || n % (size * order[g]) != 0) continue;
            basis.push_back(g);
            auto bigger = closure(basis);
            if (static_cast<long>(bigger.size()) == size * order[g]) {
                orders.push_back(order[g]);
                if (extend(bigger)) return true;
                orders.pop_back();
            }
            basis.pop_back();
        }
        return false;
    };
    std::set<long> start{id};
    if (!extend(start)) throw domain_error("abelian basis search failed");

    G.basis = basis;
    G.orders = orders;
    // walk all exponent tuples to assign coordinates
    G.coords.assign(n, {});
    long rank = static_cast<long>(basis.size());
    std::vector<long> e(rank, 0);
    for (;;) {
        long x = id;
        for (long i = 0; i < rank; ++i)
            for (long k = 0; k < e[i]; ++k) x = mul(x, basis[i]);
        G.coords[x] = e;
        long i = rank - 1;
        while (i >= 0 && ++e[i] == orders[i]) e[i--] = 0;
        if (i < 0) break;
    }
    for (long x = 0; x < n; ++x)
        if (G.coords[x].empty() && rank > 0 && x != id)
            throw domain_error("abelian coordinates incomplete");
    return G;
}

} // namespace padiclab
