#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "padiclab/abelian.hpp"
#include "padiclab/quad_orders.hpp"
#include "padiclab/rootu.hpp"

namespace padiclab {

// ---------------------------------------------------------------------------
// Dirichlet characters of p-power modulus.  (Z/p^n)^* is cyclic for odd p;
// a character is its exponent on a fixed primitive root.

inline long primitive_root_mod_prime_power(long p, int n) {
    // a primitive root g mod p with g^(p-1) != 1 mod p^2 generates (Z/p^n)^*
    auto order_pm1_factors = [&] {
        std::vector<long> qs;
        long m = p - 1;
        for (long q = 2; q * q <= m; ++q)
            if (m % q == 0) {
                qs.push_back(q);
                while (m % q == 0) m /= q;
            }
        if (m > 1) qs.push_back(m);
        return qs;
    };
    auto powmod = [](long long b, long long e, long long m) {
        long long r = 1;
        b %= m;
        while (e) {
            if (e & 1) r = (__int128(r) * b) % m;
            b = (__int128(b) * b) % m;
            e >>= 1;
        }
        return static_cast<long>(r);
    };
    std::vector<long> qs = order_pm1_factors();
    for (long g = 2; g < p; ++g) {
        bool prim = true;
        for (long q : qs)
            if (powmod(g, (p - 1) / q, p) == 1) { prim = false; break; }
        if (!prim) continue;
        if (n >= 2 && powmod(g, p - 1, static_cast<long long>(p) * p) == 1) {
            // g + p is still primitive mod p and not exceptional
            return g + p;
        }
        return g;
    }
    throw domain_error("no primitive root found");
}

class DirichletCharacter {
public:
    // the trivial character mod 1
    DirichletCharacter() = default;

    DirichletCharacter(long p, int n, long t) : p_(p), n_(n), t_(t) {
        modulus_ = 1;
        for (int i = 0; i < n; ++i) modulus_ *= p;
        phi_ = (n == 0) ? 1 : modulus_ / p * (p - 1);
        t_ = ((t_ % phi_) + phi_) % phi_;
        if (n_ >= 1) {
            gen_ = primitive_root_mod_prime_power(p, n_);
            dlog_.assign(modulus_, -1);
            long long x = 1;
            for (long e = 0; e < phi_; ++e) {
                dlog_[x] = e;
                x = (x * gen_) % modulus_;
            }
        }
        order_ = phi_ / std::gcd(phi_, t_);
        // conductor: p^(s+1) for a nontrivial character whose order has
        // p-part p^s; tame characters have conductor p, the trivial one 1
        if (order_ == 1) {
            cond_exp_ = 0;
        } else {
            long o = order_;
            int s = 0;
            while (o % p == 0) { o /= p; ++s; }
            cond_exp_ = s + 1;
        }
    }

    long p() const { return p_; }
    int modulus_exp() const { return n_; }
    long modulus() const { return modulus_; }
    long index() const { return t_; }
    long order() const { return order_; }
    int conductor_exp() const { return cond_exp_; }
    long conductor() const {
        long c = 1;
        for (int i = 0; i < cond_exp_; ++i) c *= p_;
        return c;
    }
    bool is_trivial() const { return order_ == 1; }

    // nullopt on arguments sharing a factor with the modulus
    std::optional<RootOfUnity> value(long long k) const {
        if (n_ == 0) return RootOfUnity();
        long long r = k % modulus_;
        if (r < 0) r += modulus_;
        if (r % p_ == 0) return std::nullopt;
        return RootOfUnity(phi_, t_ * dlog_[r]);
    }

    DirichletCharacter power(long e) const {
        if (n_ == 0) return *this;
        long ee = ((e % phi_) + phi_) % phi_;
        return DirichletCharacter(p_, n_, (t_ * ee) % phi_);
    }

    // component of prime-to-p order (the tamely ramified part)
    DirichletCharacter tame_part() const {
        if (n_ == 0) return *this;
        long o = order_;
        long ps = 1;
        while (o % p_ == 0) { o /= p_; ps *= p_; }
        // exponent a = 1 mod o, 0 mod ps
        long a = crt_one_zero(o, ps);
        return power(a);
    }
    // component of p-power order (the wildly ramified part)
    DirichletCharacter wild_part() const {
        if (n_ == 0) return *this;
        long o = order_;
        long ps = 1;
        while (o % p_ == 0) { o /= p_; ps *= p_; }
        long b = crt_one_zero(ps, o);
        return power(b);
    }

    bool operator==(const DirichletCharacter& o) const {
        return p_ == o.p_ && n_ == o.n_ && t_ == o.t_;
    }

private:
    static long crt_one_zero(long m1, long m0) {
        // smallest a >= 0 with a = 1 mod m1, a = 0 mod m0
        for (long a = 0; a < m0 * m1; a += m0)
            if (a % m1 == 1 % m1) return a;
        throw domain_error("crt failure");
    }

    long p_ = 0;
    int n_ = 0;
    long modulus_ = 1;
    long phi_ = 1;
    long t_ = 0;
    long gen_ = 0;
    long order_ = 1;
    int cond_exp_ = 0;
    std::vector<long> dlog_;
};

inline std::vector<DirichletCharacter> enumerate_cyclotomic(long p, int n) {
    if (n == 0) return {DirichletCharacter()};
    long phi = 1;
    for (int i = 0; i < n - 1; ++i) phi *= p;
    phi *= (p - 1);
    std::vector<DirichletCharacter> out;
    out.reserve(phi);
    for (long t = 0; t < phi; ++t) out.emplace_back(p, n, t);
    return out;
}

// ---------------------------------------------------------------------------
// Ring class characters via the tower Pic(O_{p^k}) -> ... -> Pic(O_K)

// Tower of order class groups with the norm maps between adjacent levels and
// a coherent choice of anticyclotomic generator classes.
class ClassGroupTower {
public:
    ClassGroupTower(const QuadField& field, long p, int kmax) : field_(field), p_(p) {
        if (p < 5) throw domain_error("p must be >= 5");
        if (field.D % p == 0)
            throw domain_error("unsupported-ramified: p divides the discriminant");
        long long c = 1;
        for (int k = 0; k <= kmax; ++k) {
            levels_.emplace_back(field, c);
            c *= p;
        }
        for (auto& G : levels_) {
            structures_.push_back(analyze_abelian(
                G.size(), [&G](long a, long b) { return G.compose(a, b); }, G.identity()));
        }
        // adjacent pushforward maps Pic(O_{p^k}) -> Pic(O_{p^(k-1)})
        push_.resize(levels_.size());
        for (std::size_t k = 1; k < levels_.size(); ++k) {
            push_[k].resize(levels_[k].size());
            for (long i = 0; i < levels_[k].size(); ++i)
                push_[k][i] = push_class_once(static_cast<int>(k), i);
        }
        // anticyclotomic generator chain: at the deepest level, the first
        // class of maximal p-power order; below, its images
        anti_gen_.assign(levels_.size(), levels_[0].identity());
        int top = static_cast<int>(levels_.size()) - 1;
        anti_gen_[top] = max_p_order_class(top);
        for (int k = top; k >= 1; --k) anti_gen_[k - 1] = push_[k][anti_gen_[k]];
    }

    const QuadField& field() const { return field_; }
    long p() const { return p_; }
    int max_level() const { return static_cast<int>(levels_.size()) - 1; }
    const OrderClassGroup& group(int k) const { return levels_.at(k); }
    const FiniteAbelianGroup& structure(int k) const { return structures_.at(k); }
    long anticyclotomic_generator(int k) const { return anti_gen_.at(k); }

    // image of a level-k class at level j <= k
    long push_class(int k, long cls, int j) const {
        long c = cls;
        for (int l = k; l > j; --l) c = push_[l][c];
        return c;
    }

private:
    long push_class_once(int k, long cls) const {
        const OrderClassGroup& Gk = levels_[k];
        const OrderClassGroup& Gj = levels_[k - 1];
        QuadForm f = detail::represent_coprime(Gk.forms()[cls], p_);
        // ideal [v, (-b + p^k sqrt(D))/2] extends to the smaller order as
        // [v, (-b' + p^(k-1) sqrt(D))/2] with b' = b / p mod 2v
        long long v = f.a;
        long long m = 2 * v;
        long long pinv = 0;
        {
            long long a = ((p_ % m) + m) % m, b = m, x0 = 1, x1 = 0;
            while (b != 0) {
                long long q = a / b;
                std::swap(a -= q * b, b);
                std::swap(x0 -= q * x1, x1);
            }
            if (a != 1 && a != -1) throw domain_error("pushforward: p not invertible mod 2a");
            pinv = (a == 1) ? x0 : -x0;
            pinv = ((pinv % m) + m) % m;
        }
        long long b2 = (__int128(((f.b % m) + m) % m) * pinv) % m;
        __int128 num = __int128(b2) * b2 - Gj.disc();
        if (num % (__int128(4) * v) != 0) throw domain_error("pushforward alignment failed");
        long long c2 = static_cast<long long>(num / (__int128(4) * v));
        return Gj.index_of(reduce_form(QuadForm{v, b2, c2}));
    }

    long max_p_order_class(int k) const {
        const OrderClassGroup& G = levels_[k];
        long best = G.identity(), best_ord = 1;
        for (long i = 0; i < G.size(); ++i) {
            long o = G.order_of(i);
            // p-part of the order
            long op = 1;
            while (o % p_ == 0) { o /= p_; op *= p_; }
            long pe = G.power(i, G.order_of(i) / op); // element of exact order op
            if (op > best_ord) { best_ord = op; best = pe; }
        }
        return best;
    }

    QuadField field_;
    long p_;
    std::vector<OrderClassGroup> levels_;
    std::vector<FiniteAbelianGroup> structures_;
    std::vector<std::vector<long>> push_;
    std::vector<long> anti_gen_;
};

using TowerPtr = std::shared_ptr<const ClassGroupTower>;

inline TowerPtr make_tower(const QuadField& field, long p, int kmax) {
    return std::make_shared<const ClassGroupTower>(field, p, kmax);
}

class RingClassCharacter {
public:
    RingClassCharacter(TowerPtr tower, int level, std::vector<long> exps)
        : tower_(std::move(tower)), level_(level), exps_(std::move(exps)) {
        const auto& S = tower_->structure(level_);
        if (static_cast<long>(exps_.size()) != S.rank())
            throw domain_error("exponent tuple does not match the group rank");
        for (long i = 0; i < S.rank(); ++i) exps_[i] = ((exps_[i] % S.orders[i]) + S.orders[i]) % S.orders[i];
        order_ = 1;
        for (long i = 0; i < S.rank(); ++i)
            order_ = std::lcm(order_, S.orders[i] / std::gcd(S.orders[i], exps_[i]));
        cond_exp_ = exact_conductor_exp();
    }

    const TowerPtr& tower() const { return tower_; }
    int level() const { return level_; }
    const std::vector<long>& exps() const { return exps_; }
    long order() const { return order_; }
    int conductor_exp() const { return cond_exp_; }
    long long conductor() const {
        long long c = 1;
        for (int i = 0; i < cond_exp_; ++i) c *= tower_->p();
        return c;
    }
    bool is_trivial() const { return order_ == 1; }

    RootOfUnity value_class(long cls) const {
        return tower_->structure(level_).character_value(exps_, cls);
    }

    RingClassCharacter power(long e) const {
        std::vector<long> ne = exps_;
        const auto& S = tower_->structure(level_);
        for (long i = 0; i < S.rank(); ++i) ne[i] = (__int128(ne[i]) * ((e % S.orders[i] + S.orders[i]) % S.orders[i])) % S.orders[i];
        return RingClassCharacter(tower_, level_, ne);
    }

    RingClassCharacter tame_part() const {
        long o = order_, ps = 1;
        while (o % tower_->p() == 0) { o /= tower_->p(); ps *= tower_->p(); }
        return power(crt_one_zero(o, ps));
    }
    RingClassCharacter wild_part() const {
        long o = order_, ps = 1;
        while (o % tower_->p() == 0) { o /= tower_->p(); ps *= tower_->p(); }
        return power(crt_one_zero(ps, o));
    }

    // value on the fixed anticyclotomic generator class of this level
    RootOfUnity anticyclotomic_value() const {
        return value_class(tower_->anticyclotomic_generator(level_));
    }

    // canonical representation at the exact conductor: the value on every
    // class of Pic(O_{p^cond}), in class order
    std::vector<RootOfUnity> values_at_conductor() const {
        const auto& Gc = tower_->group(cond_exp_);
        std::vector<RootOfUnity> vals(Gc.size());
        std::vector<bool> seen(Gc.size(), false);
        const auto& Gk = tower_->group(level_);
        for (long i = 0; i < Gk.size(); ++i) {
            long j = tower_->push_class(level_, i, cond_exp_);
            if (!seen[j]) {
                seen[j] = true;
                vals[j] = value_class(i);
            }
        }
        return vals;
    }

private:
    static long crt_one_zero(long m1, long m0) {
        for (long a = 0; a < m0 * m1; a += m0)
            if (a % m1 == 1 % m1) return a;
        throw domain_error("crt failure");
    }

    int exact_conductor_exp() const {
        // smallest j such that the character kills ker(Pic_level -> Pic_j)
        const auto& Gk = tower_->group(level_);
        for (int j = 0; j <= level_; ++j) {
            bool trivial_on_kernel = true;
            for (long i = 0; i < Gk.size() && trivial_on_kernel; ++i) {
                if (tower_->push_class(level_, i, j) != tower_->group(j).identity()) continue;
                if (!value_class(i).is_one()) trivial_on_kernel = false;
            }
            if (trivial_on_kernel) return j;
        }
        return level_;
    }

    TowerPtr tower_;
    int level_;
    std::vector<long> exps_;
    long order_ = 1;
    int cond_exp_ = 0;
};

inline std::vector<RingClassCharacter> enumerate_ring_class(const TowerPtr& tower, int level) {
    std::vector<RingClassCharacter> out;
    for (const auto& e : tower->structure(level).dual())
        out.emplace_back(tower, level, e);
    return out;
}

// ---------------------------------------------------------------------------
// Hecke characters W = rho * (chi o N) with the tame/wild factorizations

struct HeckeCharacter {
    RingClassCharacter rho;
    DirichletCharacter chi;

    long p() const { return rho.tower()->p(); }

    // c(W): the rational integer with conductor ideal c(W) O_K; its norm is
    // the square (both stored per the conductor-vs-norm reading)
    int conductor_exp() const { return std::max(rho.conductor_exp(), chi.conductor_exp()); }
    long long conductor() const {
        long long c = 1;
        for (int i = 0; i < conductor_exp(); ++i) c *= p();
        return c;
    }
    long long conductor_norm() const { return conductor() * conductor(); }

    bool is_ring_class() const { return chi.is_trivial(); }
    bool is_trivial() const { return rho.is_trivial() && chi.is_trivial(); }
    long order() const { return std::lcm(rho.order(), chi.order()); }

    HeckeCharacter tame_part() const { return {rho.tame_part(), chi.tame_part()}; }
    HeckeCharacter wild_part() const { return {rho.wild_part(), chi.wild_part()}; }

    // wild values on the fixed topological generators: the anticyclotomic
    // generator class, and 1+p under the cyclotomic character
    RootOfUnity anticyclotomic_wild_value() const {
        return rho.wild_part().anticyclotomic_value();
    }
    RootOfUnity cyclotomic_wild_value() const {
        auto v = chi.wild_part().value(1 + p());
        return v ? *v : RootOfUnity();
    }
};

struct Decomposition {
    HeckeCharacter rho_component;  // rho with trivial chi
    HeckeCharacter chi_component;  // chi o N with trivial rho
    HeckeCharacter tame;           // W0
    HeckeCharacter wild;           // Ww
};

inline HeckeCharacter trivial_hecke(const TowerPtr& tower) {
    return {RingClassCharacter(tower, 0, std::vector<long>(tower->structure(0).rank(), 0)),
            DirichletCharacter()};
}

inline Decomposition decompose(const HeckeCharacter& W) {
    RingClassCharacter rho0 = W.rho.power(0); // trivial character at the same level
    return Decomposition{
        HeckeCharacter{W.rho, DirichletCharacter()},
        HeckeCharacter{rho0, W.chi},
        W.tame_part(),
        W.wild_part(),
    };
}

// canonical key identifying the tamely ramified part W0
struct TameKey {
    int rho_cond_exp = 0;
    std::vector<RootOfUnity> rho_values; // on the classes at the conductor level
    int chi_cond_exp = 0;
    RootOfUnity chi_gen_value;           // on the primitive root at the conductor

    bool operator==(const TameKey& o) const {
        return rho_cond_exp == o.rho_cond_exp && rho_values == o.rho_values &&
               chi_cond_exp == o.chi_cond_exp && chi_gen_value == o.chi_gen_value;
    }
};

inline TameKey tame_key(const HeckeCharacter& W) {
    HeckeCharacter t = W.tame_part();
    TameKey key;
    key.rho_cond_exp = t.rho.conductor_exp();
    key.rho_values = t.rho.values_at_conductor();
    key.chi_cond_exp = t.chi.conductor_exp();
    if (key.chi_cond_exp == 0) {
        key.chi_gen_value = RootOfUnity();
    } else {
        long g = primitive_root_mod_prime_power(W.p(), key.chi_cond_exp);
        auto v = t.chi.value(g);
        key.chi_gen_value = v ? *v : RootOfUnity();
    }
    return key;
}

// P_{c, q; W0}: all W = rho * chi o N with rho primitive of conductor p^c_exp,
// chi primitive of conductor p^q_exp, and the given tame part
inline std::vector<HeckeCharacter> orbit(const TowerPtr& tower, int c_exp, int q_exp,
                                         const TameKey& W0) {
    if (tower->max_level() < c_exp)
        throw domain_error("tower too shallow for the requested ring class conductor");
    std::vector<HeckeCharacter> out;
    std::vector<RingClassCharacter> rhos;
    for (const auto& r : enumerate_ring_class(tower, c_exp))
        if (r.conductor_exp() == c_exp) rhos.push_back(r);
    std::vector<DirichletCharacter> chis;
    for (const auto& x : enumerate_cyclotomic(tower->p(), q_exp))
        if (x.conductor_exp() == q_exp) chis.push_back(x);
    for (const auto& r : rhos)
        for (const auto& x : chis) {
            HeckeCharacter W{r, x};
            if (tame_key(W) == W0) out.push_back(W);
        }
    return out;
}

// rho composed with the norm from the level-n layer of the cyclotomic tower:
// under the compatible choice of generators this is the same exponent data
// read on the lifted group, so the object carries the level tag
struct LiftedRingClassCharacter {
    RingClassCharacter base;
    int cyclotomic_level = 0;

    RootOfUnity value_on_lifted_generator_power(long k) const {
        return base.wild_part().anticyclotomic_value().pow(k);
    }
    long order() const { return base.order(); }
};

inline LiftedRingClassCharacter basechange_char(const RingClassCharacter& rho, int n) {
    return LiftedRingClassCharacter{rho, n};
}

} // namespace padiclab
