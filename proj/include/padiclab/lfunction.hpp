#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padiclab/characters.hpp"
#include "padiclab/modform.hpp"
#include "padiclab/quad_orders.hpp"

namespace padiclab {

using Complex = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

// Lanczos approximation (g = 7), accurate to ~1e-14 on the right half plane;
// the reflection formula covers Re z < 1/2.  Only exp(lgamma) is ever used,
// so branch offsets of the log are harmless.
inline Complex lgamma_complex(Complex z) {
    static const double g = 7.0;
    static const double c[9] = {0.99999999999980993,    676.5203681218851,
                                -1259.1392167224028,    771.32342877765313,
                                -176.61502916214059,    12.507343278686905,
                                -0.13857109526572012,   9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    Complex x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    Complex t = z + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log of Gamma_C(w) = 2 (2 pi)^(-w) Gamma(w)
inline Complex log_gamma_C(Complex w) {
    return std::log(2.0) - w * std::log(2.0 * kPi) + lgamma_complex(w);
}

// ---------------------------------------------------------------------------
// completed-value evaluation by a shifted-contour expansion
//
// Lambda(s) = C^s gamma(s) L(s) with gamma(s) = Gamma_C(s + 1/2)^copies and
// C the square root of the analytic conductor.  With G == 1 the kernel
//   V_w(n) = (1/2 pi i) int_(sigma0) C^(w+z) gamma(w+z) n^(-w-z) dz / z
// gives Lambda(s) = sum b_n V_s(n) + eps sum conj(b_n) V_(1-s)(n); the shift
// crosses only the z = 0 pole because Lambda is entire here.

struct AfeContext {
    double C = 1.0;     // N * Delta
    int copies = 2;     // Gamma_C factors (2 for the Rankin-Selberg kernel)
    double sigma0 = 2.0;
    double dy = 0.2;
    double ymax = 18.0;

    Complex log_gamma_factor(Complex w) const {
        return double(copies) * log_gamma_C(w + 0.5);
    }
};

// quadrature samples of (dy/2pi) * C^(w+z) gamma(w+z) / z on z = sigma0 + iy;
// the window grows with |Im w| so the gamma-decay region is always covered
inline std::vector<Complex> afe_kernel_samples(const AfeContext& ctx, Complex w) {
    double span = ctx.ymax + std::abs(w.imag());
    long m = static_cast<long>(std::floor(2 * span / ctx.dy)) + 1;
    std::vector<Complex> P(m);
    double logC = std::log(ctx.C);
    for (long j = 0; j < m; ++j) {
        Complex z(ctx.sigma0, -span + j * ctx.dy);
        Complex lg = (w + z) * logC + ctx.log_gamma_factor(w + z);
        P[j] = (ctx.dy / (2.0 * kPi)) * std::exp(lg) / z;
    }
    return P;
}

// sum_{n <= M} b_n V_w(n) using the y-geometric factorization of n^(-z)
inline Complex afe_sum(const AfeContext& ctx, Complex w, const std::vector<Complex>& b,
                       long M, bool conjugate_b) {
    std::vector<Complex> P = afe_kernel_samples(ctx, w);
    long m = static_cast<long>(P.size());
    double span = ctx.ymax + std::abs(w.imag());
    std::complex<long double> acc(0.0L, 0.0L);
    for (long n = 1; n <= M; ++n) {
        Complex bn = b[n];
        if (conjugate_b) bn = std::conj(bn);
        if (bn == Complex(0.0, 0.0)) continue;
        double u = std::log(double(n));
        // n^(-w - z_j) = n^(-w) e^(-sigma0 u) e^(i span u) r^j, r = e^(-i dy u)
        Complex nw = std::exp(-w * u) * std::exp(-ctx.sigma0 * u);
        Complex rho = std::polar(1.0, span * u);
        Complex r = std::polar(1.0, -ctx.dy * u);
        Complex inner(0.0, 0.0);
        for (long j = 0; j < m; ++j) {
            inner += P[j] * rho;
            rho *= r;
        }
        Complex term = bn * nw * inner;
        acc += std::complex<long double>(term.real(), term.imag());
    }
    return Complex(double(acc.real()), double(acc.imag()));
}

inline Complex completed_lambda(const AfeContext& ctx, Complex s,
                                const std::vector<Complex>& b, Complex eps, long M) {
    if (M >= static_cast<long>(b.size()))
        throw precision_error("insufficient-coefficients for the requested truncation");
    Complex main = afe_sum(ctx, s, b, M, false);
    Complex dual = afe_sum(ctx, 1.0 - s, b, M, true);
    return main + eps * dual;
}

// ---------------------------------------------------------------------------
// independent functional-equation test
//
// J(s) = (1/2 pi i) int_(sigma0) Lambda(s+z) cos(beta z) dz is a plain
// coefficient sum on each side, and the functional equation forces
// J(s) = eps Jtilde(1-s).  No epsilon enters the computation of either side:
//   J(s) = (e^(-i beta s) S- + e^(i beta s) S+) / 2,
//   S+- = sum_n b_n Phi((n/C) e^(+-i beta)),
// with Phi the inverse Mellin transform of gamma: Phi(x) = 8 sqrt(x) K_0(4 pi sqrt(x)).

inline Complex bessel_k0(Complex w) {
    double aw = std::abs(w);
    if (aw <= 9.5) {
        // K_0 = -(log(w/2) + gammaE) I_0 + sum (w^2/4)^k / (k!)^2 H_k
        const double euler = 0.57721566490153286061;
        Complex q = w * w * 0.25;
        Complex i0(1.0, 0.0), term(1.0, 0.0), hsum(0.0, 0.0);
        double hk = 0.0;
        for (int k = 1; k <= 60; ++k) {
            term *= q / double(k * k);
            i0 += term;
            hk += 1.0 / k;
            hsum += term * hk;
            if (std::abs(term) < 1e-20 * (std::abs(i0) + 1.0)) break;
        }
        return -(std::log(w * 0.5) + euler) * i0 + hsum;
    }
    // asymptotic series, truncated at the smallest term
    Complex sum(1.0, 0.0), term(1.0, 0.0);
    double best = 1e300;
    for (int k = 1; k <= 40; ++k) {
        double num = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= -num / (8.0 * double(k)) / w;
        if (std::abs(term) > best) break;
        best = std::abs(term);
        sum += term;
        if (best < 1e-18) break;
    }
    return std::sqrt(kPi / (2.0 * w)) * std::exp(-w) * sum;
}

// Phi(x) = 8 sqrt(x) K_0(4 pi sqrt(x)) continued to | arg x | < pi
inline Complex mellin_pair_phi(Complex x) {
    Complex r = std::sqrt(x);
    return 8.0 * r * bessel_k0(4.0 * kPi * r);
}

struct BesselSums {
    Complex plus, minus; // S+ and S-
    double beta = 0.5;
};

inline BesselSums fe_kernel_sums(double C, double beta, const std::vector<Complex>& b, long M) {
    if (M >= static_cast<long>(b.size()))
        throw precision_error("insufficient-coefficients for the requested truncation");
    std::complex<long double> sp(0.0L, 0.0L), sm(0.0L, 0.0L);
    Complex rot = std::polar(1.0, beta);
    for (long n = 1; n <= M; ++n) {
        if (b[n] == Complex(0.0, 0.0)) continue;
        Complex phi = mellin_pair_phi(double(n) / C * rot);
        Complex tp = b[n] * phi;          // S+
        Complex tm = b[n] * std::conj(phi); // S-: Phi(conj x) = conj Phi(x)
        sp += std::complex<long double>(tp.real(), tp.imag());
        sm += std::complex<long double>(tm.real(), tm.imag());
    }
    return BesselSums{Complex(double(sp.real()), double(sp.imag())),
                      Complex(double(sm.real()), double(sm.imag())), beta};
}

inline Complex smoothed_completed_value(const BesselSums& S, Complex s) {
    Complex em = std::exp(Complex(0.0, -1.0) * S.beta * s);
    Complex ep = std::exp(Complex(0.0, 1.0) * S.beta * s);
    return 0.5 * (em * S.minus + ep * S.plus);
}

// |J(1/2+it) - eps * Jtilde(1/2-it)| where Jtilde uses the conjugate
// coefficients: Stilde+- = conj(S-+)
inline double fe_residual(const BesselSums& S, Complex eps, double t) {
    Complex s(0.5, t);
    Complex J = smoothed_completed_value(S, s);
    BesselSums St{std::conj(S.minus), std::conj(S.plus), S.beta};
    Complex Jt = smoothed_completed_value(St, 1.0 - s);
    return std::abs(J - eps * Jt);
}

// ---------------------------------------------------------------------------
// Rankin-Selberg series assembly

struct RootNumber {
    RootOfUnity label;   // the -omega(N') chi^2(N') sign data
    Complex value;       // analytic root number used in the functional equation
    bool self_dual;      // chi^2 trivial: the analytic value is +-1
    std::string method;  // classical | gauss-sum | measured
};

// -omega(N') chi^2(N') as an exact label, N' the prime-to-p part of the level
inline RootNumber root_number(const CoefficientTable& f, const QuadField& field, long p,
                              const DirichletCharacter& chi) {
    long long Nprime = f.level;
    while (Nprime % p == 0) Nprime /= p;
    if (std::gcd(Nprime, field.D < 0 ? -field.D : field.D) != 1)
        throw domain_error("formula-not-applicable: level shares a factor with D");
    int om = field.omega(Nprime);
    RootOfUnity lab = (om == 1) ? RootOfUnity::minus_one() : RootOfUnity();
    auto cv = chi.value(Nprime);
    if (!cv) throw domain_error("formula-not-applicable: chi is ramified at the level");
    lab = lab * cv->pow(2);
    return RootNumber{lab, lab.to_complex(), chi.order() <= 2, "classical"};
}

// analytic root number for W = chi o N (trivial ring class part): the theta
// series is the automorphic induction with L(s, f x W) = L(s, f(x)chi)
// L(s, f(x)chi omega), so
//   eps = omega(N') chi^2(N') [tau(chi)^2 / cond(chi)] [tau(chi omega)^2 / cond(chi omega)].
// For trivial chi this degenerates to the classical -omega(N').
inline Complex induced_epsilon(const CoefficientTable& f, const QuadField& field, long p,
                               const DirichletCharacter& chi) {
    long long Nprime = f.level;
    while (Nprime % p == 0) Nprime /= p;
    long long qc = chi.conductor();
    long long absD = -field.D;
    long long M = qc * absD;
    auto e_of = [](double x) { return std::polar(1.0, 2.0 * kPi * x); };
    Complex tau_chi(0, 0), tau_chiom(0, 0);
    for (long long x = 0; x < qc; ++x) {
        auto v = chi.value(x);
        if (!v || std::gcd(x, qc) != 1) continue;
        tau_chi += v->to_complex() * e_of(double(x) / double(qc));
    }
    if (qc == 1) tau_chi = 1.0;
    for (long long x = 0; x < M; ++x) {
        if (std::gcd(x, M) != 1) continue;
        auto v = chi.value(x);
        if (!v) continue;
        tau_chiom += v->to_complex() * double(field.omega(x)) * e_of(double(x) / double(M));
    }
    auto cv = chi.value(Nprime);
    if (!cv) throw domain_error("chi is ramified at the level");
    Complex eps = double(field.omega(Nprime)) * cv->pow(2).to_complex() *
                  (tau_chi * tau_chi / double(qc)) * (tau_chiom * tau_chiom / double(M));
    return eps / std::abs(eps);
}

// table of r_A(n) per class for n <= n_max, skipping n with gcd(n, c) > 1
struct IdealCountTable {
    long long conductor = 1;
    std::vector<std::vector<long>> counts; // [class][n]

    static IdealCountTable build(const OrderClassGroup& G, long long n_max) {
        IdealCountTable T;
        T.conductor = G.conductor();
        T.counts.assign(G.size(), std::vector<long>(n_max + 1, 0));
        for (long i = 0; i < G.size(); ++i)
            for (long long n = 1; n <= n_max; ++n) {
                if (std::gcd(n, G.conductor()) != 1) continue;
                T.counts[i][n] = G.ideal_count(i, n);
            }
        return T;
    }
};

// theta coefficients: sum_A rho(A) r_A(n) chi(n), zero when gcd(n, c(W)) > 1
inline std::vector<Complex> theta_coefficients(const OrderClassGroup& G,
                                               const IdealCountTable& rA,
                                               const RingClassCharacter& rho,
                                               const DirichletCharacter& chi, long long n_max) {
    std::vector<Complex> rho_vals(G.size());
    for (long i = 0; i < G.size(); ++i) rho_vals[i] = rho.value_class(i).to_complex();
    long long cW = std::max(rho.conductor(), static_cast<long long>(chi.conductor()));
    std::vector<Complex> out(n_max + 1, Complex(0, 0));
    for (long long n = 1; n <= n_max; ++n) {
        if (std::gcd(n, cW) != 1) continue;
        Complex sigma(0, 0);
        for (long i = 0; i < G.size(); ++i)
            if (rA.counts[i][n]) sigma += rho_vals[i] * double(rA.counts[i][n]);
        if (sigma == Complex(0, 0)) continue;
        auto xv = chi.value(n);
        Complex cx = xv ? xv->to_complex() : Complex(0, 0);
        out[n] = sigma * cx;
    }
    return out;
}

// unitary Rankin-Selberg Dirichlet coefficients:
//   b_n = sum_(m^2 k = n, gcd(m, N) = 1) omega(m) chi^2(m) theta_k a_k / sqrt(k)
inline std::vector<Complex> rs_coefficients(const CoefficientTable& f, const QuadField& field,
                                            const DirichletCharacter& chi,
                                            const std::vector<Complex>& theta, long long n_max) {
    if (f.max_index() < n_max)
        throw precision_error("insufficient-coefficients: eigenform table too short");
    std::vector<Complex> inner(n_max + 1, Complex(0, 0));
    for (long long k = 1; k <= n_max; ++k) {
        if (theta[k] == Complex(0, 0)) continue;
        inner[k] = theta[k] * double(f.a(k)) / std::sqrt(double(k));
    }
    DirichletCharacter chi2 = chi.power(2);
    std::vector<Complex> b(n_max + 1, Complex(0, 0));
    for (long long m = 1; m * m <= n_max; ++m) {
        if (std::gcd(m, f.level) != 1) continue;
        int om = field.omega(m);
        if (om == 0) continue;
        auto xv = chi2.value(m);
        if (!xv) continue;
        Complex eta = double(om) * xv->to_complex();
        for (long long k = 1; m * m * k <= n_max; ++k)
            if (inner[k] != Complex(0, 0)) b[m * m * k] += eta * inner[k];
    }
    return b;
}

// ---------------------------------------------------------------------------
// full instances, central values, Galois averages

struct LSeriesInstance {
    CoefficientsPtr f;
    QuadField field;
    HeckeCharacter W;
    long long Delta;             // |D| c(W)^2
    double C;                    // N * Delta
    std::vector<Complex> b;      // 1-based coefficients
    RootNumber eps;
    long terms;                  // default truncation (b holds at least this)

    AfeContext context() const { return AfeContext{C, 2}; }
};

struct CentralValue {
    Complex L;
    Complex Lambda;
    double error_estimate; // change under halving the truncation
    long terms;
};

inline long default_terms_for(double C) {
    double m = 6.0 * C;
    if (m < 64) m = 64;
    return static_cast<long>(std::ceil(m));
}

// Builds Rankin-Selberg instances for one eigenform over one field, caching
// the per-conductor ideal-count tables.
class RankinSelberg {
public:
    RankinSelberg(CoefficientsPtr f, TowerPtr tower) : f_(std::move(f)), tower_(std::move(tower)) {}

    const TowerPtr& tower() const { return tower_; }
    const CoefficientsPtr& eigenform() const { return f_; }

    LSeriesInstance build(const HeckeCharacter& W, long terms = 0) {
        const QuadField& K = tower_->field();
        long long cW = W.conductor();
        long long Delta = (-K.D) * cW * cW;
        double C = double(f_->level) * double(Delta);
        long M = terms > 0 ? terms : default_terms_for(C);
        const IdealCountTable& rA = ensure_table(W.rho.level(), M);
        auto theta = theta_coefficients(tower_->group(W.rho.level()), rA, W.rho, W.chi, M);
        auto b = rs_coefficients(*f_, K, W.chi, theta, M);
        RootNumber eps = root_number(*f_, K, tower_->p(), W.chi);
        if (W.chi.is_trivial()) {
            // ring class twists: the classical -omega(N'), exactly
            eps.value = eps.label.to_complex();
        } else if (W.rho.is_trivial()) {
            eps.value = induced_epsilon(*f_, K, tower_->p(), W.chi);
            eps.method = "gauss-sum";
        } else {
            // the theta series is a genuine CM cusp form; read the root
            // number off the epsilon-free smoothed functional equation
            eps.value = measured_epsilon(C, b, M - 1);
            eps.method = "measured";
            if (eps.self_dual) // chi^2 trivial: the value must be a sign
                eps.value = (eps.value.real() >= 0) ? Complex(1, 0) : Complex(-1, 0);
        }
        return LSeriesInstance{f_, K, W, Delta, C, std::move(b), eps, M};
    }

    static Complex measured_epsilon(double C, const std::vector<Complex>& b, long M) {
        BesselSums S = fe_kernel_sums(C, 0.5, b, M);
        BesselSums St{std::conj(S.minus), std::conj(S.plus), S.beta};
        Complex best_eps(1, 0);
        double best = -1;
        for (double t : {0.0, 0.171, 0.333}) {
            Complex s(0.5, t);
            Complex J = smoothed_completed_value(S, s);
            Complex Jt = smoothed_completed_value(St, 1.0 - s);
            if (std::abs(Jt) > best) {
                best = std::abs(Jt);
                best_eps = J / Jt;
            }
        }
        if (!(std::abs(std::abs(best_eps) - 1.0) < 1e-4))
            throw precision_error("measured root number is not on the unit circle");
        return best_eps / std::abs(best_eps);
    }

    const IdealCountTable& ensure_table(int level, long long n_max) {
        auto it = tables_.find(level);
        if (it != tables_.end() && it->second.counts[0].size() > static_cast<std::size_t>(n_max))
            return it->second;
        tables_[level] = IdealCountTable::build(tower_->group(level), n_max);
        return tables_[level];
    }

private:
    CoefficientsPtr f_;
    TowerPtr tower_;
    std::map<int, IdealCountTable> tables_;
};

inline CentralValue central_value(const LSeriesInstance& inst, double target_error = 1e-8) {
    AfeContext ctx = inst.context();
    long M = inst.terms;
    Complex lam = completed_lambda(ctx, Complex(0.5, 0.0), inst.b, inst.eps.value, M);
    Complex lam2 = completed_lambda(ctx, Complex(0.5, 0.0), inst.b, inst.eps.value, M / 2);
    Complex norm = std::exp(Complex(0.5, 0.0) * std::log(inst.C) +
                            ctx.log_gamma_factor(Complex(0.5, 0.0)));
    Complex L = lam / norm;
    double err = std::abs(lam - lam2) / std::abs(norm);
    if (!(err < target_error))
        throw precision_error("precision-unreachable: truncation self-check failed");
    return CentralValue{L, lam, err, M};
}

struct GaloisAverageReport {
    int k = 0;
    long orbit_size = 0;
    std::optional<Complex> delta;
    std::vector<Complex> values;
    std::string verdict; // all-nonvanishing | all-vanishing | orbit-inconsistency | not-evaluated
    double min_abs = 0.0, max_abs = 0.0;
};

inline std::string orbit_verdict(double min_abs, double max_abs, double lo = 1e-8,
                                 double hi = 1e-4) {
    if (min_abs > hi) return "all-nonvanishing";
    if (max_abs < lo) return "all-vanishing";
    return "orbit-inconsistency";
}

// delta^(k) over P_{c, q; W0}; k = 1 is carried as metadata only and is
// never evaluated numerically
inline GaloisAverageReport galois_average(RankinSelberg& rs, int c_exp, int q_exp,
                                          const TameKey& key, int k = 0,
                                          double target_error = 1e-8) {
    auto P = orbit(rs.tower(), c_exp, q_exp, key);
    if (P.empty()) throw domain_error("out-of-domain: empty orbit");
    GaloisAverageReport rep;
    rep.k = k;
    rep.orbit_size = static_cast<long>(P.size());
    if (k == 1) {
        rep.verdict = "not-evaluated";
        return rep;
    }
    if (k != 0) throw domain_error("only k = 0 and k = 1 averages are defined");
    Complex sum(0, 0);
    double mn = 1e300, mx = 0.0;
    for (const auto& W : P) {
        auto inst = rs.build(W);
        auto cv = central_value(inst, target_error);
        rep.values.push_back(cv.L);
        sum += cv.L;
        mn = std::min(mn, std::abs(cv.L));
        mx = std::max(mx, std::abs(cv.L));
    }
    rep.delta = sum / double(rep.orbit_size);
    rep.min_abs = mn;
    rep.max_abs = mx;
    rep.verdict = orbit_verdict(mn, mx);
    return rep;
}

} // namespace padiclab
