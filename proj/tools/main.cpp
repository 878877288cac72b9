// padiclab command line: desk-scale experiments over the library.
// Subcommands mirror the module operations; all reports are JSON on stdout
// (or --out), deterministic for a fixed configuration and seed.
// Exit codes: 0 ok, 1 domain error, 2 precision/truncation error, 64 usage.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "padiclab/basechange.hpp"
#include "padiclab/characters.hpp"
#include "padiclab/fixtures.hpp"
#include "padiclab/io.hpp"
#include "padiclab/iwasawa.hpp"
#include "padiclab/lfunction.hpp"
#include "padiclab/modform.hpp"

using namespace padiclab;

namespace {

struct RunConfig {
    long p = 5;
    long long D = -4;
    std::string curve = "11a";
    std::string coeffs_file;
    long prec = 0;   // 0: default 20 per ramification unit
    long trunc = 0;  // 0: module defaults
    std::uint64_t seed = 12345;
    std::string out;
    std::string data_dir;
};

void emit(const RunConfig& cfg, const Json& j) {
    std::string text = j.dump(2);
    text.push_back('\n');
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw domain_error("cannot open output file " + cfg.out);
        f << text;
    }
}

Json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open " + path);
    Json j;
    f >> j;
    return j;
}

CoefficientsPtr load_coefficients(const RunConfig& cfg, long long n_max) {
    if (!cfg.coeffs_file.empty()) {
        Json j = load_json(cfg.coeffs_file);
        std::vector<long long> an;
        for (const auto& v : j.at("an")) an.push_back(v.get<long long>());
        return coefficients_from_list(j.value("label", std::string("file")),
                                      j.at("N").get<long long>(), an, n_max);
    }
    if (!cfg.curve.empty() && cfg.curve.front() == '[') {
        Json j = Json::parse(cfg.curve);
        if (j.size() != 5) throw domain_error("curve spec needs [a1,a2,a3,a4,a6]");
        EllipticCurve E{j[0].get<long long>(), j[1].get<long long>(), j[2].get<long long>(),
                        j[3].get<long long>(), j[4].get<long long>()};
        return coefficients_from_curve(E, n_max);
    }
    return coefficients_from_curve(curve_by_label(cfg.curve), n_max, 0, cfg.curve);
}

// load a table long enough for every twist of conductor <= cmax
CoefficientsPtr load_for_conductor(const RunConfig& cfg, long long cmax) {
    auto probe = load_coefficients(cfg, 16);
    long long Delta = (-cfg.D) * cmax * cmax;
    long terms =
        cfg.trunc > 0 ? cfg.trunc : default_terms_for(double(probe->level) * double(Delta));
    return load_coefficients(cfg, terms + 2);
}

int exponent_of(long long value, long p, const char* what) {
    if (value < 1) throw domain_error(std::string(what) + " must be a positive p-power");
    int e = 0;
    long long v = value;
    while (v % p == 0) { v /= p; ++e; }
    if (v != 1) throw domain_error(std::string(what) + " must be a power of p");
    return e;
}

Json ring_class_to_json(const RingClassCharacter& r) {
    Json exps = Json::array();
    for (long e : r.exps()) exps.push_back(e);
    return Json{{"type", "ring_class"},
                {"p", r.tower()->p()},
                {"level", r.level()},
                {"conductor", r.conductor()},
                {"order", r.order()},
                {"exps", exps}};
}

Json dirichlet_to_json(const DirichletCharacter& x) {
    return Json{{"type", "dirichlet"},
                {"p", x.p()},
                {"modulus", x.modulus()},
                {"conductor", x.conductor()},
                {"order", x.order()},
                {"t", x.index()}};
}

Json hecke_to_json(const HeckeCharacter& W) {
    return Json{{"rho", ring_class_to_json(W.rho)},
                {"chi", dirichlet_to_json(W.chi)},
                {"conductor", W.conductor()},
                {"conductor_norm", W.conductor_norm()},
                {"self_dual", W.is_ring_class()}};
}

Json complex_to_json(const Complex& z) {
    return Json{{"re", z.real()}, {"im", z.imag()}};
}

Json invariance_to_json(const InvarianceReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json row{{"n", r.n}, {"variant", r.variant}};
        row["base_degree"] = r.base_finite ? Json(r.base_degree) : Json("infinite");
        row["lifted_degree"] = r.has_lifted ? Json(r.lifted_degree) : Json(nullptr);
        row["expected"] = r.expected_finite ? Json(r.expected_base) : Json("infinite");
        row["pass"] = r.pass;
        rows.push_back(row);
    }
    return Json{{"r1", rep.r1},
                {"deg_varpi2", rep.deg_varpi2},
                {"n0", rep.n0},
                {"zero_levels", rep.zero_levels},
                {"zeros_exhausted", rep.zeros_exhausted},
                {"rows", rows},
                {"all_pass", rep.all_pass}};
}

// ---------------------------------------------------------------------------
// verify: invariant families over seeded fixtures

struct FamilyResult {
    std::string name;
    long cases = 0;
    long failures = 0;
};

FamilyResult family_padic_ring(const RunConfig& cfg) {
    FamilyResult res{"padic-ring"};
    for (auto [p, m] : {std::pair<long, int>{5, 0}, {7, 0}, {5, 1}}) {
        auto R = make_ring(p, m);
        long N = cfg.prec > 0 ? cfg.prec * R->e : R->default_precision();
        auto rng = child_rng(cfg.seed, 100 + 10 * p + m);
        for (int it = 0; it < 25; ++it) {
            auto x = random_element(R, N, rng);
            auto y = random_element(R, N, rng);
            auto z = random_element(R, N, rng);
            ++res.cases;
            bool ok = ((x + y) + z).equals_at_precision(x + (y + z)) &&
                      (x * (y + z)).equals_at_precision(x * y + x * z);
            long vx = x.valuation_floor(), vy = y.valuation_floor();
            ok = ok && (x + y).valuation_floor() >= std::min(vx, vy);
            if (vx != vy) ok = ok && (x + y).valuation_floor() == std::min(vx, vy);
            if (!ok) ++res.failures;
        }
    }
    return res;
}

FamilyResult family_wprep(const RunConfig& cfg, bool corrupt) {
    FamilyResult res{"wprep-roundtrip"};
    for (long p : {5L, 7L}) {
        auto R = make_ring(p, 0);
        auto rng = child_rng(cfg.seed, 200 + p);
        long t = cfg.trunc > 0 ? cfg.trunc : 64;
        for (int it = 0; it < 25; ++it) {
            auto plant = plant_series1(R, t, 20, 6, 3, rng);
            auto w = weierstrass_prepare(plant.g);
            ++res.cases;
            long expect_mu = plant.mu + ((corrupt && it == 3) ? 1 : 0);
            bool ok = w.mu == expect_mu && w.lambda == plant.lambda &&
                      reconstruct(w, t).equals_at_precision(plant.g);
            if (!ok) ++res.failures;
        }
    }
    return res;
}

FamilyResult family_degree_relation(const RunConfig& cfg, bool corrupt) {
    FamilyResult res{"degree-relation"};
    auto R = make_ring(5, 0);
    auto rng = child_rng(cfg.seed, 300);
    for (int it = 0; it < 25; ++it) {
        auto plant = plant_series2(R, 14, 14, 20, 3, 3, 2, rng);
        auto r = check_degree_relation(plant.F);
        ++res.cases;
        long expect_r1 = plant.r1 + ((corrupt && it == 2) ? 1 : 0);
        bool ok = r.holds && r.r1 == expect_r1 && r.r2 == plant.r2;
        if (!ok) ++res.failures;
    }
    return res;
}

FamilyResult family_specialization(const RunConfig& cfg) {
    FamilyResult res{"specialization-degree"};
    auto R0 = make_ring(5, 0);
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(cfg.seed, 400);
    for (int it = 0; it < 6; ++it) {
        auto plant = plant_series2(R0, 12, 12, 20, 3, 2, 1, rng);
        TruncatedSeries2 F(R, 12, 12, 20 * R->e);
        for (long i = 0; i < 12; ++i)
            for (long j = 0; j < 12; ++j) F.set(i, j, embed(plant.F.at(i, j), R));
        for (int a = 1; a < 5; ++a) {
            PadicElement z =
                realize(RootOfUnity(5, a), R, N) - PadicElement::from_integer(R, 1, N);
            PadicElement bz(R, N);
            for (long k = static_cast<long>(plant.b.size()) - 1; k >= 0; --k)
                bz = (bz * z + embed(plant.b[k], R)).clamp_precision(N);
            if (bz.is_zero_at_precision()) continue;
            ++res.cases;
            auto d = weierstrass_degree(specialize_axis(F, 2, z));
            if (!(d == WDegree{true, plant.r1})) ++res.failures;
        }
    }
    return res;
}

FamilyResult family_basechange(const RunConfig& cfg, int nmax) {
    FamilyResult res{"basechange-degrees"};
    auto R = make_ring(5, 0);
    auto rng = child_rng(cfg.seed, 500);
    for (int it = 0; it < 4; ++it) {
        long r1 = 1 + static_cast<long>(rng() % 2);
        auto a = random_distinguished_poly(R, r1, 14, rng);
        TruncatedSeries2 F = poly_axis_to_series2(R, a, 1, 56, 44, 14);
        F = F * random_unit_series2(R, 56, 44, 14, rng);
        auto rep = verify_degree_invariance(F, nmax);
        res.cases += static_cast<long>(rep.rows.size());
        for (const auto& row : rep.rows)
            if (!row.pass) ++res.failures;
    }
    return res;
}

FamilyResult family_ideals(const RunConfig&) {
    FamilyResult res{"ideal-mass"};
    for (long long D : {-3LL, -4LL, -7LL, -8LL, -11LL, -23LL, -47LL}) {
        QuadField K(D);
        OrderClassGroup G(K, 1);
        for (long long n = 1; n <= 1000; ++n) {
            if (std::gcd(n, D) != 1) continue;
            ++res.cases;
            long total = 0;
            for (long i = 0; i < G.size(); ++i) total += G.ideal_count(i, n);
            long divisor_sum = 0;
            for (long long d = 1; d <= n; ++d)
                if (n % d == 0) divisor_sum += K.omega(d);
            if (total != divisor_sum) ++res.failures;
        }
    }
    return res;
}

FamilyResult family_measures(const RunConfig& cfg) {
    FamilyResult res{"measure-contract"};
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(cfg.seed, 600);
    GroupMeasure m1(spec, R, 1, 1, N), m2(spec, R, 1, 1, N);
    for (long i = 0; i < 5; ++i)
        for (long j = 0; j < 5; ++j) {
            m1.set(0, i, j, random_element(R, N, rng));
            m2.set(0, i, j, random_element(R, N, rng));
        }
    auto m12 = convolve(m1, m2);
    auto F = to_power_series(m1);
    auto one = PadicElement::from_integer(R, 1, N);
    for (const auto& W : characters_at_level(spec, 1, 1)) {
        ++res.cases;
        auto lhs = specialize(m12, W);
        auto rhs = specialize(m1, W) * specialize(m2, W);
        bool ok = lhs.equals_at_precision(rhs.clamp_precision(lhs.precision()));
        auto z1 = realize(W.anti, R, N) - one;
        auto z2 = realize(W.cyc, R, N) - one;
        auto ev = specialize_axis(F, 2, z2).evaluate(z1);
        ok = ok && specialize(m1, W).clamp_precision(ev.precision()).equals_at_precision(ev);
        if (!ok) ++res.failures;
    }
    return res;
}

FamilyResult family_interpolation(const RunConfig& cfg) {
    FamilyResult res{"interpolation-fixture"};
    GaloisGroupSpec spec{5, {}};
    auto R = make_ring(5, 1);
    long N = R->default_precision();
    auto rng = child_rng(cfg.seed, 700);
    GroupMeasure m(spec, R, 1, 1, N);
    for (long i = 0; i < 5; ++i)
        for (long j = 0; j < 5; ++j) m.set(0, i, j, random_element(R, N, rng));
    std::vector<std::pair<GroupCharacter, PadicElement>> targets;
    for (const auto& W : characters_at_level(spec, 1, 1))
        targets.push_back({W, specialize(m, W)});
    auto syn = synthesize_interpolating_measure(spec, R, 1, 1, N, targets);
    for (const auto& [W, v] : targets) {
        ++res.cases;
        auto got = specialize(syn, W);
        // eta units (the opaque nonzero scalar of the interpolation contract)
        // never change the vanishing locus
        PadicElement eta = random_unit(R, N, rng);
        bool ok = got.equals_at_precision(v.clamp_precision(got.precision()));
        ok = ok && ((v * eta).is_zero_at_precision() == v.is_zero_at_precision());
        if (!ok) ++res.failures;
    }
    return res;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic L-function workbench: Weierstrass preparation, Iwasawa "
                 "measures, ring class characters, Rankin-Selberg central values "
                 "and basechange degree bookkeeping"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--p", cfg.p, "odd prime >= 5")->envname("PADICLAB_P");
    app.add_option("--D", cfg.D, "negative fundamental discriminant")->envname("PADICLAB_D");
    app.add_option("--curve", cfg.curve, "curve label or [a1,a2,a3,a4,a6]")
        ->envname("PADICLAB_CURVE");
    app.add_option("--coeffs", cfg.coeffs_file, "coefficient file {label, N, an: [...]}")
        ->envname("PADICLAB_COEFFS");
    app.add_option("--prec", cfg.prec, "working precision per ramification unit")
        ->envname("PADICLAB_PREC");
    app.add_option("--trunc", cfg.trunc, "series truncation override")->envname("PADICLAB_TRUNC");
    app.add_option("--seed", cfg.seed, "fixture seed")->envname("PADICLAB_SEED");
    app.add_option("--out", cfg.out, "write the JSON report here instead of stdout")
        ->envname("PADICLAB_OUT");
    app.add_option("--data-dir", cfg.data_dir, "cache directory for form tables")
        ->envname("PADICLAB_DATA_DIR");

    auto* wprep = app.add_subcommand("wprep", "Weierstrass preparation of a series file");
    std::string wprep_file;
    wprep->add_option("--series", wprep_file, "TruncatedSeries1 JSON")->required();

    auto* degrees = app.add_subcommand("degrees", "two-variable degree relation report");
    std::string degrees_file;
    degrees->add_option("--series2", degrees_file, "TruncatedSeries2 JSON")->required();

    auto* spec_cmd = app.add_subcommand("specialize", "substitute a cyclotomic point");
    std::string spec_file;
    int spec_axis = 2, spec_level = 1;
    long spec_exp = 1;
    spec_cmd->add_option("--series2", spec_file)->required();
    spec_cmd->add_option("--axis", spec_axis, "substituted variable (1 or 2)");
    spec_cmd->add_option("--level", spec_level, "cyclotomic level of the point");
    spec_cmd->add_option("--exponent", spec_exp, "exponent of the root of unity");

    auto* ideals = app.add_subcommand("ideals", "ideal counts per class");
    long long ideals_n = 1, ideals_c = 1;
    ideals->add_option("--n", ideals_n, "norm")->required();
    ideals->add_option("--c", ideals_c, "order conductor");

    auto* chars = app.add_subcommand("chars", "character enumeration and orbits");
    long long chars_c = 1, chars_q = 1;
    bool chars_orbits = false;
    chars->add_option("--c", chars_c, "ring class conductor (p-power)");
    chars->add_option("--q", chars_q, "cyclotomic conductor (p-power)");
    chars->add_flag("--orbits", chars_orbits, "group primitive pairs by tame part");

    auto* lvalue = app.add_subcommand("lvalue", "central value of one twist");
    long lv_rho_index = 0;
    long long lv_rho_cond = 1, lv_chi_mod = 1;
    long lv_chi_t = 0;
    bool lv_fe = false;
    double lv_target = 1e-8;
    lvalue->add_option("--rho-cond", lv_rho_cond, "ring class conductor (p-power)");
    lvalue->add_option("--rho-index", lv_rho_index, "index within that enumeration");
    lvalue->add_option("--chi-mod", lv_chi_mod, "Dirichlet modulus (p-power)");
    lvalue->add_option("--chi-t", lv_chi_t, "character exponent on the generator");
    lvalue->add_flag("--fe-check", lv_fe, "report functional-equation residuals");
    lvalue->add_option("--target-error", lv_target);

    auto* average = app.add_subcommand("average", "Galois average over an orbit");
    long long av_c = 1, av_q = 1;
    int av_k = 0;
    long av_tame_rho = -1, av_tame_chi = -1;
    average->add_option("--c", av_c, "ring class conductor (p-power)")->required();
    average->add_option("--q", av_q, "cyclotomic conductor (p-power)")->required();
    average->add_option("--k", av_k, "0 for values, 1 for the derivative metadata");
    average->add_option("--tame-rho-index", av_tame_rho,
                        "take the tame part of this primitive rho (default trivial)");
    average->add_option("--tame-chi-t", av_tame_chi,
                        "take the tame part of this chi exponent (default trivial)");

    auto* bc = app.add_subcommand("basechange", "degree invariance across levels");
    std::string bc_file;
    int bc_nmax = 2;
    bc->add_option("--series2", bc_file, "TruncatedSeries2 JSON over Z_p")->required();
    bc->add_option("--nmax", bc_nmax, "largest cyclotomic level");

    auto* verify = app.add_subcommand("verify", "run the invariant families");
    std::string verify_family;
    int verify_nmax = 2;
    bool verify_corrupt = false;
    verify->add_option("--family", verify_family, "run only this family");
    verify->add_option("--nmax", verify_nmax);
    verify->add_flag("--corrupt", verify_corrupt,
                     "deliberately corrupt expected values (harness self-test)");

    auto* scan = app.add_subcommand("conjecture-scan",
                                    "search cyclotomic twists of a fixed ring class character "
                                    "for a nonvanishing central value");
    long long scan_c = 1, scan_qmax = 25;
    long scan_rho_index = -1;
    double scan_threshold = 1e-4;
    scan->add_option("--c", scan_c, "ring class conductor (p-power)")->required();
    scan->add_option("--qmax", scan_qmax, "largest cyclotomic conductor");
    scan->add_option("--rho-index", scan_rho_index, "scan only this primitive rho");
    scan->add_option("--threshold", scan_threshold);

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (*wprep) {
            auto s = series1_from_json(load_json(wprep_file));
            auto w = weierstrass_prepare(s);
            Json dist = Json::array(), unit = Json::array();
            for (const auto& c : w.distinguished) dist.push_back(element_digits(c));
            for (long k = 0; k < w.unit.t_order(); ++k)
                unit.push_back(element_digits(w.unit[k]));
            emit(cfg, Json{{"mu", w.mu},
                           {"lambda", w.lambda},
                           {"prec", w.unit.precision()},
                           {"distinguished", dist},
                           {"unit", unit}});
        } else if (*degrees) {
            auto F = series2_from_json(load_json(degrees_file));
            emit(cfg, relation_report_to_json(check_degree_relation(F)));
        } else if (*spec_cmd) {
            auto F = series2_from_json(load_json(spec_file));
            long p = F.ring()->p;
            int m = std::max(F.ring()->level, spec_level);
            RingPtr R = make_ring(p, m);
            long prec = F.precision() * (R->e / F.ring()->e);
            TruncatedSeries2 FE(R, F.t1(), F.t2(), prec);
            for (long i = 0; i < F.t1(); ++i)
                for (long j = 0; j < F.t2(); ++j) FE.set(i, j, embed(F.at(i, j), R));
            long pl = 1;
            for (int i = 0; i < spec_level; ++i) pl *= p;
            PadicElement z = realize(RootOfUnity(pl, spec_exp), R, prec) -
                             PadicElement::from_integer(R, 1, prec);
            emit(cfg, series1_to_json(specialize_axis(FE, spec_axis, z)));
        } else if (*ideals) {
            QuadField K(cfg.D);
            OrderClassGroup G(K, ideals_c);
            Json forms = Json::array(), counts = Json::array();
            for (const auto& f : G.forms()) forms.push_back(Json::array({f.a, f.b, f.c}));
            for (long i = 0; i < G.size(); ++i) counts.push_back(G.ideal_count(i, ideals_n));
            if (!cfg.data_dir.empty()) {
                std::ofstream cachef(cfg.data_dir + "/forms_" + std::to_string(cfg.D) + "_" +
                                     std::to_string(ideals_c) + ".json");
                if (cachef)
                    cachef << Json{{"D", cfg.D},
                                   {"c", ideals_c},
                                   {"forms", forms},
                                   {"h", G.size()}}
                                  .dump(2)
                           << "\n";
            }
            emit(cfg, Json{{"D", cfg.D},
                           {"c", ideals_c},
                           {"n", ideals_n},
                           {"classes", G.size()},
                           {"counts", counts},
                           {"forms", forms}});
        } else if (*chars) {
            QuadField K(cfg.D);
            int c_exp = exponent_of(chars_c, cfg.p, "--c");
            int q_exp = exponent_of(chars_q, cfg.p, "--q");
            auto tower = make_tower(K, cfg.p, c_exp);
            Json rhos = Json::array(), chis = Json::array();
            for (const auto& r : enumerate_ring_class(tower, c_exp))
                rhos.push_back(ring_class_to_json(r));
            for (const auto& x : enumerate_cyclotomic(cfg.p, q_exp))
                chis.push_back(dirichlet_to_json(x));
            Json out{{"p", cfg.p}, {"D", cfg.D}, {"ring_class", rhos}, {"cyclotomic", chis}};
            if (chars_orbits) {
                std::vector<std::pair<TameKey, std::vector<Json>>> orbits;
                for (const auto& r : enumerate_ring_class(tower, c_exp)) {
                    if (r.conductor_exp() != c_exp) continue;
                    for (const auto& x : enumerate_cyclotomic(cfg.p, q_exp)) {
                        if (x.conductor_exp() != q_exp) continue;
                        HeckeCharacter W{r, x};
                        TameKey key = tame_key(W);
                        bool found = false;
                        for (auto& [k, members] : orbits)
                            if (k == key) {
                                members.push_back(hecke_to_json(W));
                                found = true;
                                break;
                            }
                        if (!found) orbits.push_back({key, {hecke_to_json(W)}});
                    }
                }
                Json os = Json::array();
                for (const auto& [k, members] : orbits)
                    os.push_back(Json{{"size", members.size()}, {"members", members}});
                out["orbits"] = os;
            }
            emit(cfg, out);
        } else if (*lvalue) {
            QuadField K(cfg.D);
            int c_exp = exponent_of(lv_rho_cond, cfg.p, "--rho-cond");
            int n_exp = exponent_of(lv_chi_mod, cfg.p, "--chi-mod");
            auto tower = make_tower(K, cfg.p, c_exp);
            auto rhos = enumerate_ring_class(tower, c_exp);
            if (lv_rho_index < 0 || lv_rho_index >= static_cast<long>(rhos.size()))
                throw domain_error("rho index out of range");
            DirichletCharacter chi =
                n_exp == 0 ? DirichletCharacter() : DirichletCharacter(cfg.p, n_exp, lv_chi_t);
            HeckeCharacter W{rhos[lv_rho_index], chi};
            auto f = load_for_conductor(cfg, W.conductor());
            RankinSelberg rs(f, tower);
            auto inst = rs.build(W, cfg.trunc > 0 ? cfg.trunc : 0);
            auto cv = central_value(inst, lv_target);
            Json out{{"W", hecke_to_json(W)},
                     {"epsilon",
                      Json{{"label", root_label_to_json(inst.eps.label)},
                           {"re", inst.eps.value.real()},
                           {"im", inst.eps.value.imag()},
                           {"self_dual", inst.eps.self_dual}}},
                     {"L", complex_to_json(cv.L)},
                     {"error_bound", cv.error_estimate},
                     {"terms", cv.terms},
                     {"verdict", std::abs(cv.L) > 1e-4   ? "nonvanishing"
                                 : std::abs(cv.L) < 1e-8 ? "vanishing"
                                                         : "threshold-band"}};
            if (lv_fe) {
                auto sums = fe_kernel_sums(inst.C, 0.5, inst.b, inst.terms);
                Json res = Json::array();
                for (double t : {0.0, 0.25, 0.5})
                    res.push_back(fe_residual(sums, inst.eps.value, t));
                out["fe_residuals"] = res;
            }
            emit(cfg, out);
        } else if (*average) {
            QuadField K(cfg.D);
            int c_exp = exponent_of(av_c, cfg.p, "--c");
            int q_exp = exponent_of(av_q, cfg.p, "--q");
            auto tower = make_tower(K, cfg.p, std::max(c_exp, 1));
            TameKey key = tame_key(trivial_hecke(tower));
            if (av_tame_rho >= 0 || av_tame_chi >= 0) {
                RingClassCharacter rho = trivial_hecke(tower).rho;
                if (av_tame_rho >= 0) rho = enumerate_ring_class(tower, c_exp).at(av_tame_rho);
                DirichletCharacter x = av_tame_chi >= 0
                                           ? DirichletCharacter(cfg.p, q_exp, av_tame_chi)
                                           : DirichletCharacter();
                key = tame_key(HeckeCharacter{rho, x});
            }
            auto f = load_for_conductor(cfg, std::max(av_c, av_q));
            RankinSelberg rs(f, tower);
            auto rep = galois_average(rs, c_exp, q_exp, key, av_k);
            Json values = Json::array();
            for (const auto& v : rep.values) values.push_back(complex_to_json(v));
            Json out{{"k", rep.k},
                     {"orbit_size", rep.orbit_size},
                     {"verdict", rep.verdict},
                     {"values", values}};
            out["delta"] = rep.delta ? complex_to_json(*rep.delta) : Json(nullptr);
            emit(cfg, out);
        } else if (*bc) {
            auto F = series2_from_json(load_json(bc_file));
            emit(cfg, invariance_to_json(verify_degree_invariance(F, bc_nmax)));
        } else if (*verify) {
            std::vector<FamilyResult> results;
            auto want = [&](const char* name) {
                return verify_family.empty() || verify_family == name;
            };
            if (want("padic-ring")) results.push_back(family_padic_ring(cfg));
            if (want("wprep")) results.push_back(family_wprep(cfg, verify_corrupt));
            if (want("degree-relation")) results.push_back(family_degree_relation(cfg, verify_corrupt));
            if (want("specialization")) results.push_back(family_specialization(cfg));
            if (want("basechange")) results.push_back(family_basechange(cfg, verify_nmax));
            if (want("ideals")) results.push_back(family_ideals(cfg));
            if (want("measures")) results.push_back(family_measures(cfg));
            if (want("interpolation")) results.push_back(family_interpolation(cfg));
            if (results.empty()) throw domain_error("unknown family " + verify_family);
            Json rows = Json::array();
            bool any_fail = false;
            for (const auto& r : results) {
                rows.push_back(Json{{"family", r.name},
                                    {"cases", r.cases},
                                    {"failures", r.failures},
                                    {"pass", r.failures == 0}});
                any_fail = any_fail || r.failures > 0;
            }
            emit(cfg, Json{{"seed", cfg.seed}, {"rows", rows}, {"pass", !any_fail}});
            return any_fail ? 1 : 0;
        } else if (*scan) {
            QuadField K(cfg.D);
            int c_exp = exponent_of(scan_c, cfg.p, "--c");
            int qmax_exp = exponent_of(scan_qmax, cfg.p, "--qmax");
            auto tower = make_tower(K, cfg.p, std::max(c_exp, 1));
            std::vector<RingClassCharacter> rhos;
            for (const auto& r : enumerate_ring_class(tower, c_exp))
                if (r.conductor_exp() == c_exp) rhos.push_back(r);
            if (scan_rho_index >= 0) {
                if (scan_rho_index >= static_cast<long>(rhos.size()))
                    throw domain_error("rho index out of range");
                rhos = {rhos[scan_rho_index]};
            }
            auto f = load_for_conductor(cfg, std::max(scan_c, scan_qmax));
            RankinSelberg rs(f, tower);
            Json rows = Json::array();
            for (const auto& rho : rhos) {
                Json row{{"rho", ring_class_to_json(rho)}};
                bool found = false;
                for (int q_exp = 0; q_exp <= qmax_exp && !found; ++q_exp) {
                    for (const auto& chi : enumerate_cyclotomic(cfg.p, q_exp)) {
                        if (chi.conductor_exp() != q_exp) continue;
                        auto inst = rs.build(HeckeCharacter{rho, chi});
                        auto cv = central_value(inst, 1e-7);
                        if (std::abs(cv.L) > scan_threshold) {
                            row["found"] = true;
                            row["q"] = chi.conductor();
                            row["chi_t"] = chi.index();
                            row["L"] = complex_to_json(cv.L);
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) row["found"] = false;
                rows.push_back(row);
            }
            emit(cfg, Json{{"threshold", scan_threshold}, {"rows", rows}});
        }
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
