#pragma once

#include <string>

#include "json.hpp"

#include "padiclab/iwasawa.hpp"
#include "padiclab/padic.hpp"
#include "padiclab/power_series.hpp"

namespace padiclab {

// All reports use ordered_json so that identical inputs give byte-identical
// output.  Big integers travel as decimal strings.
using Json = nlohmann::ordered_json;

inline Json ring_to_json(const RingPtr& R) {
    return Json{{"p", R->p}, {"m", R->level}};
}

inline RingPtr ring_from_json(const Json& j) {
    return make_ring(j.at("p").get<long>(), j.at("m").get<int>());
}

inline Json element_digits(const PadicElement& x) {
    Json a = Json::array();
    for (const auto& c : x.coeffs()) a.push_back(c.get_str());
    return a;
}

inline Json element_to_json(const PadicElement& x) {
    return Json{{"p", x.ring()->p},
                {"m", x.ring()->level},
                {"coeffs", element_digits(x)},
                {"prec", x.precision()}};
}

inline PadicElement element_from_json(const Json& j, RingPtr ring = nullptr) {
    if (!ring) ring = make_ring(j.at("p").get<long>(), j.at("m").get<int>());
    std::vector<mpz_class> cs;
    for (const auto& s : j.at("coeffs")) cs.emplace_back(s.get<std::string>());
    return PadicElement::from_coeffs(ring, std::move(cs), j.at("prec").get<long>());
}

inline PadicElement element_from_digits(const Json& digits, const RingPtr& ring, long prec) {
    std::vector<mpz_class> cs;
    for (const auto& s : digits) {
        if (s.is_string()) cs.emplace_back(s.get<std::string>());
        else cs.emplace_back(s.get<long>());
    }
    return PadicElement::from_coeffs(ring, std::move(cs), prec);
}

inline Json series1_to_json(const TruncatedSeries1& s) {
    Json coeffs = Json::array();
    for (long k = 0; k < s.t_order(); ++k) coeffs.push_back(element_digits(s[k]));
    return Json{{"ring", ring_to_json(s.ring())},
                {"t_orders", Json::array({s.t_order()})},
                {"prec", s.precision()},
                {"coeffs", coeffs}};
}

inline TruncatedSeries1 series1_from_json(const Json& j) {
    RingPtr R = ring_from_json(j.at("ring"));
    long prec = j.at("prec").get<long>();
    std::vector<PadicElement> cs;
    for (const auto& d : j.at("coeffs")) cs.push_back(element_from_digits(d, R, prec));
    return TruncatedSeries1::from_coeffs(R, std::move(cs));
}

inline Json series2_to_json(const TruncatedSeries2& s) {
    Json coeffs = Json::array();
    for (long i = 0; i < s.t1(); ++i)
        for (long j = 0; j < s.t2(); ++j) coeffs.push_back(element_digits(s.at(i, j)));
    return Json{{"ring", ring_to_json(s.ring())},
                {"t_orders", Json::array({s.t1(), s.t2()})},
                {"prec", s.precision()},
                {"coeffs", coeffs}};
}

inline TruncatedSeries2 series2_from_json(const Json& j) {
    RingPtr R = ring_from_json(j.at("ring"));
    long prec = j.at("prec").get<long>();
    long t1 = j.at("t_orders").at(0).get<long>();
    long t2 = j.at("t_orders").at(1).get<long>();
    TruncatedSeries2 F(R, t1, t2, prec);
    const Json& cs = j.at("coeffs");
    if (static_cast<long>(cs.size()) != t1 * t2)
        throw domain_error("series2: coefficient count does not match t_orders");
    for (long i = 0; i < t1; ++i)
        for (long j2 = 0; j2 < t2; ++j2)
            F.set(i, j2, element_from_digits(cs[i * t2 + j2], R, prec));
    return F;
}

inline Json measure_to_json(const GroupMeasure& m) {
    Json entries = Json::array();
    for (long t = 0; t < m.group().torsion_size(); ++t) {
        auto g0 = m.torsion_coords(t);
        for (long i = 0; i < m.pa(); ++i)
            for (long j = 0; j < m.pb(); ++j) {
                if (m.at(t, i, j).is_zero_at_precision()) continue;
                entries.push_back(Json{{"g0", g0},
                                       {"i", i},
                                       {"j", j},
                                       {"value", element_digits(m.at(t, i, j))}});
            }
    }
    return Json{{"group",
                 Json{{"p", m.group().p},
                      {"torsion", m.group().torsion},
                      {"level", Json::array({m.level_a(), m.level_b()})}}},
                {"ring", ring_to_json(m.ring())},
                {"prec", m.precision()},
                {"entries", entries}};
}

inline GroupMeasure measure_from_json(const Json& j) {
    GaloisGroupSpec spec;
    spec.p = j.at("group").at("p").get<long>();
    spec.torsion = j.at("group").at("torsion").get<std::vector<long>>();
    int a = j.at("group").at("level").at(0).get<int>();
    int b = j.at("group").at("level").at(1).get<int>();
    RingPtr R = ring_from_json(j.at("ring"));
    long prec = j.at("prec").get<long>();
    GroupMeasure m(spec, R, a, b, prec);
    for (const auto& e : j.at("entries")) {
        auto g0 = e.at("g0").get<std::vector<long>>();
        m.set(m.torsion_index(g0), e.at("i").get<long>(), e.at("j").get<long>(),
              element_from_digits(e.at("value"), R, prec));
    }
    return m;
}

inline Json relation_report_to_json(const RelationReport& r) {
    return Json{{"r1", r.r1},
                {"r2", r.r2},
                {"deg_varpi1", r.deg_varpi1},
                {"deg_varpi2", r.deg_varpi2},
                {"mu", r.mu},
                {"holds", r.holds}};
}

inline Json root_label_to_json(const RootOfUnity& z) {
    return Json::array({z.order, z.exp});
}

} // namespace padiclab
