#pragma once

// Seeded random fixtures shared by the test suites and the `verify` CLI
// subcommand.  Every generator is a pure function of (ring, shape, rng), so a
// (seed, stream) pair replays any fixture exactly.

#include "padiclab/power_series.hpp"
#include "padiclab/rng.hpp"

namespace padiclab {

inline std::vector<PadicElement> random_distinguished_poly(const RingPtr& R, long deg, long prec,
                                                           std::mt19937_64& rng) {
    std::vector<PadicElement> f;
    f.reserve(deg + 1);
    PadicElement pi = uniformizer(R, prec + 1);
    for (long i = 0; i < deg; ++i)
        f.push_back((pi * random_element(R, prec, rng)).with_precision(prec));
    f.push_back(PadicElement::from_integer(R, 1, prec));
    return f;
}

inline TruncatedSeries1 random_unit_series(const RingPtr& R, long t, long prec,
                                           std::mt19937_64& rng) {
    TruncatedSeries1 u(R, t, prec);
    u.set(0, random_unit(R, prec, rng));
    for (long k = 1; k < t; ++k) u.set(k, random_element(R, prec, rng));
    return u;
}

struct PlantedSeries1 {
    long mu;
    std::vector<PadicElement> f; // distinguished, degree lambda
    TruncatedSeries1 u;          // unit
    TruncatedSeries1 g;          // pi^mu * f * u
    long lambda;
};

inline PlantedSeries1 plant_series1(const RingPtr& R, long t, long prec, long max_deg,
                                    long max_mu, std::mt19937_64& rng) {
    PlantedSeries1 out;
    out.lambda = static_cast<long>(rng() % (max_deg + 1));
    out.mu = static_cast<long>(rng() % (max_mu + 1));
    out.f = random_distinguished_poly(R, out.lambda, prec, rng);
    out.u = random_unit_series(R, t, prec, rng);
    TruncatedSeries1 g = poly_to_series(R, out.f, t, prec) * out.u;
    PadicElement pimu = uniformizer(R, prec + out.mu).pow(out.mu);
    out.g = g.scaled(pimu);
    return out;
}

struct PlantedSeries2 {
    long mu;
    std::vector<PadicElement> a; // distinguished in T1, degree r1
    std::vector<PadicElement> b; // distinguished in T2, degree r2
    TruncatedSeries2 F;          // pi^mu * a(T1) * b(T2) * unit(T1,T2)
    long r1, r2;
};

inline TruncatedSeries2 random_unit_series2(const RingPtr& R, long t1, long t2, long prec,
                                            std::mt19937_64& rng) {
    TruncatedSeries2 u(R, t1, t2, prec);
    for (long i = 0; i < t1; ++i)
        for (long j = 0; j < t2; ++j)
            u.set(i, j, (i == 0 && j == 0) ? random_unit(R, prec, rng)
                                           : random_element(R, prec, rng));
    return u;
}

inline TruncatedSeries2 poly_axis_to_series2(const RingPtr& R, const std::vector<PadicElement>& f,
                                             int axis, long t1, long t2, long prec) {
    TruncatedSeries2 s(R, t1, t2, prec);
    for (std::size_t k = 0; k < f.size(); ++k) {
        long kk = static_cast<long>(k);
        if (axis == 1 && kk < t1) s.set(kk, 0, f[k].clamp_precision(prec));
        if (axis == 2 && kk < t2) s.set(0, kk, f[k].clamp_precision(prec));
    }
    return s;
}

// F = pi^mu * a(T1) * b(T2) * U with U a two-variable unit; contents resolve
// to pi^mu * b along the T1-series view and pi^mu * a along the T2-series view
inline PlantedSeries2 plant_series2(const RingPtr& R, long t1, long t2, long prec, long max_r1,
                                    long max_r2, long max_mu, std::mt19937_64& rng) {
    PlantedSeries2 out;
    out.r1 = static_cast<long>(rng() % (max_r1 + 1));
    out.r2 = static_cast<long>(rng() % (max_r2 + 1));
    out.mu = static_cast<long>(rng() % (max_mu + 1));
    out.a = random_distinguished_poly(R, out.r1, prec, rng);
    out.b = random_distinguished_poly(R, out.r2, prec, rng);
    TruncatedSeries2 F = poly_axis_to_series2(R, out.a, 1, t1, t2, prec) *
                         poly_axis_to_series2(R, out.b, 2, t1, t2, prec);
    F = F * random_unit_series2(R, t1, t2, prec, rng);
    if (out.mu > 0) {
        PadicElement pimu = uniformizer(R, prec + out.mu).pow(out.mu);
        TruncatedSeries2 scaled(R, t1, t2, prec + out.mu);
        for (long i = 0; i < t1; ++i)
            for (long j = 0; j < t2; ++j) scaled.set(i, j, F.at(i, j) * pimu);
        F = std::move(scaled);
    }
    out.F = std::move(F);
    return out;
}

} // namespace padiclab
