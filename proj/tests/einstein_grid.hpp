#pragma once

// Randomized parameter and factor grid for the Einstein iff property, with an
// expected-membership predicate computed from closed space-form Ricci
// coefficients rather than through the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sasaki/sasakian_model.hpp"

namespace sasaki::testing {

enum class FactorKind { Round, SpaceForm, Deformed };

struct Sample {
    int p, q;
    double a, b;
    FactorKind kind_m, kind_mp;
    double value_m, value_mp;  // c for a space form, alpha for a deformed sphere
};

inline double curvature_of(FactorKind kind, double value) {
    switch (kind) {
        case FactorKind::Round: return 1.0;
        case FactorKind::SpaceForm: return value;
        case FactorKind::Deformed: return 4.0 / value - 3.0;  // value is alpha
    }
    return 1.0;
}

inline SasakianPointModel build_factor(FactorKind kind, int n, double value) {
    switch (kind) {
        case FactorKind::Round: return make_round_sphere_model(n);
        case FactorKind::SpaceForm: return make_space_form_model(n, value);
        case FactorKind::Deformed: return d_homothetic_deform(make_round_sphere_model(n), value);
    }
    return {};
}

/// Expected Einstein membership from the closed Ricci coefficients of
/// space forms, A = (n(c+3) + c - 1)/2 and B = -(n+1)(c-1)/2, evaluated
/// directly rather than through the library.
inline bool expected_einstein(const Sample& s) {
    const double tol = 1e-9;
    auto A = [](int n, double c) { return (n * (c + 3.0) + c - 1.0) / 2.0; };
    auto B = [](int n, double c) { return -(n + 1.0) * (c - 1.0) / 2.0; };
    const double r = static_cast<double>(s.p) / s.q;
    const bool a_zero = std::abs(s.a) <= tol;
    const bool scale = std::abs(s.p - s.b * s.b * s.q) <= tol;
    const double c_m = curvature_of(s.kind_m, s.value_m), c_mp = curvature_of(s.kind_mp, s.value_mp);
    const bool m_einstein = std::abs(B(s.p, c_m)) <= tol;
    const bool mp_match = std::abs(A(s.q, c_mp) - 2.0 * (s.p + r - 1.0)) <= tol &&
                          std::abs(B(s.q, c_mp) + 2.0 * (r - 1.0) * (s.q + 1.0)) <= tol;
    return a_zero && scale && m_einstein && mp_match;
}

inline std::vector<Sample> randomized_grid(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto pick = [&](auto const& options) { return options[gen() % options.size()]; };
    const std::vector<int> dims{1, 2, 3};
    const std::vector<double> as{0.0, 0.3, -0.3, 1.0, -1.0};
    std::vector<Sample> out;
    while (out.size() < count) {
        Sample s{pick(dims), pick(dims), pick(as), 1.0, FactorKind::Round, FactorKind::Round, 1.0, 1.0};
        const std::vector<double> bs{0.7, 1.0, std::sqrt(static_cast<double>(s.p) / s.q), 2.0};
        s.b = pick(bs);
        const double c_einstein = 4.0 * s.p / s.q - 3.0;
        auto draw = [&](FactorKind& kind, double& c, bool prime) {
            switch (gen() % 4) {
                case 0: kind = FactorKind::Round; c = 1.0; break;
                case 1: kind = FactorKind::SpaceForm; c = std::uniform_real_distribution<double>(-2.5, 8.0)(gen); break;
                case 2: kind = FactorKind::Deformed; c = std::uniform_real_distribution<double>(0.2, 2.5)(gen); break;
                default:
                    // The curvature that makes the second factor match.
                    kind = prime ? FactorKind::SpaceForm : FactorKind::Round;
                    c = prime ? c_einstein : 1.0;
            }
        };
        draw(s.kind_m, s.value_m, false);
        draw(s.kind_mp, s.value_mp, true);
        out.push_back(s);
    }
    return out;
}

}  // namespace sasaki::testing
