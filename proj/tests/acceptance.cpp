// Acceptance run: one PASS/FAIL line per criterion, with the measured
// quantities. Exit status is nonzero when any criterion fails.

#include <boost/rational.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "einstein_grid.hpp"
#include "sasaki/chart_oracle.hpp"
#include "sasaki/einstein.hpp"
#include "sasaki/hermitian_product.hpp"

using namespace sasaki;
using namespace sasaki::testing;
using Rational = boost::rational<long long>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct GridPoint {
    int p, q;
    double a, b;
};

std::vector<GridPoint> base_grid() {
    std::vector<GridPoint> out;
    for (int p : {1, 2})
        for (int q : {1, 2})
            for (double a : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
                for (double b : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) out.push_back({p, q, a, b});
    return out;
}

ProductHermitianModel round_product(const GridPoint& gp) {
    return build_product_model(make_round_sphere_model(gp.p), make_round_sphere_model(gp.q), {gp.a, gp.b});
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const StencilConfig kStencil{};

Outcome integrability() {
    const auto t0 = Clock::now();
    double algebraic = 0.0;
    std::size_t points = 0;
    for (const auto& gp : base_grid()) {
        algebraic = std::max(algebraic, check_integrability(round_product(gp)));
        ++points;
    }
    double nijenhuis = 0.0;
    for (int p : {1, 2}) {
        const ProductChart chart{FactorChart::round(p), FactorChart::round(1), {0.5, 1.5}};
        for (const auto& u : sample_chart_points(chart.dimension(), 20, 1000 + p))
            nijenhuis = std::max(nijenhuis, max_abs_difference(nijenhuis_fd(chart.complex_structure_field(), u, kStencil),
                                                               CovariantTensor3(chart.dimension())));
    }
    const double secs = seconds_since(t0);
    return {algebraic <= 1e-12 && nijenhuis <= 1e-5 && secs < 60.0,
            fmt::format("algebraic max {:.3g} over {} points (tol 1e-12); Nijenhuis max {:.3g} on S3xS3 and S5xS3, "
                        "20 points each (tol 1e-5); {:.2f} s",
                        algebraic, points, nijenhuis, secs)};
}

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    const auto s3 = make_round_sphere_model(1);
    double curvature = 0.0, ricci = 0.0, ricci_star = 0.0, blocks = 0.0, nabla_j = 0.0;
    for (double a : {0.0, 0.5})
        for (double b : {1.0, 1.5}) {
            const auto model = build_product_model(s3, s3, {a, b});
            const ProductChart chart{FactorChart::round(1), FactorChart::round(1), {a, b}};
            for (const auto& u : sample_chart_points(6, 5, 2000)) {
                const auto c = compare_with_algebraic(chart, model, u, kStencil);
                curvature = std::max(curvature, c.curvature);
                ricci = std::max(ricci, c.ricci);
                ricci_star = std::max(ricci_star, c.ricci_star);
                blocks = std::max(blocks, c.connection_blocks);
                nabla_j = std::max(nabla_j, c.nabla_J);
            }
        }
    const double secs = seconds_since(t0);
    const bool ok = curvature <= 1e-4 && ricci <= 1e-4 && ricci_star <= 1e-4 && blocks <= 1e-5 && nabla_j <= 1e-5 &&
                    secs < 120.0;
    return {ok, fmt::format("R {:.3g}, Ricci {:.3g}, Ricci-* {:.3g} (tol 1e-4); connection blocks {:.3g}, "
                            "nabla J {:.3g} (tol 1e-5); 20 points; {:.2f} s",
                            curvature, ricci, ricci_star, blocks, nabla_j, secs)};
}

Outcome einstein_iff() {
    const auto grid = randomized_grid(400, 31337);
    std::size_t agree = 0, match = 0, einstein = 0, lambda_ok = 0;
    for (const auto& s : grid) {
        const auto v = theorem1_verdict(build_factor(s.kind_m, s.p, s.value_m), build_factor(s.kind_mp, s.q, s.value_mp),
                                        {s.a, s.b}, 1e-9);
        agree += v.agreement && v.is_einstein == v.structural_conditions.all();
        match += v.is_einstein == expected_einstein(s);
        if (v.is_einstein) {
            ++einstein;
            lambda_ok += std::abs(v.lambda - 2.0 * s.p) <= 1e-12 && v.residual <= 1e-12;
        }
    }
    const bool ok = agree == grid.size() && match == grid.size() && lambda_ok == einstein && einstein > 0;
    return {ok, fmt::format("{} samples: verdicts agree on {}, Einstein set matches the conditions on {}; "
                            "{} Einstein samples, lambda = 2p with residual <= 1e-12 on {}",
                            grid.size(), agree, match, einstein, lambda_ok)};
}

Outcome examples() {
    std::size_t passed = 0;
    double worst_param = 0.0;
    for (int p = 1; p <= 5; ++p)
        for (int q = 1; q <= 5; ++q) {
            const auto ex = calabi_eckmann_einstein_example(p, q);
            worst_param = std::max({worst_param, std::abs(ex.spec.c - (4.0 * p / q - 3.0)),
                                    std::abs(ex.spec.alpha - static_cast<double>(q) / p)});
            passed += theorem1_verdict(ex.model).is_einstein;
        }
    const auto e21 = calabi_eckmann_einstein_example(2, 1);
    const double r21 = max_abs_difference(e21.model.ricci_bar, 4.0 * e21.model.g_bar);
    return {passed == 25 && worst_param == 0.0 && r21 <= 1e-12,
            fmt::format("{}/25 examples Einstein; (2,1): |rho - 4g| = {:.3g} (tol 1e-12)", passed, r21)};
}

Outcome never_weakly_star() {
    std::size_t weakly = 0, witnessed = 0, total = 0;
    auto visit = [&](const ProductHermitianModel& m) {
        ++total;
        weakly += check_weakly_star_einstein(m).is_weakly_star_einstein;
        const std::size_t xi = m.xi_index();
        witnessed += std::abs(m.ricci_star_bar(xi, xi)) <= 1e-12 && std::abs(m.g_bar(xi, xi) - 1.0) <= 1e-12 &&
                     std::abs(m.tau_star_bar) > 1e-12;
    };
    for (const auto& gp : base_grid()) visit(round_product(gp));
    for (int p = 1; p <= 5; ++p)
        for (int q = 1; q <= 5; ++q) visit(calabi_eckmann_einstein_example(p, q).model);
    return {weakly == 0 && witnessed == total,
            fmt::format("{} models: weakly *-Einstein on {}; rho*(xi,xi) = 0 against g(xi,xi) = 1 with tau* != 0 on {}",
                        total, weakly, witnessed)};
}

Outcome star_scalar() {
    double worst = 0.0;
    std::size_t ok = 0;
    for (int p = 1; p <= 5; ++p)
        for (int q = 1; q <= 5; ++q) {
            const double dev = std::abs(calabi_eckmann_einstein_example(p, q).model.tau_star_bar - star_scalar_prediction(p, q));
            worst = std::max(worst, dev);
            ok += dev <= 1e-12;
        }
    auto tau = [](int p, int q) { return calabi_eckmann_einstein_example(p, q).model.tau_star_bar; };
    return {ok == 25, fmt::format("trace matches 4q(1-p+q) on {}/25 (max deviation {:.3g}, tol 1e-12); "
                                  "traced values (2,1) {:.15g}, (1,1) {:.15g}, (1,2) {:.15g} against 0, 4, 16",
                                  ok, worst, tau(2, 1), tau(1, 1), tau(1, 2))};
}

Outcome identity_suite() {
    struct Case {
        std::string name;
        SasakianPointModel model;
        FactorChart chart;
    };
    std::vector<Case> cases;
    for (int p = 1; p <= 3; ++p) cases.push_back({fmt::format("S^{}", 2 * p + 1), make_round_sphere_model(p), FactorChart::round(p)});
    for (int q = 1; q <= 3; ++q)
        for (double c : {-1.0, 1.0, 3.0, 5.0, 7.0})
            cases.push_back({fmt::format("q={} c={}", q, c), make_space_form_model(q, c), FactorChart::space_form(q, c)});

    double fd_worst = 0.0;
    std::vector<std::string> failing;
    for (const auto& k : cases) {
        for (const auto& u : sample_chart_points(k.chart.dimension(), 10, 3000)) {
            const auto r = verify_factor_fields(k.chart, u, kStencil);
            fd_worst = std::max({fd_worst, r.nabla_xi, r.nabla_eta, r.nabla_phi, r.contact, r.unit_xi, r.phi_squared});
        }
        const auto id = verify_sasakian_curvature_identities(k.model);
        const double algebraic = std::max(id.max(), structure_residuals(k.model).max());
        if (algebraic > 1e-12) failing.push_back(fmt::format("{} ({:.3g})", k.name, algebraic));
    }
    std::string fails;
    for (const auto& f : failing) fails += (fails.empty() ? "" : ", ") + f;
    return {fd_worst <= 1e-6 && failing.empty(),
            fmt::format("field identities by finite differences max {:.3g} (tol 1e-6); algebraic identities exceed "
                        "1e-12 on {}/{} models{}{}",
                        fd_worst, failing.size(), cases.size(), failing.empty() ? "" : ": ", fails)};
}

Outcome space_form_consistency() {
    std::size_t exact = 0, total = 0;
    for (int q = 1; q <= 4; ++q)
        for (Rational c : {Rational(-1), Rational(1), Rational(3), Rational(5), Rational(7), Rational(1, 3),
                           Rational(-5, 2), Rational(11, 4)}) {
            ++total;
            const int n = 2 * q + 1;
            const Rational A = (Rational(q) * (c + 3) + c - 1) / 2;
            const Rational B = -Rational(q + 1) * (c - 1) / 2;
            bool ok = true;
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    Rational s = 0;
                    for (int e = 0; e < n; ++e) s += space_form_curvature_component(q, c, y, e, e, z);
                    const Rational want = (y == z ? A : Rational(0)) + (y == n - 1 && z == n - 1 ? B : Rational(0));
                    ok = ok && s == want;
                }
            exact += ok;
        }
    double deform = 0.0;
    for (int q = 1; q <= 3; ++q)
        for (double c : {-1.0, 1.0, 3.0, 5.0, 7.0})
            for (double alpha : {0.25, 0.5, 2.0 / 3.0, 1.0, 2.0, 3.5}) {
                const auto d = d_homothetic_deform(make_space_form_model(q, c), alpha);
                deform = std::max(deform, max_abs_difference(d.R, make_space_form_model(q, (c + 3.0) / alpha - 3.0).R));
            }
    return {exact == total && deform <= 1e-12,
            fmt::format("exact rational Ricci coefficients on {}/{} (q, c) pairs; deformation curvature deviation "
                        "{:.3g} (tol 1e-12)",
                        exact, total, deform)};
}

Outcome never_kahler() {
    std::size_t ok = 0, total = 0;
    double worst_margin = 1e300;
    for (const auto& gp : base_grid()) {
        ++total;
        const double w = check_not_kahler(round_product(gp));
        const double need = std::min(1.0, gp.a * gp.a + gp.b * gp.b);
        worst_margin = std::min(worst_margin, w - need);
        ok += w >= need;
    }
    return {ok == total, fmt::format("max |nabla J| >= min(1, a^2+b^2) on {}/{} points (smallest margin {:.3g})", ok,
                                     total, worst_margin)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"integrability", integrability},
        {"oracle equivalence", oracle_equivalence},
        {"Einstein iff", einstein_iff},
        {"Einstein examples", examples},
        {"never weakly *-Einstein", never_weakly_star},
        {"*-scalar curvature formula", star_scalar},
        {"Sasakian identity suite", identity_suite},
        {"space-form Ricci and deformation", space_form_consistency},
        {"never Kaehler", never_kahler},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("error: {}", e.what())};
        }
        failures += !o.pass;
        fmt::print("{} criterion {}: {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria pass\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
