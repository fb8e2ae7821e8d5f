#include <gtest/gtest.h>

#include <cmath>

#include "sasaki/einstein.hpp"
#include "sasaki/hermitian_product.hpp"
#include "test_support.hpp"

using namespace sasaki;
using namespace sasaki::testing;

namespace {

struct GridPoint {
    int p, q;
    double a, b;
};

std::vector<GridPoint> criterion_grid() {
    std::vector<GridPoint> out;
    for (int p : {1, 2})
        for (int q : {1, 2})
            for (double a : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
                for (double b : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) out.push_back({p, q, a, b});
    return out;
}

ProductHermitianModel round_product(int p, int q, double a, double b) {
    return build_product_model(make_round_sphere_model(p), make_round_sphere_model(q), {a, b});
}

/// Reference metric of the product, written entry by entry:
/// g + a(eta (x) eta' + eta' (x) eta) + (a^2 + b^2 - 1) eta' (x) eta' on g (+) g'.
SquareMatrix reference_metric(const SasakianPointModel& m, const SasakianPointModel& mp, double a, double b) {
    const std::size_t d = m.dimension(), n = d + mp.dimension();
    SquareMatrix g(n);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = m.g(i, j);
    for (std::size_t i = 0; i < mp.dimension(); ++i)
        for (std::size_t j = 0; j < mp.dimension(); ++j)
            g(d + i, d + j) = mp.g(i, j) + (a * a + b * b - 1.0) * mp.eta[i] * mp.eta[j];
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < mp.dimension(); ++j) g(i, d + j) = g(d + j, i) = a * m.eta[i] * mp.eta[j];
    return g;
}

/// Reference complex structure:
/// J(X, X') = (phi X - (a/b) eta(X) xi - ((a^2+b^2)/b) eta'(X') xi,
///             phi' X' + (1/b) eta(X) xi' + (a/b) eta'(X') xi').
Endomorphism reference_J(const SasakianPointModel& m, const SasakianPointModel& mp, double a, double b) {
    const std::size_t d = m.dimension(), n = d + mp.dimension();
    SquareMatrix j(n);
    for (std::size_t col = 0; col < n; ++col) {
        const bool in_m = col < d;
        const double eta = in_m ? m.eta[col] : 0.0;
        const double etap = in_m ? 0.0 : mp.eta[col - d];
        for (std::size_t r = 0; r < d; ++r)
            j(r, col) = (in_m ? m.phi(r, col) : 0.0) - (a / b) * eta * m.xi[r] - ((a * a + b * b) / b) * etap * m.xi[r];
        for (std::size_t r = 0; r < mp.dimension(); ++r)
            j(d + r, col) = (in_m ? 0.0 : mp.phi(r, col - d)) + (1.0 / b) * eta * mp.xi[r] + (a / b) * etap * mp.xi[r];
    }
    return Endomorphism(j);
}

/// Ricci-* by brute force: sum_{k,l} g^{kl} R(X, J e_k, J Y, e_l).
BilinearForm reference_ricci_star(const ProductHermitianModel& m) {
    const std::size_t n = m.dimension();
    const SquareMatrix gi = inverse(m.g_bar.entries());
    const SquareMatrix& J = m.J_bar.entries();
    SquareMatrix out(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    if (gi(k, l) == 0.0) continue;
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t v = 0; v < n; ++v) s += gi(k, l) * J(u, k) * J(v, y) * m.R_bar(x, u, v, l);
                }
            out(x, y) = s;
        }
    return BilinearForm(out);
}

ProductVector in_m(const ProductHermitianModel& m, std::size_t i) {
    return {TangentVector::basis(m.factor.dimension(), i), TangentVector(m.factor_prime.dimension())};
}

ProductVector in_mprime(const ProductHermitianModel& m, std::size_t i) {
    return {TangentVector(m.factor.dimension()), TangentVector::basis(m.factor_prime.dimension(), i)};
}

}  // namespace

TEST(ProductMetric, Examples) {
    const auto s3 = make_round_sphere_model(1);
    const BilinearForm plain = build_product_metric(s3, s3, {0.0, 1.0});
    EXPECT_LE(max_abs(plain.entries() - SquareMatrix::identity(6)), 0.0);
    EXPECT_DOUBLE_EQ(build_product_metric(s3, s3, {0.5, 1.0})(2, 5), 0.5);
    EXPECT_DOUBLE_EQ(build_product_metric(s3, s3, {1.0, 2.0})(5, 5), 5.0);
}

TEST(ProductMetric, MatchesReferenceOnGridAndDeformedFactors) {
    for (const auto& gp : criterion_grid()) {
        const auto m = make_space_form_model(gp.p, 2.0);
        const auto mp = d_homothetic_deform(make_round_sphere_model(gp.q), 0.6);
        const BilinearForm g = build_product_metric(m, mp, {gp.a, gp.b});
        EXPECT_LE(max_abs(g.entries() - reference_metric(m, mp, gp.a, gp.b)), 1e-14);
    }
}

TEST(ProductMetric, RejectsZeroB) {
    const auto s3 = make_round_sphere_model(1);
    EXPECT_THROW(build_product_metric(s3, s3, {0.3, 0.0}), InvalidParameterError);
    EXPECT_THROW(build_product_complex_structure(s3, s3, {0.3, 0.0}), InvalidParameterError);
    EXPECT_THROW(build_product_model(s3, s3, {0.3, 0.0}), InvalidParameterError);
    EXPECT_THROW(build_product_model(s3, s3, {std::nan(""), 1.0}), InvalidParameterError);
}

TEST(ComplexStructure, Examples) {
    const auto s3 = make_round_sphere_model(1);
    {
        const auto m = build_product_model(s3, s3, {0.0, 1.0});
        const TangentVector jxi = m.J_bar(TangentVector::basis(6, 2));
        const TangentVector jxip = m.J_bar(TangentVector::basis(6, 5));
        EXPECT_LE(max_abs(jxi - TangentVector::basis(6, 5)), 1e-15);
        EXPECT_LE(max_abs(jxip + TangentVector::basis(6, 2)), 1e-15);
        // phi (+) phi' off the Reeb plane.
        EXPECT_LE(max_abs(m.J_bar(TangentVector::basis(6, 0)) - TangentVector::basis(6, 1)), 1e-15);
        EXPECT_LE(max_abs(m.J_bar(TangentVector::basis(6, 3)) - TangentVector::basis(6, 4)), 1e-15);
    }
    {
        const auto m = build_product_model(s3, s3, {1.0, 1.0});
        const TangentVector xi = TangentVector::basis(6, 2), xip = TangentVector::basis(6, 5);
        EXPECT_LE(max_abs(m.J_bar(xi) - (xip - xi)), 1e-15);
        EXPECT_LE(max_abs(m.J_bar(xip) - (xip - 2.0 * xi)), 1e-15);
    }
}

TEST(ComplexStructure, MatchesReferenceSquaresToMinusOneAndIsCompatible) {
    for (const auto& gp : criterion_grid()) {
        const auto m = make_space_form_model(gp.p, -0.5);
        const auto mp = make_round_sphere_model(gp.q);
        const ProductHermitianModel model = build_product_model(m, mp, {gp.a, gp.b});
        const std::size_t n = model.dimension();
        EXPECT_LE(max_abs((model.J_bar - reference_J(m, mp, gp.a, gp.b)).entries()), 1e-14);
        EXPECT_LE(max_abs((model.J_bar * model.J_bar + Endomorphism::identity(n)).entries()), 1e-13);
        const SquareMatrix& J = model.J_bar.entries();
        EXPECT_LE(max_abs(J.transposed() * model.g_bar.entries() * J - model.g_bar.entries()), 1e-12);
        const TangentVector xi = TangentVector::basis(n, model.xi_index());
        EXPECT_LE(max_abs(model.J_bar(model.J_bar(xi)) + xi), 1e-14);
    }
}

TEST(NablaJ, PublishedBlockValues) {
    const auto s3 = make_round_sphere_model(1);
    for (double a : {0.0, 0.5, 3.0})
        for (double b : {1.0, 1.5, 4.0}) {
            const auto model = build_product_model(s3, s3, {a, b});
            const auto e1 = in_m(model, 0);
            EXPECT_NEAR(nabla_J_blocks(model, e1, e1, e1), 0.0, 1e-15);
            EXPECT_NEAR(nabla_J_blocks(model, in_mprime(model, 0), in_mprime(model, 0), in_mprime(model, 2)),
                        a * a + b * b, 1e-13);
        }
}

TEST(NablaJ, PrimedDirectionOnFactorPairVanishes) {
    const auto model = build_product_model(make_round_sphere_model(2), make_space_form_model(1, 3.0), {0.7, 1.3});
    for (int trial = 0; trial < 20; ++trial) {
        const ProductVector xp{TangentVector(5), random_vector(3)};
        const ProductVector y{random_vector(5), TangentVector(3)};
        const ProductVector z{random_vector(5), TangentVector(3)};
        EXPECT_NEAR(nabla_J_blocks(model, xp, y, z), 0.0, 1e-13);
    }
}

TEST(NablaJ, SkewInLastTwoArguments) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        const CovariantTensor3 t = nabla_J_tensor(model);
        const std::size_t n = model.dimension();
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(t(i, j, k) + t(i, k, j)));
        EXPECT_LE(worst, 1e-12);
    }
}

TEST(Integrability, Examples) {
    EXPECT_LE(check_integrability(round_product(1, 1, 0.0, 1.0)), 1e-13);
    EXPECT_LE(check_integrability(round_product(2, 1, 0.7, 1.3)), 1e-12);
}

TEST(Integrability, GridProperty) {
    for (const auto& gp : criterion_grid())
        EXPECT_LE(check_integrability(round_product(gp.p, gp.q, gp.a, gp.b)), 1e-12)
            << gp.p << gp.q << " a=" << gp.a << " b=" << gp.b;
}

TEST(Integrability, CorruptedStructureIsDetected) {
    ProductHermitianModel model = round_product(1, 1, 0.5, 1.5);
    SquareMatrix j = model.J_bar.entries();
    const std::size_t col = model.xi_prime_index();
    for (std::size_t r = 0; r < model.dimension(); ++r) j(r, col) = -j(r, col);
    model.J_bar = Endomorphism(j);
    EXPECT_GT(check_integrability(model), 0.1);
}

TEST(NotKahler, Witnesses) {
    EXPECT_GE(check_not_kahler(round_product(1, 1, 0.0, 1.0)), 1.0);
    const auto big = round_product(1, 1, 3.0, 4.0);
    EXPECT_GE(check_not_kahler(big), 25.0 - 1e-12);
    EXPECT_NEAR(nabla_J_blocks(big, in_mprime(big, 0), in_mprime(big, 0), in_mprime(big, 2)), 25.0, 1e-12);
    for (const auto& gp : criterion_grid()) {
        const double w = check_not_kahler(round_product(gp.p, gp.q, gp.a, gp.b));
        EXPECT_GT(w, 0.0);
        EXPECT_GE(w, std::min(1.0, gp.a * gp.a + gp.b * gp.b) - 1e-12);
    }
}

TEST(ProductCurvature, RiemannianProductAtUnitParameters) {
    const auto m = make_space_form_model(2, 3.0);
    const auto mp = make_space_form_model(1, -1.0);
    const auto model = build_product_model(m, mp, {0.0, 1.0});
    const std::size_t d = m.dimension(), n = model.dimension();
    const CovariantTensor4 expected = CovariantTensor4::generate(n, [&](auto i, auto j, auto k, auto l) {
        if (i < d && j < d && k < d && l < d) return m.R(i, j, k, l);
        if (i >= d && j >= d && k >= d && l >= d) return mp.R(i - d, j - d, k - d, l - d);
        return 0.0;
    });
    EXPECT_LE(max_abs_difference(model.R_bar, expected), 1e-13);
    SquareMatrix ricci_sum(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < d && j < d) ricci_sum(i, j) = m.ricci(i, j);
            else if (i >= d && j >= d) ricci_sum(i, j) = mp.ricci(i - d, j - d);
        }
    EXPECT_LE(max_abs_difference(model.ricci_bar, BilinearForm(ricci_sum)), 1e-13);
}

TEST(ProductCurvature, MixedBlocksCarryA) {
    const auto model = round_product(1, 2, 0.0, 1.7);
    const std::size_t d = 3, n = model.dimension();
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = d; j < n; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l) worst = std::max(worst, std::abs(model.R_bar(i, j, k, l)));
    EXPECT_EQ(worst, 0.0);
}

TEST(ProductCurvature, MixedBlockValue) {
    const auto model = round_product(1, 1, 0.5, 1.0);
    // g(R(e1, xi') e1, xi) = -a (g(e1,e1) eta(xi) - g(e1,xi) eta(e1)) = -0.5.
    EXPECT_NEAR(model.R_bar(0, model.xi_prime_index(), 0, model.xi_index()), -0.5, 1e-15);
}

TEST(ProductCurvature, SymmetriesOnGrid) {
    for (const auto& gp : criterion_grid()) {
        const auto model = build_product_model(make_space_form_model(gp.p, 4.0),
                                               d_homothetic_deform(make_round_sphere_model(gp.q), 0.7), {gp.a, gp.b});
        EXPECT_LE(curvature_symmetry_residuals(model.R_bar).max(), 1e-12);
    }
}

TEST(ProductRicci, Examples) {
    const auto zero_a = round_product(2, 2, 0.0, 1.3);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 5; j < 10; ++j) EXPECT_EQ(zero_a.ricci_bar(i, j), 0.0);
    const auto m = round_product(2, 1, 1.0, 1.0);
    EXPECT_NEAR(m.ricci_bar(m.xi_index(), m.xi_prime_index()), 8.0, 1e-13);
}

TEST(ProductRicci, ClosedFormEqualsTraceOfClosedCurvature) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        EXPECT_LE(max_abs_difference(model.ricci_bar, trace_with_inverse(model.R_bar, model.g_bar)), 1e-11);
    }
    const auto general = build_product_model(make_space_form_model(2, -1.0),
                                             d_homothetic_deform(make_space_form_model(1, 3.0), 1.7), {-0.4, 0.9});
    EXPECT_LE(max_abs_difference(general.ricci_bar, trace_with_inverse(general.R_bar, general.g_bar)), 1e-11);
}

TEST(ProductRicciStar, Examples) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        EXPECT_NEAR(model.ricci_star_bar(model.xi_index(), model.xi_index()), 0.0, 1e-13);
    }
    // M-block coefficient 1 - 2aq at p = q = 1, a = 1.
    const auto m = round_product(1, 1, 1.0, 0.8);
    EXPECT_NEAR(m.ricci_star_bar(0, 0), -1.0, 1e-13);
    EXPECT_NEAR(m.ricci_star_bar(1, 1), -1.0, 1e-13);
}

TEST(ProductRicciStar, ClosedFormEqualsDefinition) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        EXPECT_LE(max_abs_difference(model.ricci_star_bar, reference_ricci_star(model)), 1e-11);
    }
    const auto general = build_product_model(make_space_form_model(2, 5.0),
                                             d_homothetic_deform(make_round_sphere_model(2), 0.35), {1.2, -0.6});
    EXPECT_LE(max_abs_difference(general.ricci_star_bar, reference_ricci_star(general)), 1e-11);
    EXPECT_LE(max_abs_difference(general.ricci_star_bar,
                                 ricci_star_by_definition(general.R_bar, general.J_bar, general.g_bar)),
              1e-11);
}

TEST(ScalarCurvatures, TracesAndSpotValues) {
    const auto m = round_product(1, 1, 0.0, 1.0);
    EXPECT_NEAR(m.tau_star_bar, 4.0, 1e-13);
    EXPECT_NEAR(m.tau_bar, 12.0, 1e-13);
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        const ScalarCurvatures s = scalar_curvatures(model);
        EXPECT_NEAR(s.tau_bar, metric_trace(trace_with_inverse(model.R_bar, model.g_bar), model.g_bar), 1e-10);
        EXPECT_NEAR(s.tau_star_bar, metric_trace(reference_ricci_star(model), model.g_bar), 1e-10);
    }
}

TEST(ScalarCurvatures, EinsteinExamplesHaveStarScalarFourP) {
    // The trace gives 4p on a = 0, b = sqrt(p/q) with the deformed second
    // factor; the closed prediction 4q(1 - p + q) agrees only when p = q.
    for (int p = 1; p <= 5; ++p)
        for (int q = 1; q <= 5; ++q) {
            const auto ex = calabi_eckmann_einstein_example(p, q);
            const double traced = metric_trace(reference_ricci_star(ex.model), ex.model.g_bar);
            EXPECT_NEAR(ex.model.tau_star_bar, traced, 1e-10);
            EXPECT_NEAR(traced, 4.0 * p, 1e-10);
            if (p == q) {
                EXPECT_NEAR(traced, star_scalar_prediction(p, q), 1e-10);
            } else {
                EXPECT_GT(std::abs(traced - star_scalar_prediction(p, q)), 1.0);
            }
        }
}

TEST(WeaklyStarEinstein, ReebDegeneracyBoundsResidual) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        const auto ws = check_weakly_star_einstein(model);
        EXPECT_FALSE(ws.is_weakly_star_einstein);
        EXPECT_NEAR(model.ricci_star_bar(model.xi_index(), model.xi_index()), 0.0, 1e-13);
        EXPECT_NEAR(model.g_bar(model.xi_index(), model.xi_index()), 1.0, 0.0);
        EXPECT_GE(ws.residual, std::abs(model.tau_star_bar) / model.dimension() - 1e-12);
    }
}

TEST(WeaklyStarEinstein, ResidualValues) {
    // |0 - 4/6| on the xi entry dominates |1 - 4/6| on e1.
    const auto ws = check_weakly_star_einstein(round_product(1, 1, 0.0, 1.0));
    EXPECT_NEAR(ws.residual, 2.0 / 3.0, 1e-13);
    const auto ex = calabi_eckmann_einstein_example(2, 1);
    EXPECT_NEAR(ex.model.ricci_star_bar(0, 0), 1.0, 1e-12);
    EXPECT_FALSE(check_weakly_star_einstein(ex.model).is_weakly_star_einstein);
    EXPECT_GE(check_weakly_star_einstein(ex.model).residual, 1.0 - 1e-12);
}

TEST(WeaklyStarEinstein, IsolatedFamilyMemberWithVanishingRicciStar) {
    // p = q = 1, a = 1/2, b = sqrt(3)/2: both block coefficients vanish and
    // the Ricci-* tensor is identically zero, hence weakly *-Einstein.
    const auto model = round_product(1, 1, 0.5, std::sqrt(3.0) / 2.0);
    EXPECT_LE(max_abs(model.ricci_star_bar.entries()), 1e-13);
    EXPECT_LE(max_abs(reference_ricci_star(model).entries()), 1e-12);
    EXPECT_TRUE(check_weakly_star_einstein(model).is_weakly_star_einstein);
}

TEST(AdaptedBasis, OrthonormalWithReebPair) {
    for (const auto& gp : criterion_grid()) {
        const auto model = round_product(gp.p, gp.q, gp.a, gp.b);
        const auto basis = adapted_orthonormal_basis(model);
        const std::size_t n = model.dimension();
        EXPECT_LE(max_abs(model.g_bar.in_frame(basis).entries() - SquareMatrix::identity(n)), 1e-12);
        const TangentVector expected_last =
            (1.0 / gp.b) * (TangentVector::basis(n, model.xi_prime_index()) - gp.a * TangentVector::basis(n, model.xi_index()));
        EXPECT_LE(max_abs(basis[n - 1] - expected_last), 1e-14);
    }
}
