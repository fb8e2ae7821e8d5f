#include "sasaki/einstein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sasaki {

namespace {

constexpr double kBoundaryFactor = 1e3;

void check_dims(int p, int q) {
    if (p < 1 || q < 1) throw InvalidParameterError("p and q must be at least 1");
}

}  // namespace

EtaEinsteinTarget required_eta_einstein_coefficients(int p, int q) {
    check_dims(p, q);
    const double r = static_cast<double>(p) / q;
    return {2.0 * (p + r - 1.0), -2.0 * (r - 1.0) * (q + 1.0)};
}

EtaEinsteinTarget space_form_ricci_coefficients(int q, double c) {
    if (q < 1) throw InvalidParameterError("q must be at least 1");
    return {(q * (c + 3.0) + c - 1.0) / 2.0, -(q + 1.0) * (c - 1.0) / 2.0};
}

EinsteinVerdict theorem1_verdict(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                 const HermitianParams& params, double tol) {
    return theorem1_verdict(build_product_model(factor, factor_prime, params), tol);
}

EinsteinVerdict theorem1_verdict(const ProductHermitianModel& model, double tol) {
    if (!(tol > 0.0)) throw InvalidParameterError("tolerance must be positive");
    const int p = model.p(), q = model.q();
    const double a = model.params.a, b = model.params.b;
    const auto basis = adapted_orthonormal_basis(model);
    const double n = static_cast<double>(model.dimension());

    EinsteinVerdict v;
    v.lambda = model.tau_bar / n;
    const TangentVector& xi = basis[model.dimension() - 2];
    v.lambda_xi = model.ricci_bar(xi, xi) / model.g_bar(xi, xi);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double expected = i == j ? v.lambda : 0.0;
            v.residual = std::max(v.residual, std::abs(model.ricci_bar(basis[i], basis[j]) - expected));
        }
    v.is_einstein = v.residual <= tol;

    // Structural test with the margin of each condition kept for the
    // boundary decision below.
    const auto fm = classify_eta_einstein(model.factor);
    const auto fmp = classify_eta_einstein(model.factor_prime);
    const auto target = required_eta_einstein_coefficients(p, q);
    const double margins[] = {
        std::abs(a),
        std::abs(p - b * b * q),
        std::max({fm.residual, std::abs(fm.A - 2.0 * p), std::abs(fm.B)}),
        std::max({fmp.residual, std::abs(fmp.A - target.A), std::abs(fmp.B - target.B)}),
    };
    StructuralConditions& s = v.structural_conditions;
    s.a_is_zero = margins[0] <= tol;
    s.p_equals_b2q = margins[1] <= tol;
    s.factor_einstein = margins[2] <= tol;
    s.factorprime_eta_einstein_match = margins[3] <= tol;

    v.agreement = s.all() == v.is_einstein;
    if (!v.agreement) {
        auto near = [tol](double x) { return x >= tol / kBoundaryFactor && x <= tol * kBoundaryFactor; };
        const bool boundary = near(v.residual) || std::any_of(std::begin(margins), std::end(margins), near);
        if (!boundary) {
            std::ostringstream msg;
            msg << "structural and residual Einstein tests disagree (residual " << v.residual << ", structural "
                << (s.all() ? "true" : "false") << ")";
            throw InternalConsistencyError(msg.str());
        }
    }
    return v;
}

CalabiEckmannExample calabi_eckmann_einstein_example(int p, int q) {
    check_dims(p, q);
    CalabiEckmannExample ex;
    ex.spec.p = p;
    ex.spec.q = q;
    ex.spec.a = 0.0;
    ex.spec.b = std::sqrt(static_cast<double>(p) / q);
    ex.spec.alpha = static_cast<double>(q) / p;
    ex.spec.c = 4.0 * p / q - 3.0;
    const SasakianPointModel m = make_round_sphere_model(p);
    const SasakianPointModel mp = d_homothetic_deform(make_round_sphere_model(q), ex.spec.alpha);
    ex.model = build_product_model(m, mp, {ex.spec.a, ex.spec.b});
    return ex;
}

double star_scalar_prediction(int p, int q) {
    check_dims(p, q);
    return 4.0 * q * (1.0 - p + q);
}

}  // namespace sasaki
