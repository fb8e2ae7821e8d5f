#pragma once

// Einstein condition for the product Hermitian structures: a structural
// test on (a, b, p, q) and the factors' Ricci tensors, a direct residual
// test on the product Ricci tensor, and the Calabi-Eckmann examples.

#include <stdexcept>
#include <string>

#include "sasaki/hermitian_product.hpp"
#include "sasaki/sasakian_model.hpp"

namespace sasaki {

/// Raised when the structural and residual Einstein tests disagree away
/// from the tolerance boundary. Indicates a bug, never a property of the
/// input.
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

struct EtaEinsteinTarget {
    double A = 0.0;
    double B = 0.0;
};

/// Ricci coefficients rho' = A g' + B eta' (x) eta' that M' must have for the
/// product to be Einstein: A = 2(p + p/q - 1), B = -2(p/q - 1)(q + 1).
EtaEinsteinTarget required_eta_einstein_coefficients(int p, int q);

struct StructuralConditions {
    bool a_is_zero = false;
    bool p_equals_b2q = false;
    bool factor_einstein = false;
    bool factorprime_eta_einstein_match = false;

    bool all() const { return a_is_zero && p_equals_b2q && factor_einstein && factorprime_eta_einstein_match; }
};

struct EinsteinVerdict {
    bool is_einstein = false;
    double lambda = 0.0;     // tau_bar / N
    double lambda_xi = 0.0;  // rho_bar(xi, xi) / g_bar(xi, xi), always 2p + 2a^2 q
    double residual = 0.0;   // max |rho_bar - lambda g_bar| on the adapted basis
    StructuralConditions structural_conditions;
    bool agreement = true;
};

/// Both tests at tolerance `tol`. The residual test is authoritative. If the
/// tests disagree and no quantity lies within a factor 1e3 of `tol`,
/// InternalConsistencyError is thrown; otherwise `agreement` is false.
EinsteinVerdict theorem1_verdict(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                 const HermitianParams& params, double tol = kAlgebraicTolerance);

EinsteinVerdict theorem1_verdict(const ProductHermitianModel& model, double tol = kAlgebraicTolerance);

struct ExampleSpec {
    int p = 1;
    int q = 1;
    double a = 0.0;
    double b = 1.0;      // sqrt(p/q)
    double c = 1.0;      // 4p/q - 3
    double alpha = 1.0;  // q/p
};

struct CalabiEckmannExample {
    ExampleSpec spec;
    ProductHermitianModel model;
};

/// Round S^{2p+1} times the sphere S^{2q+1} deformed by alpha = q/p, with
/// a = 0 and b = sqrt(p/q).
CalabiEckmannExample calabi_eckmann_einstein_example(int p, int q);

/// 4q(1 - p + q), the value obtained for the *-scalar curvature of the
/// examples when the Ricci-* tensor of both factors is taken to be
/// g - eta (x) eta. It matches the actual trace only when p = q.
double star_scalar_prediction(int p, int q);

/// Ricci coefficients of a Sasakian space form of dimension 2q+1 and
/// phi-sectional curvature c: A = (q(c+3) + c - 1)/2, B = -(q+1)(c-1)/2.
EtaEinsteinTarget space_form_ricci_coefficients(int q, double c);

}  // namespace sasaki
