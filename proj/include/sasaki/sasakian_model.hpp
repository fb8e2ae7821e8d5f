#pragma once

// Closed-form pointwise models of Sasakian manifolds.
//
// A model carries the structure tensors (g, phi, xi, eta), the curvature
// tensor and the Ricci tensor at one point, expressed in a frame of that
// tangent space. All constructors here produce the adapted frame
//
//   g = identity, xi = last basis vector, eta = its dual,
//   phi e_{2i-1} = e_{2i}, phi e_{2i} = -e_{2i-1}, phi xi = 0,
//
// which suffices because every quantity downstream is algebraic in
// (g, phi, xi, eta, R) and the models are homogeneous.

#include <vector>

#include "sasaki/tensor.hpp"

namespace sasaki {

struct SasakianPointModel {
    int n = 0;  // dimension is 2n + 1
    BilinearForm g;
    Endomorphism phi;
    TangentVector xi;
    CoVector eta;
    CovariantTensor4 R;
    BilinearForm ricci;

    std::size_t dimension() const { return static_cast<std::size_t>(2 * n + 1); }
};

struct EtaEinsteinCoefficients {
    double A = 0.0;
    double B = 0.0;
    double residual = 0.0;
};

/// Adapted-frame structure tensors (g, phi, xi, eta) for dimension 2n+1,
/// with R and ricci left zero.
SasakianPointModel adapted_structure(int n);

/// Unit sphere S^{2p+1} with its canonical Sasakian structure (constant
/// sectional curvature 1).
SasakianPointModel make_round_sphere_model(int p);

/// Sasakian space form of dimension 2q+1 with constant phi-sectional
/// curvature c.
SasakianPointModel make_space_form_model(int q, double c);

/// D-homothetic deformation eta' = alpha eta, xi' = xi / alpha, phi' = phi,
/// g' = alpha g + alpha (alpha - 1) eta (x) eta. The deformed curvature is
/// computed from the input's curvature and the Sasakian covariant
/// derivatives of phi and eta; the result is returned in the adapted frame
/// of the deformed structure.
SasakianPointModel d_homothetic_deform(const SasakianPointModel& model, double alpha);

/// Ricci by metric trace of R over slots (2,3) (0-based (1,2)).
BilinearForm ricci_from_curvature(const CovariantTensor4& R, const BilinearForm& g);

/// Ricci-* tensor of the factor, rho*(X, Y) = sum_i R(X, phi e_i, phi Y, e_i)
/// over an orthonormal basis. On a Sasakian manifold this equals
/// rho - (2n - 1) g - eta (x) eta, so it reduces to g - eta (x) eta exactly
/// when the factor is Einstein.
BilinearForm factor_ricci_star(const SasakianPointModel& model);

/// Orthonormal frame {e_1, phi e_1, ..., e_n, phi e_n, xi} of the model's
/// metric, Gram-Schmidt seeded from `seeds` (standard basis when empty).
std::vector<TangentVector> adapted_frame(const BilinearForm& g, const Endomorphism& phi,
                                         const TangentVector& xi,
                                         std::span<const TangentVector> seeds = {});

EtaEinsteinCoefficients classify_eta_einstein(const SasakianPointModel& model,
                                              double tol = kAlgebraicTolerance);

/// Pointwise residuals of the almost contact metric structure.
struct StructureResiduals {
    double eta_of_xi = 0.0;         // |eta(xi) - 1|
    double eta_is_dual = 0.0;       // eta - g(xi, .)
    double phi_squared = 0.0;       // phi^2 + I - xi (x) eta
    double phi_xi = 0.0;            // phi xi
    double eta_phi = 0.0;           // eta o phi
    double metric_compatible = 0.0; // g(phi X, phi Y) - g(X, Y) + eta(X) eta(Y)
    double max() const;
};

StructureResiduals structure_residuals(const SasakianPointModel& model);

/// Residuals of the pointwise Sasakian curvature identities.
struct SasakianIdentityReport {
    double r_xy_xi = 0.0;         // R(X,Y)xi = eta(Y)X - eta(X)Y
    double ricci_xi = 0.0;        // rho(xi, X) = 2n eta(X)
    double ricci_trace = 0.0;     // ricci equals the trace of R
    double phi_z_identity = 0.0;  // R(X,Y,phiZ,W) - R(phiZ,X,Y,W) = ...
    double phi_trace_3 = 0.0;     // sum R(X,Y,phi e,e) - sum R(phi e,X,Y,e) = 3 g(phi X, Y)
    double phi_trace_2 = 0.0;     // sum R(X,Y,e,phi e) = -2 g(phi X, Y)
    double phi_phi_trace = 0.0;   // sum R(X,phi Y,e,phi e) = -2 (g - eta eta)
    double max() const;
};

SasakianIdentityReport verify_sasakian_curvature_identities(const SasakianPointModel& model);

/// Space-form curvature component R(e_i, e_j, e_k, e_l) in the adapted frame
/// of dimension 2q+1. Generic in the scalar type so that exact rational
/// arithmetic can drive it.
template <typename Scalar>
Scalar space_form_curvature_component(int q, const Scalar& c, int i, int j, int k, int l) {
    const int xi_index = 2 * q;
    auto g = [](int a, int b) { return Scalar(a == b ? 1 : 0); };
    auto eta = [xi_index](int a) { return Scalar(a == xi_index ? 1 : 0); };
    // g(phi e_a, e_b): phi e_{2m} = e_{2m+1}, phi e_{2m+1} = -e_{2m} (0-based).
    auto gphi = [xi_index](int a, int b) {
        if (a == xi_index || b == xi_index) return Scalar(0);
        if (a % 2 == 0 && b == a + 1) return Scalar(1);
        if (a % 2 == 1 && b == a - 1) return Scalar(-1);
        return Scalar(0);
    };
    const Scalar c_plus = (c + Scalar(3)) / Scalar(4);
    const Scalar c_minus = (c - Scalar(1)) / Scalar(4);
    const Scalar round = g(j, k) * g(i, l) - g(i, k) * g(j, l);
    const Scalar twist = eta(i) * eta(k) * g(j, l) - eta(j) * eta(k) * g(i, l) +
                         g(i, k) * eta(j) * eta(l) - g(j, k) * eta(i) * eta(l) +
                         gphi(j, k) * gphi(i, l) - gphi(i, k) * gphi(j, l) -
                         Scalar(2) * gphi(i, j) * gphi(k, l);
    return c_plus * round + c_minus * twist;
}

}  // namespace sasaki
