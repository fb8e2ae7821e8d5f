#pragma once

// The two-parameter family of Hermitian structures (J_{a,b}, g_{a,b}) on the
// product of two Sasakian manifolds M (dim 2p+1) and M' (dim 2q+1), with all
// curvature quantities in closed form.
//
// Frame layout of the product tangent space (N = 2p + 2q + 2):
//   indices [0, 2p]       -- the frame of M, xi last (index 2p)
//   indices [2p+1, N-1]   -- the frame of M', xi' last (index N-1)
// The product frame is NOT orthonormal for g_{a,b} unless a = 0, b = +-1;
// adapted_orthonormal_basis() gives {e_i, e'_j, xi, (xi' - a xi)/b}.

#include <vector>

#include "sasaki/sasakian_model.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

struct HermitianParams {
    double a = 0.0;
    double b = 1.0;
};

/// Throws InvalidParameterError if b = 0 or a parameter is not finite.
void validate(const HermitianParams& params);

struct ProductVector {
    TangentVector m_part;
    TangentVector mprime_part;

    TangentVector joined() const;
    static ProductVector split(const TangentVector& v, std::size_t dim_m);
};

struct ProductHermitianModel {
    SasakianPointModel factor;
    SasakianPointModel factor_prime;
    HermitianParams params;
    BilinearForm g_bar;
    Endomorphism J_bar;
    CovariantTensor4 R_bar;
    BilinearForm ricci_bar;
    BilinearForm ricci_star_bar;
    double tau_bar = 0.0;
    double tau_star_bar = 0.0;

    int p() const { return factor.n; }
    int q() const { return factor_prime.n; }
    std::size_t dimension() const { return factor.dimension() + factor_prime.dimension(); }
    std::size_t xi_index() const { return factor.dimension() - 1; }
    std::size_t xi_prime_index() const { return dimension() - 1; }
};

BilinearForm build_product_metric(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                  const HermitianParams& params);

Endomorphism build_product_complex_structure(const SasakianPointModel& factor,
                                             const SasakianPointModel& factor_prime,
                                             const HermitianParams& params);

CovariantTensor4 build_product_curvature(const SasakianPointModel& factor,
                                         const SasakianPointModel& factor_prime,
                                         const HermitianParams& params);

BilinearForm build_product_ricci(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                 const HermitianParams& params);

/// rho*_bar(X, Y) = rho*(X, Y) - 2aq (g - eta (x) eta)(X, Y),
/// rho*_bar(X', Y') = rho'*(X', Y') - (2ap + (2q+1)(a^2+b^2-1)) (g' - eta' (x) eta')(X', Y'),
/// mixed entries zero, with rho*, rho'* the factors' own Ricci-* tensors.
BilinearForm build_product_ricci_star(const SasakianPointModel& factor,
                                      const SasakianPointModel& factor_prime, const HermitianParams& params);

/// Assembles every closed-form quantity at once.
ProductHermitianModel build_product_model(const SasakianPointModel& factor,
                                          const SasakianPointModel& factor_prime,
                                          const HermitianParams& params);

/// {e_1..e_2p, e'_1..e'_2q, xi, (xi' - a xi)/b} in product-frame components.
std::vector<TangentVector> adapted_orthonormal_basis(const ProductHermitianModel& model);

/// g((nabla_X J) Y, Z) on arbitrary product vectors.
double nabla_J_blocks(const ProductHermitianModel& model, const ProductVector& x, const ProductVector& y,
                      const ProductVector& z);

/// g((nabla_{e_i} J) e_j, e_k) over the product frame.
CovariantTensor3 nabla_J_tensor(const ProductHermitianModel& model);

/// max over frame triples of |g((nabla_X J)Y, Z) - g((nabla_{JX} J)JY, Z)|,
/// with JX, JY taken from model.J_bar.
double check_integrability(const ProductHermitianModel& model);

/// max |g((nabla_X J)Y, Z)| over frame triples.
double check_not_kahler(const ProductHermitianModel& model);

/// Ricci-* by its defining trace, rho*(X, Y) = tr(Z -> R(X, JZ) JY), using
/// the given curvature, complex structure and metric.
BilinearForm ricci_star_by_definition(const CovariantTensor4& R, const Endomorphism& J, const BilinearForm& g);

struct ScalarCurvatures {
    double tau_bar = 0.0;
    double tau_star_bar = 0.0;
};

ScalarCurvatures scalar_curvatures(const ProductHermitianModel& model);

struct WeaklyStarEinsteinResult {
    bool is_weakly_star_einstein = false;
    double residual = 0.0;
};

/// residual = max |rho* - (tau*/N) g| over pairs of the adapted orthonormal
/// basis.
WeaklyStarEinsteinResult check_weakly_star_einstein(const ProductHermitianModel& model,
                                                    double tol = kAlgebraicTolerance);

}  // namespace sasaki
