#pragma once

// Finite-difference oracle on explicit stereographic charts of round
// spheres.
//
// Everything here is computed from first principles in coordinates: the
// pulled-back metric and Sasakian fields of S^{2p+1} in R^{2p+2}, Christoffel
// symbols and curvature by central differences, covariant derivatives of the
// structure fields, the product structure built from its definition, and
// the Nijenhuis tensor. The results are then transported to the adapted
// frame and compared against the closed-form engine.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sasaki/hermitian_product.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

inline constexpr double kFiniteDifferenceTolerance = 1e-5;
inline constexpr double kMaxChartRadius = 5.0;

class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct StencilConfig {
    double step = 1e-3;
    int order = 4;  // 2 or 4
    bool richardson = true;
};

void validate(const StencilConfig& cfg);

using ArrayField = std::function<std::vector<double>(std::span<const double>)>;
using MatrixField = std::function<SquareMatrix(std::span<const double>)>;

/// result[d][c] = d/dx_d of component c of `field` at `coords`.
std::vector<std::vector<double>> partial_derivatives(const ArrayField& field, std::span<const double> coords,
                                                     const StencilConfig& cfg);

/// Stereographic chart of the unit sphere in R^{ambient_dim}. The chart is
/// centred at direction * pole (the image of u = 0) and projects from the
/// antipode.
struct SphereChart {
    int ambient_dim = 4;
    std::vector<double> pole;
    int direction = 1;

    /// Chart of S^{2p+1} centred at +e_last.
    static SphereChart standard(int p);

    std::size_t dimension() const { return static_cast<std::size_t>(ambient_dim - 1); }
    std::vector<double> embed(std::span<const double> coords) const;
    /// Columns are d x / d u_i, ambient components.
    std::vector<std::vector<double>> jacobian(std::span<const double> coords) const;

    void validate() const;
    void check_domain(std::span<const double> coords) const;

private:
    std::vector<std::vector<double>> tangent_basis() const;
    std::vector<double> centre() const;
};

/// Unit sphere metric in stereographic coordinates, (2 / (1 + |u|^2))^2 I.
BilinearForm pullback_round_metric(const SphereChart& chart, std::span<const double> coords);

/// Structure tensors of a Sasakian factor in chart coordinates.
struct SasakianFields {
    BilinearForm g;
    TangentVector xi;
    CoVector eta;
    Endomorphism phi;
};

/// Canonical structure of the unit sphere: xi = -J0 x, phi = tangential
/// part of J0, eta = g(xi, .), with J0 pairing (x_{2i-1}, x_{2i}).
SasakianFields canonical_sasakian_fields(const SphereChart& chart, std::span<const double> coords);

/// A Sasakian factor realised on a chart: the canonical sphere structure,
/// optionally D-homothetically deformed by alpha.
struct FactorChart {
    SphereChart chart;
    double alpha = 1.0;

    static FactorChart round(int p) { return FactorChart{SphereChart::standard(p), 1.0}; }
    static FactorChart deformed(int p, double alpha) { return FactorChart{SphereChart::standard(p), alpha}; }
    /// Space form of phi-sectional curvature c > -3, via alpha = 4 / (c + 3).
    static FactorChart space_form(int p, double c);

    int n() const { return (chart.ambient_dim - 2) / 2; }
    std::size_t dimension() const { return chart.dimension(); }
    SasakianFields fields(std::span<const double> coords) const;
    MatrixField metric_field() const;
};

/// Rank-3 Christoffel array, gamma(k, i, j) = Gamma^k_{ij}.
using Christoffels = CovariantTensor3;

Christoffels christoffels_fd(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg);

/// Covariant curvature R(d_i, d_j, d_k, d_l) = g(R(d_i, d_j) d_k, d_l), with
/// R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
CovariantTensor4 riemann_fd(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg);

struct FieldSample {
    std::vector<double> coords;
    BilinearForm metric;
    CovariantTensor3 metric_derivs;  // (l, i, j) = d_l g_ij
    Christoffels christoffels;
    CovariantTensor4 curvature;
};

FieldSample sample_field(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg);

/// Product M x M' with the (a, b) structure, in concatenated coordinates.
struct ProductChart {
    FactorChart m;
    FactorChart mprime;
    HermitianParams params;
    /// Replace phi by -phi on M only. J^2 = -I survives, and so does
    /// integrability, since (-phi, xi, eta) is still normal.
    bool negate_phi_on_m = false;
    /// Negative control: conjugate J by P = I + t u_0 E_{0,N-1}. J^2 = -I
    /// survives; P is not a Jacobian, so integrability does not.
    double conjugation_twist = 0.0;

    std::size_t dimension() const { return m.dimension() + mprime.dimension(); }
    BilinearForm metric(std::span<const double> coords) const;
    Endomorphism complex_structure(std::span<const double> coords) const;
    MatrixField metric_field() const;
    MatrixField complex_structure_field() const;
};

struct ProductStructureValues {
    BilinearForm g_bar;
    Endomorphism J_bar;
};

ProductStructureValues product_structure_fields(const FactorChart& chart_m, const FactorChart& chart_mprime,
                                                const HermitianParams& params, std::span<const double> coords);

/// N(d_i, d_j)^k as (i, j, k).
CovariantTensor3 nijenhuis_fd(const MatrixField& J, std::span<const double> coords, const StencilConfig& cfg);

/// First-principles checks of the Sasakian field identities on one factor.
struct FactorFieldReport {
    double unit_xi = 0.0;           // |g(xi, xi) - 1|
    double phi_squared = 0.0;       // phi^2 + I - xi (x) eta
    double nabla_xi = 0.0;          // nabla_X xi + phi X
    double nabla_eta = 0.0;         // (nabla_X eta)(Y) + g(phi X, Y)
    double nabla_phi = 0.0;         // (nabla_X phi)Y - g(X,Y) xi + eta(Y) X
    double contact = 0.0;           // d eta(X,Y) - g(X, phi Y), d eta with the 1/2 convention
    double contact_unhalved = 0.0;  // same without the 1/2
    double curvature_xi = 0.0;      // R(X,Y)xi - eta(Y)X + eta(X)Y
    double ricci_xi = 0.0;          // rho(xi, X) - 2n eta(X)

    double first_derivative_max() const;
};

FactorFieldReport verify_factor_fields(const FactorChart& factor, std::span<const double> coords,
                                       const StencilConfig& cfg);

/// Deviations between the finite-difference product geometry and the
/// closed-form engine at one point.
struct OracleComparison {
    double metric = 0.0;             // transported g_bar vs model (frame sanity)
    double complex_structure = 0.0;  // transported J_bar vs model
    double curvature = 0.0;          // R_bar
    double ricci = 0.0;              // rho_bar
    double ricci_star = 0.0;         // rho*_bar
    double nabla_J = 0.0;            // g((nabla_X J)Y, Z)
    double connection_blocks = 0.0;  // g(nabla_X Y, Z) block formulas, coordinate fields
    double integrability = 0.0;      // FD nabla J in the integrability identity
    double nijenhuis = 0.0;          // max |N|
};

OracleComparison compare_with_algebraic(const ProductChart& chart, const ProductHermitianModel& model,
                                        std::span<const double> coords, const StencilConfig& cfg);

/// Reproducible sample points, uniform in the ball of the given radius.
/// Uses mt19937_64 with an explicit 53-bit conversion so that runs agree
/// across standard libraries.
std::vector<std::vector<double>> sample_chart_points(std::size_t dim, std::size_t count, std::uint64_t seed,
                                                     double radius = 0.8);

}  // namespace sasaki
