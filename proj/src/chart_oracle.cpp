#include "sasaki/chart_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace sasaki {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// J0 e_{2i} = e_{2i+1}, J0 e_{2i+1} = -e_{2i} (0-based).
std::vector<double> apply_j0(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
        out[i] = -v[i + 1];
        out[i + 1] = v[i];
    }
    return out;
}

std::vector<double> central_difference(const ArrayField& field, std::vector<double> x, std::size_t d, double h,
                                       int order) {
    const double x0 = x[d];
    auto at = [&](double offset) {
        x[d] = x0 + offset;
        return field(x);
    };
    if (order == 2) {
        const auto fp = at(h), fm = at(-h);
        std::vector<double> out(fp.size());
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = (fp[c] - fm[c]) / (2.0 * h);
        return out;
    }
    const auto f2 = at(2.0 * h), f1 = at(h), m1 = at(-h), m2 = at(-2.0 * h);
    std::vector<double> out(f1.size());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = (-f2[c] + 8.0 * f1[c] - 8.0 * m1[c] + m2[c]) / (12.0 * h);
    return out;
}

std::vector<double> flatten(const SquareMatrix& m) { return {m.data().begin(), m.data().end()}; }

ArrayField flattened(const MatrixField& field) {
    return [field](std::span<const double> u) { return flatten(field(u)); };
}

/// d_l M_ij as (l, i, j).
CovariantTensor3 matrix_derivatives(const MatrixField& field, std::span<const double> coords,
                                    const StencilConfig& cfg) {
    const std::size_t n = coords.size();
    const auto d = partial_derivatives(flattened(field), coords, cfg);
    CovariantTensor3 out(n);
    for (std::size_t l = 0; l < n; ++l) {
        if (d[l].size() != n * n) throw DimensionMismatchError("matrix field size does not match coordinates");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(l, i, j) = d[l][i * n + j];
    }
    return out;
}

Christoffels christoffels_from(const SquareMatrix& g, const CovariantTensor3& dg) {
    const std::size_t n = g.size();
    const SquareMatrix ginv = inverse(g);
    Christoffels gamma(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l)
                    s += ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                gamma(k, i, j) = 0.5 * s;
            }
    return gamma;
}

CovariantTensor4 riemann_from(const SquareMatrix& g, const Christoffels& gamma, const std::vector<std::vector<double>>& dgamma) {
    const std::size_t n = g.size();
    // dgamma[i][(l*n + j)*n + k] = d_i Gamma^l_{jk}
    auto dG = [&](std::size_t i, std::size_t l, std::size_t j, std::size_t k) { return dgamma[i][(l * n + j) * n + k]; };
    CovariantTensor4 up(n);  // up(l, k, i, j) = R^l_{kij}
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double s = dG(i, l, j, k) - dG(j, l, i, k);
                    for (std::size_t m = 0; m < n; ++m)
                        s += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
                    up(l, k, i, j) = s;
                }
    return CovariantTensor4::generate(n, [&](std::size_t i, std::size_t j, std::size_t k, std::size_t w) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += g(w, l) * up(l, k, i, j);
        return s;
    });
}

/// rho(y, z) = g^{ab} R(y, a, b, z).
SquareMatrix coordinate_ricci(const CovariantTensor4& R, const SquareMatrix& ginv) {
    const std::size_t n = R.size();
    SquareMatrix out(n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) s += ginv(a, b) * R(y, a, b, z);
            out(y, z) = s;
        }
    return out;
}

/// rho*(x, y) = g^{ab} R(x, J d_a, J d_y, d_b).
SquareMatrix coordinate_ricci_star(const CovariantTensor4& R, const SquareMatrix& J, const SquareMatrix& ginv) {
    const std::size_t n = R.size();
    SquareMatrix out(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    if (ginv(a, b) == 0.0) continue;
                    for (std::size_t c = 0; c < n; ++c) {
                        if (J(c, a) == 0.0) continue;
                        for (std::size_t d = 0; d < n; ++d) s += ginv(a, b) * J(c, a) * J(d, y) * R(x, c, d, b);
                    }
                }
            out(x, y) = s;
        }
    return out;
}

/// (nabla_i J)^k_j as (i, j, k).
CovariantTensor3 covariant_derivative_endomorphism(const SquareMatrix& J, const CovariantTensor3& dJ,
                                                   const Christoffels& gamma) {
    const std::size_t n = J.size();
    CovariantTensor3 out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = dJ(i, k, j);
                for (std::size_t l = 0; l < n; ++l) s += gamma(k, i, l) * J(l, j) - J(k, l) * gamma(l, i, j);
                out(i, j, k) = s;
            }
    return out;
}

std::vector<double> subrange(std::span<const double> v, std::size_t from, std::size_t count) {
    return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + count)};
}

SquareMatrix block_diagonal(const std::vector<TangentVector>& first, const std::vector<TangentVector>& second) {
    const std::size_t d1 = first.size(), d2 = second.size();
    SquareMatrix E(d1 + d2);
    for (std::size_t c = 0; c < d1; ++c)
        for (std::size_t r = 0; r < d1; ++r) E(r, c) = first[c][r];
    for (std::size_t c = 0; c < d2; ++c)
        for (std::size_t r = 0; r < d2; ++r) E(d1 + r, d1 + c) = second[c][r];
    return E;
}

std::vector<TangentVector> coordinate_seeds(std::size_t n) {
    std::vector<TangentVector> seeds;
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(TangentVector::basis(n, i));
    return seeds;
}

double max_abs_difference(const SquareMatrix& a, const SquareMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}


}  // namespace

void validate(const StencilConfig& cfg) {
    if (!std::isfinite(cfg.step) || cfg.step <= 0.0) throw InvalidParameterError("stencil step must be positive");
    if (cfg.order != 2 && cfg.order != 4) throw InvalidParameterError("stencil order must be 2 or 4");
}

std::vector<std::vector<double>> partial_derivatives(const ArrayField& field, std::span<const double> coords,
                                                     const StencilConfig& cfg) {
    validate(cfg);
    const std::vector<double> x(coords.begin(), coords.end());
    std::vector<std::vector<double>> out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        auto coarse = central_difference(field, x, d, cfg.step, cfg.order);
        if (!cfg.richardson) {
            out[d] = std::move(coarse);
            continue;
        }
        const auto fine = central_difference(field, x, d, 0.5 * cfg.step, cfg.order);
        const double w = std::pow(2.0, cfg.order);
        out[d].resize(coarse.size());
        for (std::size_t c = 0; c < coarse.size(); ++c) out[d][c] = (w * fine[c] - coarse[c]) / (w - 1.0);
    }
    return out;
}

// --- SphereChart ---------------------------------------------------------

SphereChart SphereChart::standard(int p) {
    if (p < 1) throw InvalidParameterError("sphere chart needs p >= 1");
    SphereChart c;
    c.ambient_dim = 2 * p + 2;
    c.pole.assign(static_cast<std::size_t>(c.ambient_dim), 0.0);
    c.pole.back() = 1.0;
    c.direction = 1;
    return c;
}

void SphereChart::validate() const {
    if (ambient_dim < 4 || ambient_dim % 2 != 0) throw InvalidParameterError("ambient dimension must be even and >= 4");
    if (pole.size() != static_cast<std::size_t>(ambient_dim)) throw DimensionMismatchError("pole has wrong dimension");
    if (std::abs(std::sqrt(norm2(pole)) - 1.0) > 1e-12) throw InvalidParameterError("pole must be a unit vector");
    if (direction != 1 && direction != -1) throw InvalidParameterError("direction must be +1 or -1");
}

void SphereChart::check_domain(std::span<const double> coords) const {
    if (coords.size() != dimension()) throw DimensionMismatchError("chart coordinates have wrong dimension");
    for (double c : coords)
        if (!std::isfinite(c)) throw DomainError("chart coordinates must be finite");
    if (std::sqrt(norm2(coords)) > kMaxChartRadius)
        throw DomainError("chart coordinates too close to the projection singularity");
}

std::vector<double> SphereChart::centre() const {
    std::vector<double> c(pole);
    for (double& x : c) x *= direction;
    return c;
}

std::vector<std::vector<double>> SphereChart::tangent_basis() const {
    // Orthonormal complement of the pole, Gram-Schmidt on the standard basis.
    std::vector<std::vector<double>> basis;
    const std::size_t m = static_cast<std::size_t>(ambient_dim);
    for (std::size_t s = 0; s < m && basis.size() + 1 < m; ++s) {
        std::vector<double> v(m, 0.0);
        v[s] = 1.0;
        const double pp = dot(v, pole);
        for (std::size_t i = 0; i < m; ++i) v[i] -= pp * pole[i];
        for (const auto& b : basis) {
            const double bb = dot(v, b);
            for (std::size_t i = 0; i < m; ++i) v[i] -= bb * b[i];
        }
        const double len = std::sqrt(norm2(v));
        if (len < 1e-8) continue;
        for (double& x : v) x /= len;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<double> SphereChart::embed(std::span<const double> coords) const {
    validate();
    check_domain(coords);
    const auto basis = tangent_basis();
    const auto c = centre();
    const double r2 = norm2(coords);
    std::vector<double> x(c.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
        double s = (1.0 - r2) * c[a];
        for (std::size_t i = 0; i < coords.size(); ++i) s += 2.0 * coords[i] * basis[i][a];
        x[a] = s / (1.0 + r2);
    }
    return x;
}

std::vector<std::vector<double>> SphereChart::jacobian(std::span<const double> coords) const {
    validate();
    check_domain(coords);
    const auto basis = tangent_basis();
    const auto c = centre();
    const double r2 = norm2(coords);
    const double den = 1.0 + r2;
    const auto x = embed(coords);
    std::vector<std::vector<double>> cols(coords.size(), std::vector<double>(c.size()));
    for (std::size_t j = 0; j < coords.size(); ++j)
        for (std::size_t a = 0; a < c.size(); ++a)
            cols[j][a] = (2.0 * basis[j][a] - 2.0 * coords[j] * c[a]) / den - 2.0 * coords[j] * x[a] / den;
    return cols;
}

BilinearForm pullback_round_metric(const SphereChart& chart, std::span<const double> coords) {
    chart.validate();
    chart.check_domain(coords);
    const double f = 2.0 / (1.0 + norm2(coords));
    return (f * f) * BilinearForm::identity(coords.size());
}

SasakianFields canonical_sasakian_fields(const SphereChart& chart, std::span<const double> coords) {
    const auto x = chart.embed(coords);
    const auto t = chart.jacobian(coords);
    const BilinearForm g = pullback_round_metric(chart, coords);
    const double lambda = g(0, 0);
    const std::size_t n = coords.size();

    auto xi_amb = apply_j0(x);
    for (double& v : xi_amb) v = -v;

    SasakianFields f{g, TangentVector(n), CoVector(n), Endomorphism(n)};
    SquareMatrix phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.eta[i] = dot(t[i], xi_amb);
        f.xi[i] = f.eta[i] / lambda;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto jt = apply_j0(t[j]);
        for (std::size_t i = 0; i < n; ++i) phi(i, j) = dot(t[i], jt) / lambda;
    }
    f.phi = Endomorphism(std::move(phi));
    return f;
}

// --- FactorChart ---------------------------------------------------------

FactorChart FactorChart::space_form(int p, double c) {
    if (!std::isfinite(c) || c <= -3.0) throw InvalidParameterError("space form chart needs c > -3");
    return FactorChart{SphereChart::standard(p), 4.0 / (c + 3.0)};
}

SasakianFields FactorChart::fields(std::span<const double> coords) const {
    if (!std::isfinite(alpha) || alpha <= 0.0) throw InvalidParameterError("deformation constant must be positive");
    SasakianFields f = canonical_sasakian_fields(chart, coords);
    if (alpha == 1.0) return f;
    const std::size_t n = coords.size();
    SquareMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = alpha * f.g(i, j) + alpha * (alpha - 1.0) * f.eta[i] * f.eta[j];
    f.g = BilinearForm(std::move(g));
    f.xi *= 1.0 / alpha;
    f.eta = alpha * f.eta;
    return f;
}

MatrixField FactorChart::metric_field() const {
    const FactorChart self = *this;
    return [self](std::span<const double> u) { return self.fields(u).g.entries(); };
}

// --- Connection and curvature --------------------------------------------

Christoffels christoffels_fd(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg) {
    return christoffels_from(metric(coords), matrix_derivatives(metric, coords, cfg));
}

CovariantTensor4 riemann_fd(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg) {
    return sample_field(metric, coords, cfg).curvature;
}

FieldSample sample_field(const MatrixField& metric, std::span<const double> coords, const StencilConfig& cfg) {
    FieldSample s;
    s.coords.assign(coords.begin(), coords.end());
    const SquareMatrix g = metric(coords);
    if (g.size() != coords.size()) throw DimensionMismatchError("metric field size does not match coordinates");
    cholesky(g);
    s.metric = BilinearForm(g);
    s.metric_derivs = matrix_derivatives(metric, coords, cfg);
    s.christoffels = christoffels_from(g, s.metric_derivs);
    const ArrayField gamma_field = [&metric, &cfg](std::span<const double> u) {
        const auto gamma = christoffels_fd(metric, u, cfg);
        return std::vector<double>(gamma.data().begin(), gamma.data().end());
    };
    const auto dgamma = partial_derivatives(gamma_field, coords, cfg);
    s.curvature = riemann_from(g, s.christoffels, dgamma);
    return s;
}

// --- Product structure ---------------------------------------------------

ProductStructureValues product_structure_fields(const FactorChart& chart_m, const FactorChart& chart_mprime,
                                                const HermitianParams& params, std::span<const double> coords) {
    ProductChart pc{chart_m, chart_mprime, params, false, 0.0};
    return {pc.metric(coords), pc.complex_structure(coords)};
}

BilinearForm ProductChart::metric(std::span<const double> coords) const {
    validate(params);
    const std::size_t dm = m.dimension(), dmp = mprime.dimension();
    if (coords.size() != dm + dmp) throw DimensionMismatchError("product coordinates have wrong dimension");
    const auto f = m.fields(subrange(coords, 0, dm));
    const auto fp = mprime.fields(subrange(coords, dm, dmp));
    const double a = params.a;
    const double k = a * a + params.b * params.b - 1.0;
    // g_{a,b}(X + X', Y + Y') = g(X,Y) + a eta(X) eta'(Y') + a eta'(X') eta(Y)
    //                           + g'(X',Y') + k eta'(X') eta'(Y')
    SquareMatrix g(dm + dmp);
    for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t j = 0; j < dm; ++j) g(i, j) = f.g(i, j);
    for (std::size_t i = 0; i < dmp; ++i)
        for (std::size_t j = 0; j < dmp; ++j) g(dm + i, dm + j) = fp.g(i, j) + k * fp.eta[i] * fp.eta[j];
    for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t j = 0; j < dmp; ++j) {
            g(i, dm + j) = a * f.eta[i] * fp.eta[j];
            g(dm + j, i) = g(i, dm + j);
        }
    return BilinearForm(std::move(g));
}

Endomorphism ProductChart::complex_structure(std::span<const double> coords) const {
    validate(params);
    const std::size_t dm = m.dimension(), dmp = mprime.dimension();
    if (coords.size() != dm + dmp) throw DimensionMismatchError("product coordinates have wrong dimension");
    const auto f = m.fields(subrange(coords, 0, dm));
    const auto fp = mprime.fields(subrange(coords, dm, dmp));
    const double a = params.a, b = params.b;
    const double s = negate_phi_on_m ? -1.0 : 1.0;
    // J(X) = phi X - (a/b) eta(X) xi + (1/b) eta(X) xi'
    // J(X') = phi' X' - ((a^2+b^2)/b) eta'(X') xi + (a/b) eta'(X') xi'
    SquareMatrix J(dm + dmp);
    for (std::size_t j = 0; j < dm; ++j) {
        for (std::size_t i = 0; i < dm; ++i) J(i, j) = s * f.phi(i, j) - (a / b) * f.eta[j] * f.xi[i];
        for (std::size_t i = 0; i < dmp; ++i) J(dm + i, j) = (1.0 / b) * f.eta[j] * fp.xi[i];
    }
    for (std::size_t j = 0; j < dmp; ++j) {
        for (std::size_t i = 0; i < dm; ++i) J(i, dm + j) = -((a * a + b * b) / b) * fp.eta[j] * f.xi[i];
        for (std::size_t i = 0; i < dmp; ++i) J(dm + i, dm + j) = fp.phi(i, j) + (a / b) * fp.eta[j] * fp.xi[i];
    }
    if (conjugation_twist != 0.0) {
        // P J P^{-1} with P = I + s K, K = E_{0,N-1}, K^2 = 0.
        const std::size_t last = dm + dmp - 1;
        const double t = conjugation_twist * coords[0];
        SquareMatrix P = SquareMatrix::identity(dm + dmp), Pinv = SquareMatrix::identity(dm + dmp);
        P(0, last) = t;
        Pinv(0, last) = -t;
        J = P * J * Pinv;
    }
    return Endomorphism(std::move(J));
}

MatrixField ProductChart::metric_field() const {
    const ProductChart self = *this;
    return [self](std::span<const double> u) { return self.metric(u).entries(); };
}

MatrixField ProductChart::complex_structure_field() const {
    const ProductChart self = *this;
    return [self](std::span<const double> u) { return self.complex_structure(u).entries(); };
}

CovariantTensor3 nijenhuis_fd(const MatrixField& J, std::span<const double> coords, const StencilConfig& cfg) {
    const SquareMatrix j0 = J(coords);
    const std::size_t n = coords.size();
    if (j0.size() != n) throw DimensionMismatchError("complex structure field size does not match coordinates");
    const CovariantTensor3 dJ = matrix_derivatives(J, coords, cfg);  // (l, k, j) = d_l J^k_j
    CovariantTensor3 N(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    s += j0(l, i) * dJ(l, k, j) - j0(l, j) * dJ(l, k, i);
                    s += j0(k, l) * dJ(j, l, i) - j0(k, l) * dJ(i, l, j);
                }
                N(i, j, k) = s;
            }
    return N;
}

// --- Factor identities ---------------------------------------------------

double FactorFieldReport::first_derivative_max() const {
    return std::max({nabla_xi, nabla_eta, nabla_phi, contact});
}

FactorFieldReport verify_factor_fields(const FactorChart& factor, std::span<const double> coords,
                                       const StencilConfig& cfg) {
    const std::size_t n = coords.size();
    const SasakianFields f = factor.fields(coords);
    const SquareMatrix& g = f.g.entries();
    const FieldSample sample = sample_field(factor.metric_field(), coords, cfg);
    const Christoffels& G = sample.christoffels;

    const ArrayField xi_field = [&factor](std::span<const double> u) {
        const TangentVector xi = factor.fields(u).xi;
        return std::vector<double>(xi.components().begin(), xi.components().end());
    };
    const ArrayField eta_field = [&factor](std::span<const double> u) {
        const CoVector eta = factor.fields(u).eta;
        return std::vector<double>(eta.components().begin(), eta.components().end());
    };
    const MatrixField phi_field = [&factor](std::span<const double> u) { return factor.fields(u).phi.entries(); };
    const auto dxi = partial_derivatives(xi_field, coords, cfg);    // [i][k] = d_i xi^k
    const auto deta = partial_derivatives(eta_field, coords, cfg);  // [i][j] = d_i eta_j
    const CovariantTensor3 dphi = matrix_derivatives(phi_field, coords, cfg);
    const CovariantTensor3 nabla_phi = covariant_derivative_endomorphism(f.phi.entries(), dphi, G);

    FactorFieldReport r;
    r.unit_xi = std::abs(f.g(f.xi, f.xi) - 1.0);
    const Endomorphism phi2 = f.phi * f.phi + Endomorphism::identity(n) - Endomorphism::outer(f.xi, f.eta);
    r.phi_squared = max_abs(phi2.entries());

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double s = dxi[i][k];
            for (std::size_t l = 0; l < n; ++l) s += G(k, i, l) * f.xi[l];
            r.nabla_xi = std::max(r.nabla_xi, std::abs(s + f.phi(k, i)));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = deta[i][j];
            for (std::size_t l = 0; l < n; ++l) s -= G(l, i, j) * f.eta[l];
            double g_phi_ij = 0.0;  // g(phi d_i, d_j)
            for (std::size_t l = 0; l < n; ++l) g_phi_ij += g(j, l) * f.phi(l, i);
            r.nabla_eta = std::max(r.nabla_eta, std::abs(s + g_phi_ij));

            double g_i_phi_j = 0.0;  // g(d_i, phi d_j)
            for (std::size_t l = 0; l < n; ++l) g_i_phi_j += g(i, l) * f.phi(l, j);
            const double curl = deta[i][j] - deta[j][i];
            r.contact = std::max(r.contact, std::abs(0.5 * curl - g_i_phi_j));
            r.contact_unhalved = std::max(r.contact_unhalved, std::abs(curl - g_i_phi_j));

            for (std::size_t k = 0; k < n; ++k) {
                const double expected = g(i, j) * f.xi[k] - f.eta[j] * (k == i ? 1.0 : 0.0);
                r.nabla_phi = std::max(r.nabla_phi, std::abs(nabla_phi(i, j, k) - expected));
            }
        }

    const CovariantTensor4& R = sample.curvature;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t w = 0; w < n; ++w) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += R(i, j, k, w) * f.xi[k];
                r.curvature_xi = std::max(r.curvature_xi, std::abs(s - (f.eta[j] * g(i, w) - f.eta[i] * g(j, w))));
            }
    const SquareMatrix ric = coordinate_ricci(R, inverse(g));
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += f.xi[l] * ric(l, i);
        r.ricci_xi = std::max(r.ricci_xi, std::abs(s - 2.0 * factor.n() * f.eta[i]));
    }
    return r;
}

// --- Comparison with the closed form -------------------------------------

OracleComparison compare_with_algebraic(const ProductChart& chart, const ProductHermitianModel& model,
                                        std::span<const double> coords, const StencilConfig& cfg) {
    const std::size_t dm = chart.m.dimension(), dmp = chart.mprime.dimension();
    const std::size_t n = dm + dmp;
    if (coords.size() != n || model.dimension() != n || model.factor.dimension() != dm)
        throw DimensionMismatchError("chart, model and coordinates disagree in dimension");
    if (model.params.a != chart.params.a || model.params.b != chart.params.b)
        throw InvalidParameterError("chart and model use different (a, b)");

    const auto um = subrange(coords, 0, dm), ump = subrange(coords, dm, dmp);
    const SasakianFields f = chart.m.fields(um);
    const SasakianFields fp = chart.mprime.fields(ump);

    // Adapted frame of each factor, seeded from coordinate directions.
    const auto frame_m = adapted_frame(f.g, f.phi, f.xi, coordinate_seeds(dm));
    const auto frame_mp = adapted_frame(fp.g, fp.phi, fp.xi, coordinate_seeds(dmp));
    const SquareMatrix E = block_diagonal(frame_m, frame_mp);

    const MatrixField metric = chart.metric_field();
    const FieldSample sample = sample_field(metric, coords, cfg);
    const SquareMatrix& g = sample.metric.entries();
    const SquareMatrix ginv = inverse(g);
    const SquareMatrix J = chart.complex_structure(coords).entries();

    OracleComparison out;
    out.metric = max_abs_difference(sample.metric.in_frame(E), model.g_bar);
    {
        // Frame components of J: E^{-1} J E.
        const SquareMatrix jf = inverse(E) * J * E;
        out.complex_structure = max_abs_difference(jf, model.J_bar.entries());
    }
    out.curvature = max_abs_difference(sample.curvature.in_frame(E), model.R_bar);
    out.ricci = max_abs_difference(BilinearForm(coordinate_ricci(sample.curvature, ginv)).in_frame(E), model.ricci_bar);
    out.ricci_star = max_abs_difference(BilinearForm(coordinate_ricci_star(sample.curvature, J, ginv)).in_frame(E),
                                        model.ricci_star_bar);

    // nabla J, lowered: T(i, j, k) = g((nabla_i J) d_j, d_k).
    const CovariantTensor3 dJ = matrix_derivatives(chart.complex_structure_field(), coords, cfg);
    const CovariantTensor3 nablaJ = covariant_derivative_endomorphism(J, dJ, sample.christoffels);
    CovariantTensor3 lowered(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l) s += g(k, l) * nablaJ(i, j, l);
                lowered(i, j, k) = s;
            }
    out.nabla_J = max_abs_difference(lowered.in_frame(E), nabla_J_tensor(model));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double rotated = 0.0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) rotated += J(a, i) * J(b, j) * lowered(a, b, k);
                out.integrability = std::max(out.integrability, std::abs(lowered(i, j, k) - rotated));
            }

    const CovariantTensor3 N = nijenhuis_fd(chart.complex_structure_field(), coords, cfg);
    for (double v : N.data()) out.nijenhuis = std::max(out.nijenhuis, std::abs(v));

    // Connection blocks on coordinate fields. Product side: Christoffels of
    // the first kind. Factor side: each factor's own connection.
    const Christoffels gm = christoffels_fd(chart.m.metric_field(), um, cfg);
    const Christoffels gmp = christoffels_fd(chart.mprime.metric_field(), ump, cfg);
    auto first_kind = [&](const Christoffels& gamma, const SquareMatrix& metric_m, std::size_t i, std::size_t j,
                          std::size_t k) {
        double s = 0.0;
        for (std::size_t l = 0; l < metric_m.size(); ++l) s += metric_m(k, l) * gamma(l, i, j);
        return s;
    };
    auto eta_of_nabla = [](const Christoffels& gamma, const CoVector& eta, std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t l = 0; l < eta.size(); ++l) s += eta[l] * gamma(l, i, j);
        return s;
    };
    auto g_phi = [](const SasakianFields& fl, std::size_t y, std::size_t z) {  // g(phi d_y, d_z)
        double s = 0.0;
        for (std::size_t l = 0; l < fl.g.size(); ++l) s += fl.g(z, l) * fl.phi(l, y);
        return s;
    };
    const double a = chart.params.a;
    const double k = a * a + chart.params.b * chart.params.b - 1.0;
    const SquareMatrix& g_m = f.g.entries();
    const SquareMatrix& g_mp = fp.g.entries();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                const bool px = x >= dm, py = y >= dm, pz = z >= dm;
                const std::size_t lx = px ? x - dm : x, ly = py ? y - dm : y, lz = pz ? z - dm : z;
                double expected = 0.0;
                if (!px && !py && !pz) {
                    expected = first_kind(gm, g_m, lx, ly, lz);
                } else if (px && !py && !pz) {
                    expected = -a * fp.eta[lx] * g_phi(f, ly, lz);
                } else if (!px && py && !pz) {
                    expected = -a * fp.eta[ly] * g_phi(f, lx, lz);
                } else if (!px && !py && pz) {
                    expected = a * eta_of_nabla(gm, f.eta, lx, ly) * fp.eta[lz];
                } else if (px && py && !pz) {
                    expected = a * eta_of_nabla(gmp, fp.eta, lx, ly) * f.eta[lz];
                } else if (px && !py && pz) {
                    expected = -a * f.eta[ly] * g_phi(fp, lx, lz);
                } else if (!px && py && pz) {
                    expected = -a * f.eta[lx] * g_phi(fp, ly, lz);
                } else {
                    expected = first_kind(gmp, g_mp, lx, ly, lz) +
                               k * (eta_of_nabla(gmp, fp.eta, lx, ly) * fp.eta[lz] - fp.eta[lx] * g_phi(fp, ly, lz) -
                                    fp.eta[ly] * g_phi(fp, lx, lz));
                }
                const double actual = first_kind(sample.christoffels, g, x, y, z);
                out.connection_blocks = std::max(out.connection_blocks, std::abs(actual - expected));
            }
    return out;
}

std::vector<std::vector<double>> sample_chart_points(std::size_t dim, std::size_t count, std::uint64_t seed,
                                                     double radius) {
    if (!std::isfinite(radius) || radius <= 0.0) throw InvalidParameterError("sampling radius must be positive");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> points;
    points.reserve(count);
    std::vector<double> u(dim);
    while (points.size() < count) {
        for (double& x : u) x = radius * (2.0 * uniform() - 1.0);
        if (norm2(u) < radius * radius) points.push_back(u);
    }
    return points;
}

}  // namespace sasaki
