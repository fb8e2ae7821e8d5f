#include "sasaki/hermitian_product.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sasaki {

namespace {

/// Local view of a factor: frame components of g, eta, g(phi ., .) and R.
struct FactorData {
    std::size_t dim;
    const SasakianPointModel* model;
    SquareMatrix gphi;  // gphi(a, b) = g(phi e_a, e_b)

    explicit FactorData(const SasakianPointModel& m) : dim(m.dimension()), model(&m), gphi(m.dimension()) {
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                double s = 0.0;
                for (std::size_t k = 0; k < dim; ++k) s += m.phi(k, a) * m.g(k, b);
                gphi(a, b) = s;
            }
    }
    double g(std::size_t a, std::size_t b) const { return model->g(a, b); }
    double eta(std::size_t a) const { return model->eta[a]; }
    double R(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const { return model->R(a, b, c, d); }
    double horizontal(std::size_t a, std::size_t b) const { return g(a, b) - eta(a) * eta(b); }
};

struct Side {
    bool prime;
    std::size_t local;
};

class ProductLayout {
public:
    ProductLayout(const SasakianPointModel& f, const SasakianPointModel& fp)
        : dim_m_(f.dimension()), dim_(f.dimension() + fp.dimension()) {}
    std::size_t size() const { return dim_; }
    std::size_t dim_m() const { return dim_m_; }
    Side side(std::size_t i) const { return i < dim_m_ ? Side{false, i} : Side{true, i - dim_m_}; }

private:
    std::size_t dim_m_;
    std::size_t dim_;
};

void check_factors(const SasakianPointModel& factor, const SasakianPointModel& factor_prime) {
    if (factor.n < 1 || factor_prime.n < 1) throw InvalidParameterError("product factors must have p, q >= 1");
}

/// Curvature blocks of the product, written for fields from each factor.
class CurvatureBlocks {
public:
    CurvatureBlocks(const FactorData& m, const FactorData& mp, const HermitianParams& params)
        : m_(m), mp_(mp), a_(params.a), ab2_(params.a * params.a + params.b * params.b), k_(ab2_ - 1.0) {}

    // (X, Y, Z, W)
    double b1(std::size_t x, std::size_t y, std::size_t z, std::size_t w) const { return m_.R(x, y, z, w); }

    // (X, Y', Z, W)
    double b2(std::size_t x, std::size_t yp, std::size_t z, std::size_t w) const {
        return -a_ * mp_.eta(yp) * (m_.g(x, z) * m_.eta(w) - m_.g(x, w) * m_.eta(z));
    }

    // (X', Y', Z, W)
    double b3(std::size_t xp, std::size_t yp, std::size_t z, std::size_t w) const {
        return 2.0 * a_ * mp_.gphi(xp, yp) * m_.gphi(z, w);
    }

    // (X, Y', Z, W')
    double b4(std::size_t x, std::size_t yp, std::size_t z, std::size_t wp) const {
        return a_ * m_.gphi(x, z) * mp_.gphi(yp, wp) -
               a_ * a_ * mp_.eta(yp) * mp_.eta(wp) * m_.horizontal(x, z) -
               a_ * a_ * m_.eta(x) * m_.eta(z) * mp_.horizontal(yp, wp);
    }

    // (X', Y', Z', W). The published form has eta'(X) in the first term;
    // the argument pattern requires eta'(X').
    double b5(std::size_t xp, std::size_t yp, std::size_t zp, std::size_t w) const {
        return a_ * ab2_ * m_.eta(w) * (mp_.eta(xp) * mp_.g(yp, zp) - mp_.eta(yp) * mp_.g(xp, zp));
    }

    // (X, Y, Z, W'): a eta(R(X,Y)Z) eta'(W'). Coincides with the b2 pattern
    // through the curvature symmetries; kept for the consistency checks.
    double b6(std::size_t x, std::size_t y, std::size_t z, std::size_t wp) const {
        const std::size_t d = m_.dim;
        double eta_r = 0.0;  // eta(R(X,Y)Z) = g(R(X,Y)Z, xi) = R(X,Y,Z,xi)
        const TangentVector& xi = m_.model->xi;
        for (std::size_t l = 0; l < d; ++l) eta_r += m_.R(x, y, z, l) * xi[l];
        return a_ * eta_r * mp_.eta(wp);
    }

    // (X', Y', Z', W')
    double b7(std::size_t x, std::size_t y, std::size_t z, std::size_t w) const {
        const FactorData& f = mp_;
        const double first = f.eta(x) * f.eta(w) * f.g(y, z) - f.eta(y) * f.eta(w) * f.g(x, z) -
                             f.eta(x) * f.eta(z) * f.g(y, w) + f.eta(y) * f.eta(z) * f.g(x, w);
        const double second = f.eta(x) * f.eta(z) * f.g(y, w) - f.eta(y) * f.eta(z) * f.g(x, w) +
                              f.eta(y) * f.eta(w) * f.g(x, z) - f.eta(x) * f.eta(w) * f.g(y, z);
        const double third = 2.0 * f.gphi(x, y) * f.gphi(z, w) + f.gphi(x, z) * f.gphi(y, w) -
                             f.gphi(y, z) * f.gphi(x, w);
        return f.R(x, y, z, w) + 2.0 * k_ * first - k_ * k_ * second + k_ * third;
    }

    /// Any frame quadruple, reduced to one of the blocks above through the
    /// curvature symmetries.
    double value(Side A, Side B, Side C, Side D) const {
        const std::size_t a = A.local, b = B.local, c = C.local, d = D.local;
        const int pattern = (A.prime << 3) | (B.prime << 2) | (C.prime << 1) | int(D.prime);
        switch (pattern) {
            case 0b0000: return b1(a, b, c, d);
            case 0b1111: return b7(a, b, c, d);
            case 0b0100: return b2(a, b, c, d);
            case 0b1000: return -b2(b, a, c, d);
            case 0b0001: return b2(c, d, a, b);
            case 0b0010: return -b2(d, c, a, b);
            case 0b1100: return b3(a, b, c, d);
            case 0b0011: return b3(c, d, a, b);
            case 0b0101: return b4(a, b, c, d);
            case 0b1010: return b4(b, a, d, c);
            case 0b0110: return -b4(a, b, d, c);
            case 0b1001: return -b4(b, a, c, d);
            case 0b1110: return b5(a, b, c, d);
            case 0b1101: return -b5(a, b, d, c);
            case 0b1011: return b5(c, d, a, b);
            case 0b0111: return -b5(c, d, b, a);
        }
        return 0.0;
    }

private:
    const FactorData& m_;
    const FactorData& mp_;
    double a_;
    double ab2_;
    double k_;
};

/// g((nabla_X J) Y, Z) blocks for fields from each factor.
class NablaJBlocks {
public:
    NablaJBlocks(const FactorData& m, const FactorData& mp, const HermitianParams& params)
        : m_(m), mp_(mp), a_(params.a), b_(params.b), ab2_(params.a * params.a + params.b * params.b) {}

    double n1(std::size_t x, std::size_t y, std::size_t z) const {
        return m_.eta(z) * m_.g(x, y) - m_.eta(y) * m_.g(x, z);
    }
    double n3(std::size_t x, std::size_t yp, std::size_t z) const {
        return b_ * mp_.eta(yp) * m_.gphi(x, z) - a_ * mp_.eta(yp) * m_.horizontal(x, z);
    }
    double n4(std::size_t xp, std::size_t yp, std::size_t z) const {
        return -a_ * m_.eta(z) * (mp_.eta(xp) * mp_.eta(yp) - mp_.g(xp, yp)) + b_ * m_.eta(z) * mp_.gphi(xp, yp);
    }
    double n6(std::size_t xp, std::size_t yp, std::size_t zp) const {
        return ab2_ * (mp_.g(xp, yp) * mp_.eta(zp) - mp_.g(xp, zp) * mp_.eta(yp));
    }

    /// The six published blocks cover (X,Y,Z) patterns 000, 100, 010, 110,
    /// 011, 111; the remaining two follow from skew-adjointness of nabla J.
    double value(Side X, Side Y, Side Z) const {
        const int pattern = (X.prime << 2) | (Y.prime << 1) | int(Z.prime);
        switch (pattern) {
            case 0b000: return n1(X.local, Y.local, Z.local);
            case 0b100: return 0.0;
            case 0b010: return n3(X.local, Y.local, Z.local);
            case 0b110: return n4(X.local, Y.local, Z.local);
            case 0b011: return 0.0;
            case 0b111: return n6(X.local, Y.local, Z.local);
            case 0b001: return -n3(X.local, Z.local, Y.local);
            case 0b101: return -n4(X.local, Z.local, Y.local);
        }
        return 0.0;
    }

private:
    const FactorData& m_;
    const FactorData& mp_;
    double a_;
    double b_;
    double ab2_;
};

}  // namespace

void validate(const HermitianParams& params) {
    if (!std::isfinite(params.a) || !std::isfinite(params.b)) {
        throw InvalidParameterError("Hermitian parameters must be finite");
    }
    if (params.b == 0.0) {
        throw InvalidParameterError("Hermitian parameter b must be nonzero (the metric degenerates at b = 0)");
    }
}

TangentVector ProductVector::joined() const {
    TangentVector v(m_part.size() + mprime_part.size());
    for (std::size_t i = 0; i < m_part.size(); ++i) v[i] = m_part[i];
    for (std::size_t i = 0; i < mprime_part.size(); ++i) v[m_part.size() + i] = mprime_part[i];
    return v;
}

ProductVector ProductVector::split(const TangentVector& v, std::size_t dim_m) {
    ProductVector pv{TangentVector(dim_m), TangentVector(v.size() - dim_m)};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i < dim_m) pv.m_part[i] = v[i];
        else pv.mprime_part[i - dim_m] = v[i];
    }
    return pv;
}

BilinearForm build_product_metric(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                  const HermitianParams& params) {
    validate(params);
    check_factors(factor, factor_prime);
    const ProductLayout layout(factor, factor_prime);
    const FactorData m(factor), mp(factor_prime);
    const double k = params.a * params.a + params.b * params.b - 1.0;
    SquareMatrix g(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = 0; j < layout.size(); ++j) {
            const Side si = layout.side(i), sj = layout.side(j);
            if (!si.prime && !sj.prime) g(i, j) = m.g(si.local, sj.local);
            else if (si.prime && sj.prime)
                g(i, j) = mp.g(si.local, sj.local) + k * mp.eta(si.local) * mp.eta(sj.local);
            else if (!si.prime)
                g(i, j) = params.a * m.eta(si.local) * mp.eta(sj.local);
            else
                g(i, j) = params.a * m.eta(sj.local) * mp.eta(si.local);
        }
    BilinearForm out(std::move(g));
    cholesky(out.entries());
    return out;
}

Endomorphism build_product_complex_structure(const SasakianPointModel& factor,
                                             const SasakianPointModel& factor_prime,
                                             const HermitianParams& params) {
    validate(params);
    check_factors(factor, factor_prime);
    const ProductLayout layout(factor, factor_prime);
    const std::size_t dm = layout.dim_m();
    const double a = params.a, b = params.b;
    const double ab2 = a * a + b * b;
    SquareMatrix J(layout.size());
    // Column j is the image of the j-th frame vector.
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const Side s = layout.side(j);
        if (!s.prime) {
            const double e = factor.eta[s.local];
            for (std::size_t i = 0; i < dm; ++i) J(i, j) = factor.phi(i, s.local);
            for (std::size_t i = 0; i < dm; ++i) J(i, j) += -(a / b) * e * factor.xi[i];
            for (std::size_t i = 0; i < factor_prime.dimension(); ++i) J(dm + i, j) += (1.0 / b) * e * factor_prime.xi[i];
        } else {
            const double e = factor_prime.eta[s.local];
            for (std::size_t i = 0; i < factor_prime.dimension(); ++i) J(dm + i, j) = factor_prime.phi(i, s.local);
            for (std::size_t i = 0; i < dm; ++i) J(i, j) += -(ab2 / b) * e * factor.xi[i];
            for (std::size_t i = 0; i < factor_prime.dimension(); ++i) J(dm + i, j) += (a / b) * e * factor_prime.xi[i];
        }
    }
    return Endomorphism(std::move(J));
}

CovariantTensor4 build_product_curvature(const SasakianPointModel& factor,
                                         const SasakianPointModel& factor_prime,
                                         const HermitianParams& params) {
    validate(params);
    check_factors(factor, factor_prime);
    const ProductLayout layout(factor, factor_prime);
    const FactorData m(factor), mp(factor_prime);
    const CurvatureBlocks blocks(m, mp, params);
    return CovariantTensor4::generate(layout.size(), [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return blocks.value(layout.side(i), layout.side(j), layout.side(k), layout.side(l));
    });
}

BilinearForm build_product_ricci(const SasakianPointModel& factor, const SasakianPointModel& factor_prime,
                                 const HermitianParams& params) {
    validate(params);
    check_factors(factor, factor_prime);
    const ProductLayout layout(factor, factor_prime);
    const FactorData m(factor), mp(factor_prime);
    const double a = params.a, b = params.b;
    const double p = factor.n, q = factor_prime.n;
    const double ab2 = a * a + b * b;
    const double k = ab2 - 1.0;
    const double mixed = 2.0 * a * (p + q * ab2);
    const double vertical = 2.0 * (p * a * a + k + q * k * (ab2 + 1.0));
    SquareMatrix r(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = 0; j < layout.size(); ++j) {
            const Side si = layout.side(i), sj = layout.side(j);
            if (!si.prime && !sj.prime) {
                r(i, j) = factor.ricci(si.local, sj.local) + 2.0 * a * a * q * m.eta(si.local) * m.eta(sj.local);
            } else if (si.prime && sj.prime) {
                r(i, j) = factor_prime.ricci(si.local, sj.local) - 2.0 * k * mp.g(si.local, sj.local) +
                          vertical * mp.eta(si.local) * mp.eta(sj.local);
            } else if (!si.prime) {
                r(i, j) = mixed * m.eta(si.local) * mp.eta(sj.local);
            } else {
                r(i, j) = mixed * m.eta(sj.local) * mp.eta(si.local);
            }
        }
    return BilinearForm(std::move(r));
}

BilinearForm build_product_ricci_star(const SasakianPointModel& factor,
                                      const SasakianPointModel& factor_prime, const HermitianParams& params) {
    validate(params);
    check_factors(factor, factor_prime);
    const ProductLayout layout(factor, factor_prime);
    const FactorData m(factor), mp(factor_prime);
    const double a = params.a, b = params.b;
    const double p = factor.n, q = factor_prime.n;
    const double k = a * a + b * b - 1.0;
    // Each block is the factor's own Ricci-* tensor plus a multiple of the
    // horizontal metric. For Einstein factors the factor term is itself the
    // horizontal metric, which gives the familiar coefficients 1 - 2aq and
    // 1 - 2ap - (2q+1)k.
    const BilinearForm star_m = factor_ricci_star(factor);
    const BilinearForm star_mp = factor_ricci_star(factor_prime);
    const double shift_m = -2.0 * a * q;
    const double shift_mp = -2.0 * a * p - (2.0 * q + 1.0) * k;
    SquareMatrix r(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = 0; j < layout.size(); ++j) {
            const Side si = layout.side(i), sj = layout.side(j);
            if (!si.prime && !sj.prime)
                r(i, j) = star_m(si.local, sj.local) + shift_m * m.horizontal(si.local, sj.local);
            else if (si.prime && sj.prime)
                r(i, j) = star_mp(si.local, sj.local) + shift_mp * mp.horizontal(si.local, sj.local);
        }
    return BilinearForm(std::move(r));
}

std::vector<TangentVector> adapted_orthonormal_basis(const ProductHermitianModel& model) {
    const std::size_t dm = model.factor.dimension();
    const std::size_t dmp = model.factor_prime.dimension();
    const std::size_t n = dm + dmp;
    const auto fm = adapted_frame(model.factor.g, model.factor.phi, model.factor.xi);
    const auto fmp = adapted_frame(model.factor_prime.g, model.factor_prime.phi, model.factor_prime.xi);

    auto lift = [&](const TangentVector& v, bool prime) {
        TangentVector out(n);
        for (std::size_t i = 0; i < v.size(); ++i) out[(prime ? dm : 0) + i] = v[i];
        return out;
    };
    std::vector<TangentVector> basis;
    basis.reserve(n);
    for (std::size_t i = 0; i + 1 < dm; ++i) basis.push_back(lift(fm[i], false));
    for (std::size_t i = 0; i + 1 < dmp; ++i) basis.push_back(lift(fmp[i], true));
    const TangentVector xi = lift(fm.back(), false);
    const TangentVector xi_prime = lift(fmp.back(), true);
    basis.push_back(xi);
    basis.push_back((1.0 / model.params.b) * (xi_prime - model.params.a * xi));
    return basis;
}

ProductHermitianModel build_product_model(const SasakianPointModel& factor,
                                          const SasakianPointModel& factor_prime,
                                          const HermitianParams& params) {
    ProductHermitianModel m;
    m.factor = factor;
    m.factor_prime = factor_prime;
    m.params = params;
    m.g_bar = build_product_metric(factor, factor_prime, params);
    m.J_bar = build_product_complex_structure(factor, factor_prime, params);
    m.R_bar = build_product_curvature(factor, factor_prime, params);
    m.ricci_bar = build_product_ricci(factor, factor_prime, params);
    m.ricci_star_bar = build_product_ricci_star(factor, factor_prime, params);
    const ScalarCurvatures s = scalar_curvatures(m);
    m.tau_bar = s.tau_bar;
    m.tau_star_bar = s.tau_star_bar;
    return m;
}

CovariantTensor3 nabla_J_tensor(const ProductHermitianModel& model) {
    const ProductLayout layout(model.factor, model.factor_prime);
    const FactorData m(model.factor), mp(model.factor_prime);
    const NablaJBlocks blocks(m, mp, model.params);
    CovariantTensor3 t(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
        for (std::size_t j = 0; j < layout.size(); ++j)
            for (std::size_t k = 0; k < layout.size(); ++k)
                t(i, j, k) = blocks.value(layout.side(i), layout.side(j), layout.side(k));
    return t;
}

double nabla_J_blocks(const ProductHermitianModel& model, const ProductVector& x, const ProductVector& y,
                      const ProductVector& z) {
    return nabla_J_tensor(model)(x.joined(), y.joined(), z.joined());
}

double check_integrability(const ProductHermitianModel& model) {
    const CovariantTensor3 t = nabla_J_tensor(model);
    const std::size_t n = t.size();
    const SquareMatrix& J = model.J_bar.entries();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double rotated = 0.0;  // g((nabla_{J e_i} J) J e_j, e_k)
                for (std::size_t a = 0; a < n; ++a) {
                    if (J(a, i) == 0.0) continue;
                    for (std::size_t b = 0; b < n; ++b) rotated += J(a, i) * J(b, j) * t(a, b, k);
                }
                worst = std::max(worst, std::abs(t(i, j, k) - rotated));
            }
    return worst;
}

double check_not_kahler(const ProductHermitianModel& model) {
    const CovariantTensor3 t = nabla_J_tensor(model);
    double worst = 0.0;
    for (double v : t.data()) worst = std::max(worst, std::abs(v));
    return worst;
}

BilinearForm ricci_star_by_definition(const CovariantTensor4& R, const Endomorphism& J, const BilinearForm& g) {
    const std::size_t n = R.size();
    const auto frame = orthonormal_frame(g);
    std::vector<TangentVector> j_frame;
    for (const auto& f : frame) j_frame.push_back(J(f));
    SquareMatrix out(n);
    for (std::size_t x = 0; x < n; ++x) {
        const TangentVector ex = TangentVector::basis(n, x);
        for (std::size_t y = 0; y < n; ++y) {
            const TangentVector jy = J(TangentVector::basis(n, y));
            double s = 0.0;
            for (std::size_t i = 0; i < frame.size(); ++i) s += R(ex, j_frame[i], jy, frame[i]);
            out(x, y) = s;
        }
    }
    return BilinearForm(std::move(out));
}

ScalarCurvatures scalar_curvatures(const ProductHermitianModel& model) {
    const auto basis = adapted_orthonormal_basis(model);
    ScalarCurvatures s;
    for (const auto& f : basis) {
        s.tau_bar += model.ricci_bar(f, f);
        s.tau_star_bar += model.ricci_star_bar(f, f);
    }
    return s;
}

WeaklyStarEinsteinResult check_weakly_star_einstein(const ProductHermitianModel& model, double tol) {
    const auto basis = adapted_orthonormal_basis(model);
    const double n = static_cast<double>(model.dimension());
    const double tau_star = scalar_curvatures(model).tau_star_bar;
    WeaklyStarEinsteinResult r;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double expected = i == j ? tau_star / n : 0.0;
            r.residual = std::max(r.residual, std::abs(model.ricci_star_bar(basis[i], basis[j]) - expected));
        }
    r.is_weakly_star_einstein = r.residual <= tol;
    return r;
}

}  // namespace sasaki
