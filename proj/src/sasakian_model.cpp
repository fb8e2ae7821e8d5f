#include "sasaki/sasakian_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sasaki {

namespace {

void require_positive_dimension(int n, const char* what) {
    if (n < 1) {
        throw InvalidParameterError(std::string(what) + ": factor index must be >= 1, got " +
                                    std::to_string(n));
    }
}

struct FramedModel {
    SquareMatrix frame;      // columns: adapted orthonormal frame
    SquareMatrix frame_inv;  // coordinates of a vector in that frame
};

FramedModel framed(const SasakianPointModel& m) {
    auto f = adapted_frame(m.g, m.phi, m.xi);
    FramedModel out;
    out.frame = frame_matrix(f);
    out.frame_inv = inverse(out.frame);
    return out;
}

/// R(e_i, e_j) e_k as a vector, for all basis triples.
std::vector<TangentVector> curvature_operator(const CovariantTensor4& R, const BilinearForm& g) {
    const std::size_t d = R.size();
    const SquareMatrix ginv = inverse(g.entries());
    std::vector<TangentVector> out(d * d * d, TangentVector(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                TangentVector& v = out[(i * d + j) * d + k];
                for (std::size_t m = 0; m < d; ++m) {
                    double s = 0.0;
                    for (std::size_t l = 0; l < d; ++l) s += ginv(m, l) * R(i, j, k, l);
                    v[m] = s;
                }
            }
    return out;
}

}  // namespace

SasakianPointModel adapted_structure(int n) {
    require_positive_dimension(n, "adapted_structure");
    const std::size_t d = static_cast<std::size_t>(2 * n + 1);
    SasakianPointModel m;
    m.n = n;
    m.g = BilinearForm::identity(d);
    SquareMatrix phi(d);
    for (int i = 0; i < n; ++i) {
        phi(2 * i + 1, 2 * i) = 1.0;   // phi e_{2i} = e_{2i+1}
        phi(2 * i, 2 * i + 1) = -1.0;  // phi e_{2i+1} = -e_{2i}
    }
    m.phi = Endomorphism(std::move(phi));
    m.xi = TangentVector::basis(d, d - 1);
    m.eta = CoVector(d);
    m.eta[d - 1] = 1.0;
    m.R = CovariantTensor4(d);
    m.ricci = BilinearForm(d);
    return m;
}

BilinearForm ricci_from_curvature(const CovariantTensor4& R, const BilinearForm& g) {
    // rho(Y, Z) = sum_i R(e_i, Y, Z, e_i) = sum_i R(Y, e_i, e_i, Z).
    return contract_trace(R, g, {1, 2});
}

SasakianPointModel make_round_sphere_model(int p) {
    SasakianPointModel m = adapted_structure(p);
    const std::size_t d = m.dimension();
    m.R = CovariantTensor4::generate(d, [](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return (j == k && i == l ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
    });
    m.ricci = ricci_from_curvature(m.R, m.g);
    return m;
}

SasakianPointModel make_space_form_model(int q, double c) {
    SasakianPointModel m = adapted_structure(q);
    const std::size_t d = m.dimension();
    m.R = CovariantTensor4::generate(d, [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return space_form_curvature_component<double>(q, c, static_cast<int>(i), static_cast<int>(j),
                                                      static_cast<int>(k), static_cast<int>(l));
    });
    m.ricci = ricci_from_curvature(m.R, m.g);
    return m;
}

std::vector<TangentVector> adapted_frame(const BilinearForm& g, const Endomorphism& phi,
                                         const TangentVector& xi, std::span<const TangentVector> seeds) {
    const std::size_t d = g.size();
    if (d % 2 != 1 || phi.size() != d || xi.size() != d) {
        throw DimensionMismatchError("adapted_frame: inconsistent structure dimensions");
    }
    cholesky(g.entries());
    const double xi_norm = std::sqrt(g(xi, xi));
    if (!(xi_norm > 0.0)) throw SingularMetricError("adapted_frame: xi has zero length");
    const TangentVector unit_xi = (1.0 / xi_norm) * xi;

    std::vector<TangentVector> standard;
    if (seeds.empty()) {
        for (std::size_t i = 0; i < d; ++i) standard.push_back(TangentVector::basis(d, i));
        seeds = standard;
    }

    std::vector<TangentVector> frame;
    frame.reserve(d);
    for (const auto& seed : seeds) {
        if (frame.size() == d - 1) break;
        const double seed_norm = std::sqrt(g(seed, seed));
        if (seed_norm == 0.0) continue;
        TangentVector v = seed;
        for (int pass = 0; pass < 2; ++pass) {
            v -= g(v, unit_xi) * unit_xi;
            for (const auto& e : frame) v -= g(v, e) * e;
        }
        const double norm2 = g(v, v);
        if (!(norm2 > 1e-16 * seed_norm * seed_norm)) continue;
        v *= 1.0 / std::sqrt(norm2);
        TangentVector w = phi(v);
        frame.push_back(std::move(v));
        frame.push_back(std::move(w));
    }
    if (frame.size() != d - 1) throw SingularMetricError("adapted_frame: seeds do not span ker(eta)");
    frame.push_back(unit_xi);
    return frame;
}

SasakianPointModel d_homothetic_deform(const SasakianPointModel& model, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidParameterError("d_homothetic_deform: alpha must be positive, got " +
                                    std::to_string(alpha));
    }
    const std::size_t d = model.dimension();
    const BilinearForm& g = model.g;
    const Endomorphism& phi = model.phi;
    const TangentVector& xi = model.xi;
    const CoVector& eta = model.eta;
    const double s = alpha - 1.0;

    std::vector<TangentVector> basis;
    for (std::size_t i = 0; i < d; ++i) basis.push_back(TangentVector::basis(d, i));
    std::vector<TangentVector> phi_e;
    for (std::size_t i = 0; i < d; ++i) phi_e.push_back(phi(basis[i]));

    // Sasakian covariant derivatives of the structure at the point:
    //   (nabla_X eta)(Y) = -g(phi X, Y),  (nabla_X phi) Y = g(X, Y) xi - eta(Y) X.
    auto nabla_eta = [&](std::size_t x, std::size_t y) { return -g(phi_e[x], basis[y]); };
    auto nabla_phi = [&](std::size_t x, std::size_t y) {
        return g(x, y) * xi - eta[y] * basis[x];
    };
    // Difference tensor of the deformed Levi-Civita connection.
    auto diff = [&](const TangentVector& x, const TangentVector& y) {
        return (-s) * (eta(x) * phi(y) + eta(y) * phi(x));
    };
    auto nabla_diff = [&](std::size_t x, std::size_t y, std::size_t z) {
        return (-s) * (nabla_eta(x, y) * phi_e[z] + eta[y] * nabla_phi(x, z) + nabla_eta(x, z) * phi_e[y] +
                       eta[z] * nabla_phi(x, y));
    };

    const auto r_op = curvature_operator(model.R, g);
    const BilinearForm g_new = alpha * g + (alpha * s) * BilinearForm::tensor_product(eta, eta);

    CovariantTensor4 r_new(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                TangentVector v = r_op[(i * d + j) * d + k];
                v += nabla_diff(i, j, k);
                v -= nabla_diff(j, i, k);
                v += diff(basis[i], diff(basis[j], basis[k]));
                v -= diff(basis[j], diff(basis[i], basis[k]));
                const CoVector lowered = g_new.lower(v);
                for (std::size_t l = 0; l < d; ++l) r_new(i, j, k, l) = lowered[l];
            }

    const TangentVector xi_new = (1.0 / alpha) * xi;
    const auto frame = adapted_frame(g_new, phi, xi_new);

    SasakianPointModel out = adapted_structure(model.n);
    out.R = r_new.in_frame(frame);
    out.ricci = ricci_from_curvature(out.R, out.g);
    return out;
}

BilinearForm factor_ricci_star(const SasakianPointModel& model) {
    const std::size_t d = model.dimension();
    const auto frame = orthonormal_frame(model.g);
    std::vector<TangentVector> phi_frame;
    for (const auto& e : frame) phi_frame.push_back(model.phi(e));
    SquareMatrix out(d);
    for (std::size_t x = 0; x < d; ++x) {
        const TangentVector ex = TangentVector::basis(d, x);
        for (std::size_t y = 0; y < d; ++y) {
            const TangentVector phi_y = model.phi(TangentVector::basis(d, y));
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += model.R(ex, phi_frame[i], phi_y, frame[i]);
            out(x, y) = s;
        }
    }
    return BilinearForm(std::move(out));
}

EtaEinsteinCoefficients classify_eta_einstein(const SasakianPointModel& model, double tol) {
    const auto frame = adapted_frame(model.g, model.phi, model.xi);
    const std::size_t d = model.dimension();
    const TangentVector& unit_xi = frame.back();

    EtaEinsteinCoefficients out;
    out.A = model.ricci(frame[0], frame[0]);
    double spread = 0.0;
    for (std::size_t i = 1; i + 1 < d; ++i) spread = std::max(spread, std::abs(model.ricci(frame[i], frame[i]) - out.A));
    out.B = model.ricci(unit_xi, unit_xi) - out.A;

    const BilinearForm fit = out.A * model.g + out.B * BilinearForm::tensor_product(model.eta, model.eta);
    out.residual = std::max(max_abs_difference(model.ricci, fit), spread);
    (void)tol;  // the caller decides what residual is acceptable
    return out;
}

double StructureResiduals::max() const {
    return std::max({eta_of_xi, eta_is_dual, phi_squared, phi_xi, eta_phi, metric_compatible});
}

StructureResiduals structure_residuals(const SasakianPointModel& m) {
    const std::size_t d = m.dimension();
    StructureResiduals r;
    r.eta_of_xi = std::abs(m.eta(m.xi) - 1.0);
    const CoVector dual = m.g.lower(m.xi);
    for (std::size_t i = 0; i < d; ++i) r.eta_is_dual = std::max(r.eta_is_dual, std::abs(dual[i] - m.eta[i]));
    const Endomorphism phi2 = m.phi * m.phi + Endomorphism::identity(d) - Endomorphism::outer(m.xi, m.eta);
    r.phi_squared = max_abs(phi2.entries());
    r.phi_xi = max_abs(m.phi(m.xi));
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += m.eta[i] * m.phi(i, j);
        r.eta_phi = std::max(r.eta_phi, std::abs(s));
    }
    const BilinearForm pulled = m.g.in_frame(m.phi.entries());
    const BilinearForm expected = m.g - BilinearForm::tensor_product(m.eta, m.eta);
    r.metric_compatible = max_abs_difference(pulled, expected);
    return r;
}

double SasakianIdentityReport::max() const {
    return std::max({r_xy_xi, ricci_xi, ricci_trace, phi_z_identity, phi_trace_3, phi_trace_2, phi_phi_trace});
}

SasakianIdentityReport verify_sasakian_curvature_identities(const SasakianPointModel& model) {
    // Work in an adapted orthonormal frame, where g = I and the frame sums
    // below run over an orthonormal basis.
    const FramedModel fm = framed(model);
    const std::size_t d = model.dimension();
    const CovariantTensor4 R = model.R.in_frame(fm.frame);
    const BilinearForm ricci = model.ricci.in_frame(fm.frame);
    const SquareMatrix phi = fm.frame_inv * model.phi.entries() * fm.frame;
    CoVector eta(d);
    for (std::size_t i = 0; i < d; ++i) {
        TangentVector col(d);
        for (std::size_t r = 0; r < d; ++r) col[r] = fm.frame(r, i);
        eta[i] = model.eta(col);
    }
    const double n = static_cast<double>(model.n);

    auto g = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
    auto gphi = [&](std::size_t a, std::size_t b) { return phi(b, a); };  // g(phi e_a, e_b)
    // R with phi applied to one slot.
    auto r_phi3 = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += phi(m, z) * R(x, y, m, w);
        return s;
    };
    auto r_phi1 = [&](std::size_t z, std::size_t x, std::size_t y, std::size_t w) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += phi(m, z) * R(m, x, y, w);
        return s;
    };
    auto r_phi2 = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += phi(m, y) * R(x, m, z, w);
        return s;
    };
    auto r_phi4 = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += phi(m, w) * R(x, y, z, m);
        return s;
    };

    SasakianIdentityReport rep;
    const std::size_t xi = d - 1;
    const BilinearForm traced = ricci_from_curvature(R, BilinearForm::identity(d));
    rep.ricci_trace = max_abs_difference(ricci, traced);

    for (std::size_t x = 0; x < d; ++x) {
        rep.ricci_xi = std::max(rep.ricci_xi, std::abs(ricci(xi, x) - 2.0 * n * eta[x]));
        for (std::size_t y = 0; y < d; ++y) {
            for (std::size_t w = 0; w < d; ++w) {
                // R(X,Y)xi = eta(Y) X - eta(X) Y, paired with W.
                double lhs = 0.0;
                for (std::size_t m = 0; m < d; ++m) lhs += eta[m] * R(x, y, m, w);
                const double rhs = eta[y] * g(x, w) - eta[x] * g(y, w);
                rep.r_xy_xi = std::max(rep.r_xy_xi, std::abs(lhs - rhs));
                for (std::size_t z = 0; z < d; ++z) {
                    const double l27 = r_phi3(x, y, z, w) - r_phi1(z, x, y, w);
                    const double r27 = -g(x, y) * gphi(z, w) - 2.0 * gphi(y, z) * g(x, w) + gphi(x, z) * g(y, w);
                    rep.phi_z_identity = std::max(rep.phi_z_identity, std::abs(l27 - r27));
                }
            }
            double sum3 = 0.0, sum1 = 0.0, sum11 = 0.0, sum12 = 0.0;
            for (std::size_t e = 0; e < d; ++e) {
                sum3 += r_phi3(x, y, e, e);
                sum1 += r_phi1(e, x, y, e);
                sum11 += r_phi4(x, y, e, e);
                // R(X, phi Y, e, phi e)
                double t = 0.0;
                for (std::size_t m = 0; m < d; ++m) t += phi(m, e) * r_phi2(x, y, e, m);
                sum12 += t;
            }
            rep.phi_trace_3 = std::max(rep.phi_trace_3, std::abs(sum3 - sum1 - 3.0 * gphi(x, y)));
            rep.phi_trace_2 = std::max(rep.phi_trace_2, std::abs(sum11 + 2.0 * gphi(x, y)));
            rep.phi_phi_trace =
                std::max(rep.phi_phi_trace, std::abs(sum12 + 2.0 * (g(x, y) - eta[x] * eta[y])));
        }
    }
    return rep;
}

}  // namespace sasaki
