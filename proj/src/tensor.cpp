#include "sasaki/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace sasaki {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
    if (a != b) {
        throw DimensionMismatchError(std::string(where) + ": dimension mismatch (" +
                                     std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// TangentVector / CoVector

TangentVector TangentVector::basis(std::size_t n, std::size_t i) {
    TangentVector v(n);
    v[i] = 1.0;
    return v;
}

TangentVector& TangentVector::operator+=(const TangentVector& o) {
    require_same_size(size(), o.size(), "TangentVector::operator+=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

TangentVector& TangentVector::operator-=(const TangentVector& o) {
    require_same_size(size(), o.size(), "TangentVector::operator-=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

TangentVector& TangentVector::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
TangentVector operator-(TangentVector a, const TangentVector& b) { return a -= b; }
TangentVector operator-(TangentVector a) { return a *= -1.0; }
TangentVector operator*(double s, TangentVector a) { return a *= s; }

double max_abs(const TangentVector& v) {
    double m = 0.0;
    for (double x : v.components()) m = std::max(m, std::abs(x));
    return m;
}

double CoVector::operator()(const TangentVector& v) const {
    require_same_size(size(), v.size(), "CoVector::operator()");
    double s = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * v[i];
    return s;
}

CoVector operator*(double s, CoVector a) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= s;
    return a;
}

// ---------------------------------------------------------------------------
// SquareMatrix

SquareMatrix::SquareMatrix(std::size_t n, std::initializer_list<double> row_major)
    : n_(n), a_(row_major) {
    if (a_.size() != n * n) throw DimensionMismatchError("SquareMatrix: wrong entry count");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& o) {
    require_same_size(n_, o.n_, "SquareMatrix::operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& o) {
    require_same_size(n_, o.n_, "SquareMatrix::operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    require_same_size(a.size(), b.size(), "SquareMatrix product");
    const std::size_t n = a.size();
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

TangentVector operator*(const SquareMatrix& a, const TangentVector& v) {
    require_same_size(a.size(), v.size(), "SquareMatrix * TangentVector");
    TangentVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

double max_abs(const SquareMatrix& m) {
    double r = 0.0;
    for (double x : m.data()) r = std::max(r, std::abs(x));
    return r;
}

SquareMatrix inverse(const SquareMatrix& m, double pivot_floor) {
    const std::size_t n = m.size();
    SquareMatrix a = m;
    SquareMatrix inv = SquareMatrix::identity(n);
    const double scale = std::max(max_abs(m), 1.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (!(std::abs(a(pivot, col)) > pivot_floor * scale)) {
            throw SingularMetricError("matrix is singular to working precision");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const double d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

SquareMatrix cholesky(const SquareMatrix& m) {
    const std::size_t n = m.size();
    SquareMatrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw SingularMetricError("matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

// ---------------------------------------------------------------------------
// BilinearForm

BilinearForm::BilinearForm(SquareMatrix entries) : m_(std::move(entries)) {
    symmetric_ = true;
    for (std::size_t i = 0; i < m_.size() && symmetric_; ++i)
        for (std::size_t j = i + 1; j < m_.size(); ++j)
            if (m_(i, j) != m_(j, i)) {
                symmetric_ = false;
                break;
            }
}

BilinearForm BilinearForm::identity(std::size_t n) { return BilinearForm(SquareMatrix::identity(n)); }

BilinearForm BilinearForm::tensor_product(const CoVector& a, const CoVector& b) {
    require_same_size(a.size(), b.size(), "BilinearForm::tensor_product");
    SquareMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return BilinearForm(std::move(m));
}

double BilinearForm::operator()(const TangentVector& x, const TangentVector& y) const {
    require_same_size(size(), x.size(), "BilinearForm::operator()");
    require_same_size(size(), y.size(), "BilinearForm::operator()");
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < size(); ++j) s += x[i] * m_(i, j) * y[j];
    }
    return s;
}

BilinearForm BilinearForm::in_frame(const SquareMatrix& frame) const {
    require_same_size(size(), frame.size(), "BilinearForm::in_frame");
    return BilinearForm(frame.transposed() * m_ * frame);
}

BilinearForm BilinearForm::in_frame(std::span<const TangentVector> frame) const {
    return in_frame(frame_matrix(frame));
}

CoVector BilinearForm::lower(const TangentVector& v) const {
    require_same_size(size(), v.size(), "BilinearForm::lower");
    CoVector w(size());
    for (std::size_t j = 0; j < size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i) s += v[i] * m_(i, j);
        w[j] = s;
    }
    return w;
}

BilinearForm& BilinearForm::operator+=(const BilinearForm& o) {
    m_ += o.m_;
    symmetric_ = BilinearForm(m_).symmetric_;
    return *this;
}

BilinearForm& BilinearForm::operator*=(double s) {
    m_ *= s;
    return *this;
}

BilinearForm operator+(BilinearForm a, const BilinearForm& b) { return a += b; }
BilinearForm operator-(const BilinearForm& a, const BilinearForm& b) {
    return BilinearForm(a.entries() - b.entries());
}
BilinearForm operator*(double s, BilinearForm a) { return a *= s; }

double max_abs_difference(const BilinearForm& a, const BilinearForm& b) {
    return max_abs(a.entries() - b.entries());
}

// ---------------------------------------------------------------------------
// Endomorphism

Endomorphism Endomorphism::identity(std::size_t n) { return Endomorphism(SquareMatrix::identity(n)); }

Endomorphism Endomorphism::outer(const TangentVector& v, const CoVector& w) {
    require_same_size(v.size(), w.size(), "Endomorphism::outer");
    SquareMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * w[j];
    return Endomorphism(std::move(m));
}

double Endomorphism::trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += m_(i, i);
    return s;
}

Endomorphism operator*(const Endomorphism& a, const Endomorphism& b) {
    return Endomorphism(a.entries() * b.entries());
}
Endomorphism operator+(const Endomorphism& a, const Endomorphism& b) {
    return Endomorphism(a.entries() + b.entries());
}
Endomorphism operator-(const Endomorphism& a, const Endomorphism& b) {
    return Endomorphism(a.entries() - b.entries());
}
Endomorphism operator*(double s, const Endomorphism& a) { return Endomorphism(s * a.entries()); }

// ---------------------------------------------------------------------------
// CovariantTensor4

double CovariantTensor4::operator()(const TangentVector& x, const TangentVector& y,
                                    const TangentVector& z, const TangentVector& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (y[j] == 0.0) continue;
            for (std::size_t k = 0; k < n_; ++k) {
                if (z[k] == 0.0) continue;
                const double xyz = x[i] * y[j] * z[k];
                for (std::size_t l = 0; l < n_; ++l) s += xyz * (*this)(i, j, k, l) * w[l];
            }
        }
    }
    return s;
}

CovariantTensor4 CovariantTensor4::in_frame(const SquareMatrix& frame) const {
    require_same_size(n_, frame.size(), "CovariantTensor4::in_frame");
    const std::size_t n = n_;
    // Contract one slot at a time: T'(a..) = sum_i T(i..) E(i, a).
    CovariantTensor4 cur = *this;
    for (int slot = 0; slot < 4; ++slot) {
        CovariantTensor4 next(n);
        std::size_t idx[4];
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = 0; idx[1] < n; ++idx[1])
                for (idx[2] = 0; idx[2] < n; ++idx[2])
                    for (idx[3] = 0; idx[3] < n; ++idx[3]) {
                        std::size_t src[4] = {idx[0], idx[1], idx[2], idx[3]};
                        double s = 0.0;
                        for (std::size_t i = 0; i < n; ++i) {
                            src[slot] = i;
                            s += cur(src[0], src[1], src[2], src[3]) * frame(i, idx[slot]);
                        }
                        next(idx[0], idx[1], idx[2], idx[3]) = s;
                    }
        cur = std::move(next);
    }
    return cur;
}

CovariantTensor4 CovariantTensor4::in_frame(std::span<const TangentVector> frame) const {
    return in_frame(frame_matrix(frame));
}

CovariantTensor4& CovariantTensor4::operator+=(const CovariantTensor4& o) {
    require_same_size(n_, o.n_, "CovariantTensor4::operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CovariantTensor4& CovariantTensor4::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

CovariantTensor4 operator+(CovariantTensor4 a, const CovariantTensor4& b) { return a += b; }
CovariantTensor4 operator*(double s, CovariantTensor4 a) { return a *= s; }

double max_abs_difference(const CovariantTensor4& a, const CovariantTensor4& b) {
    require_same_size(a.size(), b.size(), "max_abs_difference");
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

// ---------------------------------------------------------------------------
// CovariantTensor3

double CovariantTensor3::operator()(const TangentVector& x, const TangentVector& y, const TangentVector& z) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (y[j] == 0.0) continue;
            for (std::size_t k = 0; k < n_; ++k) s += x[i] * y[j] * (*this)(i, j, k) * z[k];
        }
    }
    return s;
}

CovariantTensor3 CovariantTensor3::in_frame(const SquareMatrix& frame) const {
    const std::size_t n = n_;
    CovariantTensor3 cur = *this;
    for (int slot = 0; slot < 3; ++slot) {
        CovariantTensor3 next(n);
        std::size_t idx[3];
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = 0; idx[1] < n; ++idx[1])
                for (idx[2] = 0; idx[2] < n; ++idx[2]) {
                    std::size_t src[3] = {idx[0], idx[1], idx[2]};
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        src[slot] = i;
                        s += cur(src[0], src[1], src[2]) * frame(i, idx[slot]);
                    }
                    next(idx[0], idx[1], idx[2]) = s;
                }
        cur = std::move(next);
    }
    return cur;
}

double max_abs_difference(const CovariantTensor3& a, const CovariantTensor3& b) {
    if (a.size() != b.size()) throw DimensionMismatchError("CovariantTensor3 size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// ---------------------------------------------------------------------------
// Contractions and frames

BilinearForm contract_trace(const CovariantTensor4& t, const BilinearForm& metric,
                            std::pair<int, int> slots) {
    require_same_size(t.size(), metric.size(), "contract_trace");
    auto [s1, s2] = slots;
    if (s1 == s2 || s1 < 0 || s2 < 0 || s1 > 3 || s2 > 3) {
        throw InvalidParameterError("contract_trace: slots must be distinct and in 0..3");
    }
    int free_slots[2];
    for (int s = 0, k = 0; s < 4; ++s)
        if (s != s1 && s != s2) free_slots[k++] = s;

    const auto frame = orthonormal_frame(metric);
    const std::size_t n = t.size();
    SquareMatrix out(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0.0;
            for (const auto& e : frame) {
                TangentVector args[4];
                args[s1] = e;
                args[s2] = e;
                args[free_slots[0]] = TangentVector::basis(n, a);
                args[free_slots[1]] = TangentVector::basis(n, b);
                s += t(args[0], args[1], args[2], args[3]);
            }
            out(a, b) = s;
        }
    return BilinearForm(std::move(out));
}

std::vector<TangentVector> orthonormal_frame(const BilinearForm& metric) {
    std::vector<TangentVector> seeds;
    seeds.reserve(metric.size());
    for (std::size_t i = 0; i < metric.size(); ++i) seeds.push_back(TangentVector::basis(metric.size(), i));
    return orthonormal_frame(metric, seeds);
}

std::vector<TangentVector> orthonormal_frame(const BilinearForm& metric,
                                             std::span<const TangentVector> seeds) {
    const std::size_t n = metric.size();
    // Positive definiteness check up front; Gram-Schmidt alone would only
    // notice it on the seeds it happens to use.
    cholesky(metric.entries());

    std::vector<TangentVector> frame;
    frame.reserve(n);
    for (const auto& seed : seeds) {
        if (frame.size() == n) break;
        require_same_size(n, seed.size(), "orthonormal_frame");
        const double seed_norm = std::sqrt(metric(seed, seed));
        TangentVector v = seed;
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : frame) v -= metric(v, e) * e;
        const double norm2 = metric(v, v);
        if (!(norm2 > 1e-20 * seed_norm * seed_norm) || seed_norm == 0.0) continue;
        v *= 1.0 / std::sqrt(norm2);
        frame.push_back(std::move(v));
    }
    if (frame.size() != n) throw SingularMetricError("orthonormal_frame: seeds do not span the space");
    return frame;
}

SquareMatrix frame_matrix(std::span<const TangentVector> frame) {
    const std::size_t n = frame.size();
    SquareMatrix e(n);
    for (std::size_t j = 0; j < n; ++j) {
        require_same_size(n, frame[j].size(), "frame_matrix");
        for (std::size_t i = 0; i < n; ++i) e(i, j) = frame[j][i];
    }
    return e;
}

Endomorphism raise_index(const BilinearForm& form, const BilinearForm& metric) {
    require_same_size(form.size(), metric.size(), "raise_index");
    // g(QX, Y) = B(X, Y)  <=>  Q^T G = B  <=>  Q = G^{-1} B^T.
    const SquareMatrix ginv = inverse(metric.entries());
    return Endomorphism(ginv * form.entries().transposed());
}

double metric_trace(const BilinearForm& form, const BilinearForm& metric) {
    return raise_index(form, metric).trace();
}

double CurvatureSymmetryResiduals::max() const {
    return std::max({antisymmetry_12, antisymmetry_34, pair_symmetry, first_bianchi});
}

CurvatureSymmetryResiduals curvature_symmetry_residuals(const CovariantTensor4& r) {
    CurvatureSymmetryResiduals out;
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const double v = r(i, j, k, l);
                    out.antisymmetry_12 = std::max(out.antisymmetry_12, std::abs(v + r(j, i, k, l)));
                    out.antisymmetry_34 = std::max(out.antisymmetry_34, std::abs(v + r(i, j, l, k)));
                    out.pair_symmetry = std::max(out.pair_symmetry, std::abs(v - r(k, l, i, j)));
                    out.first_bianchi =
                        std::max(out.first_bianchi, std::abs(v + r(j, k, i, l) + r(k, i, j, l)));
                }
    return out;
}

}  // namespace sasaki
