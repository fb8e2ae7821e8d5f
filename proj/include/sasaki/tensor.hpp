#pragma once

// Dense pointwise multilinear algebra over a single tangent space.
//
// Every tensor here lives in a fixed frame of one tangent space. Dimensions
// are small (at most a dozen or so), so everything is stored densely in
// row-major order and all operations are plain loops.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sasaki {

inline constexpr double kAlgebraicTolerance = 1e-12;

class SingularMetricError : public std::runtime_error {
public:
    explicit SingularMetricError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParameterError : public std::invalid_argument {
public:
    explicit InvalidParameterError(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionMismatchError : public std::invalid_argument {
public:
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

class TangentVector {
public:
    TangentVector() = default;
    explicit TangentVector(std::size_t n) : c_(n, 0.0) {}
    TangentVector(std::initializer_list<double> values) : c_(values) {}
    explicit TangentVector(std::vector<double> values) : c_(std::move(values)) {}

    static TangentVector basis(std::size_t n, std::size_t i);

    std::size_t size() const { return c_.size(); }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    std::span<const double> components() const { return c_; }

    TangentVector& operator+=(const TangentVector& o);
    TangentVector& operator-=(const TangentVector& o);
    TangentVector& operator*=(double s);

private:
    std::vector<double> c_;
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a);
TangentVector operator*(double s, TangentVector a);

double max_abs(const TangentVector& v);

class CoVector {
public:
    CoVector() = default;
    explicit CoVector(std::size_t n) : c_(n, 0.0) {}
    CoVector(std::initializer_list<double> values) : c_(values) {}
    explicit CoVector(std::vector<double> values) : c_(std::move(values)) {}

    std::size_t size() const { return c_.size(); }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    std::span<const double> components() const { return c_; }

    double operator()(const TangentVector& v) const;

private:
    std::vector<double> c_;
};

CoVector operator*(double s, CoVector a);

/// Square dense matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    SquareMatrix(std::size_t n, std::initializer_list<double> row_major);

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::span<const double> data() const { return a_; }

    SquareMatrix transposed() const;
    SquareMatrix& operator+=(const SquareMatrix& o);
    SquareMatrix& operator-=(const SquareMatrix& o);
    SquareMatrix& operator*=(double s);

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator*(double s, SquareMatrix a);
SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
TangentVector operator*(const SquareMatrix& a, const TangentVector& v);

double max_abs(const SquareMatrix& m);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMetricError when a pivot falls below `pivot_floor`.
SquareMatrix inverse(const SquareMatrix& m, double pivot_floor = 1e-14);

/// Lower Cholesky factor. Throws SingularMetricError unless positive definite.
SquareMatrix cholesky(const SquareMatrix& m);

class Endomorphism;

/// A bilinear form on the tangent space. Metrics, Ricci tensors and the
/// Ricci-* tensor are all held as BilinearForm.
class BilinearForm {
public:
    BilinearForm() = default;
    explicit BilinearForm(std::size_t n) : m_(n), symmetric_(true) {}
    /// The symmetric flag is set iff the entries are exactly symmetric.
    explicit BilinearForm(SquareMatrix entries);

    static BilinearForm identity(std::size_t n);
    static BilinearForm tensor_product(const CoVector& a, const CoVector& b);

    std::size_t size() const { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    double operator()(const TangentVector& x, const TangentVector& y) const;
    const SquareMatrix& entries() const { return m_; }
    bool symmetric() const { return symmetric_; }

    /// Components in a new frame whose vectors are the columns of `frame`.
    BilinearForm in_frame(const SquareMatrix& frame) const;
    /// Components in the frame given as a list of vectors.
    BilinearForm in_frame(std::span<const TangentVector> frame) const;

    /// Covector X -> form(v, X).
    CoVector lower(const TangentVector& v) const;

    BilinearForm& operator+=(const BilinearForm& o);
    BilinearForm& operator*=(double s);

private:
    SquareMatrix m_;
    bool symmetric_ = true;
};

BilinearForm operator+(BilinearForm a, const BilinearForm& b);
BilinearForm operator-(const BilinearForm& a, const BilinearForm& b);
BilinearForm operator*(double s, BilinearForm a);

double max_abs_difference(const BilinearForm& a, const BilinearForm& b);

/// Linear map on the tangent space; entries(i, j) is the i-th component of
/// the image of the j-th basis vector.
class Endomorphism {
public:
    Endomorphism() = default;
    explicit Endomorphism(std::size_t n) : m_(n) {}
    explicit Endomorphism(SquareMatrix entries) : m_(std::move(entries)) {}

    static Endomorphism identity(std::size_t n);
    static Endomorphism outer(const TangentVector& v, const CoVector& w);

    std::size_t size() const { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const SquareMatrix& entries() const { return m_; }

    TangentVector apply(const TangentVector& v) const { return m_ * v; }
    TangentVector operator()(const TangentVector& v) const { return m_ * v; }
    double trace() const;

private:
    SquareMatrix m_;
};

Endomorphism operator*(const Endomorphism& a, const Endomorphism& b);
Endomorphism operator+(const Endomorphism& a, const Endomorphism& b);
Endomorphism operator-(const Endomorphism& a, const Endomorphism& b);
Endomorphism operator*(double s, const Endomorphism& a);

/// Rank-4 covariant tensor; entry (i, j, k, l) is T(e_i, e_j, e_k, e_l).
/// For curvature, T(X, Y, Z, W) = g(R(X, Y)Z, W).
class CovariantTensor4 {
public:
    CovariantTensor4() = default;
    explicit CovariantTensor4(std::size_t n) : n_(n), a_(n * n * n * n, 0.0) {}

    template <typename F>
    static CovariantTensor4 generate(std::size_t n, F&& f) {
        CovariantTensor4 t(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) t(i, j, k, l) = f(i, j, k, l);
        return t;
    }

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return a_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return a_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    std::span<const double> data() const { return a_; }

    double operator()(const TangentVector& x, const TangentVector& y, const TangentVector& z,
                      const TangentVector& w) const;

    /// Components in a new frame whose vectors are the columns of `frame`.
    CovariantTensor4 in_frame(const SquareMatrix& frame) const;
    CovariantTensor4 in_frame(std::span<const TangentVector> frame) const;

    CovariantTensor4& operator+=(const CovariantTensor4& o);
    CovariantTensor4& operator*=(double s);

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

CovariantTensor4 operator+(CovariantTensor4 a, const CovariantTensor4& b);
CovariantTensor4 operator*(double s, CovariantTensor4 a);
double max_abs_difference(const CovariantTensor4& a, const CovariantTensor4& b);

/// Rank-3 array T(i, j, k), e.g. g((nabla_X J) Y, Z) or a Nijenhuis tensor
/// N(e_i, e_j)^k.
class CovariantTensor3 {
public:
    CovariantTensor3() = default;
    explicit CovariantTensor3(std::size_t n) : n_(n), a_(n * n * n, 0.0) {}
    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return a_[(i * n_ + j) * n_ + k]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return a_[(i * n_ + j) * n_ + k]; }
    std::span<const double> data() const { return a_; }
    double operator()(const TangentVector& x, const TangentVector& y, const TangentVector& z) const;
    CovariantTensor3 in_frame(const SquareMatrix& frame) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

double max_abs_difference(const CovariantTensor3& a, const CovariantTensor3& b);

/// Metric trace of `t` over the two named slots (0-based, distinct). The
/// result is the bilinear form in the two remaining slots, in their original
/// order. Summation runs over an orthonormal basis of `metric`.
BilinearForm contract_trace(const CovariantTensor4& t, const BilinearForm& metric,
                            std::pair<int, int> slots);

/// Gram-Schmidt of the standard basis with respect to `metric`.
/// Throws SingularMetricError if the metric is not positive definite.
std::vector<TangentVector> orthonormal_frame(const BilinearForm& metric);

/// Gram-Schmidt of `seeds` (in order) with respect to `metric`, skipping seeds
/// that are dependent on those already accepted, until `metric.size()`
/// vectors are found.
std::vector<TangentVector> orthonormal_frame(const BilinearForm& metric,
                                             std::span<const TangentVector> seeds);

/// Columns of the result are the frame vectors.
SquareMatrix frame_matrix(std::span<const TangentVector> frame);

/// Q with metric(Q X, Y) = form(X, Y).
Endomorphism raise_index(const BilinearForm& form, const BilinearForm& metric);

/// Trace of the endomorphism obtained by raising `form` with `metric`.
double metric_trace(const BilinearForm& form, const BilinearForm& metric);

/// Max-norm residuals of the algebraic curvature symmetries over all basis
/// quadruples.
struct CurvatureSymmetryResiduals {
    double antisymmetry_12 = 0.0;
    double antisymmetry_34 = 0.0;
    double pair_symmetry = 0.0;
    double first_bianchi = 0.0;

    double max() const;
};

CurvatureSymmetryResiduals curvature_symmetry_residuals(const CovariantTensor4& r);

}  // namespace sasaki
