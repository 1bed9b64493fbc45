#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace geoext {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense 3-index array, row-major in (i, j, k).
template <class Scalar>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2)
        : d_{d0, d1, d2}, data_(static_cast<size_t>(d0) * d1 * d2, Scalar(0)) {}

    int dim(int axis) const { return d_[axis]; }
    Scalar& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
    const Scalar& operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

    const std::vector<Scalar>& data() const { return data_; }

    Scalar max_abs() const {
        Scalar r(0);
        for (const auto& x : data_) r = std::max<Scalar>(r, std::abs(x));
        return r;
    }

    // indices of the entry with the largest magnitude
    std::array<int, 3> argmax_abs() const {
        std::array<int, 3> best{0, 0, 0};
        Scalar r(-1);
        for (int i = 0; i < d_[0]; ++i)
            for (int j = 0; j < d_[1]; ++j)
                for (int k = 0; k < d_[2]; ++k)
                    if (std::abs((*this)(i, j, k)) > r) {
                        r = std::abs((*this)(i, j, k));
                        best = {i, j, k};
                    }
        return best;
    }

    Tensor3& operator-=(const Tensor3& o) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

private:
    size_t idx(int i, int j, int k) const {
        return (static_cast<size_t>(i) * d_[1] + j) * d_[2] + k;
    }
    std::array<int, 3> d_{0, 0, 0};
    std::vector<Scalar> data_;
};

using Tensor3d = Tensor3<double>;

// Symmetric coefficient arrays of a vector-valued quadratic form by polarization:
// S[r](a,b) with Q(v)_r = sum_ab S[r](a,b) v^a v^b.
template <class Scalar, class QuadForm>
Tensor3<Scalar> polarize(QuadForm&& Q, int dim_out, int dim_in) {
    using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Tensor3<Scalar> S(dim_out, dim_in, dim_in);
    std::vector<V> diag(dim_in);
    for (int a = 0; a < dim_in; ++a) {
        V e = V::Zero(dim_in);
        e(a) = Scalar(1);
        diag[a] = Q(e);
        for (int r = 0; r < dim_out; ++r) S(r, a, a) = diag[a](r);
    }
    for (int a = 0; a < dim_in; ++a)
        for (int b = a + 1; b < dim_in; ++b) {
            V e = V::Zero(dim_in);
            e(a) = Scalar(1);
            e(b) = Scalar(1);
            V qab = Q(e);
            for (int r = 0; r < dim_out; ++r) {
                Scalar s = (qab(r) - diag[a](r) - diag[b](r)) / Scalar(2);
                S(r, a, b) = s;
                S(r, b, a) = s;
            }
        }
    return S;
}

// contraction S[r](a,b) v^a v^b
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> contract_quadratic(
    const Tensor3<Scalar>& S, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(S.dim(0));
    for (int r = 0; r < S.dim(0); ++r)
        for (int a = 0; a < S.dim(1); ++a)
            for (int b = 0; b < S.dim(2); ++b) out(r) += S(r, a, b) * v(a) * v(b);
    return out;
}

}  // namespace geoext
