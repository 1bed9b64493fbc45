#include "geoext/system.hpp"

#include "geoext/errors.hpp"

namespace geoext {

std::vector<Vec> lattice(const Box& box) {
    const int n = static_cast<int>(box.lo.size());
    if (n == 0 || box.points < 1) throw Error(Errc::empty_grid, "empty sample grid");
    std::vector<Vec> out;
    std::vector<int> idx(n, 0);
    while (true) {
        Vec q(n);
        for (int d = 0; d < n; ++d) {
            double t = box.points == 1 ? 0.5 : double(idx[d]) / (box.points - 1);
            q(d) = box.lo(d) + t * (box.hi(d) - box.lo(d));
        }
        out.push_back(q);
        int d = 0;
        while (d < n && ++idx[d] == box.points) idx[d++] = 0;
        if (d == n) break;
    }
    return out;
}

Box sub_box(const Box& box, const std::vector<int>& axes) {
    Box b;
    b.points = box.points;
    b.lo.resize(axes.size());
    b.hi.resize(axes.size());
    for (size_t j = 0; j < axes.size(); ++j) {
        b.lo(j) = box.lo(axes[j]);
        b.hi(j) = box.hi(axes[j]);
    }
    return b;
}

Mat Frame::matrix(const Vec& q) const {
    Mat P(q.size(), n());
    for (int a = 0; a < n(); ++a) P.col(a) = fields[a](q);
    require_finite(P, "frame components");
    return P;
}

VectorField project_off_distribution(const MatrixFn& metric,
                                     const std::vector<VectorField>& d_fields,
                                     const VectorField& seed) {
    VectorField out;
    out.components = [metric, d_fields, seed](const Vec& q) {
        const int m = static_cast<int>(d_fields.size());
        Mat X(q.size(), m);
        for (int a = 0; a < m; ++a) X.col(a) = d_fields[a](q);
        Mat g = metric(q);
        Vec s = seed(q);
        Mat gab = X.transpose() * g * X;
        Vec rhs = X.transpose() * g * s;
        // min-norm solve: identical to LU when g_ab is invertible. The loose threshold
        // keeps a rounding-level pivot from being treated as rank.
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(gab.rows(), gab.cols());
        cod.setThreshold(1e-10);
        cod.compute(gab);
        Vec c = cod.solve(rhs);
        return Vec(s - X * c);
    };
    return out;
}

}  // namespace geoext
