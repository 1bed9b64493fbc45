#include "geoext/model.hpp"

#include "geoext/errors.hpp"
#include "geoext/geometry.hpp"

#include <memory>
#include <sstream>

namespace geoext {

namespace {

using expr::Compiled;
using expr::Expr;

int index_of(const std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

// compiled k x n matrix of expressions with all first derivatives
struct FormTable {
    int k = 0, n = 0;
    std::vector<Compiled> val;
    std::vector<Compiled> der;  // ((i*n + a)*n + b): d mu^i_a / dq^b

    Mat at(const Vec& q) const {
        Mat M(k, n);
        for (int i = 0; i < k; ++i)
            for (int a = 0; a < n; ++a) M(i, a) = val[i * n + a](q);
        return M;
    }
    Mat d(const Vec& q, int b) const {
        Mat M(k, n);
        for (int i = 0; i < k; ++i)
            for (int a = 0; a < n; ++a) M(i, a) = der[(i * n + a) * n + b](q);
        return M;
    }
};

// pivot columns by elimination with partial pivoting, columns in coordinate order
std::vector<int> choose_pivots(Mat M, const std::vector<int>& allowed) {
    const int k = static_cast<int>(M.rows());
    std::vector<int> piv;
    std::vector<bool> used(k, false);
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    for (int col : allowed) {
        if (static_cast<int>(piv.size()) == k) break;
        int best = -1;
        double bv = 1e-10 * scale;
        for (int r = 0; r < k; ++r)
            if (!used[r] && std::abs(M(r, col)) > bv) bv = std::abs(M(r, col)), best = r;
        if (best < 0) continue;
        used[best] = true;
        piv.push_back(col);
        for (int r = 0; r < k; ++r)
            if (!used[r]) M.row(r) -= M(r, col) / M(best, col) * M.row(best);
    }
    return piv;
}

}  // namespace

FramedSystem assemble(const SystemModel& md) {
    const int n = static_cast<int>(md.coords.size());
    if (n == 0) throw Error(Errc::config_malformed, "no coordinates");
    if (static_cast<int>(md.metric.size()) != n * n)
        throw Error(Errc::config_malformed, "metric needs n*n entries");
    if (md.domain.lo.size() != n || md.domain.hi.size() != n)
        throw Error(Errc::config_malformed, "domain box dimension does not match the coordinates");

    FramedSystem sys;
    sys.name = md.name;
    sys.coords = md.coords;
    sys.params = md.params;
    sys.domain = md.domain;
    sys.possibly_degenerate = md.possibly_degenerate;
    sys.regularization = md.regularization;
    sys.metric = expr::matrix_field(md.metric, n, n, md.coords, md.params);

    std::vector<Vec> probe;
    {
        Box b = md.domain;
        b.points = std::min(b.points, 3);
        probe = lattice(b);
    }
    for (const Vec& q : probe) {
        Mat g = sys.metric(q);
        if (!g.allFinite()) throw Error(Errc::numeric_domain, "metric not finite on the domain");
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
            throw Error(Errc::config_malformed, "metric is not symmetric");
        if (!md.possibly_degenerate && !is_positive_definite(g)) {
            std::ostringstream os;
            os << "metric is not positive definite at q = " << q.transpose()
               << " (set possibly_degenerate to allow this)";
            throw Error(Errc::config_non_pd_metric, os.str());
        }
    }

    // constraint forms
    std::shared_ptr<FormTable> ft;
    if (!md.forms.empty()) {
        ft = std::make_shared<FormTable>();
        ft->k = static_cast<int>(md.forms.size());
        ft->n = n;
        for (const auto& row : md.forms) {
            if (static_cast<int>(row.size()) != n)
                throw Error(Errc::config_malformed, "constraint form needs n components");
            for (const auto& e : row) ft->val.emplace_back(e, md.coords, md.params);
        }
        for (const auto& row : md.forms)
            for (const auto& e : row)
                for (const auto& c : md.coords) ft->der.emplace_back(expr::differentiate(e, c), md.coords, md.params);
        for (const Vec& q : probe) {
            Mat M = ft->at(q);
            Eigen::JacobiSVD<Mat> svd(M);
            const Vec& s = svd.singularValues();
            if (s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0))) {
                std::ostringstream os;
                os << "constraint forms are linearly dependent at q = " << q.transpose();
                throw Error(Errc::config_dependent_constraints, os.str());
            }
        }
    }
    if (ft) sys.constraint_forms = [ft](const Vec& q) { return ft->at(q); };

    // D basis
    std::vector<VectorField> dfs;
    std::vector<std::string> labels;
    std::vector<int> pivots;
    if (!md.d_fields.empty()) {
        for (const auto& f : md.d_fields) {
            if (static_cast<int>(f.size()) != n) throw Error(Errc::config_malformed, "field needs n components");
            dfs.push_back(expr::vector_field(f, md.coords, md.params));
        }
        labels = md.d_labels;
    } else {
        if (!ft) throw Error(Errc::config_malformed, "neither constraint forms nor D fields given");
        const int k = ft->k;
        if (k >= n) throw Error(Errc::config_malformed, "too many constraints");
        std::vector<int> allowed;
        if (md.group) {
            for (int a = 0; a < n; ++a)
                if (index_of(md.group->reduced, md.coords[a]) < 0) allowed.push_back(a);
        } else {
            for (int a = 0; a < n; ++a) allowed.push_back(a);
        }
        Vec centre = 0.5 * (md.domain.lo + md.domain.hi);
        pivots = choose_pivots(ft->at(centre), allowed);
        if (static_cast<int>(pivots.size()) < k)
            throw Error(Errc::config_dependent_constraints,
                        "cannot solve the constraints for the non-reduced coordinates");
        std::vector<int> free;
        for (int a = 0; a < n; ++a)
            if (std::find(pivots.begin(), pivots.end(), a) == pivots.end()) free.push_back(a);
        if (md.group) {
            // free coordinates must come in the order of the reduced chart
            free.clear();
            for (const auto& r : md.group->reduced) free.push_back(index_of(md.coords, r));
        }
        for (int e : free) {
            VectorField X;
            X.components = [ft, pivots, e, n, k](const Vec& q) {
                Mat M = ft->at(q);
                Mat A(k, k);
                for (int j = 0; j < k; ++j) A.col(j) = M.col(pivots[j]);
                Vec c = A.partialPivLu().solve(Vec(M.col(e)));
                Vec out = Vec::Zero(n);
                out(e) = 1;
                for (int j = 0; j < k; ++j) out(pivots[j]) = -c(j);
                return out;
            };
            X.jacobian = [ft, pivots, e, n, k](const Vec& q) {
                Mat M = ft->at(q);
                Mat A(k, k);
                for (int j = 0; j < k; ++j) A.col(j) = M.col(pivots[j]);
                auto lu = A.partialPivLu();
                Vec c = lu.solve(Vec(M.col(e)));
                Mat J = Mat::Zero(n, n);
                for (int b = 0; b < n; ++b) {
                    Mat dM = ft->d(q, b);
                    Mat dA(k, k);
                    for (int j = 0; j < k; ++j) dA.col(j) = dM.col(pivots[j]);
                    Vec dc = lu.solve(Vec(dM.col(e) - dA * c));
                    for (int j = 0; j < k; ++j) J(pivots[j], b) = -dc(j);
                }
                return J;
            };
            dfs.push_back(X);
            labels.push_back(md.coords[e]);
        }
    }
    const int m = static_cast<int>(dfs.size());
    if (m == 0 || m > n) throw Error(Errc::config_malformed, "D must have rank between 1 and n");

    // complement
    std::vector<VectorField> perp;
    std::vector<std::string> perp_labels;
    if (!md.perp_fields.empty()) {
        for (const auto& f : md.perp_fields) perp.push_back(expr::vector_field(f, md.coords, md.params));
        perp_labels = md.perp_labels;
    } else {
        std::vector<VectorField> seeds;
        if (md.group) {
            for (const auto& gen : md.group->generators) {
                if (static_cast<int>(gen.size()) != n)
                    throw Error(Errc::config_malformed, "generator needs n components");
                seeds.push_back(expr::vector_field(gen, md.coords, md.params));
            }
            perp_labels = md.group->names;
        } else {
            std::vector<int> seed_idx = pivots;
            if (seed_idx.empty()) {
                // explicit D fields without a group: complete with coordinate fields
                Vec centre = 0.5 * (md.domain.lo + md.domain.hi);
                Mat X(n, m);
                for (int a = 0; a < m; ++a) X.col(a) = dfs[a](centre);
                for (int c = 0; c < n && static_cast<int>(seed_idx.size()) < n - m; ++c) {
                    Mat Y(n, X.cols() + 1);
                    Y << X, Vec::Unit(n, c);
                    if (Eigen::FullPivLU<Mat>(Y).rank() == Y.cols()) {
                        X = Y;
                        seed_idx.push_back(c);
                    }
                }
            }
            for (int c : seed_idx) {
                VectorField e;
                e.components = [c, n](const Vec&) { return Vec(Vec::Unit(n, c)); };
                e.jacobian = [n](const Vec&) { return Mat(Mat::Zero(n, n)); };
                seeds.push_back(e);
                perp_labels.push_back(md.coords[c]);
            }
        }
        for (const auto& s : seeds) perp.push_back(project_off_distribution(sys.metric, dfs, s));
    }
    if (m + static_cast<int>(perp.size()) != n)
        throw Error(Errc::config_malformed, "complement has the wrong rank");

    sys.frame.m = m;
    sys.frame.fields = dfs;
    for (const auto& p : perp) sys.frame.fields.push_back(p);
    sys.labels = labels;
    sys.labels.insert(sys.labels.end(), perp_labels.begin(), perp_labels.end());
    sys.labels.resize(n);
    for (int a = 0; a < n; ++a)
        if (sys.labels[a].empty()) sys.labels[a] = "X" + std::to_string(a + 1);

    for (const Vec& q : probe) {
        Mat P = sys.frame.matrix(q);
        if (Eigen::FullPivLU<Mat>(P).rank() < n)
            throw Error(Errc::degenerate_frame, "frame is singular on the domain");
    }

    if (md.group) {
        Action act;
        for (const auto& gen : md.group->generators)
            act.generators.push_back(expr::vector_field(gen, md.coords, md.params));
        for (const auto& r : md.group->reduced) {
            int i = index_of(md.coords, r);
            if (i < 0) throw Error(Errc::config_malformed, "unknown reduced coordinate '" + r + "'");
            act.reduced.push_back(i);
        }
        std::vector<Expr> sec;
        for (const auto& c : md.coords) {
            if (index_of(md.group->reduced, c) >= 0) sec.push_back(expr::var(c));
            else {
                auto it = md.group->section.find(c);
                sec.push_back(it == md.group->section.end() ? expr::num(0) : it->second);
            }
        }
        auto comp = std::make_shared<std::vector<Compiled>>();
        for (const auto& e : sec) comp->emplace_back(e, md.group->reduced, md.params);
        act.section = [comp](const Vec& r) {
            Vec q(comp->size());
            for (size_t i = 0; i < comp->size(); ++i) q(i) = (*comp)[i](r);
            return q;
        };
        sys.action = act;
    }
    return sys;
}

}  // namespace geoext
