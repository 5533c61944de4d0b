#include "mixedvol/convex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/rng.hpp"

namespace mixedvol {

namespace {

using json = nlohmann::ordered_json;

double vertex_scale(const Mat& points) {
    if (points.rows() == 0) return 1.0;
    return 1.0 + points.cwiseAbs().maxCoeff();
}

// Affine rank of a point set (rows).
int affine_rank(const Mat& points, double tol) {
    if (points.rows() <= 1) return 0;
    Mat centered = points.bottomRows(points.rows() - 1);
    centered.rowwise() -= points.row(0);
    Eigen::JacobiSVD<Mat> svd(centered);
    const auto& sv = svd.singularValues();
    const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

Mat dedup_rows(const Mat& points, double tol) {
    std::vector<int> keep;
    for (int i = 0; i < points.rows(); ++i) {
        bool dup = false;
        for (int j : keep) {
            if ((points.row(i) - points.row(j)).cwiseAbs().maxCoeff() <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    Mat out(static_cast<int>(keep.size()), points.cols());
    for (int k = 0; k < static_cast<int>(keep.size()); ++k) out.row(k) = points.row(keep[k]);
    return out;
}

}  // namespace

Vec nnls(const Mat& a, const Vec& b, double* residual) {
    const int m = static_cast<int>(a.rows());
    const int k = static_cast<int>(a.cols());
    Vec x = Vec::Zero(k);
    std::vector<char> passive(k, 0);
    std::vector<int> pidx;
    const double wtol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());

    Vec resid = b;
    for (int outer = 0; outer < 3 * k + 10; ++outer) {
        Vec w = a.transpose() * resid;
        int j = -1;
        double wmax = wtol;
        for (int i = 0; i < k; ++i) {
            if (!passive[i] && w(i) > wmax) {
                wmax = w(i);
                j = i;
            }
        }
        if (j < 0) break;
        passive[j] = 1;
        pidx.push_back(j);

        for (int inner = 0; inner < 3 * k + 10; ++inner) {
            Mat ap(m, static_cast<int>(pidx.size()));
            for (int c = 0; c < static_cast<int>(pidx.size()); ++c) ap.col(c) = a.col(pidx[c]);
            Vec z = ap.colPivHouseholderQr().solve(b);

            bool feasible = true;
            double alpha = 1.0;
            for (int c = 0; c < z.size(); ++c) {
                if (z(c) <= 0.0) {
                    feasible = false;
                    const double xi = x(pidx[c]);
                    const double denom = xi - z(c);
                    if (denom > 0.0) alpha = std::min(alpha, xi / denom);
                }
            }
            if (feasible) {
                for (int c = 0; c < z.size(); ++c) x(pidx[c]) = z(c);
                break;
            }
            for (int c = 0; c < z.size(); ++c) x(pidx[c]) += alpha * (z(c) - x(pidx[c]));
            // Drop variables pinned at zero back to the active set.
            std::vector<int> next;
            for (int c = 0; c < static_cast<int>(pidx.size()); ++c) {
                if (x(pidx[c]) <= 1e-14) {
                    x(pidx[c]) = 0.0;
                    passive[pidx[c]] = 0;
                } else {
                    next.push_back(pidx[c]);
                }
            }
            pidx = std::move(next);
            if (pidx.empty()) break;
        }
        resid = b - a * x;
    }
    if (residual) *residual = resid.norm();
    return x;
}

double hull_residual(const Mat& points, const Vec& p) {
    const int n = static_cast<int>(points.cols());
    const int k = static_cast<int>(points.rows());
    if (k == 0) return p.norm();
    // Lifted system: coordinates plus a weighted sum-to-one row. The weight
    // is large enough that the affine constraint binds and the residual is
    // dominated by the geometric distance.
    const double w = 64.0 * vertex_scale(points);
    Mat a(n + 1, k);
    for (int j = 0; j < k; ++j) {
        a.col(j).head(n) = points.row(j).transpose();
        a(n, j) = w;
    }
    Vec b(n + 1);
    b.head(n) = p;
    b(n) = w;
    double r = 0.0;
    nnls(a, b, &r);
    return r;
}

Mat extreme_points(const Mat& points, double tol) {
    Mat pts = dedup_rows(points, 1e-12 * vertex_scale(points));
    const int k = static_cast<int>(pts.rows());
    if (k <= 2) return pts;
    const double scale = vertex_scale(pts);
    std::vector<int> keep;
    Mat others(k - 1, pts.cols());
    for (int i = 0; i < k; ++i) {
        int r = 0;
        for (int j = 0; j < k; ++j)
            if (j != i) others.row(r++) = pts.row(j);
        if (hull_residual(others, pts.row(i).transpose()) > tol * scale) keep.push_back(i);
    }
    Mat out(static_cast<int>(keep.size()), pts.cols());
    for (int c = 0; c < static_cast<int>(keep.size()); ++c) out.row(c) = pts.row(keep[c]);
    return out;
}

// ---------------------------------------------------------------------------
// Facet enumeration
// ---------------------------------------------------------------------------

namespace {

constexpr double kPlaneTol = 1e-12;

// Enumerate supporting hyperplanes of a full-dimensional point set by
// brute force over (n)-subsets. Desk scale: n <= 4, a few hundred points.
std::vector<Facet> enumerate_facets(const Mat& pts) {
    const int n = static_cast<int>(pts.cols());
    const int k = static_cast<int>(pts.rows());
    const double scale = vertex_scale(pts);
    const double tol = kPlaneTol * scale * 64.0;
    std::vector<Facet> facets;
    std::set<std::vector<int>> seen;

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;

    auto normal_of = [&](const std::vector<int>& sub) -> std::optional<Vec> {
        Mat e(n - 1, n);
        for (int i = 1; i < n; ++i) e.row(i - 1) = pts.row(sub[i]) - pts.row(sub[0]);
        if (n == 2) {
            Vec d = e.row(0).transpose();
            if (d.norm() <= tol) return std::nullopt;
            Vec nv(2);
            nv << -d(1), d(0);
            return nv.normalized();
        }
        if (n == 3) {
            Vec u = e.row(0).transpose(), v = e.row(1).transpose();
            Vec c = u.head<3>().cross(v.head<3>());
            if (c.norm() <= tol * std::max(1.0, u.norm() * v.norm())) return std::nullopt;
            return c.normalized();
        }
        Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(n - 2) <= 1e-10 * std::max(1.0, sv(0))) return std::nullopt;
        return svd.matrixV().col(n - 1);
    };

    // Iterate over all n-subsets.
    while (true) {
        auto nv = normal_of(idx);
        if (nv) {
            Vec normal = *nv;
            double offset = normal.dot(pts.row(idx[0]).transpose());
            // Orient outward: all points on the <= side.
            double hi = -1e300, lo = 1e300;
            for (int j = 0; j < k; ++j) {
                const double s = normal.dot(pts.row(j).transpose()) - offset;
                hi = std::max(hi, s);
                lo = std::min(lo, s);
            }
            int side = 0;
            if (hi <= tol) side = 1;
            else if (lo >= -tol) side = -1;
            if (side != 0) {
                if (side < 0) {
                    normal = -normal;
                    offset = -offset;
                }
                Facet f;
                f.normal = normal;
                f.offset = offset;
                for (int j = 0; j < k; ++j)
                    if (std::abs(normal.dot(pts.row(j).transpose()) - offset) <= tol)
                        f.vertices.push_back(j);
                std::vector<int> key = f.vertices;
                if (seen.insert(key).second) facets.push_back(std::move(f));
            }
        }
        // next combination
        int i = n - 1;
        while (i >= 0 && idx[i] == k - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return facets;
}

double hull_volume_rec(const Mat& points) {
    const int n = static_cast<int>(points.cols());
    if (points.rows() == 0) return 0.0;
    if (n == 1) {
        return points.col(0).maxCoeff() - points.col(0).minCoeff();
    }
    Mat pts = extreme_points(points);
    if (affine_rank(pts, 1e-10) < n) return 0.0;
    const auto facets = enumerate_facets(pts);
    const Vec c = pts.colwise().mean().transpose();
    double vol = 0.0;
    for (const auto& f : facets) {
        const double h = f.offset - f.normal.dot(c);
        if (h <= 0.0) continue;
        // Project facet points into an orthonormal basis of the hyperplane.
        Mat basis(n, n - 1);
        {
            Mat a(n, n);
            a.col(0) = f.normal;
            a.block(0, 1, n, n - 1).setIdentity(n, n - 1);
            Eigen::HouseholderQR<Mat> qr(a);
            Mat q = qr.householderQ();
            basis = q.rightCols(n - 1);
        }
        Mat sub(static_cast<int>(f.vertices.size()), n - 1);
        const Vec origin = pts.row(f.vertices[0]).transpose();
        for (int i = 0; i < static_cast<int>(f.vertices.size()); ++i)
            sub.row(i) = ((pts.row(f.vertices[i]).transpose() - origin).transpose() * basis);
        vol += h * hull_volume_rec(sub);
    }
    return vol / n;
}

}  // namespace

double hull_volume(const Mat& points) { return hull_volume_rec(points); }

// ---------------------------------------------------------------------------
// ConvexBody
// ---------------------------------------------------------------------------

ConvexBody ConvexBody::from_vertices(Mat vertices, std::string name) {
    const int n = static_cast<int>(vertices.cols());
    Mat canon = extreme_points(vertices);
    const int rank = affine_rank(canon, 1e-10);
    if (canon.rows() < n + 1 || rank < n) {
        std::ostringstream msg;
        msg << "degenerate vertex set: affine rank " << rank << " < dimension " << n
            << " (need at least " << n + 1 << " affinely independent vertices)";
        throw std::invalid_argument(msg.str());
    }
    ConvexBody b;
    b.vertices_ = std::move(canon);
    b.name_ = std::move(name);
    return b;
}

ConvexBody ConvexBody::from_vertices_allow_degenerate(Mat vertices, std::string name) {
    const int n = static_cast<int>(vertices.cols());
    Mat canon = extreme_points(vertices);
    ConvexBody b;
    b.degenerate_ = affine_rank(canon, 1e-10) < n;
    b.vertices_ = std::move(canon);
    b.name_ = std::move(name);
    return b;
}

bool ConvexBody::contains(const Vec& p, double tol) const {
    return hull_residual(vertices_, p) <= tol;
}

const std::vector<Facet>& ConvexBody::facets() const {
    if (!facets_ready_) {
        if (degenerate_) throw std::domain_error("facets: body is lower-dimensional");
        facets_ = enumerate_facets(vertices_);
        facets_ready_ = true;
    }
    return facets_;
}

double ConvexBody::interior_margin(const Vec& p) const {
    double margin = 1e300;
    for (const auto& f : facets()) margin = std::min(margin, f.offset - f.normal.dot(p));
    return margin;
}

std::string ConvexBody::to_json() const {
    json j;
    j["dim"] = dim();
    j["vertices"] = json::array();
    for (int i = 0; i < vertex_count(); ++i) {
        json row = json::array();
        for (int c = 0; c < dim(); ++c) row.push_back(vertices_(i, c));
        j["vertices"].push_back(row);
    }
    j["name"] = name_;
    return j.dump(2);
}

ConvexBody ConvexBody::from_json(const std::string& text) {
    json j = json::parse(text);
    const int n = j.at("dim").get<int>();
    const auto& rows = j.at("vertices");
    Mat pts(static_cast<int>(rows.size()), n);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("vertex row length does not match dim");
        for (int c = 0; c < n; ++c) pts(i, c) = rows[i][c].get<double>();
    }
    std::string name = j.value("name", std::string{});
    return from_vertices_allow_degenerate(std::move(pts), std::move(name));
}

ConvexBody ConvexBody::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open body file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Minkowski sums and volume
// ---------------------------------------------------------------------------

ConvexBody minkowski_sum(std::span<const ConvexBody> bodies, std::span<const double> coeffs) {
    if (bodies.empty()) throw std::invalid_argument("minkowski_sum: no bodies");
    if (bodies.size() != coeffs.size())
        throw std::invalid_argument("minkowski_sum: bodies/coeffs size mismatch");
    const int n = bodies[0].dim();
    for (const auto& b : bodies)
        if (b.dim() != n) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    for (double c : coeffs)
        if (!(c > 0.0)) throw std::invalid_argument("minkowski_sum: coefficients must be positive");

    Mat acc = coeffs[0] * bodies[0].vertices();
    for (std::size_t bi = 1; bi < bodies.size(); ++bi) {
        const Mat& v = bodies[bi].vertices();
        Mat cand(acc.rows() * v.rows(), n);
        int r = 0;
        for (int i = 0; i < acc.rows(); ++i)
            for (int j = 0; j < v.rows(); ++j) cand.row(r++) = acc.row(i) + coeffs[bi] * v.row(j);
        acc = extreme_points(cand);
    }
    std::string name;
    for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
        if (bi) name += "+";
        name += bodies[bi].name().empty() ? "body" : bodies[bi].name();
    }
    return ConvexBody::from_vertices_allow_degenerate(std::move(acc), std::move(name));
}

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b, double ca, double cb) {
    const ConvexBody bodies[] = {a, b};
    const double coeffs[] = {ca, cb};
    return minkowski_sum(std::span<const ConvexBody>(bodies, 2), std::span<const double>(coeffs, 2));
}

double polytope_volume_exact(const ConvexBody& body) {
    if (body.degenerate()) return 0.0;
    return hull_volume_rec(body.vertices());
}

// ---------------------------------------------------------------------------
// Named bodies
// ---------------------------------------------------------------------------

ConvexBody cube(int n) {
    Mat v(1 << n, n);
    for (int mask = 0; mask < (1 << n); ++mask)
        for (int c = 0; c < n; ++c) v(mask, c) = (mask >> c) & 1 ? 1.0 : 0.0;
    return ConvexBody::from_vertices(std::move(v), "cube" + std::to_string(n));
}

ConvexBody simplex(int n) {
    Mat v = Mat::Zero(n + 1, n);
    for (int i = 0; i < n; ++i) v(i + 1, i) = 1.0;
    return ConvexBody::from_vertices(std::move(v), "simplex" + std::to_string(n));
}

ConvexBody cross_polytope(int n) {
    Mat v = Mat::Zero(2 * n, n);
    for (int i = 0; i < n; ++i) {
        v(2 * i, i) = 1.0;
        v(2 * i + 1, i) = -1.0;
    }
    return ConvexBody::from_vertices(std::move(v), "cross" + std::to_string(n));
}

ConvexBody segment(const Vec& direction) {
    Mat v = Mat::Zero(2, direction.size());
    v.row(1) = direction.transpose();
    return ConvexBody::from_vertices_allow_degenerate(std::move(v), "segment");
}

ConvexBody random_body(Rng& rng, int n, int points) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Mat pts(points, n);
        for (int i = 0; i < points; ++i)
            for (int c = 0; c < n; ++c) pts(i, c) = rng.uniform(-2.0, 2.0);
        try {
            return ConvexBody::from_vertices(std::move(pts), "random" + std::to_string(n));
        } catch (const std::invalid_argument&) {
            // resample
        }
    }
    throw std::runtime_error("random_body: failed to draw a full-dimensional set");
}

ConvexBody resolve_body(const std::string& spec) {
    auto named = [&](const std::string& prefix) -> std::optional<int> {
        if (spec.rfind(prefix, 0) == 0) {
            try {
                return std::stoi(spec.substr(prefix.size()));
            } catch (...) {
                return std::nullopt;
            }
        }
        return std::nullopt;
    };
    if (auto n = named("cube")) return cube(*n);
    if (auto n = named("simplex")) return simplex(*n);
    if (auto n = named("cross")) return cross_polytope(*n);
    if (spec.rfind("segment:", 0) == 0) {
        std::vector<double> comps;
        std::stringstream ss(spec.substr(8));
        std::string tok;
        while (std::getline(ss, tok, ',')) comps.push_back(std::stod(tok));
        Vec d = Eigen::Map<Vec>(comps.data(), static_cast<int>(comps.size()));
        return segment(d);
    }
    return ConvexBody::load(spec);
}

}  // namespace mixedvol
