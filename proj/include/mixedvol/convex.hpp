#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixedvol/common.hpp"

namespace mixedvol {

/// Nonnegative least squares, min |A x - b| s.t. x >= 0 (Lawson-Hanson).
/// Returns the minimizer; `residual` (if given) receives |A x - b|.
Vec nnls(const Mat& a, const Vec& b, double* residual = nullptr);

/// Distance-like residual of p against the convex hull of `points`
/// (rows). Zero iff p lies in the closed hull; for outside points the
/// value approximates the Euclidean distance.
double hull_residual(const Mat& points, const Vec& p);

/// Extreme points of the convex hull of `points` (rows), i.e. the rows
/// that are not convex combinations of the others. Duplicates removed.
Mat extreme_points(const Mat& points, double tol = 1e-9);

/// Supporting hyperplane of a full-dimensional polytope: normal.x <= offset
/// with equality on the incident vertices.
struct Facet {
    Vec normal;                // unit outer normal
    double offset = 0.0;       // support value
    std::vector<int> vertices; // indices of incident hull vertices
};

/// A compact convex polytope with nonempty interior in R^n, stored as the
/// canonical list of its extreme points. Lower-dimensional vertex sets are
/// rejected by the default constructor; a handful of operations (Minkowski
/// sums, zonotope factors) legitimately need them, so an explicit
/// degenerate factory is provided and flagged.
class ConvexBody {
public:
    /// Canonicalizes and requires full affine dimension (>= n+1 affinely
    /// independent vertices). Throws std::invalid_argument otherwise with
    /// a diagnostic naming the affine rank found.
    static ConvexBody from_vertices(Mat vertices, std::string name = "");

    /// Canonicalizes but allows lower-dimensional hulls (segments, faces).
    /// Volume of such a body is zero; interior queries are rejected.
    static ConvexBody from_vertices_allow_degenerate(Mat vertices, std::string name = "");

    int dim() const { return static_cast<int>(vertices_.cols()); }
    int vertex_count() const { return static_cast<int>(vertices_.rows()); }
    const Mat& vertices() const { return vertices_; }
    Vec vertex(int i) const { return vertices_.row(i).transpose(); }
    const std::string& name() const { return name_; }
    bool degenerate() const { return degenerate_; }

    /// Closed-hull membership with slack `tol` (default 1e-9 absolute on
    /// the hull residual).
    bool contains(const Vec& p, double tol = 1e-9) const;

    /// Signed distance from p to the nearest facet hyperplane (positive
    /// strictly inside). Exact in terms of the facet description.
    double interior_margin(const Vec& p) const;

    bool strictly_contains(const Vec& p) const { return interior_margin(p) > 0.0; }

    /// Facet description (computed once, cached). Full-dimensional only.
    const std::vector<Facet>& facets() const;

    Vec centroid() const { return vertices_.colwise().mean().transpose(); }

    /// JSON round trip: {"dim": n, "vertices": [[..]], "name": ".."}.
    std::string to_json() const;
    static ConvexBody from_json(const std::string& text);
    static ConvexBody load(const std::string& path);

private:
    ConvexBody() = default;
    Mat vertices_;
    std::string name_;
    bool degenerate_ = false;
    mutable std::vector<Facet> facets_;
    mutable bool facets_ready_ = false;
};

/// Minkowski sum of scaled bodies: coeffs[0]*bodies[0] + ... Candidate
/// vertices are the sums of scaled vertices, canonicalized as we go.
/// Degenerate summands are allowed; the result is full-dimensional iff the
/// summands jointly span.
ConvexBody minkowski_sum(std::span<const ConvexBody> bodies, std::span<const double> coeffs);
ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b, double ca = 1.0, double cb = 1.0);

/// Exact (up to floating point) volume of the convex hull of a point set,
/// by recursive facet decomposition: vol = (1/n) * sum_F dist(c, F) vol(F).
/// Returns 0 for lower-dimensional hulls. Intended for n <= 4.
double polytope_volume_exact(const ConvexBody& body);
double hull_volume(const Mat& points);

/// Named body factories (unit scale).
ConvexBody cube(int n);
ConvexBody simplex(int n);
ConvexBody cross_polytope(int n);
ConvexBody segment(const Vec& direction);

/// Random full-dimensional polytope with `points` candidate vertices drawn
/// uniformly from [-2, 2]^n (resampled until full-dimensional).
ConvexBody random_body(Rng& rng, int n, int points);

/// Resolve a body spec: a path to a JSON file, or a named builtin such as
/// "cube3", "simplex2", "cross2", "segment:1,0".
ConvexBody resolve_body(const std::string& spec);

}  // namespace mixedvol
