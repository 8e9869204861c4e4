#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vortsdf/core.hpp"
#include "vortsdf/geom/kdtree.hpp"
#include "vortsdf/geom/sites.hpp"

namespace vortsdf::cvt {

struct CvtConfig {
    int n_neighbors = 24;
    int n_iterations = 300;
    int knn_refresh_period = 100;
    double learning_rate = 0.0;  // 0 = 0.3 x mean initial nearest-neighbor spacing
    uint64_t rng_seed = 0;
    int n_threads = 0;  // 0 = library default

    void validate() const {
        if (n_neighbors < 4) throw InputError("CvtConfig: n_neighbors must be >= 4");
        if (n_iterations < 1 || knn_refresh_period < 1)
            throw InputError("CvtConfig: iteration counts must be >= 1");
        if (learning_rate < 0) throw InputError("CvtConfig: negative learning rate");
    }
};

// Three orthonormal direction vectors: the Cartesian basis rotated by phi
// about z, then by theta about y.
struct DirectionBasis {
    std::array<Vec3, 3> e;
};

DirectionBasis random_basis(double theta, double phi);

// Distance from s_i along unit direction r to its (possibly shifted)
// bisector plane with s_j. The plane passes through the midpoint when the
// SDF signs agree and through the linear SDF zero crossing of the segment
// when they differ. Empty when the ray does not reach the plane with t > 0.
std::optional<double> bisector_hit(const Vec3& s_i, const Vec3& s_j, double sdf_i, double sdf_j,
                                   const Vec3& r);

struct BisectorQuery {
    double t;
    int neighbor;  // -1 when no plane was hit (t is the d_max sentinel)
};

// Closest bisector along r among the listed neighbors; d_max sentinel when
// none is hit.
BisectorQuery nearest_bisector(int site, const Vec3& r, std::span<const int> neighbors,
                               std::span<const Vec3> positions, std::span<const double> sdf,
                               double d_max);

inline double directional_distance(int site, const Vec3& r, std::span<const int> neighbors,
                                   std::span<const Vec3> positions, std::span<const double> sdf,
                                   double d_max) {
    return nearest_bisector(site, r, neighbors, positions, sdf, d_max).t;
}

struct CvtLossGrad {
    double loss = 0.0;
    std::vector<Vec3> grad;
};

// Loss over sampled direction pairs with fresh per-site angles drawn from
// the counter RNG keyed (seed, iteration, site). The gradient treats each
// argmin neighbor as locally constant and flows to both the center site and
// the hit neighbor; camera sites receive zero gradient. Accumulation order
// is fixed by site index, so results do not depend on thread count.
CvtLossGrad cvt_loss_and_grad(const geom::SiteSet& sites, std::span<const double> sdf,
                              const geom::KdTree::Table& knn, uint64_t seed, long iteration,
                              double d_max);

struct CvtResult {
    geom::SiteSet sites;
    std::vector<double> loss_history;  // one entry per iteration
};

// Adam-optimizes free-site positions for cfg.n_iterations, refreshing the
// KNN table every cfg.knn_refresh_period iterations. SDF values are frozen
// for the whole phase; camera sites never move.
CvtResult optimize_cvt(const geom::SiteSet& sites, std::span<const double> sdf,
                       const CvtConfig& cfg);

}  // namespace vortsdf::cvt
