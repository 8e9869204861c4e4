#pragma once

#include <span>

#include "vortsdf/geom/sites.hpp"
#include "vortsdf/geom/tetmesh.hpp"

namespace vortsdf::geom {

// Delaunay tetrahedralization of the convex hull of the given points.
// Incremental Bowyer-Watson over a symbolic vertex at infinity, with
// sign-exact orientation/in-sphere predicates, so near-cospherical inputs
// (regular grids, CVT-relaxed clouds) are handled without big-coordinate
// hacks. Points are inserted in Morton order for walk locality; exactly
// cospherical configurations resolve deterministically via insertion order.
//
// Throws InputError on fewer than 4 points, coincident points, or fully
// coplanar input.
TetMesh delaunay(std::span<const Vec3> points);

inline TetMesh delaunay(const SiteSet& sites) {
    return delaunay(std::span<const Vec3>(sites.positions));
}

}  // namespace vortsdf::geom
