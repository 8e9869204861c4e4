#pragma once

#include "vortsdf/core.hpp"

namespace vortsdf::geom {

// Sign-exact geometric predicates. Each is evaluated in double precision
// with a forward error bound; when the result is smaller than the bound the
// sign is recomputed in exact rational arithmetic. Returns -1, 0, or +1.

// Sign of det[b-a, c-a, d-a]. Positive means (a,b,c,d) is positively
// oriented (d on the counterclockwise side of triangle a,b,c).
int orient3d_sign(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// For a positively oriented tetrahedron (a,b,c,d): positive iff e lies
// strictly inside its circumsphere, 0 iff cospherical.
int insphere_sign(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e);

// Sign of the 2D orientation det[b-a, c-a] (positive = counterclockwise).
int orient2d_sign(double ax, double ay, double bx, double by, double cx, double cy);

// For a counterclockwise triangle (a,b,c) in the plane: positive iff p lies
// strictly inside its circumcircle. For a clockwise triangle the sign flips.
int incircle2d_sign(double ax, double ay, double bx, double by, double cx, double cy,
                    double px, double py);

// Double-precision value of det[b-a, c-a, d-a] (not sign-exact).
double orient3d_value(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace vortsdf::geom
