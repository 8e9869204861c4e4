#include "vortsdf/geom/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace vortsdf::geom {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Forward error bound coefficients for the straightforward floating-point
// evaluations, from Shewchuk's robust predicates analysis (the "A" bounds).
constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
const double kOrient3dBound = (7.0 + 56.0 * kEps) * kEps;
const double kInsphereBound = (16.0 + 224.0 * kEps) * kEps;
const double kOrient2dBound = (3.0 + 16.0 * kEps) * kEps;
const double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

template <typename T>
T det3(T m00, T m01, T m02, T m10, T m11, T m12, T m20, T m21, T m22) {
    return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
           m02 * (m10 * m21 - m11 * m20);
}

int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Rational m00 = Rational(b.x) - Rational(a.x), m01 = Rational(b.y) - Rational(a.y),
             m02 = Rational(b.z) - Rational(a.z);
    Rational m10 = Rational(c.x) - Rational(a.x), m11 = Rational(c.y) - Rational(a.y),
             m12 = Rational(c.z) - Rational(a.z);
    Rational m20 = Rational(d.x) - Rational(a.x), m21 = Rational(d.y) - Rational(a.y),
             m22 = Rational(d.z) - Rational(a.z);
    Rational det = det3<Rational>(m00, m01, m02, m10, m11, m12, m20, m21, m22);
    return det.sign();
}

int insphere_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
    Rational r[4][4];
    const Vec3* pts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
        Rational x = Rational(pts[i]->x) - Rational(e.x);
        Rational y = Rational(pts[i]->y) - Rational(e.y);
        Rational z = Rational(pts[i]->z) - Rational(e.z);
        r[i][0] = x;
        r[i][1] = y;
        r[i][2] = z;
        r[i][3] = x * x + y * y + z * z;
    }
    // Expand along the squared-norm column.
    Rational det = 0;
    for (int i = 0; i < 4; ++i) {
        int rows[3], t = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) rows[t++] = j;
        Rational minor = det3<Rational>(r[rows[0]][0], r[rows[0]][1], r[rows[0]][2],
                                        r[rows[1]][0], r[rows[1]][1], r[rows[1]][2],
                                        r[rows[2]][0], r[rows[2]][1], r[rows[2]][2]);
        if ((i % 2) == 0)
            det -= r[i][3] * minor;
        else
            det += r[i][3] * minor;
    }
    // det as assembled above is the 4x4 determinant with rows
    // [p-e, |p-e|^2]; for a positively oriented (a,b,c,d) that determinant
    // is negative when e is inside, so flip to make inside positive.
    return -det.sign();
}

}  // namespace

double orient3d_value(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Vec3 u = b - a, v = c - a, w = d - a;
    return det3<double>(u.x, u.y, u.z, v.x, v.y, v.z, w.x, w.y, w.z);
}

int orient3d_sign(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Vec3 u = b - a, v = c - a, w = d - a;
    double det = det3<double>(u.x, u.y, u.z, v.x, v.y, v.z, w.x, w.y, w.z);
    double perm = std::abs(u.x) * (std::abs(v.y * w.z) + std::abs(v.z * w.y)) +
                  std::abs(u.y) * (std::abs(v.x * w.z) + std::abs(v.z * w.x)) +
                  std::abs(u.z) * (std::abs(v.x * w.y) + std::abs(v.y * w.x));
    double bound = kOrient3dBound * perm;
    if (det > bound || -det > bound) return sign_of(det);
    if (bound == 0.0) return 0;  // all terms exactly zero
    return orient3d_exact(a, b, c, d);
}

int insphere_sign(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
    const Vec3* pts[4] = {&a, &b, &c, &d};
    double r[4][4], abs_r[4][4];
    for (int i = 0; i < 4; ++i) {
        Vec3 q = *pts[i] - e;
        r[i][0] = q.x;
        r[i][1] = q.y;
        r[i][2] = q.z;
        r[i][3] = dot(q, q);
        for (int j = 0; j < 4; ++j) abs_r[i][j] = std::abs(r[i][j]);
    }
    double det = 0.0, perm = 0.0;
    for (int i = 0; i < 4; ++i) {
        int rows[3], t = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) rows[t++] = j;
        double minor = det3<double>(r[rows[0]][0], r[rows[0]][1], r[rows[0]][2],
                                    r[rows[1]][0], r[rows[1]][1], r[rows[1]][2],
                                    r[rows[2]][0], r[rows[2]][1], r[rows[2]][2]);
        double abs_minor =
            abs_r[rows[0]][0] * (abs_r[rows[1]][1] * abs_r[rows[2]][2] +
                                 abs_r[rows[1]][2] * abs_r[rows[2]][1]) +
            abs_r[rows[0]][1] * (abs_r[rows[1]][0] * abs_r[rows[2]][2] +
                                 abs_r[rows[1]][2] * abs_r[rows[2]][0]) +
            abs_r[rows[0]][2] * (abs_r[rows[1]][0] * abs_r[rows[2]][1] +
                                 abs_r[rows[1]][1] * abs_r[rows[2]][0]);
        double term = r[i][3] * minor;
        det += (i % 2) == 0 ? -term : term;
        perm += abs_r[i][3] * abs_minor;
    }
    double bound = kInsphereBound * perm;
    if (det > bound || -det > bound) return -sign_of(det);
    if (bound == 0.0) return 0;
    return insphere_exact(a, b, c, d, e);
}

int orient2d_sign(double ax, double ay, double bx, double by, double cx, double cy) {
    double l = (bx - ax) * (cy - ay), r = (by - ay) * (cx - ax);
    double det = l - r;
    double bound = kOrient2dBound * (std::abs(l) + std::abs(r));
    if (det > bound || -det > bound) return sign_of(det);
    if (bound == 0.0) return 0;
    Rational rl = (Rational(bx) - Rational(ax)) * (Rational(cy) - Rational(ay));
    Rational rr = (Rational(by) - Rational(ay)) * (Rational(cx) - Rational(ax));
    Rational rdet = rl - rr;
    return rdet.sign();
}

int incircle2d_sign(double ax, double ay, double bx, double by, double cx, double cy,
                    double px, double py) {
    double adx = ax - px, ady = ay - py;
    double bdx = bx - px, bdy = by - py;
    double cdx = cx - px, cdy = cy - py;
    double ad2 = adx * adx + ady * ady;
    double bd2 = bdx * bdx + bdy * bdy;
    double cd2 = cdx * cdx + cdy * cdy;

    double det = ad2 * (bdx * cdy - bdy * cdx) - bd2 * (adx * cdy - ady * cdx) +
                 cd2 * (adx * bdy - ady * bdx);
    double perm = ad2 * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) +
                  bd2 * (std::abs(adx * cdy) + std::abs(ady * cdx)) +
                  cd2 * (std::abs(adx * bdy) + std::abs(ady * bdx));
    double bound = kIncircleBound * perm;
    if (det > bound || -det > bound) return sign_of(det);
    if (bound == 0.0) return 0;

    Rational Adx = Rational(ax) - Rational(px), Ady = Rational(ay) - Rational(py);
    Rational Bdx = Rational(bx) - Rational(px), Bdy = Rational(by) - Rational(py);
    Rational Cdx = Rational(cx) - Rational(px), Cdy = Rational(cy) - Rational(py);
    Rational Ad2 = Adx * Adx + Ady * Ady;
    Rational Bd2 = Bdx * Bdx + Bdy * Bdy;
    Rational Cd2 = Cdx * Cdx + Cdy * Cdy;
    Rational rdet = Ad2 * (Bdx * Cdy - Bdy * Cdx) - Bd2 * (Adx * Cdy - Ady * Cdx) +
                    Cd2 * (Adx * Bdy - Ady * Bdx);
    return rdet.sign();
}

}  // namespace vortsdf::geom
