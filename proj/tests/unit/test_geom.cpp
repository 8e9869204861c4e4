#include <map>
#include <set>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vortsdf/geom/delaunay.hpp"
#include "vortsdf/geom/kdtree.hpp"
#include "vortsdf/geom/predicates.hpp"
#include "vortsdf/geom/tetmesh.hpp"

using namespace vortsdf;
using namespace vortsdf::geom;

TEST_CASE("kdtree: cube corners answer NN queries exactly") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    KdTree tree{std::span<const Vec3>(pts)};
    for (int i = 0; i < 8; ++i) {
        Vec3 q = pts[i] + Vec3{0.01, -0.02, 0.015};
        CHECK(tree.nearest(q) == i);
    }
}

TEST_CASE("kdtree: singleton always returns the site") {
    std::vector<Vec3> pts{{1, 2, 3}};
    KdTree tree{std::span<const Vec3>(pts)};
    CHECK(tree.nearest({100, -5, 2}) == 0);
    CHECK_THROWS_AS(tree.knn({0, 0, 0}, 2), InputError);
}

TEST_CASE("kdtree: empty input rejected") {
    std::vector<Vec3> pts;
    CHECK_THROWS_AS(KdTree{std::span<const Vec3>(pts)}, InputError);
}

TEST_CASE("kdtree: knn on a line with self-exclusion") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({double(i), 0, 0});
    KdTree tree{std::span<const Vec3>(pts)};
    auto nn = tree.knn(pts[2], 2, /*exclude=*/2);
    REQUIRE(nn.size() == 2);
    CHECK(std::set<int>(nn.begin(), nn.end()) == std::set<int>{1, 3});

    auto all = tree.knn(pts[2], 4, 2);
    CHECK(all.size() == 4);
    CHECK(std::set<int>(all.begin(), all.end()) == std::set<int>{0, 1, 3, 4});
}

TEST_CASE("kdtree: 10k random sites match brute force for k=24") {
    auto pts = oracles::random_cloud(10000, 42);
    KdTree tree{std::span<const Vec3>(pts)};
    CounterRng rng(7);
    for (int q = 0; q < 100; ++q) {
        Vec3 query{rng.uniform(q, 0), rng.uniform(q, 1), rng.uniform(q, 2)};
        auto got = tree.knn(query, 24);
        auto want = oracles::brute_knn(pts, query, 24);
        CHECK(got == want);
    }
    // member queries with self-exclusion
    for (int q = 0; q < 20; ++q) {
        int i = static_cast<int>(rng.index(pts.size(), q, 3));
        CHECK(tree.knn(pts[i], 24, i) == oracles::brute_knn(pts, pts[i], 24, i));
    }
}

TEST_CASE("predicates: orientation and insphere basics") {
    Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0}, d{0, 0, 1};
    CHECK(orient3d_sign(a, b, c, d) == 1);
    CHECK(orient3d_sign(a, c, b, d) == -1);
    CHECK(orient3d_sign(a, b, c, {0.5, 0.5, 0.0}) == 0);

    CHECK(insphere_sign(a, b, c, d, {0.25, 0.25, 0.25}) == 1);
    CHECK(insphere_sign(a, b, c, d, {5, 5, 5}) == -1);
    // cospherical: the mirror corner of the unit tet's circumsphere
    CHECK(insphere_sign(a, b, c, d, {1, 1, 1}) == 0);
}

TEST_CASE("predicates: exact fallback on adversarial near-degenerate input") {
    // Points on a plane with one displaced by the smallest representable step.
    Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
    Vec3 d{0.5, 0.5, 0.0};
    CHECK(orient3d_sign(a, b, c, d) == 0);
    d.z = std::nextafter(0.0, 1.0);
    CHECK(orient3d_sign(a, b, c, d) == 1);
    d.z = std::nextafter(0.0, -1.0);
    CHECK(orient3d_sign(a, b, c, d) == -1);
}

TEST_CASE("barycentric: vertices, centroid, random interior reconstruction") {
    Vec3 v0{0.3, -0.2, 0.1}, v1{1.4, 0.2, -0.3}, v2{0.1, 1.2, 0.4}, v3{-0.2, 0.3, 1.5};
    auto w = barycentric(v0, v1, v2, v3, v0);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(w[1]) < 1e-12);

    Vec3 centroid = (v0 + v1 + v2 + v3) * 0.25;
    w = barycentric(v0, v1, v2, v3, centroid);
    for (int i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx(0.25).epsilon(1e-10));

    CounterRng rng(3);
    double diam = std::max({dist(v0, v1), dist(v0, v2), dist(v0, v3), dist(v1, v2), dist(v1, v3),
                            dist(v2, v3)});
    for (int k = 0; k < 50; ++k) {
        double r0 = rng.uniform(k, 0), r1 = rng.uniform(k, 1), r2 = rng.uniform(k, 2),
               r3 = rng.uniform(k, 3);
        double s = r0 + r1 + r2 + r3;
        Vec3 p = (v0 * r0 + v1 * r1 + v2 * r2 + v3 * r3) / s;
        auto bw = barycentric(v0, v1, v2, v3, p);
        double sum = bw[0] + bw[1] + bw[2] + bw[3];
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        for (double wi : bw) {
            CHECK(wi >= -1e-12);
            CHECK(wi <= 1.0 + 1e-12);
        }
        Vec3 rec = v0 * bw[0] + v1 * bw[1] + v2 * bw[2] + v3 * bw[3];
        CHECK(dist(rec, p) <= 1e-10 * diam);
    }

    CHECK_THROWS_AS(barycentric(v0, v0, v2, v3, centroid), NumericalError);
}

TEST_CASE("delaunay: unit tet plus centroid splits into 4 tets") {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.25, 0.25, 0.25}};
    auto mesh = delaunay(std::span<const Vec3>(pts));
    CHECK(mesh.tet_count() == 4);
    mesh.validate_against(std::span<const Vec3>(pts));
}

TEST_CASE("delaunay: 4 points give a single tet") {
    std::vector<Vec3> pts{{0, 0, 0}, {2, 0.1, 0}, {0.3, 1.7, -0.2}, {0.2, 0.4, 2.2}};
    auto mesh = delaunay(std::span<const Vec3>(pts));
    REQUIRE(mesh.tet_count() == 1);
    for (int f = 0; f < 4; ++f) CHECK(mesh.neighbors[0][f] == TetMesh::kNoNeighbor);
}

TEST_CASE("delaunay: degenerate inputs rejected") {
    std::vector<Vec3> coplanar{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.3, 0}};
    CHECK_THROWS_AS(delaunay(std::span<const Vec3>(coplanar)), InputError);

    std::vector<Vec3> dup{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    CHECK_THROWS_AS(delaunay(std::span<const Vec3>(dup)), InputError);

    std::vector<Vec3> three{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_AS(delaunay(std::span<const Vec3>(three)), InputError);
}

TEST_CASE("delaunay: 200 random points satisfy the empty circumsphere property") {
    auto pts = oracles::random_cloud(200, 11);
    auto mesh = delaunay(std::span<const Vec3>(pts));
    mesh.validate_against(std::span<const Vec3>(pts));

    Aabb box = bounds_of(pts.data(), pts.size());
    double tol = 1e-9 * box.diagonal();
    for (const auto& t : mesh.tets) {
        auto sph = oracles::circumsphere(pts[t[0]], pts[t[1]], pts[t[2]], pts[t[3]]);
        REQUIRE(sph.has_value());
        double r = std::sqrt(sph->radius2);
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i == t[0] || i == t[1] || i == t[2] || i == t[3]) continue;
            CHECK(dist(pts[i], sph->center) >= r - tol);
        }
    }
}

TEST_CASE("delaunay: exactly cospherical grid is handled deterministically") {
    // 3x3x3 integer grid: heavily cospherical configuration.
    std::vector<Vec3> pts;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) pts.push_back({double(x), double(y), double(z)});
    auto mesh1 = delaunay(std::span<const Vec3>(pts));
    auto mesh2 = delaunay(std::span<const Vec3>(pts));
    mesh1.validate_against(std::span<const Vec3>(pts));
    CHECK(mesh1.tets == mesh2.tets);

    // weak Delaunay: no point strictly inside any circumsphere
    for (const auto& t : mesh1.tets) {
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i == t[0] || i == t[1] || i == t[2] || i == t[3]) continue;
            CHECK(insphere_sign(pts[t[0]], pts[t[1]], pts[t[2]], pts[t[3]], pts[i]) <= 0);
        }
    }

    // total volume equals the hull volume (covers the cube)
    double vol = 0;
    for (const auto& t : mesh1.tets)
        vol += orient3d_value(pts[t[0]], pts[t[1]], pts[t[2]], pts[t[3]]) / 6.0;
    CHECK(vol == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("build_adjacency: single tet has 4 boundary faces") {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    auto mesh = TetMesh::build(std::span<const Vec3>(pts), {{0, 1, 2, 3}});
    for (int f = 0; f < 4; ++f) CHECK(mesh.neighbors[0][f] == TetMesh::kNoNeighbor);
    CHECK(mesh.edges.size() == 6);
}

TEST_CASE("build_adjacency: two glued tets list each other exactly once") {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    auto mesh = TetMesh::build(std::span<const Vec3>(pts), {{0, 1, 2, 3}, {1, 2, 3, 4}});
    int links01 = 0;
    for (int f = 0; f < 4; ++f) {
        if (mesh.neighbors[0][f] != TetMesh::kNoNeighbor) {
            CHECK(TetMesh::unpack_tet(mesh.neighbors[0][f]) == 1);
            ++links01;
        }
    }
    CHECK(links01 == 1);
    mesh.validate_against(std::span<const Vec3>(pts));
}

TEST_CASE("build_adjacency: non-manifold face rejected") {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}};
    CHECK_THROWS_AS(
        TetMesh::build(std::span<const Vec3>(pts), {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}}),
        InputError);
}

TEST_CASE("build_adjacency: symmetry and face counts on a random Delaunay") {
    auto pts = oracles::random_cloud(200, 5);
    auto mesh = delaunay(std::span<const Vec3>(pts));
    mesh.validate_against(std::span<const Vec3>(pts));  // includes symmetry

    // Independent face-hash count: every interior face shared by exactly 2.
    std::map<std::array<uint32_t, 3>, int> faces;
    for (const auto& t : mesh.tets)
        for (int f = 0; f < 4; ++f) {
            std::array<uint32_t, 3> key{t[kFaceVerts[f][0]], t[kFaceVerts[f][1]],
                                        t[kFaceVerts[f][2]]};
            std::sort(key.begin(), key.end());
            faces[key]++;
        }
    size_t interior = 0, boundary = 0;
    for (auto& [k, n] : faces) {
        REQUIRE(n <= 2);
        (n == 2 ? interior : boundary)++;
    }
    CHECK(interior * 2 + boundary == mesh.tet_count() * 4);

    size_t sentinel_faces = 0;
    for (const auto& nb : mesh.neighbors)
        for (uint32_t ref : nb) sentinel_faces += (ref == TetMesh::kNoNeighbor);
    CHECK(sentinel_faces == boundary);
}

TEST_CASE("incident_tets matches brute-force incidence scan") {
    auto pts = oracles::random_cloud(120, 9);
    auto mesh = delaunay(std::span<const Vec3>(pts));
    for (uint32_t v = 0; v < pts.size(); v += 7) {
        std::vector<uint32_t> want;
        for (uint32_t t = 0; t < mesh.tet_count(); ++t)
            for (uint32_t tv : mesh.tets[t])
                if (tv == v) want.push_back(t);
        std::sort(want.begin(), want.end());
        CHECK(mesh.incident_tets(v) == want);
    }
}
