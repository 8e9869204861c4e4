#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vortsdf/core.hpp"
#include "vortsdf/geom/sites.hpp"

namespace vortsdf::geom {

// Face f of a tetrahedron is the face opposite vertex slot f. kFaceVerts[f]
// lists the three vertex slots of that face ordered so the face normal
// points away from slot f when the tetrahedron is positively oriented.
inline constexpr int kFaceVerts[4][3] = {{1, 2, 3}, {2, 0, 3}, {3, 0, 1}, {0, 2, 1}};

// Compact adjacency-linked tetrahedral complex. Each neighbor reference
// packs (tet id, face slot in that tet) into one 32-bit word; boundary
// faces carry the all-ones sentinel.
struct TetMesh {
    static constexpr uint32_t kNoNeighbor = 0xffffffffu;

    std::vector<std::array<uint32_t, 4>> tets;       // 4 vertex indices, positively oriented
    std::vector<std::array<uint32_t, 4>> neighbors;  // packed (tet << 2 | slot) per face
    std::vector<std::array<uint32_t, 2>> edges;      // deduplicated, i < j
    std::vector<uint32_t> vertex_tet;                // one incident tet per vertex (sentinel if none)

    size_t tet_count() const { return tets.size(); }

    static uint32_t pack(uint32_t tet, int slot) { return (tet << 2) | static_cast<uint32_t>(slot); }
    static uint32_t unpack_tet(uint32_t ref) { return ref >> 2; }
    static int unpack_slot(uint32_t ref) { return static_cast<int>(ref & 3u); }

    std::array<uint32_t, 3> face_vertices(uint32_t tet, int slot) const {
        const auto& t = tets[tet];
        return {t[kFaceVerts[slot][0]], t[kFaceVerts[slot][1]], t[kFaceVerts[slot][2]]};
    }

    int slot_of_vertex(uint32_t tet, uint32_t v) const {
        const auto& t = tets[tet];
        for (int s = 0; s < 4; ++s)
            if (t[s] == v) return s;
        return -1;
    }

    // Assembles a mesh from a raw tet list: fixes orientation to positive,
    // links symmetric neighbor references, flags boundary faces, collects
    // deduplicated edges and one incident tet per vertex. Throws on
    // non-manifold faces (shared by more than two tets) and degenerate tets.
    static TetMesh build(std::span<const Vec3> positions,
                         std::vector<std::array<uint32_t, 4>> raw_tets);

    // All tetrahedra incident to the given vertex, ascending ids. Walks the
    // adjacency from vertex_tet, so it relies on a face-connected star.
    std::vector<uint32_t> incident_tets(uint32_t vertex) const;

    void validate_against(std::span<const Vec3> positions) const;
};

// Barycentric coordinates of p with respect to a tetrahedron. Weights sum
// to one and reproduce p as an affine combination. Throws NumericalError
// when the tetrahedron is degenerate.
std::array<double, 4> barycentric(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3,
                                  const Vec3& p);

// Barycentric coordinates of p on the plane of triangle (a, b, c); p is
// assumed to lie on (or numerically near) that plane.
std::array<double, 3> triangle_barycentric(const Vec3& a, const Vec3& b, const Vec3& c,
                                           const Vec3& p);

// Debug dump: every tet exploded into its 4 faces, ASCII PLY.
void dump_tets_ply(const std::string& path, std::span<const Vec3> positions, const TetMesh& mesh);

}  // namespace vortsdf::geom
