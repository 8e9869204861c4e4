#include "vortsdf/geom/tetmesh.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "vortsdf/geom/predicates.hpp"

namespace vortsdf::geom {

namespace {

struct FaceKey {
    uint32_t a, b, c;  // sorted ascending
    bool operator==(const FaceKey& o) const { return a == o.a && b == o.b && c == o.c; }
};

struct FaceKeyHash {
    size_t operator()(const FaceKey& k) const {
        uint64_t h = k.a;
        h = h * 0x9e3779b97f4a7c15ull + k.b;
        h = h * 0x9e3779b97f4a7c15ull + k.c;
        h ^= h >> 29;
        return static_cast<size_t>(h * 0xbf58476d1ce4e5b9ull);
    }
};

FaceKey make_face_key(uint32_t a, uint32_t b, uint32_t c) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return {a, b, c};
}

}  // namespace

TetMesh TetMesh::build(std::span<const Vec3> positions,
                       std::vector<std::array<uint32_t, 4>> raw_tets) {
    TetMesh mesh;
    mesh.tets = std::move(raw_tets);

    const size_t nt = mesh.tets.size();
    for (auto& t : mesh.tets) {
        for (uint32_t v : t)
            if (v >= positions.size()) throw InputError("TetMesh: vertex index out of range");
        int s = orient3d_sign(positions[t[0]], positions[t[1]], positions[t[2]], positions[t[3]]);
        if (s == 0) throw NumericalError("TetMesh: degenerate (flat) tetrahedron");
        if (s < 0) std::swap(t[2], t[3]);
    }

    mesh.neighbors.assign(nt, {kNoNeighbor, kNoNeighbor, kNoNeighbor, kNoNeighbor});
    std::unordered_map<FaceKey, uint32_t, FaceKeyHash> open_faces;
    open_faces.reserve(nt * 2);
    for (uint32_t t = 0; t < nt; ++t) {
        for (int f = 0; f < 4; ++f) {
            auto fv = mesh.face_vertices(t, f);
            FaceKey key = make_face_key(fv[0], fv[1], fv[2]);
            auto it = open_faces.find(key);
            if (it == open_faces.end()) {
                open_faces.emplace(key, pack(t, f));
            } else {
                uint32_t other = it->second;
                if (other == kNoNeighbor)
                    throw InputError("TetMesh: non-manifold face shared by more than two tets");
                mesh.neighbors[t][f] = other;
                mesh.neighbors[unpack_tet(other)][unpack_slot(other)] = pack(t, f);
                it->second = kNoNeighbor;  // mark as fully matched
            }
        }
    }

    // Deduplicated edge list.
    std::vector<std::array<uint32_t, 2>> all_edges;
    all_edges.reserve(nt * 6);
    for (const auto& t : mesh.tets) {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                uint32_t a = t[i], b = t[j];
                if (a > b) std::swap(a, b);
                all_edges.push_back({a, b});
            }
    }
    std::sort(all_edges.begin(), all_edges.end());
    all_edges.erase(std::unique(all_edges.begin(), all_edges.end()), all_edges.end());
    mesh.edges = std::move(all_edges);

    mesh.vertex_tet.assign(positions.size(), kNoNeighbor);
    for (uint32_t t = 0; t < nt; ++t)
        for (uint32_t v : mesh.tets[t])
            if (mesh.vertex_tet[v] == kNoNeighbor) mesh.vertex_tet[v] = t;

    return mesh;
}

std::vector<uint32_t> TetMesh::incident_tets(uint32_t vertex) const {
    std::vector<uint32_t> result;
    if (vertex >= vertex_tet.size() || vertex_tet[vertex] == kNoNeighbor)
        throw InputError("TetMesh::incident_tets: vertex not part of any tet");
    // Flood fill across faces that contain the vertex; the star of a vertex
    // in a triangulated convex region is face-connected. Face f contains the
    // vertex exactly when the vertex does not sit at slot f.
    std::vector<uint32_t> stack{vertex_tet[vertex]};
    std::unordered_map<uint32_t, bool> seen;
    seen[vertex_tet[vertex]] = true;
    while (!stack.empty()) {
        uint32_t t = stack.back();
        stack.pop_back();
        result.push_back(t);
        for (int f = 0; f < 4; ++f) {
            if (tets[t][f] == vertex) continue;
            uint32_t ref = neighbors[t][f];
            if (ref == kNoNeighbor) continue;
            uint32_t nb = unpack_tet(ref);
            if (seen.count(nb)) continue;
            seen[nb] = true;
            stack.push_back(nb);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

void TetMesh::validate_against(std::span<const Vec3> positions) const {
    for (size_t t = 0; t < tets.size(); ++t) {
        const auto& tet = tets[t];
        if (orient3d_sign(positions[tet[0]], positions[tet[1]], positions[tet[2]],
                          positions[tet[3]]) <= 0)
            throw NumericalError("TetMesh: non-positive tet orientation");
        for (int f = 0; f < 4; ++f) {
            uint32_t ref = neighbors[t][f];
            if (ref == kNoNeighbor) continue;
            uint32_t nb = unpack_tet(ref);
            int slot = unpack_slot(ref);
            if (nb >= tets.size() || neighbors[nb][slot] != pack(static_cast<uint32_t>(t), f))
                throw NumericalError("TetMesh: asymmetric neighbor reference");
        }
    }
}

std::array<double, 4> barycentric(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3,
                                  const Vec3& p) {
    Vec3 e1 = v1 - v0, e2 = v2 - v0, e3 = v3 - v0;
    double det = dot(e1, cross(e2, e3));
    double scale = std::max({norm(e1), norm(e2), norm(e3)});
    if (std::abs(det) <= 1e-14 * scale * scale * scale)
        throw NumericalError("barycentric: degenerate tetrahedron");
    Vec3 r = p - v0;
    // Cramer's rule on [e1 e2 e3] w = r.
    double w1 = dot(r, cross(e2, e3)) / det;
    double w2 = dot(e1, cross(r, e3)) / det;
    double w3 = dot(e1, cross(e2, r)) / det;
    return {1.0 - w1 - w2 - w3, w1, w2, w3};
}

std::array<double, 3> triangle_barycentric(const Vec3& a, const Vec3& b, const Vec3& c,
                                           const Vec3& p) {
    Vec3 e0 = b - a, e1 = c - a, r = p - a;
    double d00 = dot(e0, e0), d01 = dot(e0, e1), d11 = dot(e1, e1);
    double r0 = dot(r, e0), r1 = dot(r, e1);
    double det = d00 * d11 - d01 * d01;
    if (det <= 0.0 || !std::isfinite(det))
        throw NumericalError("triangle_barycentric: degenerate triangle");
    double w1 = (d11 * r0 - d01 * r1) / det;
    double w2 = (d00 * r1 - d01 * r0) / det;
    return {1.0 - w1 - w2, w1, w2};
}

void dump_tets_ply(const std::string& path, std::span<const Vec3> positions, const TetMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw InputError("dump_tets_ply: cannot open " + path);
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << positions.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.tets.size() * 4 << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (const auto& p : positions) out << p.x << " " << p.y << " " << p.z << "\n";
    for (uint32_t t = 0; t < mesh.tets.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            auto fv = mesh.face_vertices(t, f);
            out << "3 " << fv[0] << " " << fv[1] << " " << fv[2] << "\n";
        }
}

}  // namespace vortsdf::geom
