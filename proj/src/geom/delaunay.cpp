#include "vortsdf/geom/delaunay.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "vortsdf/geom/predicates.hpp"

namespace vortsdf::geom {

namespace {

constexpr uint32_t kInf = 0xffffffffu;
constexpr uint32_t kNone = 0xffffffffu;

struct BuildTet {
    std::array<uint32_t, 4> v;    // vertex ids, kInf marks the infinite vertex
    std::array<uint32_t, 4> nbr;  // packed (tet << 2 | slot)
    uint32_t stamp = 0;
    bool alive = true;

    int inf_slot() const {
        for (int s = 0; s < 4; ++s)
            if (v[s] == kInf) return s;
        return -1;
    }
};

std::array<uint32_t, 3> tet_face(const BuildTet& t, int slot) {
    return {t.v[kFaceVerts[slot][0]], t.v[kFaceVerts[slot][1]], t.v[kFaceVerts[slot][2]]};
}

struct EdgeKeyHash {
    size_t operator()(uint64_t k) const {
        uint64_t h = k * 0x9e3779b97f4a7c15ull;
        return static_cast<size_t>(h ^ (h >> 31));
    }
};

uint64_t edge_key(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
}

// Spreads the low 21 bits of x so consecutive bits land 3 apart.
uint64_t spread3(uint64_t x) {
    x &= 0x1fffffull;
    x = (x | (x << 32)) & 0x1f00000000ffffull;
    x = (x | (x << 16)) & 0x1f0000ff0000ffull;
    x = (x | (x << 8)) & 0x100f00f00f00f00full;
    x = (x | (x << 4)) & 0x10c30c30c30c30c3ull;
    x = (x | (x << 2)) & 0x1249249249249249ull;
    return x;
}

class Triangulation {
public:
    explicit Triangulation(std::span<const Vec3> points) : pts_(points) {}

    TetMesh run();

private:
    std::span<const Vec3> pts_;
    std::vector<BuildTet> tets_;
    uint32_t stamp_ = 0;
    uint32_t hint_ = kNone;  // an alive finite tet
    std::array<uint32_t, 4> consumed_{kNone, kNone, kNone, kNone};

    // scratch buffers reused across insertions
    std::vector<uint32_t> cavity_;
    std::vector<uint32_t> boundary_;  // packed (survivor << 2 | slot)
    std::vector<uint32_t> queue_;
    std::unordered_map<uint64_t, uint32_t, EdgeKeyHash> face_map_;

    const Vec3& pos(uint32_t v) const { return pts_[v]; }
    bool is_infinite(uint32_t t) const { return tets_[t].inf_slot() >= 0; }

    std::array<uint32_t, 3> face_of(uint32_t t, int slot) const { return tet_face(tets_[t], slot); }

    bool in_conflict(uint32_t t, const Vec3& p) const;
    uint32_t locate(const Vec3& p);
    void grow_cavity(uint32_t start, const Vec3& p);
    uint32_t fill_cavity(uint32_t point_id);
    uint32_t make_tet(uint32_t p, const std::array<uint32_t, 3>& f);
    void seed(const std::vector<uint32_t>& order);
    void insert(uint32_t point_id);
    void check_duplicate(uint32_t t, const Vec3& p) const;
};

bool Triangulation::in_conflict(uint32_t t, const Vec3& p) const {
    const BuildTet& tet = tets_[t];
    int k = tet.inf_slot();
    if (k < 0)
        return insphere_sign(pos(tet.v[0]), pos(tet.v[1]), pos(tet.v[2]), pos(tet.v[3]), p) > 0;
    // Infinite tet: conflict when p lies strictly beyond its hull facet. The
    // facet is stored pointing into the hull.
    auto f = tet_face(tet, k);
    int s = orient3d_sign(pos(f[0]), pos(f[1]), pos(f[2]), p);
    if (s != 0) return s < 0;
    // p coplanar with the facet: every sphere through the facet's
    // circumcircle assigns p the same power, so the finite tet behind the
    // facet decides.
    const BuildTet& fin = tets_[TetMesh::unpack_tet(tet.nbr[k])];
    return insphere_sign(pos(fin.v[0]), pos(fin.v[1]), pos(fin.v[2]), pos(fin.v[3]), p) > 0;
}

uint32_t Triangulation::locate(const Vec3& p) {
    uint32_t cur = hint_;
    size_t limit = tets_.size() * 4 + 64;
    for (size_t step = 0; step < limit; ++step) {
        const BuildTet& tet = tets_[cur];
        bool moved = false;
        for (int j = 0; j < 4; ++j) {
            int f = static_cast<int>((j + step) & 3);
            auto fv = tet_face(tet, f);
            if (orient3d_sign(pos(fv[0]), pos(fv[1]), pos(fv[2]), p) > 0) {
                uint32_t next = TetMesh::unpack_tet(tet.nbr[f]);
                if (is_infinite(next)) return next;  // strictly beyond a hull facet
                cur = next;
                moved = true;
                break;
            }
        }
        if (!moved) break;
        if (step + 1 == limit) cur = kNone;
    }
    if (cur != kNone) {
        check_duplicate(cur, p);
        if (in_conflict(cur, p)) return cur;
        // p touches the boundary of cur without being inside it (it sits on
        // hull facet planes; frequent with grid inputs). The conflict region
        // is nearby: breadth-first search outward from cur.
        ++stamp_;
        std::vector<uint32_t> fifo{cur};
        tets_[cur].stamp = stamp_;
        size_t head = 0, budget = 4096;
        while (head < fifo.size() && fifo.size() < budget) {
            uint32_t t = fifo[head++];
            if (in_conflict(t, p)) return t;
            for (int f = 0; f < 4; ++f) {
                uint32_t nb = TetMesh::unpack_tet(tets_[t].nbr[f]);
                if (tets_[nb].stamp != stamp_) {
                    tets_[nb].stamp = stamp_;
                    fifo.push_back(nb);
                }
            }
        }
    }
    // Deterministic fallback for pathological cases: scan everything.
    for (uint32_t t = 0; t < tets_.size(); ++t)
        if (tets_[t].alive && in_conflict(t, p)) return t;
    throw NumericalError("delaunay: point location failed");
}

void Triangulation::check_duplicate(uint32_t t, const Vec3& p) const {
    for (uint32_t v : tets_[t].v)
        if (v != kInf && pos(v) == p)
            throw InputError("delaunay: coincident sites (duplicate point)");
}

void Triangulation::grow_cavity(uint32_t start, const Vec3& p) {
    cavity_.clear();
    boundary_.clear();
    ++stamp_;
    tets_[start].stamp = stamp_;
    queue_.clear();
    queue_.push_back(start);
    while (!queue_.empty()) {
        uint32_t t = queue_.back();
        queue_.pop_back();
        cavity_.push_back(t);
        for (int f = 0; f < 4; ++f) {
            uint32_t ref = tets_[t].nbr[f];
            uint32_t nb = TetMesh::unpack_tet(ref);
            if (tets_[nb].stamp == stamp_) continue;
            if (in_conflict(nb, p)) {
                tets_[nb].stamp = stamp_;
                queue_.push_back(nb);
            } else {
                boundary_.push_back(ref);  // survivor side of the face
            }
        }
    }
}

// New tet over a cavity-boundary face. The face arrives in the survivor's
// FACE order; reversing it propagates the complex's consistent orientation,
// which keeps finite tets positively oriented and infinite-tet facets
// pointing into the hull with no geometric fixups. The star-shape property
// of the Bowyer-Watson cavity under exact predicates guarantees the finite
// case is strictly positive.
uint32_t Triangulation::make_tet(uint32_t p, const std::array<uint32_t, 3>& f) {
    BuildTet t;
    t.v = {p, f[0], f[2], f[1]};
    t.nbr = {kNone, kNone, kNone, kNone};
    if (t.inf_slot() < 0) {
        int s = orient3d_sign(pos(t.v[0]), pos(t.v[1]), pos(t.v[2]), pos(t.v[3]));
        if (s <= 0) throw NumericalError("delaunay: cavity fill lost orientation");
    }
    tets_.push_back(t);
    return static_cast<uint32_t>(tets_.size() - 1);
}

uint32_t Triangulation::fill_cavity(uint32_t point_id) {
    face_map_.clear();
    uint32_t first_finite = kNone;
    for (uint32_t ref : boundary_) {
        uint32_t survivor = TetMesh::unpack_tet(ref);
        int slot = TetMesh::unpack_slot(ref);
        uint32_t nt = make_tet(point_id, face_of(survivor, slot));
        BuildTet& n = tets_[nt];
        if (first_finite == kNone && n.inf_slot() < 0) first_finite = nt;
        // The boundary face is the face of n opposite the inserted point.
        int fn = -1;
        for (int s = 0; s < 4; ++s)
            if (n.v[s] == point_id) fn = s;
        n.nbr[fn] = TetMesh::pack(survivor, slot);
        tets_[survivor].nbr[slot] = TetMesh::pack(nt, fn);
        // Link new-new faces through the shared cavity-boundary edges.
        for (int s = 0; s < 4; ++s) {
            if (s == fn) continue;
            auto fv = tet_face(n, s);
            uint32_t e[2];
            int c = 0;
            for (uint32_t v : fv)
                if (v != point_id) e[c++] = v;
            uint64_t key = edge_key(e[0], e[1]);
            auto it = face_map_.find(key);
            if (it == face_map_.end()) {
                face_map_.emplace(key, TetMesh::pack(nt, s));
            } else {
                uint32_t oref = it->second;
                tets_[nt].nbr[s] = oref;
                tets_[TetMesh::unpack_tet(oref)].nbr[TetMesh::unpack_slot(oref)] =
                    TetMesh::pack(nt, s);
                face_map_.erase(it);
            }
        }
    }
    for (uint32_t t : cavity_) tets_[t].alive = false;
    if (!face_map_.empty()) throw NumericalError("delaunay: cavity boundary not closed");
    if (first_finite == kNone) throw NumericalError("delaunay: insertion created no finite tet");
    return first_finite;
}

void Triangulation::insert(uint32_t point_id) {
    const Vec3& p = pos(point_id);
    uint32_t t0 = locate(p);
    if (!is_infinite(t0)) check_duplicate(t0, p);
    grow_cavity(t0, p);
    hint_ = fill_cavity(point_id);
}

void Triangulation::seed(const std::vector<uint32_t>& order) {
    const size_t n = order.size();
    uint32_t s0 = order[0], s1 = kNone, s2 = kNone, s3 = kNone;
    size_t i1 = 0, i2 = 0;
    for (size_t i = 1; i < n; ++i)
        if (!(pos(order[i]) == pos(s0))) {
            s1 = order[i];
            i1 = i;
            break;
        }
    if (s1 == kNone) throw InputError("delaunay: all sites coincide");
    auto collinear = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
        return orient2d_sign(a.x, a.y, b.x, b.y, c.x, c.y) == 0 &&
               orient2d_sign(a.y, a.z, b.y, b.z, c.y, c.z) == 0 &&
               orient2d_sign(a.z, a.x, b.z, b.x, c.z, c.x) == 0;
    };
    for (size_t i = i1 + 1; i < n; ++i)
        if (!collinear(pos(s0), pos(s1), pos(order[i]))) {
            s2 = order[i];
            i2 = i;
            break;
        }
    if (s2 == kNone) throw InputError("delaunay: all sites collinear");
    for (size_t i = i2 + 1; i < n; ++i)
        if (orient3d_sign(pos(s0), pos(s1), pos(s2), pos(order[i])) != 0) {
            s3 = order[i];
            break;
        }
    if (s3 == kNone) throw InputError("delaunay: degenerate input (all sites coplanar)");

    std::array<uint32_t, 4> v = {s0, s1, s2, s3};
    if (orient3d_sign(pos(s0), pos(s1), pos(s2), pos(s3)) < 0) std::swap(v[2], v[3]);
    consumed_ = {s0, s1, s2, s3};

    // One finite seed tet plus four infinite tets, one per face.
    BuildTet t0;
    t0.v = v;
    t0.nbr = {kNone, kNone, kNone, kNone};
    tets_.push_back(t0);
    for (int f = 0; f < 4; ++f) {
        auto fv = face_of(0, f);
        // Reversed so the facet points into the hull from the infinite side.
        BuildTet it;
        it.v = {kInf, fv[0], fv[2], fv[1]};
        it.nbr = {kNone, kNone, kNone, kNone};
        tets_.push_back(it);
        uint32_t id = static_cast<uint32_t>(tets_.size() - 1);
        tets_[0].nbr[f] = TetMesh::pack(id, 0);
        tets_[id].nbr[0] = TetMesh::pack(0, f);
    }
    // Wire the infinite tets to each other: faces 1..3 of each contain kInf.
    std::unordered_map<uint64_t, uint32_t, EdgeKeyHash> emap;
    for (uint32_t t = 1; t <= 4; ++t) {
        for (int s = 1; s < 4; ++s) {
            auto fv = face_of(t, s);
            uint32_t e[2];
            int c = 0;
            for (uint32_t vv : fv)
                if (vv != kInf) e[c++] = vv;
            uint64_t key = edge_key(e[0], e[1]);
            auto itf = emap.find(key);
            if (itf == emap.end()) {
                emap.emplace(key, TetMesh::pack(t, s));
            } else {
                uint32_t oref = itf->second;
                tets_[t].nbr[s] = oref;
                tets_[TetMesh::unpack_tet(oref)].nbr[TetMesh::unpack_slot(oref)] =
                    TetMesh::pack(t, s);
            }
        }
    }
    hint_ = 0;
}

TetMesh Triangulation::run() {
    const size_t n = pts_.size();
    if (n < 4) throw InputError("delaunay: need at least 4 sites");
    for (const auto& p : pts_)
        if (!is_finite(p)) throw InputError("delaunay: non-finite site position");

    // Morton insertion order for walk locality.
    Aabb box = bounds_of(pts_.data(), n);
    Vec3 ext = box.extent();
    double inv[3];
    for (int a = 0; a < 3; ++a) inv[a] = ext[a] > 0 ? (2097151.0 / ext[a]) : 0.0;
    std::vector<std::pair<uint64_t, uint32_t>> keyed(n);
    for (size_t i = 0; i < n; ++i) {
        const Vec3 d = pts_[i] - box.lo;
        uint64_t mx = spread3(static_cast<uint64_t>(d.x * inv[0]));
        uint64_t my = spread3(static_cast<uint64_t>(d.y * inv[1]));
        uint64_t mz = spread3(static_cast<uint64_t>(d.z * inv[2]));
        keyed[i] = {mx | (my << 1) | (mz << 2), static_cast<uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<uint32_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = keyed[i].second;

    tets_.reserve(n * 8);
    seed(order);
    for (uint32_t id : order) {
        if (id == consumed_[0] || id == consumed_[1] || id == consumed_[2] || id == consumed_[3])
            continue;
        insert(id);
    }

    std::vector<std::array<uint32_t, 4>> finite;
    finite.reserve(tets_.size() / 2);
    for (const BuildTet& t : tets_)
        if (t.alive && t.inf_slot() < 0) finite.push_back(t.v);
    return TetMesh::build(pts_, std::move(finite));
}

}  // namespace

TetMesh delaunay(std::span<const Vec3> points) { return Triangulation(points).run(); }

}  // namespace vortsdf::geom
