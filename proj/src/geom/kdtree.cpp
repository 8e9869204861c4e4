#include "vortsdf/geom/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace vortsdf::geom {

namespace {

struct HeapEntry {
    double d2;
    int idx;
    // Max-heap on (d2, idx): the worst candidate sits on top. Ties in
    // distance are resolved toward the smaller index, matching a stable
    // brute-force sort.
    bool operator<(const HeapEntry& o) const {
        if (d2 != o.d2) return d2 < o.d2;
        return idx < o.idx;
    }
};

}  // namespace

KdTree::KdTree(std::span<const Vec3> points) : pts_(points.begin(), points.end()) {
    if (pts_.empty()) throw InputError("KdTree: empty point set");
    std::vector<int> idx(pts_.size());
    std::iota(idx.begin(), idx.end(), 0);
    nodes_.reserve(pts_.size());
    root_ = build(idx);
}

int KdTree::build(std::span<int> idx) {
    if (idx.empty()) return -1;
    Aabb box;
    for (int i : idx) box.expand(pts_[i]);
    Vec3 ext = box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;

    size_t mid = idx.size() / 2;
    std::nth_element(idx.begin(), idx.begin() + mid, idx.end(), [&](int a, int b) {
        if (pts_[a][axis] != pts_[b][axis]) return pts_[a][axis] < pts_[b][axis];
        return a < b;
    });

    int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{idx[mid], axis, -1, -1});
    int left = build(idx.subspan(0, mid));
    int right = build(idx.subspan(mid + 1));
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

void KdTree::knn(const Vec3& q, int k, std::vector<int>& out, int exclude) const {
    out.clear();
    if (k <= 0) throw InputError("KdTree::knn: k must be positive");
    size_t eligible = pts_.size() - (exclude >= 0 && exclude < static_cast<int>(pts_.size()) ? 1 : 0);
    if (static_cast<size_t>(k) > eligible)
        throw InputError("KdTree::knn: k exceeds number of eligible points");

    // Fixed-capacity max-heap of the k best candidates.
    std::vector<HeapEntry> heap;
    heap.reserve(k);

    auto visit = [&](int node_id, auto&& self) -> void {
        if (node_id < 0) return;
        const Node& n = nodes_[node_id];
        const Vec3& p = pts_[n.point];
        if (n.point != exclude) {
            HeapEntry e{dist2(q, p), n.point};
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(e);
                std::push_heap(heap.begin(), heap.end());
            } else if (e < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = e;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        double dax = q[n.axis] - p[n.axis];
        int near = dax <= 0.0 ? n.left : n.right;
        int far = dax <= 0.0 ? n.right : n.left;
        self(near, self);
        // Only prune when the splitting plane is strictly farther than the
        // current worst candidate; equal distance may hide a smaller index.
        if (static_cast<int>(heap.size()) < k || dax * dax <= heap.front().d2)
            self(far, self);
    };
    visit(root_, visit);

    std::sort_heap(heap.begin(), heap.end());
    out.resize(heap.size());
    for (size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].idx;
}

std::vector<int> KdTree::knn(const Vec3& q, int k, int exclude) const {
    std::vector<int> out;
    knn(q, k, out, exclude);
    return out;
}

int KdTree::nearest(const Vec3& q, int exclude) const {
    std::vector<int> out;
    knn(q, 1, out, exclude);
    return out[0];
}

KdTree::Table KdTree::neighbor_table(int k) const {
    Table table;
    table.k = k;
    table.idx.resize(pts_.size() * static_cast<size_t>(k));
    std::vector<int> row;
#pragma omp parallel for schedule(static) private(row)
    for (long i = 0; i < static_cast<long>(pts_.size()); ++i) {
        knn(pts_[i], k, row, static_cast<int>(i));
        std::copy(row.begin(), row.end(), table.idx.begin() + i * k);
    }
    return table;
}

}  // namespace vortsdf::geom
