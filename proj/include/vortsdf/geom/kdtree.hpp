#pragma once

#include <span>
#include <vector>

#include "vortsdf/core.hpp"

namespace vortsdf::geom {

// Balanced KD-tree over a frozen snapshot of point positions. Queries return
// exactly what a brute-force scan would, including tie-breaking by index.
class KdTree {
public:
    KdTree() = default;
    explicit KdTree(std::span<const Vec3> points);

    size_t size() const { return pts_.size(); }

    // k nearest points to q, sorted by ascending (distance, index).
    // `exclude` removes one point (pass the query's own index when the query
    // is a member of the set). Throws InputError when k exceeds the number of
    // eligible points.
    std::vector<int> knn(const Vec3& q, int k, int exclude = -1) const;
    void knn(const Vec3& q, int k, std::vector<int>& out, int exclude = -1) const;

    int nearest(const Vec3& q, int exclude = -1) const;

    const std::vector<Vec3>& points() const { return pts_; }

    // k neighbors for every tree point, self excluded; row-major n x k.
    struct Table {
        int k = 0;
        std::vector<int> idx;
        std::span<const int> row(size_t i) const {
            return std::span<const int>(idx).subspan(i * k, k);
        }
        size_t rows() const { return k > 0 ? idx.size() / k : 0; }
    };
    Table neighbor_table(int k) const;

private:
    struct Node {
        int point = -1;     // index into pts_
        int axis = 0;
        int left = -1;
        int right = -1;
    };

    int build(std::span<int> idx);

    std::vector<Vec3> pts_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace vortsdf::geom
