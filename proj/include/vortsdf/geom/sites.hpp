#pragma once

#include <cstdint>
#include <vector>

#include "vortsdf/core.hpp"

namespace vortsdf::geom {

enum class SiteKind : uint8_t {
    free_site = 0,  // moved by CVT optimization, carries field values
    camera = 1,     // camera center, position pinned
};

// Generator points of one discretization level. Camera sites are part of the
// tetrahedral mesh (they seed ray marching) but are never moved.
struct SiteSet {
    std::vector<Vec3> positions;
    std::vector<SiteKind> kind;
    int level = 0;

    size_t size() const { return positions.size(); }

    void add(const Vec3& p, SiteKind k = SiteKind::free_site) {
        positions.push_back(p);
        kind.push_back(k);
    }

    bool is_camera(size_t i) const { return kind[i] == SiteKind::camera; }

    size_t camera_count() const {
        size_t n = 0;
        for (auto k : kind) n += (k == SiteKind::camera);
        return n;
    }

    Aabb bbox() const { return bounds_of(positions.data(), positions.size()); }

    void validate() const {
        if (positions.size() != kind.size())
            throw InputError("SiteSet: positions/kind length mismatch");
        for (const auto& p : positions)
            if (!is_finite(p)) throw InputError("SiteSet: non-finite site position");
        if (level < 0) throw InputError("SiteSet: negative level");
    }
};

}  // namespace vortsdf::geom
