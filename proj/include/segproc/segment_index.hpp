#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "segproc/geometry.hpp"

namespace segproc {

// Uniform cell grid over segment centers. Cell size is at least `reach`, the
// maximum center distance of an intersecting pair, so intersection queries
// only need the 3x3 cell neighborhood. Centers are expected inside the
// window; stray points are clamped to the boundary cells.
class SegmentIndex {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    SegmentIndex(const RectWindow& w, double reach, bool periodic = false)
        : window_(w), periodic_(periodic) {
        nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(w.width / std::max(reach, 1e-9)));
        ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(w.height / std::max(reach, 1e-9)));
        nx_ = std::min<std::size_t>(nx_, 4096);
        ny_ = std::min<std::size_t>(ny_, 4096);
        // the 3x3 neighborhood visits each cell once only when the grid is
        // at least 3 wide; degrade to a single cell (full scan) otherwise
        if (periodic_ && nx_ < 3) nx_ = 1;
        if (periodic_ && ny_ < 3) ny_ = 1;
        cells_.resize(nx_ * ny_);
    }

    std::size_t size() const { return segments_.size(); }
    const Segment& segment(std::size_t id) const { return segments_[id]; }
    const std::vector<Segment>& segments() const { return segments_; }

    void insert(const Segment& s) {
        const std::size_t c = cell_index(s.center);
        segments_.push_back(s);
        cell_of_.push_back(c);
        cells_[c].push_back(segments_.size() - 1);
    }

    void remove(std::size_t id) {
        detach(id);
        const std::size_t last = segments_.size() - 1;
        if (id != last) {
            segments_[id] = segments_[last];
            cell_of_[id] = cell_of_[last];
            auto& cell = cells_[cell_of_[last]];
            *std::find(cell.begin(), cell.end(), last) = id;
        }
        segments_.pop_back();
        cell_of_.pop_back();
    }

    void replace(std::size_t id, const Segment& s) {
        const std::size_t c = cell_index(s.center);
        if (c != cell_of_[id]) {
            auto& old_cell = cells_[cell_of_[id]];
            old_cell.erase(std::find(old_cell.begin(), old_cell.end(), id));
            cells_[c].push_back(id);
            cell_of_[id] = c;
        }
        segments_[id] = s;
    }

    int hits(const Segment& u, std::size_t skip = npos) const {
        const auto [cx, cy] = cell_coords(u.center);
        int n = 0;
        if (periodic_) {
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    const std::size_t gx = (cx + nx_ + static_cast<std::size_t>(dx + 1) - 1) % nx_;
                    const std::size_t gy = (cy + ny_ + static_cast<std::size_t>(dy + 1) - 1) % ny_;
                    if (nx_ == 1 && dx != 0) continue;
                    if (ny_ == 1 && dy != 0) continue;
                    for (std::size_t id : cells_[gy * nx_ + gx])
                        if (id != skip && intersects_torus(u, segments_[id], window_)) ++n;
                }
            return n;
        }
        const std::size_t x0 = cx > 0 ? cx - 1 : 0, x1 = std::min(cx + 1, nx_ - 1);
        const std::size_t y0 = cy > 0 ? cy - 1 : 0, y1 = std::min(cy + 1, ny_ - 1);
        for (std::size_t gx = x0; gx <= x1; ++gx)
            for (std::size_t gy = y0; gy <= y1; ++gy)
                for (std::size_t id : cells_[gy * nx_ + gx])
                    if (id != skip && intersects(u, segments_[id])) ++n;
        return n;
    }

private:
    void detach(std::size_t id) {
        auto& cell = cells_[cell_of_[id]];
        cell.erase(std::find(cell.begin(), cell.end(), id));
    }

    std::pair<std::size_t, std::size_t> cell_coords(const Point2& p) const {
        const double fx = (p.x - window_.lower_left.x) / window_.width;
        const double fy = (p.y - window_.lower_left.y) / window_.height;
        const auto cx = std::min(nx_ - 1, static_cast<std::size_t>(std::max(0.0, fx) * nx_));
        const auto cy = std::min(ny_ - 1, static_cast<std::size_t>(std::max(0.0, fy) * ny_));
        return {cx, cy};
    }

    std::size_t cell_index(const Point2& p) const {
        const auto [cx, cy] = cell_coords(p);
        return cy * nx_ + cx;
    }

    RectWindow window_;
    bool periodic_ = false;
    std::size_t nx_ = 1, ny_ = 1;
    std::vector<Segment> segments_;
    std::vector<std::size_t> cell_of_;
    std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace segproc
