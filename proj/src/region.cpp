#include "qmeas/region.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "qmeas/errors.hpp"

namespace qmeas {

void Bitmask::trim_tail() {
    int tail = cells_ & 63;
    if (tail && !w_.empty()) w_.back() &= (uint64_t(1) << tail) - 1;
}

int Bitmask::count() const {
    int c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
}

bool Bitmask::any() const {
    for (uint64_t w : w_)
        if (w) return true;
    return false;
}

bool Bitmask::all() const { return count() == cells_; }

Bitmask Bitmask::operator~() const {
    Bitmask r(cells_);
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] = ~w_[k];
    r.trim_tail();
    return r;
}

Bitmask Bitmask::operator&(const Bitmask& o) const {
    Bitmask r(cells_);
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & o.w_[k];
    return r;
}

Bitmask Bitmask::operator|(const Bitmask& o) const {
    Bitmask r(cells_);
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] | o.w_[k];
    return r;
}

Bitmask Bitmask::minus(const Bitmask& o) const {
    Bitmask r(cells_);
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & ~o.w_[k];
    return r;
}

bool Bitmask::is_subset_of(const Bitmask& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
        if (w_[k] & ~o.w_[k]) return false;
    return true;
}

bool Bitmask::intersects(const Bitmask& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
        if (w_[k] & o.w_[k]) return true;
    return false;
}

Region Region::full(const Grid& g, RegionKind kind) {
    Bitmask m(g.cells());
    for (int idx = 0; idx < g.cells(); ++idx) m.set(idx);
    return Region(g, kind, m);
}

namespace {

// Removes cells whose 3x3 neighborhood leaves the mask.  Out-of-grid
// neighbors count as inside, so the grid frame is not treated as a boundary.
Bitmask shave_boundary(const Grid& g, const Bitmask& m) {
    Bitmask r(g.cells());
    int n = g.n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!m.get(g.index(i, j))) continue;
            bool interior = true;
            for (int dj = -1; dj <= 1 && interior; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                    if (!m.get(g.index(ii, jj))) {
                        interior = false;
                        break;
                    }
                }
            }
            if (interior) r.set(g.index(i, j));
        }
    }
    return r;
}

}  // namespace

Region Region::rectangle(const Grid& g, RegionKind kind, double rx0, double ry0, double rx1,
                         double ry1) {
    Bitmask m(g.cells());
    for (int j = 0; j < g.n; ++j) {
        double cy = g.cell_cy(j);
        if (cy < ry0 || cy > ry1) continue;
        for (int i = 0; i < g.n; ++i) {
            double cx = g.cell_cx(i);
            if (cx >= rx0 && cx <= rx1) m.set(g.index(i, j));
        }
    }
    if (kind == RegionKind::Open) m = shave_boundary(g, m);
    return Region(g, kind, m);
}

Region Region::disk(const Grid& g, RegionKind kind, double cx, double cy, double r) {
    Bitmask m(g.cells());
    double r2 = r * r;
    for (int j = 0; j < g.n; ++j) {
        double dy = g.cell_cy(j) - cy;
        for (int i = 0; i < g.n; ++i) {
            double dx = g.cell_cx(i) - cx;
            if (dx * dx + dy * dy <= r2) m.set(g.index(i, j));
        }
    }
    if (kind == RegionKind::Open) m = shave_boundary(g, m);
    return Region(g, kind, m);
}

Region Region::unite(const Region& o) const {
    require_same_grid(grid_, o.grid_, "region union");
    if (kind_ != o.kind_) throw std::invalid_argument("region union: kinds differ");
    return Region(grid_, kind_, mask_ | o.mask_);
}

Region Region::intersect(const Region& o) const {
    require_same_grid(grid_, o.grid_, "region intersection");
    if (kind_ != o.kind_) throw std::invalid_argument("region intersection: kinds differ");
    return Region(grid_, kind_, mask_ & o.mask_);
}

Region Region::minus(const Region& o) const {
    require_same_grid(grid_, o.grid_, "region difference");
    return Region(grid_, kind_, mask_.minus(o.mask_));
}

bool Region::is_subset_of(const Region& o) const {
    require_same_grid(grid_, o.grid_, "region subset");
    return mask_.is_subset_of(o.mask_);
}

bool Region::intersects(const Region& o) const {
    require_same_grid(grid_, o.grid_, "region overlap");
    return mask_.intersects(o.mask_);
}

int label_components(const Grid& g, const Bitmask& mask, bool eight_connected,
                     std::vector<int32_t>& labels) {
    int n = g.n;
    labels.assign(g.cells(), -1);
    int next = 0;
    std::vector<int> stack;
    stack.reserve(256);
    for (int start = 0; start < g.cells(); ++start) {
        if (!mask.get(start) || labels[start] >= 0) continue;
        labels[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            int idx = stack.back();
            stack.pop_back();
            int i = idx % n, j = idx / n;
            auto visit = [&](int ii, int jj) {
                if (ii < 0 || ii >= n || jj < 0 || jj >= n) return;
                int t = jj * n + ii;
                if (mask.get(t) && labels[t] < 0) {
                    labels[t] = next;
                    stack.push_back(t);
                }
            };
            visit(i - 1, j);
            visit(i + 1, j);
            visit(i, j - 1);
            visit(i, j + 1);
            if (eight_connected) {
                visit(i - 1, j - 1);
                visit(i + 1, j - 1);
                visit(i - 1, j + 1);
                visit(i + 1, j + 1);
            }
        }
        ++next;
    }
    return next;
}

std::vector<Region> Region::components() const {
    std::vector<int32_t> labels;
    int count = label_components(grid_, mask_, kind_ == RegionKind::Open, labels);
    std::vector<Bitmask> masks(count, Bitmask(grid_.cells()));
    for (int idx = 0; idx < grid_.cells(); ++idx)
        if (labels[idx] >= 0) masks[labels[idx]].set(idx);
    std::vector<Region> out;
    out.reserve(count);
    for (auto& m : masks) out.emplace_back(grid_, kind_, std::move(m));
    return out;
}

int Region::component_count() const {
    std::vector<int32_t> labels;
    return label_components(grid_, mask_, kind_ == RegionKind::Open, labels);
}

bool Region::touches_frame() const {
    int n = grid_.n;
    for (int i = 0; i < n; ++i) {
        if (mask_.get(grid_.index(i, 0)) || mask_.get(grid_.index(i, n - 1))) return true;
    }
    for (int j = 0; j < n; ++j) {
        if (mask_.get(grid_.index(0, j)) || mask_.get(grid_.index(n - 1, j))) return true;
    }
    return false;
}

std::vector<Region> Region::holes() const {
    if (component_count() > 1) throw NotConnected("holes: region is not connected");
    // Complement components carry the opposite kind and connectivity.
    std::vector<int32_t> labels;
    Bitmask comp = ~mask_;
    int count = label_components(grid_, comp, kind_ == RegionKind::Compact, labels);
    std::vector<bool> frame(count, false);
    int n = grid_.n;
    auto mark = [&](int idx) {
        if (labels[idx] >= 0) frame[labels[idx]] = true;
    };
    for (int i = 0; i < n; ++i) {
        mark(grid_.index(i, 0));
        mark(grid_.index(i, n - 1));
    }
    for (int j = 0; j < n; ++j) {
        mark(grid_.index(0, j));
        mark(grid_.index(n - 1, j));
    }
    std::vector<Bitmask> masks(count, Bitmask(grid_.cells()));
    for (int idx = 0; idx < grid_.cells(); ++idx)
        if (labels[idx] >= 0 && !frame[labels[idx]]) masks[labels[idx]].set(idx);
    std::vector<Region> out;
    for (int c = 0; c < count; ++c)
        if (!frame[c]) out.emplace_back(grid_, opposite(kind_), std::move(masks[c]));
    return out;
}

Region Region::solid_hull() const {
    Bitmask m = mask_;
    for (const Region& h : holes()) m = m | h.mask();
    return Region(grid_, kind_, m);
}

Region Region::erode(int k) const {
    if (k <= 0) return *this;
    Bitmask cur = mask_;
    int n = grid_.n;
    for (int step = 0; step < k; ++step) {
        Bitmask next(grid_.cells());
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (!cur.get(grid_.index(i, j))) continue;
                bool keep = true;
                for (int dj = -1; dj <= 1 && keep; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        int ii = i + di, jj = j + dj;
                        if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                        if (!cur.get(grid_.index(ii, jj))) {
                            keep = false;
                            break;
                        }
                    }
                }
                if (keep) next.set(grid_.index(i, j));
            }
        }
        cur = next;
    }
    return Region(grid_, kind_, cur);
}

Region Region::dilate(int k) const {
    if (k <= 0) return *this;
    Bitmask cur = mask_;
    int n = grid_.n;
    for (int step = 0; step < k; ++step) {
        Bitmask next = cur;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (cur.get(grid_.index(i, j))) continue;
                bool join = false;
                for (int dj = -1; dj <= 1 && !join; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        int ii = i + di, jj = j + dj;
                        if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                        if (cur.get(grid_.index(ii, jj))) {
                            join = true;
                            break;
                        }
                    }
                }
                if (join) next.set(grid_.index(i, j));
            }
        }
        cur = next;
    }
    return Region(grid_, kind_, cur);
}

std::vector<int> Region::distance_from() const {
    // Multi-source BFS with Chebyshev metric: diagonal steps cost 1.
    int n = grid_.n;
    std::vector<int> dist(grid_.cells(), grid_.cells());
    std::vector<int> frontier, next;
    for (int idx = 0; idx < grid_.cells(); ++idx) {
        if (mask_.get(idx)) {
            dist[idx] = 0;
            frontier.push_back(idx);
        }
    }
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (int idx : frontier) {
            int i = idx % n, j = idx / n;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                    int t = jj * n + ii;
                    if (dist[t] > d) {
                        dist[t] = d;
                        next.push_back(t);
                    }
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

std::string Region::describe() const {
    int n = grid_.n;
    int i0 = n, j0 = n, i1 = -1, j1 = -1;
    for (int idx = 0; idx < grid_.cells(); ++idx) {
        if (!mask_.get(idx)) continue;
        int i = idx % n, j = idx / n;
        i0 = std::min(i0, i);
        j0 = std::min(j0, j);
        i1 = std::max(i1, i);
        j1 = std::max(j1, j);
    }
    const char* word = kind_ == RegionKind::Open ? "open" : "compact";
    char buf[96];
    if (i1 < 0)
        std::snprintf(buf, sizeof buf, "%s empty", word);
    else
        std::snprintf(buf, sizeof buf, "%s %d cells in [%d,%d]x[%d,%d]", word, mask_.count(), i0,
                      i1, j0, j1);
    return buf;
}

}  // namespace qmeas
