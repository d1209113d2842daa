#include "qmeas/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

struct Cell {
    int i, j;
};

int cheb(Cell a, Cell b) { return std::max(std::abs(a.i - b.i), std::abs(a.j - b.j)); }

// Axis-aligned path a -> corner -> b, endpoints included once.  The Chebyshev
// distance to either endpoint is monotone along the walk, which keeps the
// corridor trims below a single contiguous run.
std::vector<Cell> l_path(Cell a, Cell b, bool vertical_first) {
    std::vector<Cell> path;
    if (vertical_first) {
        int sj = b.j >= a.j ? 1 : -1;
        for (int j = a.j; j != b.j + sj; j += sj) path.push_back({a.i, j});
        int si = b.i >= a.i ? 1 : -1;
        for (int i = a.i + si; i != b.i + si; i += si) path.push_back({i, b.j});
    } else {
        int si = b.i >= a.i ? 1 : -1;
        for (int i = a.i; i != b.i + si; i += si) path.push_back({i, a.j});
        int sj = b.j >= a.j ? 1 : -1;
        for (int j = a.j + sj; j != b.j + sj; j += sj) path.push_back({b.i, j});
    }
    return path;
}

int min_cheb_to(const std::vector<Cell>& path, Cell p) {
    int d = 1 << 29;
    for (Cell c : path) d = std::min(d, cheb(c, p));
    return d;
}

void stamp_ball(Bitmask& mask, const Grid& g, Cell c, int k) {
    for (int dj = -k; dj <= k; ++dj) {
        for (int di = -k; di <= k; ++di) {
            int i = c.i + di, j = c.j + dj;
            if (i >= 0 && i < g.n && j >= 0 && j < g.n) mask.set(g.index(i, j));
        }
    }
}

struct Corridor {
    std::vector<Cell> path;
    Bitmask u, v, full;
    int k;
};

std::optional<Corridor> build_corridor(const TopMeasure& m) {
    if (!m.two_valued() || m.is_measure()) return std::nullopt;
    std::vector<Point> pts = m.special_points();
    if (pts.size() != 3) return std::nullopt;

    const Grid& g = m.grid();
    std::array<Cell, 3> pc;
    for (int t = 0; t < 3; ++t) pc[t] = {g.cell_i(pts[t].x), g.cell_j(pts[t].y)};

    int k = std::clamp(g.n / 16, 4, 30);
    int guard = k + 4;

    std::vector<Cell> path = l_path(pc[0], pc[1], false);
    if (min_cheb_to(path, pc[2]) < guard) path = l_path(pc[0], pc[1], true);
    if (min_cheb_to(path, pc[2]) < guard)
        throw DegenerateConfig("witness corridor: third point too close to both paths");

    // Trim each corridor short of the opposite endpoint so it holds exactly
    // one of the two connected points, with a 4-cell moat past the dilation.
    int last = static_cast<int>(path.size()) - 1;
    int a_end = -1;
    while (a_end + 1 <= last && cheb(path[a_end + 1], pc[1]) >= guard) ++a_end;
    int b_start = last + 1;
    while (b_start - 1 >= 0 && cheb(path[b_start - 1], pc[0]) >= guard) --b_start;
    if (a_end < b_start)
        throw DegenerateConfig("witness corridor: points too close for overlapping corridors");

    Corridor cor{std::move(path), Bitmask(g.cells()), Bitmask(g.cells()), Bitmask(g.cells()), k};
    for (int a = 0; a <= a_end; ++a) stamp_ball(cor.u, g, cor.path[a], k);
    for (int b = b_start; b <= last; ++b) stamp_ball(cor.v, g, cor.path[b], k);
    cor.full = cor.u | cor.v;

    for (const Bitmask* b : {&cor.u, &cor.v})
        if (Region(g, RegionKind::Compact, *b).touches_frame())
            throw DegenerateConfig("witness corridor: points too close to the frame");
    return cor;
}

}  // namespace

std::optional<std::pair<Region, Region>> nonsubadditive_pair(const TopMeasure& m, RegionKind kind) {
    auto cor = build_corridor(m);
    if (!cor) return std::nullopt;
    return std::make_pair(Region(m.grid(), kind, cor->u), Region(m.grid(), kind, cor->v));
}

std::optional<PartitionPieces> majority_partition(const TopMeasure& m) {
    auto cor = build_corridor(m);
    if (!cor) return std::nullopt;
    const Grid& g = m.grid();

    Region u(g, RegionKind::Open, cor->u);
    Region v(g, RegionKind::Open, cor->v);

    // Unit plateau whose support stays inside the corridor union: core is the
    // half-width dilation of the path, the ramp spends the other half.
    int half = cor->k / 2;
    Bitmask core_mask(g.cells());
    for (Cell c : cor->path) stamp_ball(core_mask, g, c, half);
    CompactFunc s = CompactFunc::plateau(g, Region(g, RegionKind::Compact, core_mask), half, 1.0);

    // Split s by relative depth inside each corridor.  Depth is zero outside,
    // so each piece is supported in its own corridor; the pieces sum to s.
    std::vector<int> wu = u.complement().distance_from();
    std::vector<int> wv = v.complement().distance_from();
    std::vector<double> gs(g.cells(), 0.0), hs(g.cells(), 0.0);
    for (int idx = 0; idx < g.cells(); ++idx) {
        double sv = s.at_index(idx);
        if (sv == 0.0) continue;
        double den = wu[idx] + wv[idx];
        if (den <= 0.0) throw std::logic_error("witness partition: plateau escapes the corridors");
        gs[idx] = sv * wu[idx] / den;
        hs[idx] = sv * wv[idx] / den;
    }
    return PartitionPieces{u, v, CompactFunc::from_samples(g, std::move(gs)),
                           CompactFunc::from_samples(g, std::move(hs))};
}

}  // namespace qmeas
