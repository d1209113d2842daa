// Grids, bitmask regions, cell functions, generator curves, and the symbolic
// product-space types.  Expected values come from direct cell arithmetic.
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qmeas/errors.hpp"
#include "qmeas/func.hpp"
#include "qmeas/grid.hpp"
#include "qmeas/region.hpp"
#include "qmeas/rng.hpp"
#include "qmeas/tensor.hpp"

using namespace qmeas;

namespace {

// Mask with each cell kept independently with probability p.
Bitmask random_mask(const Grid& g, uint64_t seed, double p) {
    Rng rng(seed);
    Bitmask m(g.cells());
    for (int idx = 0; idx < g.cells(); ++idx)
        if (rng.uniform() < p) m.set(idx);
    return m;
}

}  // namespace

TEST_CASE("grid cell geometry and index mapping") {
    Grid g = Grid::unit_square(32);
    CHECK(g.n == 32);
    CHECK(g.cells() == 1024);
    CHECK(g.hx() == doctest::Approx(1.0 / 32).epsilon(1e-15));
    CHECK(g.hy() == doctest::Approx(1.0 / 32).epsilon(1e-15));
    CHECK(g.h() == g.hx());
    CHECK(g.area() == doctest::Approx(1.0));
    CHECK(g.cell_area() == doctest::Approx(1.0 / 1024));

    // Every cell center maps back to its own index.
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            CHECK(g.cell_of(g.cell_cx(i), g.cell_cy(j)) == g.index(i, j));

    // Out-of-rectangle points clamp to the frame cells.
    CHECK(g.cell_i(-5.0) == 0);
    CHECK(g.cell_i(5.0) == g.n - 1);
    CHECK(g.cell_j(-5.0) == 0);
    CHECK(g.cell_j(5.0) == g.n - 1);
    CHECK(g.contains(0.5, 0.5));
    CHECK_FALSE(g.contains(1.5, 0.5));

    Point q = g.at_fraction(0.25, 0.75);
    CHECK(q.x == doctest::Approx(0.25));
    CHECK(q.y == doctest::Approx(0.75));

    // Anisotropic rectangle: h() is the larger cell side.
    Grid r(-1.0, 3.0, 2.0, 4.0, 16);
    CHECK(r.hx() == doctest::Approx(4.0 / 16));
    CHECK(r.hy() == doctest::Approx(2.0 / 16));
    CHECK(r.h() == doctest::Approx(4.0 / 16));
    CHECK(r.area() == doctest::Approx(8.0));
    CHECK(r.cell_of(-1.0 + 0.5 * r.hx(), 2.0 + 0.5 * r.hy()) == 0);
    CHECK(g == Grid::unit_square(32));
    CHECK(g != r);
}

TEST_CASE("grid rejects degenerate rectangles and coarse resolutions") {
    CHECK_THROWS_AS(Grid(1.0, 1.0, 0.0, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 2.0, 1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 0.0, 1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(require_same_grid(Grid::unit_square(16), Grid::unit_square(32), "op"),
                    GridMismatch);
}

TEST_CASE("bitmask boolean algebra") {
    Grid g = Grid::unit_square(24);
    Bitmask a = random_mask(g, 11, 0.4);
    Bitmask b = random_mask(g, 12, 0.6);

    CHECK((~(a | b)) == ((~a) & (~b)));
    CHECK((~(a & b)) == ((~a) | (~b)));
    CHECK(a.minus(b) == (a & ~b));
    CHECK((a.minus(b) | (a & b)) == a);
    CHECK_FALSE(a.minus(b).intersects(b));
    CHECK((a & b).is_subset_of(a));
    CHECK(a.is_subset_of(a | b));
    CHECK(a.count() + b.count() == (a | b).count() + (a & b).count());
    CHECK((~a).count() == g.cells() - a.count());

    Bitmask e(g.cells());
    CHECK_FALSE(e.any());
    CHECK((~e).all());
    Bitmask one(g.cells());
    one.set(g.index(3, 5));
    CHECK(one.count() == 1);
    CHECK(one.get(g.index(3, 5)));
    one.clear(g.index(3, 5));
    CHECK_FALSE(one.any());
}

TEST_CASE("rectangle raster keeps cells whose center lies in the box") {
    Grid g = Grid::unit_square(32);
    double rx0 = 0.2, ry0 = 0.3, rx1 = 0.7, ry1 = 0.8;
    Region rc = Region::rectangle(g, RegionKind::Compact, rx0, ry0, rx1, ry1);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            bool in = g.cell_cx(i) >= rx0 && g.cell_cx(i) <= rx1 && g.cell_cy(j) >= ry0 &&
                      g.cell_cy(j) <= ry1;
            CHECK(rc.contains_cell(i, j) == in);
        }
    CHECK(rc.kind() == RegionKind::Compact);

    // The open variant drops exactly the cells with a neighbor outside.
    Region ro = Region::rectangle(g, RegionKind::Open, rx0, ry0, rx1, ry1);
    CHECK(ro.kind() == RegionKind::Open);
    CHECK(ro.same_set(rc.erode(1)));
    CHECK(ro.cell_count() < rc.cell_count());

    Region dc = Region::disk(g, RegionKind::Compact, 0.5, 0.5, 0.25);
    Region od = Region::disk(g, RegionKind::Open, 0.5, 0.5, 0.25);
    CHECK(od.same_set(dc.erode(1)));
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double dx = g.cell_cx(i) - 0.5, dy = g.cell_cy(j) - 0.5;
            CHECK(dc.contains_cell(i, j) == (dx * dx + dy * dy <= 0.25 * 0.25));
        }
}

TEST_CASE("complement flips the kind and involutes") {
    Grid g = Grid::unit_square(24);
    Region r(g, RegionKind::Compact, random_mask(g, 21, 0.5));
    Region c = r.complement();
    CHECK(c.kind() == RegionKind::Open);
    CHECK(c.cell_count() == g.cells() - r.cell_count());
    CHECK_FALSE(c.intersects(r.with_kind(RegionKind::Open)));
    Region cc = c.complement();
    CHECK(cc.kind() == RegionKind::Compact);
    CHECK(cc.same_set(r));
    CHECK(r.unite(cc).same_set(r));

    CHECK(Region::empty(g, RegionKind::Open).complement().is_full());
    CHECK(Region::full(g, RegionKind::Compact).complement().empty_mask());
}

TEST_CASE("set operations agree with mask algebra") {
    Grid g = Grid::unit_square(24);
    Region a(g, RegionKind::Compact, random_mask(g, 31, 0.45));
    Region b(g, RegionKind::Compact, random_mask(g, 32, 0.45));

    CHECK(a.unite(b).mask() == (a.mask() | b.mask()));
    CHECK(a.intersect(b).mask() == (a.mask() & b.mask()));
    CHECK(a.minus(b).mask() == a.mask().minus(b.mask()));
    CHECK(a.intersect(b).is_subset_of(a));
    CHECK(a.is_subset_of(a.unite(b)));
    CHECK(a.intersects(b) == a.mask().intersects(b.mask()));

    // Mixed kinds are rejected; with_kind re-labels without moving cells.
    Region bo = b.with_kind(RegionKind::Open);
    CHECK(bo.same_set(b));
    CHECK_THROWS_AS(a.unite(bo), std::invalid_argument);
    CHECK_THROWS_AS(a.intersect(bo), std::invalid_argument);
    Region other(Grid::unit_square(16), RegionKind::Compact,
                 Bitmask(Grid::unit_square(16).cells()));
    CHECK_THROWS_AS(a.unite(other), GridMismatch);
}

TEST_CASE("components partition the mask and follow the kind connectivity") {
    Grid g = Grid::unit_square(24);

    // Two cells touching only at a corner: separate compact components,
    // one open component.
    Bitmask diag(g.cells());
    diag.set(g.index(5, 5));
    diag.set(g.index(6, 6));
    CHECK(Region(g, RegionKind::Compact, diag).component_count() == 2);
    CHECK(Region(g, RegionKind::Open, diag).component_count() == 1);

    Region blobs = Region::disk(g, RegionKind::Compact, 0.25, 0.25, 0.12)
                       .unite(Region::disk(g, RegionKind::Compact, 0.75, 0.72, 0.15));
    auto parts = blobs.components();
    CHECK(parts.size() == 2);
    int total = 0;
    for (const auto& p : parts) {
        CHECK(p.component_count() == 1);
        CHECK(p.is_subset_of(blobs));
        total += p.cell_count();
    }
    CHECK(total == blobs.cell_count());
    CHECK_FALSE(parts[0].intersects(parts[1]));

    CHECK(Region::empty(g, RegionKind::Compact).component_count() == 0);
    CHECK(Region::full(g, RegionKind::Open).component_count() == 1);
}

TEST_CASE("solid hull fills exactly the holes") {
    Grid g = Grid::unit_square(32);
    Region outer = Region::disk(g, RegionKind::Compact, 0.5, 0.5, 0.35);
    Region inner = Region::disk(g, RegionKind::Compact, 0.5, 0.5, 0.15);
    Region ring = outer.minus(inner);
    CHECK(ring.component_count() == 1);

    auto holes = ring.holes();
    REQUIRE(holes.size() == 1);
    CHECK(holes[0].same_set(inner));
    CHECK(holes[0].kind() == opposite(ring.kind()));
    CHECK_FALSE(holes[0].touches_frame());
    CHECK(ring.solid_hull().same_set(ring.unite(holes[0].with_kind(ring.kind()))));
    CHECK(ring.solid_hull().same_set(outer));

    // Solid regions report no holes and equal their own hull.
    CHECK(outer.holes().empty());
    CHECK(outer.solid_hull().same_set(outer));

    Region two = Region::disk(g, RegionKind::Compact, 0.25, 0.25, 0.1)
                     .unite(Region::disk(g, RegionKind::Compact, 0.75, 0.75, 0.1));
    CHECK_THROWS_AS(two.solid_hull(), NotConnected);
    CHECK_THROWS_AS(two.holes(), NotConnected);
}

TEST_CASE("morphology: erode and dilate are monotone and the frame holds") {
    Grid g = Grid::unit_square(24);
    Region r = Region::rectangle(g, RegionKind::Compact, 0.25, 0.25, 0.75, 0.75);
    CHECK(r.erode(1).is_subset_of(r));
    CHECK(r.is_subset_of(r.dilate(1)));
    CHECK(r.erode(2).same_set(r.erode(1).erode(1)));
    CHECK(r.dilate(2).same_set(r.dilate(1).dilate(1)));
    CHECK(r.erode(0).same_set(r));
    CHECK(r.dilate(0).same_set(r));

    // A rectangle loses one full ring per erosion step.
    int side = 0;
    for (int i = 0; i < g.n; ++i)
        if (r.contains_cell(i, g.n / 2)) ++side;
    int side1 = 0;
    for (int i = 0; i < g.n; ++i)
        if (r.erode(1).contains_cell(i, g.n / 2)) ++side1;
    CHECK(side1 == side - 2);

    // Cells beyond the frame count as inside, so the full region is stable.
    CHECK(Region::full(g, RegionKind::Compact).erode(3).is_full());
    Region corner = Region::rectangle(g, RegionKind::Compact, 0.0, 0.0, 0.2, 0.2);
    CHECK(corner.touches_frame());
    CHECK(corner.erode(1).contains_cell(0, 0));
}

TEST_CASE("distance field is zero on the mask and steps by one ring") {
    Grid g = Grid::unit_square(16);
    Region r = Region::rectangle(g, RegionKind::Compact, 0.4, 0.4, 0.6, 0.6);
    auto dist = r.distance_from();
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            int best = g.cells();
            for (int jj = 0; jj < g.n; ++jj)
                for (int ii = 0; ii < g.n; ++ii)
                    if (r.contains_cell(ii, jj))
                        best = std::min(best, std::max(std::abs(ii - i), std::abs(jj - j)));
            CHECK(dist[g.index(i, j)] == best);
        }
    auto none = Region::empty(g, RegionKind::Compact).distance_from();
    CHECK(none[0] == g.cells());
}

TEST_CASE("plateau functions ramp linearly off the core") {
    Grid g = Grid::unit_square(24);
    Region core = Region::disk(g, RegionKind::Compact, 0.5, 0.5, 0.2);
    int ramp = 3;
    double h = 1.5;
    CompactFunc f = CompactFunc::plateau(g, core, ramp, h);

    CHECK(f.support().same_set(core.dilate(ramp)));
    CHECK(f.support().kind() == RegionKind::Compact);
    CHECK(f.sup_norm() == doctest::Approx(h));
    CHECK(f.nonnegative());

    auto dist = core.distance_from();
    for (int idx = 0; idx < g.cells(); ++idx) {
        int d = dist[idx];
        double want = d <= ramp ? h * (1.0 - d / double(ramp + 1)) : 0.0;
        CHECK(f.at_index(idx) == doctest::Approx(want).epsilon(1e-14));
    }

    // Zero ramp is the scaled indicator of the core.
    CompactFunc ind = CompactFunc::plateau(g, core, 0, 2.0);
    for (int idx = 0; idx < g.cells(); ++idx)
        CHECK(ind.at_index(idx) == (core.contains_index(idx) ? 2.0 : 0.0));
    CHECK_THROWS_AS(CompactFunc::plateau(g, core, -1, 1.0), std::invalid_argument);
}

TEST_CASE("function arithmetic and the positive part split") {
    Grid g = Grid::unit_square(16);
    CompactFunc x = CompactFunc::coordinate_x(g);
    CompactFunc y = CompactFunc::coordinate_y(g, 0.5);

    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            CHECK(x.at_cell(i, j) == doctest::Approx(g.cell_cx(i)));
            CHECK(y.at_cell(i, j) == doctest::Approx(g.cell_cy(j) - 0.5));
        }

    CompactFunc s = x.add(y.scaled(-2.0));
    CompactFunc m = x.multiply(y);
    for (int idx = 0; idx < g.cells(); ++idx) {
        CHECK(s.at_index(idx) ==
              doctest::Approx(x.at_index(idx) - 2.0 * y.at_index(idx)).epsilon(1e-14));
        CHECK(m.at_index(idx) ==
              doctest::Approx(x.at_index(idx) * y.at_index(idx)).epsilon(1e-14));
    }

    // f = f+ - f- with disjoint supports and nonnegative halves.
    CompactFunc fp = y.positive_part(), fn = y.negative_part();
    CHECK(fp.nonnegative());
    CHECK(fn.nonnegative());
    CHECK_FALSE(fp.support().intersects(fn.support()));
    for (int idx = 0; idx < g.cells(); ++idx)
        CHECK(fp.at_index(idx) - fn.at_index(idx) == doctest::Approx(y.at_index(idx)));

    CHECK(y.min_sample() == doctest::Approx(g.cell_cy(0) - 0.5));
    CHECK(y.max_sample() == doctest::Approx(g.cell_cy(g.n - 1) - 0.5));
    CHECK(y.sup_norm() == doctest::Approx(0.5 - 0.5 * g.hy()));

    // Lipschitz constant of a coordinate is 1 at cell-difference scale.
    CHECK(x.lipschitz() == doctest::Approx(1.0).epsilon(1e-9));

    // Point lookup interpolates between cell centers, so a linear function
    // is reproduced exactly in the interior and samples are hit at centers.
    CHECK(x.at(0.37, 0.62) == doctest::Approx(0.37).epsilon(1e-13));
    CHECK(x.at(g.cell_cx(5), g.cell_cy(9)) == x.at_cell(5, 9));
    CHECK_THROWS_AS(x.at(1.2, 0.5), OutOfDomain);
}

TEST_CASE("superlevel sets are open and antitone in the threshold") {
    Grid g = Grid::unit_square(24);
    Region core = Region::disk(g, RegionKind::Compact, 0.5, 0.5, 0.25);
    CompactFunc f = CompactFunc::plateau(g, core, 4, 1.0);

    Region s1 = f.superlevel(0.2);
    Region s2 = f.superlevel(0.6);
    CHECK(s1.kind() == RegionKind::Open);
    CHECK(s2.is_subset_of(s1));
    for (int idx = 0; idx < g.cells(); ++idx)
        CHECK(s1.contains_index(idx) == (f.at_index(idx) > 0.2));

    CHECK(f.superlevel(f.sup_norm() + 1.0).empty_mask());
    CHECK(f.superlevel(-1.0).is_full());
}

TEST_CASE("generator curves pass through zero and compose exactly") {
    CHECK_THROWS_AS(PhiCurve({-1.0, 0.0, 1.0}, {-1.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhiCurve({0.5, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhiCurve({-1.0, 1.0, 0.5}, {-1.0, 1.0, 0.5}), std::invalid_argument);

    PhiCurve id = PhiCurve::identity(-2.0, 2.0);
    CHECK(id(0.7) == doctest::Approx(0.7));
    CHECK(id(0.0) == 0.0);
    CHECK_THROWS_AS(id(3.0), DomainMismatch);

    PhiCurve sq = PhiCurve::sample([](double s) { return s * s; }, -2.0, 2.0, 128);
    PhiCurve mix = sq.add(id.scaled(-3.0));
    Rng rng(77);
    for (int t = 0; t < 64; ++t) {
        double s = rng.uniform(-2.0, 2.0);
        CHECK(mix(s) == doctest::Approx(sq(s) - 3.0 * id(s)).epsilon(1e-12));
    }
    CHECK(mix(0.0) == 0.0);

    // Exact composition: evaluation of the composed curve equals the nested
    // evaluation at every probe.
    PhiCurve half = PhiCurve::scaled_identity(0.5, -2.0, 2.0);
    PhiCurve comp = sq.compose_with(half);
    for (int t = 0; t < 64; ++t) {
        double s = rng.uniform(-2.0, 2.0);
        CHECK(comp(s) == doctest::Approx(sq(half(s))).epsilon(1e-12));
    }
}

TEST_CASE("curve composition and cellwise composition commute") {
    Grid g = Grid::unit_square(16);
    CompactFunc f = CompactFunc::coordinate_x(g).add(CompactFunc::coordinate_y(g).scaled(0.5));
    PhiCurve psi = PhiCurve::sample([](double s) { return s * s; }, -0.5, 2.5, 96);
    PhiCurve phi = PhiCurve::sample([](double s) { return s / (1.0 + std::abs(s)); }, -1.0, 7.0,
                                    96);

    CompactFunc nested = compose(phi, compose(psi, f));
    CompactFunc direct = compose(phi.compose_with(psi), f);
    for (int idx = 0; idx < g.cells(); ++idx)
        CHECK(nested.at_index(idx) == doctest::Approx(direct.at_index(idx)).epsilon(1e-12));

    // The sample range of f, plus 0 for its zero cells, must sit inside the
    // curve domain; curve domains must bracket 0 at construction.
    PhiCurve narrow = PhiCurve::identity(-0.25, 0.25);
    CHECK_THROWS_AS(compose(narrow, f), DomainMismatch);
    CHECK_THROWS_AS(PhiCurve::identity(0.5, 2.0), std::invalid_argument);
}

TEST_CASE("product regions slice by mask algebra") {
    Grid gx = Grid::unit_square(16);
    Grid gy = Grid::unit_square(24);
    Region r1 = Region::rectangle(gx, RegionKind::Compact, 0.1, 0.1, 0.5, 0.9);
    Region s1 = Region::rectangle(gy, RegionKind::Compact, 0.2, 0.3, 0.8, 0.6);
    Region r2 = Region::disk(gx, RegionKind::Compact, 0.7, 0.6, 0.2);
    Region s2 = Region::rectangle(gy, RegionKind::Compact, 0.5, 0.5, 0.95, 0.95);

    ProductRegion a = ProductRegion::product(r1, s1);
    ProductRegion b = ProductRegion::product(r2, s2);
    ProductRegion u = a.unite(b);
    CHECK(u.terms().size() == 2);
    CHECK(u.kind() == RegionKind::Compact);

    // Section of a union is the union of the sections; a term contributes
    // exactly when its Y factor holds the point.
    for (int j = 0; j < gy.n; ++j) {
        Point py{0.5, gy.cell_cy(j)};
        Region want = Region::empty(gx, RegionKind::Compact);
        if (s1.contains_point(py)) want = want.unite(r1);
        if (s2.contains_point(py)) want = want.unite(r2);
        Region got = u.section_at_y(py);
        CHECK(got.same_set(want));
        CHECK(got.kind() == RegionKind::Compact);
    }

    // X sections mirror the construction.
    for (int i = 0; i < gx.n; ++i) {
        double x = gx.cell_cx(i);
        Region want = Region::empty(gy, RegionKind::Compact);
        if (r1.contains_point(x, 0.5)) want = want.unite(s1);
        if (r2.contains_point(x, 0.5)) want = want.unite(s2);
        CHECK(u.section_at_x(Point{x, 0.5}).same_set(want));
    }

    // Membership agrees with the sliced sets.
    Rng rng(99);
    for (int t = 0; t < 128; ++t) {
        Point px{rng.uniform(), rng.uniform()};
        Point py{rng.uniform(), rng.uniform()};
        bool direct = (r1.contains_point(px) && s1.contains_point(py)) ||
                      (r2.contains_point(px) && s2.contains_point(py));
        CHECK(u.contains(px, py) == direct);
        CHECK(u.contains(px, py) == u.section_at_y(py).contains_point(px));
    }

    CHECK_THROWS_AS(u.section_at_y(Point{0.5, 4.0}), OutOfDomain);
    CHECK(ProductRegion::full(gx, gy, RegionKind::Open).contains(Point{0.3, 0.3}, Point{0.7, 0.7}));
    CHECK_FALSE(ProductRegion::empty(gx, gy, RegionKind::Open)
                    .contains(Point{0.3, 0.3}, Point{0.7, 0.7}));
}

TEST_CASE("product complement flips kind and slices to complements") {
    Grid gx = Grid::unit_square(16);
    Grid gy = Grid::unit_square(16);
    ProductRegion a =
        ProductRegion::product(Region::rectangle(gx, RegionKind::Compact, 0.1, 0.2, 0.6, 0.7),
                               Region::rectangle(gy, RegionKind::Compact, 0.3, 0.1, 0.9, 0.5))
            .unite(ProductRegion::product(
                Region::disk(gx, RegionKind::Compact, 0.7, 0.7, 0.18),
                Region::rectangle(gy, RegionKind::Compact, 0.4, 0.6, 0.8, 0.9)));

    ProductRegion c = a.complement();
    CHECK(c.kind() == RegionKind::Open);
    for (int j = 0; j < gy.n; ++j)
        for (int i = 0; i < gy.n; i += 3) {
            Point py = gy.cell_center(i, j);
            Region want = a.section_at_y(py).complement();
            Region got = c.section_at_y(py);
            CHECK(got.same_set(want));
            CHECK(got.kind() == RegionKind::Open);
        }

    Rng rng(101);
    for (int t = 0; t < 64; ++t) {
        Point px{rng.uniform(), rng.uniform()};
        Point py{rng.uniform(), rng.uniform()};
        CHECK(c.contains(px, py) == !a.contains(px, py));
    }
}

TEST_CASE("tensor sections are exact coefficient combinations") {
    Grid gx = Grid::unit_square(16);
    Grid gy = Grid::unit_square(24);
    CompactFunc g1 = CompactFunc::coordinate_x(gx);
    CompactFunc h1 = CompactFunc::plateau(
        gy, Region::rectangle(gy, RegionKind::Compact, 0.2, 0.2, 0.8, 0.6), 2, 1.0);
    CompactFunc g2 = CompactFunc::plateau(
        gx, Region::disk(gx, RegionKind::Compact, 0.4, 0.6, 0.2), 3, 2.0);
    CompactFunc h2 = CompactFunc::coordinate_y(gy, 0.25);

    TensorFunc f = TensorFunc::tensor(g1, h1).add(TensorFunc::tensor(g2, h2));
    CHECK(f.terms().size() == 2);

    for (int j = 0; j < gy.n; ++j) {
        Point py = gy.cell_center(12, j);
        CompactFunc sec = f.section_at_y(py);
        double c1 = h1.at_cell(12, j), c2 = h2.at_cell(12, j);
        for (int idx = 0; idx < gx.cells(); ++idx)
            CHECK(sec.at_index(idx) ==
                  doctest::Approx(c1 * g1.at_index(idx) + c2 * g2.at_index(idx)).epsilon(1e-13));

        // Coefficient tuples rebuild the same section.
        auto coef = f.y_coefficients(gy.index(12, j));
        REQUIRE(coef.size() == 2);
        CHECK(coef[0] == doctest::Approx(c1));
        CHECK(coef[1] == doctest::Approx(c2));
        CompactFunc rebuilt = f.combine_x(coef);
        for (int idx = 0; idx < gx.cells(); ++idx)
            CHECK(rebuilt.at_index(idx) == doctest::Approx(sec.at_index(idx)).epsilon(1e-13));
    }

    // Identities are exact at cell centers, where interpolation returns the
    // stored sample.
    Rng rng(202);
    TensorFunc fs = f.scaled(-1.5);
    TensorFunc ff = f.multiply(f);
    CHECK(ff.terms().size() == 4);
    for (int t = 0; t < 96; ++t) {
        int xi = rng.uniform_int(0, gx.cells() - 1);
        int yi = rng.uniform_int(0, gy.cells() - 1);
        Point px = gx.cell_center(xi % gx.n, xi / gx.n);
        Point py = gy.cell_center(yi % gy.n, yi / gy.n);
        double direct = g1.at_index(xi) * h1.at_index(yi) + g2.at_index(xi) * h2.at_index(yi);
        CHECK(f.at(px, py) == doctest::Approx(direct).epsilon(1e-13));
        CHECK(f.section_at_x(px).at_index(yi) == doctest::Approx(direct).epsilon(1e-13));
        CHECK(fs.at(px, py) == doctest::Approx(-1.5 * direct).epsilon(1e-12));
        CHECK(ff.at(px, py) == doctest::Approx(direct * direct).epsilon(1e-12));
    }

    CHECK(f.sup_norm_exact() <= f.sup_norm_bound() + 1e-12);
    double seen = 0.0;
    for (int yi = 0; yi < gy.cells(); ++yi)
        for (int xi = 0; xi < gx.cells(); ++xi)
            seen = std::max(seen, std::abs(g1.at_index(xi) * h1.at_index(yi) +
                                           g2.at_index(xi) * h2.at_index(yi)));
    CHECK(f.sup_norm_exact() == doctest::Approx(seen).epsilon(1e-12));
}

TEST_CASE("section profile partitions the Y cells into equal-section classes") {
    Grid gx = Grid::unit_square(16);
    Grid gy = Grid::unit_square(16);
    ProductRegion a =
        ProductRegion::product(Region::rectangle(gx, RegionKind::Compact, 0.1, 0.1, 0.4, 0.9),
                               Region::rectangle(gy, RegionKind::Compact, 0.1, 0.2, 0.7, 0.8))
            .unite(ProductRegion::product(
                Region::rectangle(gx, RegionKind::Compact, 0.5, 0.3, 0.9, 0.7),
                Region::rectangle(gy, RegionKind::Compact, 0.4, 0.5, 0.9, 0.95)));

    SectionProfile prof(a);
    Bitmask covered(gy.cells());
    for (const auto& cls : prof.classes()) {
        CHECK_FALSE(covered.intersects(cls.y_cells));
        covered = covered | cls.y_cells;

        // Every cell of a class slices to the class section.
        int probes = 0;
        for (int idx = 0; idx < gy.cells() && probes < 6; ++idx) {
            if (!cls.y_cells.get(idx)) continue;
            ++probes;
            Point py = gy.cell_center(idx % gy.n, idx / gy.n);
            CHECK(a.section_at_y(py).same_set(cls.section));
            for (size_t i = 0; i < a.terms().size(); ++i) {
                bool in = a.terms()[i].sy.contains_point(py);
                CHECK(bool(cls.membership >> i & 1) == in);
            }
        }
        CHECK(probes > 0);
    }
    CHECK(covered.all());

    // Selection rebuilds the Y set of any membership predicate.
    Region sel = prof.select(
        [](const SectionProfile::Class& c) { return c.section.mask().any(); },
        RegionKind::Compact);
    for (int j = 0; j < gy.n; ++j)
        for (int i = 0; i < gy.n; i += 2) {
            Point py = gy.cell_center(i, j);
            CHECK(sel.contains_point(py) == a.section_at_y(py).mask().any());
        }
}
