// Three-point evaluation by two-sided component labeling.
//
// The mask is labeled under its kind's connectivity and the complement under
// the opposite connectivity, giving one node per component on either side.
// Adjacency between nodes is collected in a single grid scan, separating
// edge-sharing (4) from corner-only (diagonal) contacts.  For one connected
// mask component K the rule is
//
//   value(K) = 1  unless some component of the complement of K holds two of
//              the three points,
//
// where "complement of K" means everything else: the other mask components
// and the complement components, glued along their contacts.  A compact K
// has an open complement, so gluing uses 4-edges and diagonal edges; an open
// K has a closed complement, so gluing uses 4-edges only.  At most one
// complement component can hold two points, so value(K) is 0 or 1, and the
// total over mask components must land in {0, 1}.
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "qmeas/measure.hpp"
#include "qmeas/region.hpp"

namespace qmeas {

namespace {

// Breadth-first reachability between graph nodes, never entering `avoid`.
bool connected_avoiding(int from, int to, int avoid,
                        const std::vector<std::vector<int>>& adj) {
    if (from == to) return true;
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (w == avoid || seen[w]) continue;
            if (w == to) return true;
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    return false;
}

}  // namespace

double three_point_solid_decomposition(const Grid& g, const Bitmask& mask, RegionKind kind,
                                       const std::array<int, 3>& point_cells) {
    const int n = g.n;
    const bool mask_eight = (kind == RegionKind::Open);

    std::vector<int32_t> lm, lc;
    const int nm = label_components(g, mask, mask_eight, lm);
    const int nc = label_components(g, ~mask, !mask_eight, lc);
    const int total_nodes = nm + nc;

    auto node_of = [&](int idx) { return mask.get(idx) ? lm[idx] : nm + lc[idx]; };

    // Complement connectivity for the per-component queries: open complements
    // (compact kind) glue across diagonal contacts, closed complements do not.
    std::vector<std::set<int>> contacts(total_nodes);
    auto touch = [&](int a, int b) {
        if (a != b) {
            contacts[a].insert(b);
            contacts[b].insert(a);
        }
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int a = node_of(g.index(i, j));
            if (i + 1 < n) touch(a, node_of(g.index(i + 1, j)));
            if (j + 1 < n) touch(a, node_of(g.index(i, j + 1)));
            if (kind == RegionKind::Compact && j + 1 < n) {
                if (i + 1 < n) touch(a, node_of(g.index(i + 1, j + 1)));
                if (i - 1 >= 0) touch(a, node_of(g.index(i - 1, j + 1)));
            }
        }
    }
    std::vector<std::vector<int>> adj(total_nodes);
    for (int v = 0; v < total_nodes; ++v) adj[v].assign(contacts[v].begin(), contacts[v].end());

    const std::array<int, 3> pn = {node_of(point_cells[0]), node_of(point_cells[1]),
                                   node_of(point_cells[2])};

    int total = 0;
    for (int comp = 0; comp < nm; ++comp) {
        bool majority_outside = false;
        static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pr : pairs) {
            int a = pn[pr[0]], b = pn[pr[1]];
            if (a == comp || b == comp) continue;
            if (connected_avoiding(a, b, comp, adj)) {
                majority_outside = true;
                break;
            }
        }
        if (!majority_outside) total += 1;
    }
    if (total != 0 && total != 1)
        throw std::logic_error("three_point decomposition: total outside {0, 1}");
    return static_cast<double>(total);
}

}  // namespace qmeas
