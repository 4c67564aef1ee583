#include "xyzca/rg_decoder.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "xyzca/errors.h"

namespace xyzca {

namespace {

constexpr auto kBlack = Sublattice::black;
constexpr auto kWhite = Sublattice::white;

std::size_t circular_diff(std::size_t a, std::size_t b, std::size_t n) {
    return (a + n - b) % n;
}

// Shortest arc covering every coordinate: start after the largest gap.
std::pair<std::size_t, std::size_t> circular_span(std::vector<std::size_t> coords, std::size_t n) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    std::size_t m = coords.size();
    if (m == 1) {
        return {coords[0], 1};
    }
    std::size_t best_gap = 0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < m; k++) {
        std::size_t gap = circular_diff(coords[(k + 1) % m], coords[k], n);
        if (k + 1 == m) {
            gap = coords[0] + n - coords[k];
        }
        if (gap > best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }
    return {coords[(best_k + 1) % m], n - best_gap + 1};
}

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            // Smaller index as root keeps component order deterministic.
            if (b < a) {
                std::swap(a, b);
            }
            parent[b] = a;
        }
    }
};

TorusBox bounding_box(const LatticeDims &dims, const std::vector<Defect> &defects) {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    for (const auto &d : defects) {
        cols.push_back(d.i);
        rows.push_back(d.j);
    }
    auto [i0, w] = circular_span(std::move(cols), dims.L);
    auto [j0, h] = circular_span(std::move(rows), dims.H);
    return {i0, j0, w, h};
}

// Incremental GF(2) row echelon form for banded systems with two right-hand
// sides. Each stored row remembers the word range it occupies.
class BandedSolver {
   public:
    explicit BandedSolver(std::size_t unknowns)
        : n_(unknowns), stride_(words_for_bits(unknowns)), pivot_of_(unknowns, kNone) {
    }

    void add_equation(const std::vector<std::size_t> &cols, int rhs) {
        std::size_t r = lo_.size();
        bits_.resize(bits_.size() + stride_, 0);
        std::size_t lo = stride_;
        std::size_t hi = 0;
        for (auto c : cols) {
            bits_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
            lo = std::min(lo, c >> 6);
            hi = std::max(hi, c >> 6);
        }
        lo_.push_back(lo);
        hi_.push_back(cols.empty() ? 0 : hi + 1);
        rhs_.push_back(rhs);
        reduce(r);
    }

    bool consistent(int which) const {
        return !(inconsistent_ & (1 << which));
    }

    std::vector<bool> solve(int which) const {
        std::vector<bool> x(n_, false);
        std::vector<std::uint64_t> xw(stride_, 0);
        for (std::size_t c = n_; c-- > 0;) {
            std::size_t r = pivot_of_[c];
            if (r == kNone) {
                continue;
            }
            std::uint64_t acc = 0;
            for (std::size_t k = lo_[r]; k < hi_[r]; k++) {
                acc ^= bits_[r * stride_ + k] & xw[k];
            }
            bool v = ((rhs_[r] >> which) & 1) ^ (std::popcount(acc) & 1);
            if (v) {
                x[c] = true;
                xw[c >> 6] |= std::uint64_t{1} << (c & 63);
            }
        }
        return x;
    }

   private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    void reduce(std::size_t r) {
        while (true) {
            std::size_t lead = kNone;
            for (std::size_t k = lo_[r]; k < hi_[r]; k++) {
                std::uint64_t w = bits_[r * stride_ + k];
                if (w != 0) {
                    lead = (k << 6) + std::countr_zero(w);
                    lo_[r] = k;
                    break;
                }
            }
            if (lead == kNone) {
                inconsistent_ |= rhs_[r];
                return;
            }
            std::size_t p = pivot_of_[lead];
            if (p == kNone) {
                pivot_of_[lead] = r;
                return;
            }
            for (std::size_t k = lo_[p]; k < hi_[p]; k++) {
                bits_[r * stride_ + k] ^= bits_[p * stride_ + k];
            }
            hi_[r] = std::max(hi_[r], hi_[p]);
            rhs_[r] ^= rhs_[p];
        }
    }

    std::size_t n_;
    std::size_t stride_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::size_t> lo_;
    std::vector<std::size_t> hi_;
    std::vector<int> rhs_;
    std::vector<std::size_t> pivot_of_;
    int inconsistent_ = 0;
};

}  // namespace

std::size_t torus_distance(const LatticeDims &dims, std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    std::size_t di = circular_diff(i1, i2, dims.L);
    std::size_t dj = circular_diff(j1, j2, dims.H);
    di = std::min(di, dims.L - di);
    dj = std::min(dj, dims.H - dj);
    return std::max(di, dj);
}

std::vector<Defect> list_defects(const Syndrome &syndrome) {
    std::vector<Defect> out;
    for (std::size_t j = 0; j < syndrome.a.height(); j++) {
        auto ra = syndrome.a.row(j);
        auto rb = syndrome.b.row(j);
        for (std::size_t k = 0; k < ra.size(); k++) {
            std::uint64_t both = ra[k] | rb[k];
            while (both != 0) {
                std::size_t bit = std::countr_zero(both);
                both &= both - 1;
                std::size_t i = (k << 6) + bit;
                if ((ra[k] >> bit) & 1) {
                    out.push_back({StabilizerKind::A, i, j});
                }
                if ((rb[k] >> bit) & 1) {
                    out.push_back({StabilizerKind::B, i, j});
                }
            }
        }
    }
    return out;
}

std::vector<Cluster> cluster_defects(const Syndrome &syndrome, unsigned level) {
    LatticeDims dims{syndrome.a.width(), syndrome.a.height()};
    auto defects = list_defects(syndrome);
    std::size_t n = defects.size();
    if (n == 0) {
        return {};
    }
    std::size_t radius = level >= 40 ? dims.L + dims.H : std::size_t{1} << level;
    UnionFind uf(n);

    std::size_t span_i = std::min(2 * radius + 1, dims.L);
    std::size_t span_j = std::min(2 * radius + 1, dims.H);
    if (span_i * span_j < n) {
        // Scan the window around each defect through a cell -> defect index map.
        constexpr std::size_t kNone = static_cast<std::size_t>(-1);
        std::vector<std::size_t> first(dims.cells(), kNone);
        for (std::size_t k = n; k-- > 0;) {
            first[dims.cell(defects[k].i, defects[k].j)] = k;
        }
        for (std::size_t k = 0; k < n; k++) {
            const auto &d = defects[k];
            auto r = static_cast<std::ptrdiff_t>(radius);
            auto lo_i = span_i == dims.L ? 0 : -r;
            auto hi_i = span_i == dims.L ? static_cast<std::ptrdiff_t>(dims.L) - 1 : r;
            auto lo_j = span_j == dims.H ? 0 : -r;
            auto hi_j = span_j == dims.H ? static_cast<std::ptrdiff_t>(dims.H) - 1 : r;
            for (auto dj = lo_j; dj <= hi_j; dj++) {
                std::size_t j = dims.wrap_j(static_cast<std::ptrdiff_t>(d.j) + dj);
                for (auto di = lo_i; di <= hi_i; di++) {
                    std::size_t i = dims.wrap_i(static_cast<std::ptrdiff_t>(d.i) + di);
                    std::size_t m = first[dims.cell(i, j)];
                    // A cell holds at most an A and a B defect, adjacent in the list.
                    for (; m < n && defects[m].i == i && defects[m].j == j; m++) {
                        uf.unite(k, m);
                    }
                }
            }
        }
    } else {
        for (std::size_t a = 0; a < n; a++) {
            for (std::size_t b = a + 1; b < n; b++) {
                if (torus_distance(dims, defects[a].i, defects[a].j, defects[b].i, defects[b].j) <= radius) {
                    uf.unite(a, b);
                }
            }
        }
    }

    std::vector<Cluster> clusters;
    std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < n; k++) {
        std::size_t root = uf.find(k);
        if (slot[root] == static_cast<std::size_t>(-1)) {
            slot[root] = clusters.size();
            clusters.emplace_back();
            clusters.back().level = level;
        }
        clusters[slot[root]].defects.push_back(defects[k]);
    }
    for (auto &c : clusters) {
        c.box = bounding_box(dims, c.defects);
    }
    return clusters;
}

std::optional<PauliFrame> neutralize_cluster(const Cluster &cluster, const LatticeDims &dims, const RgOptions &options) {
    if (cluster.defects.empty()) {
        return PauliFrame(dims);
    }
    std::size_t w = cluster.box.width + 2 * options.box_margin;
    std::size_t h = cluster.box.height + 2 * options.box_margin;
    if (w >= dims.L || h >= dims.H) {
        return std::nullopt;
    }
    std::size_t i0 = dims.wrap_i(static_cast<std::ptrdiff_t>(cluster.box.i0) - static_cast<std::ptrdiff_t>(options.box_margin));
    std::size_t j0 = dims.wrap_j(static_cast<std::ptrdiff_t>(cluster.box.j0) - static_cast<std::ptrdiff_t>(options.box_margin));

    // Unknown 2*(dj*w + di) + s is the qubit of sublattice s at box cell (di, dj).
    auto local = [&](const QubitCoord &q) -> std::size_t {
        std::size_t di = circular_diff(q.i, i0, dims.L);
        std::size_t dj = circular_diff(q.j, j0, dims.H);
        if (di >= w || dj >= h) {
            return static_cast<std::size_t>(-1);
        }
        return 2 * (dj * w + di) + static_cast<std::size_t>(q.s);
    };

    std::vector<int> target(dims.cells(), 0);
    for (const auto &d : cluster.defects) {
        target[dims.cell(d.i, d.j)] |= d.kind == StabilizerKind::A ? 1 : 2;
    }

    BandedSolver solver(2 * w * h);
    std::vector<bool> seen(dims.cells(), false);
    std::vector<std::size_t> cols;
    for (std::size_t dj = 0; dj < h; dj++) {
        for (std::size_t di = 0; di < w; di++) {
            for (auto s : {kBlack, kWhite}) {
                QubitCoord q{(i0 + di) % dims.L, (j0 + dj) % dims.H, s};
                for (const auto &pl : plaquettes_of(dims, q)) {
                    std::size_t cell = dims.cell(pl.i, pl.j);
                    if (seen[cell]) {
                        continue;
                    }
                    seen[cell] = true;
                    cols.clear();
                    for (const auto &site : plaquette_sites(dims, pl.i, pl.j)) {
                        std::size_t u = local(site);
                        if (u != static_cast<std::size_t>(-1)) {
                            cols.push_back(u);
                        }
                    }
                    solver.add_equation(cols, target[cell]);
                    target[cell] = 0;
                }
            }
        }
    }
    // Every cluster defect must lie on a plaquette the box can reach.
    for (const auto &d : cluster.defects) {
        if (target[dims.cell(d.i, d.j)] != 0) {
            return std::nullopt;
        }
    }
    if (!solver.consistent(0) || !solver.consistent(1)) {
        return std::nullopt;
    }

    // A defects come from (black Z, white X) and B defects from (black X,
    // white X^Z); solving each plane separately and using white Y for the A
    // part and white Z for the B part keeps the two planes independent.
    auto xa = solver.solve(0);
    auto xb = solver.solve(1);
    PauliFrame frame(dims);
    for (std::size_t dj = 0; dj < h; dj++) {
        for (std::size_t di = 0; di < w; di++) {
            std::size_t i = (i0 + di) % dims.L;
            std::size_t j = (j0 + dj) % dims.H;
            std::size_t u = 2 * (dj * w + di);
            if (xa[u]) {
                frame.apply({i, j, kBlack}, Pauli::Z);
            }
            if (xb[u]) {
                frame.apply({i, j, kBlack}, Pauli::X);
            }
            if (xa[u + 1]) {
                frame.apply({i, j, kWhite}, Pauli::Y);
            }
            if (xb[u + 1]) {
                frame.apply({i, j, kWhite}, Pauli::Z);
            }
        }
    }
    return frame;
}

unsigned rg_max_level(const LatticeDims &dims) {
    std::size_t m = std::max(dims.L, dims.H);
    return static_cast<unsigned>(std::bit_width(m - 1));
}

std::optional<PauliFrame> rg_decode(const Syndrome &syndrome, const LatticeDims &dims, const RgOptions &options) {
    if (syndrome.a.width() != dims.L || syndrome.a.height() != dims.H) {
        throw DimensionError("syndrome shape does not match the lattice");
    }
    PauliFrame correction(dims);
    Syndrome remaining = syndrome;
    unsigned top = rg_max_level(dims);
    for (unsigned level = 0; level <= top && remaining.any(); level++) {
        for (const auto &cluster : cluster_defects(remaining, level)) {
            auto fix = neutralize_cluster(cluster, dims, options);
            if (!fix && options.retry_margin > 0) {
                fix = neutralize_cluster(cluster, dims, {options.box_margin + options.retry_margin, 0});
            }
            if (!fix) {
                continue;
            }
            correction ^= *fix;
            for (const auto &d : cluster.defects) {
                (d.kind == StabilizerKind::A ? remaining.a : remaining.b).flip(d.i, d.j);
            }
        }
    }
    if (remaining.any()) {
        return std::nullopt;
    }
    return correction;
}

}  // namespace xyzca
