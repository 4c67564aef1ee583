#include "xyzca/rg_decoder.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "xyzca/errors.h"
#include "xyzca/experiments.h"
#include "xyzca/logicals.h"

using namespace xyzca;

namespace {

constexpr auto kB = Sublattice::black;
constexpr auto kW = Sublattice::white;

PauliFrame random_yz(const LatticeDims &d, std::mt19937_64 &rng, double p_y, double p_z) {
    std::uniform_real_distribution<double> u(0, 1);
    PauliFrame f(d);
    for (auto s : {kB, kW}) {
        for (std::size_t j = 0; j < d.H; j++) {
            for (std::size_t i = 0; i < d.L; i++) {
                double x = u(rng);
                if (x < p_y) {
                    f.apply({i, j, s}, Pauli::Y);
                } else if (x < p_y + p_z) {
                    f.apply({i, j, s}, Pauli::Z);
                }
            }
        }
    }
    return f;
}

bool in_circular_range(std::size_t x, std::size_t start, std::size_t len, std::size_t n) {
    return (x + n - start) % n < len;
}

// Oracle: components of the all-pairs linking graph, as sorted defect lists.
std::vector<std::vector<Defect>> brute_clusters(const LatticeDims &d, const std::vector<Defect> &defects, unsigned level) {
    std::size_t n = defects.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t a = 0; a < n; a++) {
        for (std::size_t b = a + 1; b < n; b++) {
            if (torus_distance(d, defects[a].i, defects[a].j, defects[b].i, defects[b].j) <= (std::size_t{1} << level)) {
                parent[find(a)] = find(b);
            }
        }
    }
    std::vector<std::vector<Defect>> out;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t a = 0; a < n; a++) {
        auto r = find(a);
        if (slot[r] == n) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(defects[a]);
    }
    return out;
}

}  // namespace

TEST(TorusDistance, examples) {
    auto d = build_lattice(6, 9);
    ASSERT_EQ(torus_distance(d, 0, 0, 0, 0), 0u);
    ASSERT_EQ(torus_distance(d, 0, 0, 5, 0), 1u);
    ASSERT_EQ(torus_distance(d, 0, 0, 3, 1), 3u);
    ASSERT_EQ(torus_distance(d, 0, 0, 1, 8), 1u);
    ASSERT_EQ(torus_distance(d, 2, 1, 2, 6), 4u);
}

TEST(ListDefects, raster_order) {
    auto d = build_lattice(6, 9);
    Syndrome s(d);
    s.b.set(4, 2, true);
    s.a.set(4, 2, true);
    s.a.set(1, 0, true);
    s.b.set(0, 5, true);
    std::vector<Defect> expected{
        {StabilizerKind::A, 1, 0},
        {StabilizerKind::A, 4, 2},
        {StabilizerKind::B, 4, 2},
        {StabilizerKind::B, 0, 5},
    };
    ASSERT_EQ(list_defects(s), expected);
}

TEST(ClusterDefects, matches_all_pairs_union_find) {
    std::mt19937_64 rng(41);
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}, {24, 27}}) {
        auto d = build_lattice(L, H);
        for (int t = 0; t < 30; t++) {
            Syndrome s(d);
            for (int k = 0; k < 12; k++) {
                (rng() & 1 ? s.a : s.b).set(rng() % L, rng() % H, true);
            }
            auto defects = list_defects(s);
            for (unsigned level = 0; level <= rg_max_level(d); level++) {
                auto got = cluster_defects(s, level);
                auto expected = brute_clusters(d, defects, level);
                ASSERT_EQ(got.size(), expected.size());
                for (std::size_t c = 0; c < got.size(); c++) {
                    ASSERT_EQ(got[c].defects, expected[c]);
                    ASSERT_EQ(got[c].level, level);
                    const auto &box = got[c].box;
                    ASSERT_LE(box.width, d.L);
                    ASSERT_LE(box.height, d.H);
                    for (const auto &df : got[c].defects) {
                        ASSERT_TRUE(in_circular_range(df.i, box.i0, box.width, d.L));
                        ASSERT_TRUE(in_circular_range(df.j, box.j0, box.height, d.H));
                    }
                }
            }
        }
    }
}

TEST(ClusterDefects, bounding_box_crosses_the_seam) {
    auto d = build_lattice(12, 15);
    Syndrome s(d);
    s.a.set(11, 14, true);
    s.a.set(0, 0, true);
    auto clusters = cluster_defects(s, 0);
    ASSERT_EQ(clusters.size(), 1u);
    ASSERT_EQ(clusters[0].box, (TorusBox{11, 14, 2, 2}));
}

TEST(RgMaxLevel, examples) {
    ASSERT_EQ(rg_max_level(build_lattice(6, 9)), 4u);
    ASSERT_EQ(rg_max_level(build_lattice(12, 15)), 4u);
    ASSERT_EQ(rg_max_level(build_lattice(48, 51)), 6u);
    ASSERT_EQ(rg_max_level(build_lattice(3, 3)), 2u);
}

TEST(NeutralizeCluster, single_errors) {
    auto d = build_lattice(12, 15);
    for (auto s : {kB, kW}) {
        for (auto p : {Pauli::Z, Pauli::Y, Pauli::X}) {
            auto e = apply_pauli(PauliFrame(d), {5, 7, s}, p);
            auto syn = syndrome(e);
            auto clusters = cluster_defects(syn, 0);
            ASSERT_EQ(clusters.size(), 1u);
            auto fix = neutralize_cluster(clusters[0], d);
            ASSERT_TRUE(fix.has_value());
            ASSERT_EQ(syndrome(*fix), syn);
            ASSERT_LE(fix->weight(), 2u);
        }
    }
}

TEST(NeutralizeCluster, support_stays_inside_the_box) {
    std::mt19937_64 rng(42);
    auto d = build_lattice(24, 27);
    for (std::size_t margin : {0, 1}) {
        RgOptions opts{margin};
        for (int t = 0; t < 200; t++) {
            auto e = random_yz(d, rng, 0.01, 0.02);
            for (const auto &c : cluster_defects(syndrome(e), 1)) {
                auto fix = neutralize_cluster(c, d, opts);
                if (!fix) {
                    continue;
                }
                Syndrome want(d);
                for (const auto &df : c.defects) {
                    (df.kind == StabilizerKind::A ? want.a : want.b).set(df.i, df.j, true);
                }
                ASSERT_EQ(syndrome(*fix), want);
                std::size_t i0 = (c.box.i0 + d.L - margin) % d.L;
                std::size_t j0 = (c.box.j0 + d.H - margin) % d.H;
                for (auto s : {kB, kW}) {
                    for (std::size_t j = 0; j < d.H; j++) {
                        for (std::size_t i = 0; i < d.L; i++) {
                            if (fix->get({i, j, s}) != Pauli::I) {
                                ASSERT_TRUE(in_circular_range(i, i0, c.box.width + 2 * margin, d.L));
                                ASSERT_TRUE(in_circular_range(j, j0, c.box.height + 2 * margin, d.H));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(NeutralizeCluster, isolated_defect_is_not_neutral) {
    auto d = build_lattice(12, 15);
    for (auto kind : {StabilizerKind::A, StabilizerKind::B}) {
        Syndrome s(d);
        (kind == StabilizerKind::A ? s.a : s.b).set(3, 4, true);
        auto clusters = cluster_defects(s, 0);
        ASSERT_EQ(clusters.size(), 1u);
        ASSERT_FALSE(neutralize_cluster(clusters[0], d).has_value());
    }
}

TEST(RgDecode, output_is_sound) {
    std::mt19937_64 rng(43);
    auto d = build_lattice(6, 9);
    std::size_t heralded = 0;
    for (int t = 0; t < 10000; t++) {
        auto e = random_yz(d, rng, 0.02, 0.05);
        auto syn = syndrome(e);
        auto fix = rg_decode(syn, d);
        if (!fix) {
            heralded++;
            continue;
        }
        ASSERT_EQ(syndrome(*fix), syn);
    }
    ASSERT_LT(heralded, 10000u);
}

TEST(RgDecode, empty_syndrome_gives_identity) {
    auto d = build_lattice(12, 15);
    auto fix = rg_decode(Syndrome(d), d);
    ASSERT_TRUE(fix.has_value());
    ASSERT_TRUE(fix->is_identity());
}

TEST(RgDecode, separated_z_and_y_are_corrected) {
    auto d = build_lattice(12, 15);
    auto basis = LogicalSet::build(d);
    auto e = apply_pauli(PauliFrame(d), {1, 1, kB}, Pauli::Z);
    e.apply({7, 9, kW}, Pauli::Y);
    auto fix = rg_decode(syndrome(e), d);
    ASSERT_TRUE(fix.has_value());
    ASSERT_FALSE(is_nontrivial_logical(e ^ *fix, basis));
}

TEST(RgDecode, sparse_noise_rarely_fails) {
    std::mt19937_64 rng(44);
    auto d = build_lattice(24, 27);
    auto basis = LogicalSet::build(d);
    std::size_t failures = 0;
    for (int t = 0; t < 300; t++) {
        auto e = random_yz(d, rng, 0.002, 0.004);
        auto fix = rg_decode(syndrome(e), d);
        failures += !fix || is_nontrivial_logical(e ^ *fix, basis);
    }
    ASSERT_LE(failures, 3u);
}

TEST(RgDecode, retries_a_cluster_whose_error_leaves_its_box) {
    auto d = build_lattice(48, 51);
    auto basis = LogicalSet::build(d);
    auto e = apply_pauli(PauliFrame(d), {17, 30, kB}, Pauli::Z);
    e.apply({17, 31, kB}, Pauli::Z);
    e.apply({16, 30, kW}, Pauli::Y);
    auto syn = syndrome(e);
    auto clusters = cluster_defects(syn, 0);
    ASSERT_EQ(clusters.size(), 1u);
    ASSERT_EQ(clusters[0].box.width, 1u);
    ASSERT_FALSE(neutralize_cluster(clusters[0], d).has_value());
    ASSERT_FALSE(rg_decode(syn, d, RgOptions{0, 0}).has_value());
    auto fix = rg_decode(syn, d);
    ASSERT_TRUE(fix.has_value());
    ASSERT_FALSE(is_nontrivial_logical(e ^ *fix, basis));
}

TEST(RgDecode, failure_rate_falls_with_size_below_threshold) {
    auto fail_rate = [](std::size_t L, double p) {
        auto d = build_lattice(L, L + 3);
        auto basis = LogicalSet::build(d);
        std::mt19937_64 rng(45);
        std::size_t failures = 0;
        const std::size_t n = 400;
        for (std::size_t t = 0; t < n; t++) {
            auto e = iid_sample_error(d, p / 11, p * 10 / 11, rng);
            auto fix = rg_decode(syndrome(e), d);
            failures += !fix || is_nontrivial_logical(e ^ *fix, basis);
        }
        return static_cast<double>(failures) / n;
    };
    ASSERT_LT(fail_rate(24, 0.05), fail_rate(12, 0.05));
    // Both sizes saturate well above threshold.
    double small = fail_rate(12, 0.25);
    ASSERT_GT(small, 0.99);
    ASSERT_GE(fail_rate(24, 0.25), small);
}

TEST(RgDecode, dimension_mismatch_throws) {
    ASSERT_THROW(rg_decode(Syndrome(build_lattice(6, 9)), build_lattice(9, 9)), DimensionError);
}
