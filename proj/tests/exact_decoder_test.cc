#include "xyzca/exact_decoder.h"

#include <cmath>
#include <random>
#include <unordered_map>

#include "gtest/gtest.h"
#include "xyzca/errors.h"

using namespace xyzca;

namespace {

constexpr auto kB = Sublattice::black;
constexpr auto kW = Sublattice::white;

PauliFrame random_z(const LatticeDims &d, std::mt19937_64 &rng, double p, bool black = true, bool white = true) {
    std::bernoulli_distribution flip(p);
    PauliFrame f(d);
    for (std::size_t j = 0; j < d.H; j++) {
        for (std::size_t i = 0; i < d.L; i++) {
            if (black && flip(rng)) {
                f.apply({i, j, kB}, Pauli::Z);
            }
            if (white && flip(rng)) {
                f.apply({i, j, kW}, Pauli::Z);
            }
        }
    }
    return f;
}

BitRow row_of(const BitPlane &p, std::size_t j) {
    return p.row_copy(j);
}

PauliFrame frame_from_mask(const LatticeDims &d, Sublattice s, std::uint64_t mask) {
    PauliFrame f(d);
    for (std::size_t k = 0; k < d.cells(); k++) {
        if ((mask >> k) & 1) {
            f.apply({k % d.L, k / d.L, s}, Pauli::Z);
        }
    }
    return f;
}

}  // namespace

TEST(SweepToRow0, clears_all_rows_but_zero) {
    std::mt19937_64 rng(31);
    for (auto [L, H] : {std::pair{3, 3}, {6, 9}, {12, 15}, {66, 9}}) {
        auto d = build_lattice(L, H);
        for (int t = 0; t < 50; t++) {
            auto s = syndrome(random_z(d, rng, 0.2));
            for (auto sub : {kB, kW}) {
                auto [sweep, residual] = sweep_to_row0(s, sub);
                ASSERT_TRUE(sweep.is_pure_z());
                ASSERT_EQ(sweep.weight(), sweep.weight(sub));
                auto left = syndrome(sweep);
                const auto &mine = sub == kB ? left.a : left.b;
                const auto &target = sub == kB ? s.a : s.b;
                auto diff = mine ^ target;
                ASSERT_EQ(row_of(diff, 0), residual);
                for (std::size_t j = 1; j < d.H; j++) {
                    ASSERT_FALSE(row_of(diff, j).any());
                }
            }
        }
    }
}

TEST(SolveRow0, produces_row0_defects_only) {
    std::mt19937_64 rng(32);
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}}) {
        auto d = build_lattice(L, H);
        for (int t = 0; t < 30; t++) {
            auto s = syndrome(random_z(d, rng, 0.3));
            for (auto sub : {kB, kW}) {
                auto [sweep, residual] = sweep_to_row0(s, sub);
                auto fix = solve_row0(residual, d, sub);
                ASSERT_TRUE(fix.has_value());
                auto got = syndrome(*fix);
                const auto &plane = sub == kB ? got.a : got.b;
                ASSERT_EQ(row_of(plane, 0), residual);
                for (std::size_t j = 1; j < d.H; j++) {
                    ASSERT_FALSE(row_of(plane, j).any());
                }
            }
        }
    }
}

TEST(Reflections, are_involutions_and_map_white_onto_black) {
    std::mt19937_64 rng(33);
    auto d = build_lattice(9, 12);
    for (int t = 0; t < 50; t++) {
        auto w = random_z(d, rng, 0.3, false, true);
        const auto &plane = w.z(kW);
        ASSERT_EQ(reflect_qubits(reflect_qubits(plane)), plane);
        ASSERT_EQ(reflect_plaquettes(reflect_plaquettes(plane)), plane);
        PauliFrame black(d);
        black.z(kB) = reflect_qubits(plane);
        ASSERT_EQ(reflect_plaquettes(syndrome(w).b), syndrome(black).a);
    }
}

TEST(ExactDecoder, single_z_is_corrected_exactly) {
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}}) {
        auto d = build_lattice(L, H);
        ExactDecoder dec(d);
        ASSERT_EQ(dec.kernel_dimension(), 2u);
        for (auto s : {kB, kW}) {
            for (std::size_t j = 0; j < d.H; j += 4) {
                for (std::size_t i = 0; i < d.L; i += 5) {
                    auto e = apply_pauli(PauliFrame(d), {i, j, s}, Pauli::Z);
                    auto r = dec.decode(syndrome(e));
                    ASSERT_TRUE(r.has_value());
                    ASSERT_EQ(r->correction, e);
                    ASSERT_FALSE(is_failure(e, r->correction, dec.logicals()));
                }
            }
        }
    }
}

TEST(ExactDecoder, minimum_weight_on_3x3_by_exhaustion) {
    auto d = build_lattice(3, 3);
    ExactDecoder dec(d);
    for (auto s : {kB, kW}) {
        // Oracle: lightest Z frame per syndrome over all 2^9 frames on s.
        std::unordered_map<std::string, std::size_t> best;
        auto key = [&](const Syndrome &syn) { return syndrome_to_json(d, syn); };
        for (std::uint64_t m = 0; m < 512; m++) {
            auto f = frame_from_mask(d, s, m);
            auto k = key(syndrome(f));
            auto w = f.weight();
            auto it = best.find(k);
            if (it == best.end() || w < it->second) {
                best[k] = w;
            }
        }
        for (std::uint64_t m = 0; m < 512; m++) {
            auto e = frame_from_mask(d, s, m);
            auto syn = syndrome(e);
            auto r = dec.decode(syn);
            ASSERT_TRUE(r.has_value());
            ASSERT_EQ(syndrome(r->correction), syn);
            ASSERT_EQ(r->correction.weight(), best[key(syn)]) << m;
        }
    }
}

TEST(ExactDecoder, correction_never_heavier_than_error) {
    std::mt19937_64 rng(34);
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}, {24, 27}}) {
        ExactDecoder dec(build_lattice(L, H));
        for (int t = 0; t < 40; t++) {
            auto e = random_z(dec.dims(), rng, 0.25);
            auto syn = syndrome(e);
            auto r = dec.decode(syn);
            ASSERT_TRUE(r.has_value());
            ASSERT_EQ(syndrome(r->correction), syn);
            ASSERT_TRUE(r->correction.is_pure_z());
            ASSERT_LE(r->correction.weight(kB), e.weight(kB));
            ASSERT_LE(r->correction.weight(kW), e.weight(kW));
            for (auto s : {kB, kW}) {
                const auto &part = r->on(s);
                auto chosen = static_cast<std::size_t>(part.chosen);
                ASSERT_LT(chosen, 4u);
                for (std::size_t k = 0; k < 4; k++) {
                    ASSERT_LE(part.class_weights[chosen], part.class_weights[k]);
                    if (k < chosen) {
                        ASSERT_LT(part.class_weights[chosen], part.class_weights[k]);
                    }
                }
            }
        }
    }
}

TEST(ExactDecoder, rejects_syndromes_outside_the_z_image) {
    auto d = build_lattice(3, 3);
    ExactDecoder dec(d);
    // Oracle: every syndrome reachable by some pure-Z frame on either sublattice.
    std::unordered_map<std::string, bool> reachable;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << 18); m++) {
        auto f = frame_from_mask(d, kB, m & 511) ^ frame_from_mask(d, kW, m >> 9);
        reachable[syndrome_to_json(d, syndrome(f))] = true;
    }
    std::mt19937_64 rng(36);
    std::size_t rejected = 0;
    for (int t = 0; t < 3000; t++) {
        Syndrome syn(d);
        for (std::size_t k = 0; k < 9; k++) {
            syn.a.set(k % 3, k / 3, rng() & 1);
            syn.b.set(k % 3, k / 3, rng() & 1);
        }
        bool in_image = reachable.count(syndrome_to_json(d, syn)) > 0;
        auto r = dec.decode(syn);
        ASSERT_EQ(r.has_value(), in_image);
        if (r) {
            ASSERT_EQ(syndrome(r->correction), syn);
        }
        rejected += !in_image;
    }
    ASSERT_GT(rejected, 0u);
}

TEST(ExactDecoder, y_errors_decode_to_logical_failures) {
    std::mt19937_64 rng(39);
    auto d = build_lattice(6, 9);
    ExactDecoder dec(d);
    std::bernoulli_distribution flip(0.05);
    std::size_t failures = 0;
    const std::size_t n = 500;
    for (std::size_t t = 0; t < n; t++) {
        PauliFrame e(d);
        for (std::size_t k = 0; k < d.cells(); k++) {
            for (auto s : {kB, kW}) {
                if (flip(rng)) {
                    e.apply({k % d.L, k / d.L, s}, Pauli::Y);
                }
            }
        }
        // The Y syndrome always has a Z-only explanation, which is almost always wrong.
        auto r = dec.decode(syndrome(e));
        ASSERT_TRUE(r.has_value());
        failures += is_nontrivial_logical(e ^ r->correction, dec.logicals());
    }
    ASSERT_GT(failures, n * 9 / 10);
}

TEST(ExactDecoder, dimension_mismatch_throws) {
    ExactDecoder dec(build_lattice(6, 9));
    ASSERT_THROW(dec.decode(Syndrome(build_lattice(9, 9))), DimensionError);
}

TEST(MinimizeOverLogicals, picks_the_lighter_representative) {
    auto d = build_lattice(6, 9);
    auto basis = LogicalSet::build(d);
    // A full L tiling is lighter as the identity.
    auto r = minimize_over_logicals(basis.class_frame(kB, LogicalClass::L), basis);
    ASSERT_EQ(r.black.chosen, LogicalClass::L);
    ASSERT_TRUE(r.correction.is_identity());
    ASSERT_EQ(r.black.class_weights[1], 0u);

    // Ties go to the earlier label.
    auto z = minimize_over_logicals(PauliFrame(d), basis);
    ASSERT_EQ(z.black.chosen, LogicalClass::I);
    ASSERT_EQ(z.white.chosen, LogicalClass::I);
    ASSERT_EQ(z.black.class_weights[2], 2u * 54 / 3);
}

TEST(IsFailure, examples) {
    auto d = build_lattice(6, 9);
    auto basis = LogicalSet::build(d);
    auto e = apply_pauli(PauliFrame(d), {1, 1, kB}, Pauli::Z);
    ASSERT_FALSE(is_failure(e, e, basis));
    ASSERT_TRUE(is_failure(e, e ^ basis.class_frame(kB, LogicalClass::M), basis));
    ASSERT_TRUE(is_failure(e, e ^ basis.class_frame(kW, LogicalClass::LM), basis));
    ASSERT_THROW(is_failure(e, PauliFrame(d), basis), NotInNormalizer);

    PauliFrame stab(d);
    for (const auto &site : stabilizer_support(d, StabilizerKind::B, 3, 4)) {
        stab.apply(site.q, site.letter);
    }
    ASSERT_FALSE(is_failure(e, e ^ stab, basis));
}

TEST(HoeffdingBound, value_and_domain) {
    ASSERT_NEAR(hoeffding_failure_bound(108, 0.3), 3 * std::exp(-5.76), 1e-12);
    ASSERT_NEAR(hoeffding_failure_bound(108, 0.3), 9.45e-3, 1e-5);
    ASSERT_NEAR(hoeffding_failure_bound(10, 0.5), 3.0, 1e-12);
    ASSERT_THROW(hoeffding_failure_bound(10, -0.1), DomainError);
    ASSERT_THROW(hoeffding_failure_bound(10, 1.1), DomainError);
}

TEST(DecodeInfiniteBias, logical_failure_is_rare_at_low_noise) {
    std::mt19937_64 rng(35);
    auto d = build_lattice(24, 27);
    ExactDecoder dec(d);
    std::size_t failures = 0;
    for (int t = 0; t < 200; t++) {
        auto e = random_z(d, rng, 0.05);
        auto r = dec.decode(syndrome(e));
        ASSERT_TRUE(r.has_value());
        failures += is_failure(e, r->correction, dec.logicals());
    }
    ASSERT_EQ(failures, 0u);
}

TEST(ExactDecoder, syndrome_round_trip) {
    std::mt19937_64 rng(37);
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}}) {
        ExactDecoder dec(build_lattice(L, H));
        for (int t = 0; t < 5000; t++) {
            auto syn = syndrome(random_z(dec.dims(), rng, 0.1 + 0.4 * (t % 5) / 5.0));
            auto r = dec.decode(syn);
            ASSERT_TRUE(r.has_value());
            ASSERT_EQ(syndrome(r->correction), syn);
        }
    }
}

TEST(ExactDecoder, unique_minimum_is_decoded_correctly_on_3x3) {
    auto d = build_lattice(3, 3);
    ExactDecoder dec(d);
    for (auto s : {kB, kW}) {
        for (std::uint64_t m = 0; m < 512; m++) {
            auto e = frame_from_mask(d, s, m);
            // Oracle: E is the unique lightest frame of its coset.
            bool unique_min = true;
            for (std::size_t c = 1; c < 4; c++) {
                auto other = e ^ dec.logicals().class_frame(s, static_cast<LogicalClass>(c));
                unique_min &= other.weight() > e.weight();
            }
            auto r = dec.decode(syndrome(e));
            ASSERT_TRUE(r.has_value());
            if (unique_min) {
                ASSERT_FALSE(is_failure(e, r->correction, dec.logicals())) << m;
            }
        }
    }
}

TEST(ExactDecoder, failure_rate_below_hoeffding_bound) {
    std::mt19937_64 rng(38);
    std::vector<double> at_03;
    std::vector<double> at_045;
    for (auto [L, H] : {std::pair{6, 9}, {12, 15}}) {
        ExactDecoder dec(build_lattice(L, H));
        for (double p : {0.3, 0.45}) {
            const int trials = p < 0.4 ? 4000 : 20000;
            int failures = 0;
            for (int t = 0; t < trials; t++) {
                auto e = random_z(dec.dims(), rng, p, true, false);
                auto r = dec.decode(syndrome(e));
                failures += is_failure(e, r->correction, dec.logicals());
            }
            double rate = static_cast<double>(failures) / trials;
            if (p < 0.4) {
                at_03.push_back(rate);
                // The bound counts the N = LH qubits of the one noisy sublattice.
                ASSERT_LT(rate, hoeffding_failure_bound(L * H, p));
            } else {
                at_045.push_back(rate);
            }
        }
    }
    ASSERT_LT(at_03[1], at_03[0]);
    ASSERT_LT(at_045[1], at_045[0]);
}
