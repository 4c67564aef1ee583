#include "xyzca/experiments.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "xyzca/dynamics.h"
#include "xyzca/errors.h"

using namespace xyzca;

TEST(HalfLife, examples) {
    auto h = half_life({3, 1, 2});
    ASSERT_EQ(h.median, 2);
    ASSERT_EQ(half_life({4, 1, 3, 2}).median, 2.5);
    auto c = half_life(std::vector<double>(50, 7.0));
    ASSERT_EQ(c.median, 7);
    ASSERT_EQ(c.ci_low, 7);
    ASSERT_EQ(c.ci_high, 7);
    ASSERT_THROW(half_life({}), EmptyInput);
}

TEST(HalfLife, order_statistic_interval) {
    // n = 100: the 95% interval is [x_(40), x_(61)].
    std::vector<double> v(100);
    for (std::size_t k = 0; k < 100; k++) {
        v[k] = static_cast<double>(k + 1);
    }
    auto h = half_life(v);
    ASSERT_EQ(h.ci_low, 40);
    ASSERT_EQ(h.ci_high, 61);
    ASSERT_LE(h.ci_low, h.median);
    ASSERT_GE(h.ci_high, h.median);
}

TEST(HalfLife, exponential_draws) {
    std::mt19937_64 rng(51);
    std::exponential_distribution<double> exp_dist(2.5);
    std::vector<double> v(10000);
    for (auto &x : v) {
        x = exp_dist(rng);
    }
    auto h = half_life(v);
    double expected = std::log(2.0) / 2.5;
    ASSERT_NEAR(h.median, expected, 0.03 * expected);
    ASSERT_LT(h.ci_low, expected);
    ASSERT_GT(h.ci_high, expected);
}

TEST(IidSampleError, extremes) {
    auto d = build_lattice(6, 9);
    ASSERT_TRUE(iid_sample_error(d, 0, 0, std::uint64_t{1}).is_identity());
    auto z = iid_sample_error(d, 0, 1, std::uint64_t{1});
    ASSERT_TRUE(z.is_pure_z());
    ASSERT_EQ(z.weight(), 108u);
    ASSERT_THROW(iid_sample_error(d, 0.6, 0.6, std::uint64_t{1}), ProbabilityError);
    ASSERT_THROW(iid_sample_error(d, -0.1, 0.2, std::uint64_t{1}), ProbabilityError);
}

TEST(IidSampleError, marginals) {
    auto d = build_lattice(3, 3);
    double py = 0.03;
    double pz = 0.12;
    std::mt19937_64 rng(52);
    const std::size_t draws = 100000;
    std::size_t ny = 0;
    std::size_t nz = 0;
    QubitCoord q{1, 2, Sublattice::white};
    for (std::size_t t = 0; t < draws; t++) {
        auto p = iid_sample_error(d, py, pz, rng).get(q);
        ny += p == Pauli::Y;
        nz += p == Pauli::Z;
        ASSERT_NE(p, Pauli::X);
    }
    auto n = static_cast<double>(draws);
    ASSERT_NEAR(ny / n, py, 3 * std::sqrt(py * (1 - py) / n));
    ASSERT_NEAR(nz / n, pz, 3 * std::sqrt(pz * (1 - pz) / n));
}

TEST(WilsonInterval, examples) {
    auto a = wilson_interval(0, 100);
    ASSERT_EQ(a.low, 0.0);
    ASSERT_NEAR(a.high, 0.037, 1e-3);
    auto b = wilson_interval(50, 100);
    ASSERT_NEAR(b.low, 0.4038, 1e-3);
    ASSERT_NEAR(b.high, 0.5962, 1e-3);
    auto c = wilson_interval(100, 100);
    ASSERT_EQ(c.high, 1);
}

TEST(CrossingPoint, linear_interpolation) {
    std::vector<double> p{0.1, 0.2, 0.3};
    ASSERT_NEAR(crossing_point(p, {0.1, 0.2, 0.3}, {0.05, 0.25, 0.5}), 0.15, 1e-12);
    ASSERT_TRUE(std::isnan(crossing_point(p, {0.1, 0.2, 0.3}, {0.0, 0.1, 0.2})));
    ASSERT_NEAR(crossing_point(p, {0.1, 0.2, 0.3}, {0.05, 0.2, 0.4}), 0.2, 1e-12);
    ASSERT_NEAR(crossing_point(p, {0.7, 1.0, 1.0}, {0.5, 1.0, 1.0}), 0.2, 1e-12);
    ASSERT_NEAR(crossing_point(p, {0.0, 0.2, 1.0}, {0.0, 0.1, 1.0}), 0.3, 1e-12);
}

TEST(FitScaling, power_law_recovery) {
    std::vector<std::pair<double, double>> pts;
    for (double L : {6.0, 9.0, 12.0, 15.0, 24.0}) {
        pts.push_back({L, std::pow(L, 2.5)});
    }
    auto fit = fit_scaling(pts, FitModel::power_law);
    ASSERT_NEAR(fit.coef[1], 2.5, 1e-10);
    ASSERT_NEAR(fit.coef[0], 0, 1e-9);
    ASSERT_LT(fit.std_errors[1], 1e-8);
    for (double r : fit.residuals) {
        ASSERT_NEAR(r, 0, 1e-10);
    }
}

TEST(FitScaling, quadratic_exponential_recovery) {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> noise(0, 0.01);
    std::vector<std::pair<double, double>> pts;
    for (double b = 0.5; b <= 3.0; b += 0.25) {
        pts.push_back({b, std::exp(3 * b * b - b + noise(rng))});
    }
    auto fit = fit_scaling(pts, FitModel::quadratic_exponential);
    ASSERT_NEAR(fit.coef[0], 3, 4 * fit.std_errors[0] + 1e-9);
    ASSERT_NEAR(fit.coef[1], -1, 4 * fit.std_errors[1] + 1e-9);
    ASSERT_GT(fit.std_errors[0], 0);
}

TEST(FitScaling, exact_fit_has_undefined_errors) {
    auto fit = fit_scaling({{1, std::exp(1.0)}, {2, std::exp(4.0)}, {3, std::exp(9.0)}}, FitModel::quadratic_exponential);
    ASSERT_NEAR(fit.coef[0], 1, 1e-9);
    ASSERT_TRUE(std::isnan(fit.std_errors[0]));
}

TEST(FitScaling, errors) {
    ASSERT_THROW(fit_scaling({{1, 1}, {2, 2}}, FitModel::power_law), DegenerateFit);
    ASSERT_THROW(fit_scaling({{2, 1}, {2, 2}, {2, 3}}, FitModel::linear_exponential), DegenerateFit);
    ASSERT_THROW(fit_scaling({{1, 1}, {2, -2}, {3, 3}}, FitModel::linear_exponential), DomainError);
}

TEST(MemTimeConfig, validation) {
    MemTimeConfig c;
    c.dims = build_lattice(6, 9);
    c.noise = NoiseParams::from_total_rate(0.01, kInfiniteBias);
    ASSERT_NO_THROW(c.validate());
    c.noise = NoiseParams::from_total_rate(0.01, 100);
    ASSERT_THROW(c.validate(), ConfigError);
    c.decoder = FailureDecoder::rg;
    ASSERT_NO_THROW(c.validate());
    c.check_fraction = 0.01;
    ASSERT_THROW(c.validate(), ConfigError);
    c.check_fraction = 1e-3;
    c.decoder = FailureDecoder::exact;
    c.noise = NoiseParams::from_total_rate(0.01, kInfiniteBias);
    c.dims = build_lattice(6, 6);
    ASSERT_THROW(c.validate(), ConfigError);
}

TEST(MemoryTimeSample, fast_failure_and_determinism) {
    MemTimeConfig c;
    c.dims = build_lattice(6, 9);
    c.noise = NoiseParams::from_total_rate(50, kInfiniteBias);
    auto a = memory_time_sample(c, 3);
    auto b = memory_time_sample(c, 3);
    ASSERT_GT(a.t_mem, 0);
    ASSERT_FALSE(a.censored);
    ASSERT_EQ(a.t_mem, b.t_mem);
    ASSERT_EQ(a.events, b.events);
    // A logical on one sublattice needs at least two flips.
    ASSERT_GE(a.events, 2u);
}

TEST(MemoryTimeSample, check_gaps_respect_the_fraction) {
    MemTimeConfig c;
    c.dims = build_lattice(6, 9);
    c.noise = NoiseParams::from_total_rate(0.3, kInfiniteBias);
    // Every qubit flips at rate >= gamma_z, so a check overshoots its schedule
    // by one waiting time of rate >= N gamma_z; 20 means bound it with
    // probability 1 - e^-20 per check.
    double slack = 20 / (108 * c.noise.gamma_z);
    for (std::uint64_t s = 0; s < 20; s++) {
        auto r = memory_time_sample(c, s);
        ASSERT_FALSE(r.censored);
        ASSERT_GT(r.checks, 0u);
        ASSERT_LE(r.max_check_gap, c.check_fraction * r.t_mem + slack) << s;
    }
}

TEST(MemoryTimeSample, censoring) {
    MemTimeConfig c;
    c.dims = build_lattice(12, 15);
    c.noise = NoiseParams::from_total_rate(1e-3, kInfiniteBias);
    c.max_time = 10;
    auto r = memory_time_sample(c, 1);
    ASSERT_TRUE(r.censored);
    ASSERT_EQ(r.t_mem, 10);
}

TEST(FirstYTime, median_matches_exponential_law) {
    MemTimeConfig c;
    c.dims = build_lattice(6, 9);
    c.noise = NoiseParams::from_total_rate(0.01, 100);
    c.decoder = FailureDecoder::rg;
    std::vector<double> times;
    for (std::size_t k = 0; k < 10000; k++) {
        times.push_back(first_y_time(c, derive_seed(17, k)));
    }
    double gamma_tot = c.noise.gamma_tot();
    double expected = 100 * std::log(2.0) / (108 * c.noise.gamma_z);
    ASSERT_NEAR(expected * gamma_tot, 0.648, 1e-3);
    // The sample median of 10^4 exponentials has a relative spread of about 1%.
    ASSERT_NEAR(half_life(times).median, expected, 0.03 * expected);
}

TEST(MemoryCurve, seeds_are_deterministic_across_workers) {
    MemTimeConfig c;
    c.noise = NoiseParams::from_total_rate(1.0, kInfiniteBias);
    c.n_samples = 16;
    c.seed_base = 5;
    std::vector<LatticeDims> sizes{build_lattice(6, 9), build_lattice(12, 15)};
    auto one = memory_curve(sizes, c, 1);
    auto four = memory_curve(sizes, c, 4);
    ASSERT_EQ(one.size(), 2u);
    for (std::size_t k = 0; k < 2; k++) {
        ASSERT_EQ(memtime_csv_row(one[k], "r"), memtime_csv_row(four[k], "r"));
        ASSERT_EQ(one[k].n_samples, 16u);
    }
    ASSERT_NE(sample_seed(5, 0, 1), sample_seed(5, 1, 0));
}

TEST(ThresholdScan, deterministic_and_sub_threshold_ordering) {
    ThresholdConfig c;
    c.sizes = {build_lattice(6, 9), build_lattice(12, 15)};
    c.p_grid = {0.01, 0.3};
    c.zeta_p = 10;
    c.trials = 400;
    c.seed_base = 9;
    c.bootstrap = 20;
    auto a = threshold_scan(c, 1);
    auto b = threshold_scan(c, 3);
    ASSERT_EQ(a.points.size(), 4u);
    for (std::size_t k = 0; k < 4; k++) {
        ASSERT_EQ(threshold_csv_row(a.points[k]), threshold_csv_row(b.points[k]));
        ASSERT_LE(a.points[k].ci.low, a.points[k].fail_rate);
        ASSERT_GE(a.points[k].ci.high, a.points[k].fail_rate);
    }
    // Index = size * |grid| + p.
    ASSERT_LE(a.points[2].fail_rate, a.points[0].fail_rate);
    ASSERT_GT(a.points[3].fail_rate, 0.3);
    ASSERT_EQ(a.crossings.size(), 1u);
    c.sizes.pop_back();
    ASSERT_THROW(threshold_scan(c), ConfigError);
}

TEST(CsvFormat, headers) {
    ASSERT_EQ(memtime_csv_header(), "run_id,L,H,gamma_z,zeta,ca_enabled,beta,n_samples,median_T,ci_low,ci_high,seed_base");
    ASSERT_EQ(threshold_csv_header(), "L,H,p_tot,zeta_p,trials,failures,fail_rate,ci_low,ci_high");
    ThresholdPoint p;
    p.dims = build_lattice(6, 9);
    p.p_tot = 0.1;
    p.zeta_p = kInfiniteBias;
    p.trials = 10;
    p.failures = 1;
    p.fail_rate = 0.1;
    ASSERT_EQ(threshold_csv_row(p).substr(0, 18), "6,9,0.1,inf,10,1,0");
}

TEST(ParallelFor, covers_every_index_and_rethrows) {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, 4, [&](std::size_t i) { hits[i]++; });
    ASSERT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    ASSERT_THROW(parallel_for(10, 3, [](std::size_t i) {
        if (i == 7) {
            throw DomainError("x");
        }
    }), DomainError);
}
