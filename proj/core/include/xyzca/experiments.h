#ifndef XYZCA_EXPERIMENTS_H
#define XYZCA_EXPERIMENTS_H

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "xyzca/lattice.h"

namespace xyzca {

enum class FailureDecoder : std::uint8_t { exact, rg };

struct MemTimeConfig {
    LatticeDims dims;
    NoiseParams noise;
    bool ca_enabled = true;
    FailureDecoder decoder = FailureDecoder::exact;
    /// Checks are spaced by this fraction of the elapsed time (at most 1e-3).
    double check_fraction = 1e-3;
    std::size_t n_samples = 100;
    std::uint64_t seed_base = 0;
    /// A sample still alive at this time is stopped and marked censored.
    double max_time = std::numeric_limits<double>::infinity();

    /// Throws ConfigError on an exact decoder at finite bias, an uncertified
    /// size for the exact decoder, or a check fraction above 1e-3.
    void validate() const;
};

struct MemTimeSample {
    double t_mem = 0;
    std::uint64_t events = 0;
    std::uint64_t checks = 0;
    /// Largest time between consecutive checks (the first check counts from 0).
    double max_check_gap = 0;
    bool censored = false;
};

/// Runs the dynamics and decodes a copy of the accumulated error at the first
/// event after each check time; returns the clock at the first check whose
/// correction leaves a logical error (or whose decoder heralds failure).
MemTimeSample memory_time_sample(const MemTimeConfig &config, std::uint64_t seed);

/// Time of the first Y flip of a run.
double first_y_time(const MemTimeConfig &config, std::uint64_t seed);

struct HalfLife {
    double median = 0;
    double ci_low = 0;
    double ci_high = 0;
};

/// Median with a distribution-free 95% interval from binomial order statistics.
/// Throws EmptyInput on an empty list.
HalfLife half_life(std::vector<double> samples);

struct MemoryCurveRow {
    LatticeDims dims;
    double gamma_z = 0;
    double zeta = 0;
    bool ca_enabled = true;
    double beta = 0;
    std::size_t n_samples = 0;
    std::size_t n_censored = 0;
    HalfLife half_life;
    std::uint64_t seed_base = 0;
};

/// Seed of sample k of size index s in a run with the given base.
std::uint64_t sample_seed(std::uint64_t seed_base, std::size_t size_index, std::size_t k);

/// One row per size; `base` supplies everything except the lattice.
std::vector<MemoryCurveRow> memory_curve(const std::vector<LatticeDims> &sizes, const MemTimeConfig &base, unsigned workers = 1);

/// Each qubit independently becomes Y with probability p_y, Z with p_z, else stays I.
/// Throws ProbabilityError unless p_y, p_z >= 0 and p_y + p_z <= 1.
PauliFrame iid_sample_error(const LatticeDims &dims, double p_y, double p_z, std::mt19937_64 &rng);
PauliFrame iid_sample_error(const LatticeDims &dims, double p_y, double p_z, std::uint64_t seed);

struct Interval {
    double low = 0;
    double high = 0;
};

/// 95% Wilson score interval for k successes out of n.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct ThresholdPoint {
    LatticeDims dims;
    double p_tot = 0;
    double zeta_p = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double fail_rate = 0;
    Interval ci;
    std::uint64_t seed = 0;
};

struct Crossing {
    std::size_t small = 0;
    std::size_t large = 0;
    /// NaN when the curves do not cross on the grid.
    double p = 0;
};

struct ThresholdScan {
    std::vector<ThresholdPoint> points;
    std::vector<Crossing> crossings;
    /// Mean of the finite pairwise crossings (NaN if none).
    double p_c = 0;
    Interval p_c_ci;
};

struct ThresholdConfig {
    std::vector<LatticeDims> sizes;
    std::vector<double> p_grid;
    double zeta_p = 1;
    std::size_t trials = 1000;
    std::uint64_t seed_base = 0;
    std::size_t bootstrap = 200;
};

/// Logical failure frequency of the RG decoder under i.i.d. Y+Z noise for every
/// (size, p); a heralded decoder failure counts as a logical failure.
ThresholdScan threshold_scan(const ThresholdConfig &config, unsigned workers = 1);

/// First grid interval where the larger size's failure rate goes from below the
/// smaller one's to at or above it, located by linear interpolation; NaN if none.
/// Leading ties (both curves at zero) are skipped.
double crossing_point(const std::vector<double> &p_grid, const std::vector<double> &f_small, const std::vector<double> &f_large);

enum class FitModel : std::uint8_t { power_law, quadratic_exponential, linear_exponential };

/// Coefficients of the log-transformed model:
///   power_law:             ln y = c0 + c1 ln x
///   quadratic_exponential: ln y = c0 x^2 + c1 x + c2
///   linear_exponential:    ln y = c0 x + c1
struct ScalingFit {
    FitModel model = FitModel::power_law;
    std::vector<double> coef;
    /// NaN when there are no residual degrees of freedom.
    std::vector<double> std_errors;
    std::vector<double> residuals;
};

/// Least squares on log y. Throws DegenerateFit with fewer than three points or
/// a rank-deficient design, and DomainError on non-positive values.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>> &points, FitModel model);

/// Runs task(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> &task);

std::string memtime_csv_header();
std::string memtime_csv_row(const MemoryCurveRow &row, const std::string &run_id);
std::string threshold_csv_header();
std::string threshold_csv_row(const ThresholdPoint &point);

}  // namespace xyzca

#endif
