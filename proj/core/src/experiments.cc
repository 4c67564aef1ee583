#include "xyzca/experiments.h"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "xyzca/dynamics.h"
#include "xyzca/errors.h"
#include "xyzca/exact_decoder.h"
#include "xyzca/logicals.h"
#include "xyzca/rg_decoder.h"

namespace xyzca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

// P(X <= k) for X ~ Binomial(n, 1/2).
std::vector<double> half_binomial_cdf(std::size_t n) {
    std::vector<double> cdf(n + 1);
    double acc = 0;
    double ln_half_n = static_cast<double>(n) * std::log(0.5);
    double ln_n_fact = std::lgamma(static_cast<double>(n) + 1);
    for (std::size_t k = 0; k <= n; k++) {
        double ln_choose = ln_n_fact - std::lgamma(static_cast<double>(k) + 1) - std::lgamma(static_cast<double>(n - k) + 1);
        acc += std::exp(ln_choose + ln_half_n);
        cdf[k] = acc;
    }
    return cdf;
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
}

}  // namespace

void MemTimeConfig::validate() const {
    build_lattice(dims.L, dims.H);
    noise.validate();
    if (!(check_fraction > 0 && check_fraction <= 1e-3)) {
        throw ConfigError("check fraction must lie in (0, 1e-3]");
    }
    if (decoder == FailureDecoder::exact) {
        if (!noise.infinite_bias()) {
            throw ConfigError("the exact decoder requires infinite bias (gamma_y == 0)");
        }
        if (!certify_size(dims.L, dims.H)) {
            throw ConfigError("the exact decoder requires a certified lattice size");
        }
    }
}

MemTimeSample memory_time_sample(const MemTimeConfig &config, std::uint64_t seed) {
    config.validate();
    Engine engine(EngineConfig{config.dims, config.noise, config.ca_enabled, seed, ActiveQubits::all});
    std::optional<ExactDecoder> exact;
    LogicalSet logicals = LogicalSet::build(config.dims);
    if (config.decoder == FailureDecoder::exact) {
        exact.emplace(config.dims);
    }

    auto failed = [&]() {
        PauliFrame error = engine.frame();
        Syndrome syn = engine.syndrome();
        if (exact) {
            auto result = exact->decode(syn);
            return !result || is_failure(error, result->correction, logicals);
        }
        auto correction = rg_decode(syn, config.dims);
        return !correction || is_failure(error, *correction, logicals);
    };

    MemTimeSample out;
    // Nothing can fail before the first event; start checking a small
    // fraction of the mean waiting time in.
    double next_check = config.check_fraction / engine.total_rate();
    double last_check = 0;
    while (true) {
        engine.step();
        if (engine.clock() > config.max_time) {
            out.t_mem = config.max_time;
            out.censored = true;
            break;
        }
        if (engine.clock() < next_check) {
            continue;
        }
        out.checks++;
        out.max_check_gap = std::max(out.max_check_gap, engine.clock() - last_check);
        last_check = engine.clock();
        if (failed()) {
            out.t_mem = engine.clock();
            break;
        }
        next_check = engine.clock() * (1 + config.check_fraction);
    }
    out.events = engine.event_count();
    return out;
}

double first_y_time(const MemTimeConfig &config, std::uint64_t seed) {
    if (config.noise.gamma_y <= 0) {
        throw ConfigError("first_y_time needs gamma_y > 0");
    }
    Engine engine(EngineConfig{config.dims, config.noise, config.ca_enabled, seed, ActiveQubits::all});
    engine.run_until_event([](const Event &e) {
        return e.letter == Pauli::Y;
    });
    return engine.clock();
}

HalfLife half_life(std::vector<double> samples) {
    if (samples.empty()) {
        throw EmptyInput("half_life needs at least one sample");
    }
    std::sort(samples.begin(), samples.end());
    std::size_t n = samples.size();
    HalfLife h;
    h.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    // Largest rank l (1-based) with P(X <= l - 1) <= 2.5%; interval [x_(l), x_(n+1-l)].
    auto cdf = half_binomial_cdf(n);
    std::size_t l = 1;
    for (std::size_t r = 2; 2 * r <= n + 1; r++) {
        if (cdf[r - 1] <= 0.025) {
            l = r;
        } else {
            break;
        }
    }
    h.ci_low = samples[l - 1];
    h.ci_high = samples[n - l];
    return h;
}

std::uint64_t sample_seed(std::uint64_t seed_base, std::size_t size_index, std::size_t k) {
    return derive_seed(derive_seed(seed_base, size_index), k);
}

std::vector<MemoryCurveRow> memory_curve(const std::vector<LatticeDims> &sizes, const MemTimeConfig &base, unsigned workers) {
    std::vector<MemoryCurveRow> rows;
    for (std::size_t s = 0; s < sizes.size(); s++) {
        MemTimeConfig config = base;
        config.dims = sizes[s];
        config.validate();
        std::vector<MemTimeSample> samples(config.n_samples);
        parallel_for(config.n_samples, workers, [&](std::size_t k) {
            samples[k] = memory_time_sample(config, sample_seed(config.seed_base, s, k));
        });
        std::vector<double> times;
        MemoryCurveRow row;
        for (const auto &smp : samples) {
            times.push_back(smp.t_mem);
            row.n_censored += smp.censored ? 1 : 0;
        }
        row.dims = config.dims;
        row.gamma_z = config.noise.gamma_z;
        row.zeta = config.noise.zeta();
        row.ca_enabled = config.ca_enabled;
        row.beta = beta_from_rate(config.noise.gamma_z);
        row.n_samples = config.n_samples;
        row.half_life = half_life(std::move(times));
        row.seed_base = config.seed_base;
        rows.push_back(row);
    }
    return rows;
}

PauliFrame iid_sample_error(const LatticeDims &dims, double p_y, double p_z, std::mt19937_64 &rng) {
    if (!(p_y >= 0 && p_z >= 0 && p_y + p_z <= 1)) {
        throw ProbabilityError("need p_y, p_z >= 0 and p_y + p_z <= 1");
    }
    PauliFrame frame(dims);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto s : {Sublattice::black, Sublattice::white}) {
        for (std::size_t j = 0; j < dims.H; j++) {
            for (std::size_t i = 0; i < dims.L; i++) {
                double r = u(rng);
                if (r < p_y) {
                    frame.apply({i, j, s}, Pauli::Y);
                } else if (r < p_y + p_z) {
                    frame.apply({i, j, s}, Pauli::Z);
                }
            }
        }
    }
    return frame;
}

PauliFrame iid_sample_error(const LatticeDims &dims, double p_y, double p_z, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return iid_sample_error(dims, p_y, p_z, rng);
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) {
        return {0, 1};
    }
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double center = (p + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

double crossing_point(const std::vector<double> &p_grid, const std::vector<double> &f_small, const std::vector<double> &f_large) {
    for (std::size_t k = 0; k + 1 < p_grid.size(); k++) {
        double d0 = f_large[k] - f_small[k];
        double d1 = f_large[k + 1] - f_small[k + 1];
        if (d0 < 0 && d1 >= 0) {
            return p_grid[k] + (p_grid[k + 1] - p_grid[k]) * (-d0) / (d1 - d0);
        }
    }
    return kNaN;
}

namespace {

// Pairwise crossings and their mean for one table of rates[size][p].
std::pair<std::vector<Crossing>, double> crossings_of(const std::vector<double> &p_grid, const std::vector<std::vector<double>> &rates) {
    std::vector<Crossing> out;
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < rates.size(); a++) {
        for (std::size_t b = a + 1; b < rates.size(); b++) {
            double p = crossing_point(p_grid, rates[a], rates[b]);
            out.push_back({a, b, p});
            if (!std::isnan(p)) {
                sum += p;
                count++;
            }
        }
    }
    return {out, count > 0 ? sum / static_cast<double>(count) : kNaN};
}

}  // namespace

ThresholdScan threshold_scan(const ThresholdConfig &config, unsigned workers) {
    if (config.sizes.size() < 2) {
        throw ConfigError("threshold_scan needs at least two sizes");
    }
    if (config.p_grid.empty() || config.trials == 0) {
        throw ConfigError("threshold_scan needs a probability grid and trials > 0");
    }
    std::size_t np = config.p_grid.size();
    ThresholdScan scan;
    scan.points.resize(config.sizes.size() * np);
    parallel_for(scan.points.size(), workers, [&](std::size_t idx) {
        const auto &dims = config.sizes[idx / np];
        build_lattice(dims.L, dims.H);
        double p_tot = config.p_grid[idx % np];
        auto noise = NoiseParams::from_total_probability(p_tot, config.zeta_p);
        noise.validate();
        LogicalSet logicals = LogicalSet::build(dims);
        ThresholdPoint pt;
        pt.dims = dims;
        pt.p_tot = p_tot;
        pt.zeta_p = config.zeta_p;
        pt.trials = config.trials;
        pt.seed = derive_seed(config.seed_base, idx);
        for (std::size_t t = 0; t < config.trials; t++) {
            PauliFrame error = iid_sample_error(dims, noise.p_y, noise.p_z, derive_seed(pt.seed, t));
            auto correction = rg_decode(syndrome(error), dims);
            if (!correction || is_failure(error, *correction, logicals)) {
                pt.failures++;
            }
        }
        pt.fail_rate = static_cast<double>(pt.failures) / static_cast<double>(pt.trials);
        pt.ci = wilson_interval(pt.failures, pt.trials);
        scan.points[idx] = pt;
    });

    std::vector<std::vector<double>> rates(config.sizes.size(), std::vector<double>(np));
    for (std::size_t idx = 0; idx < scan.points.size(); idx++) {
        rates[idx / np][idx % np] = scan.points[idx].fail_rate;
    }
    std::tie(scan.crossings, scan.p_c) = crossings_of(config.p_grid, rates);

    // Parametric bootstrap: redraw every failure count from its fitted binomial.
    std::mt19937_64 rng(derive_seed(config.seed_base, 0xb0075742ULL));
    std::vector<double> estimates;
    for (std::size_t b = 0; b < config.bootstrap; b++) {
        auto resampled = rates;
        for (auto &row : resampled) {
            for (auto &f : row) {
                std::binomial_distribution<std::size_t> draw(config.trials, f);
                f = static_cast<double>(draw(rng)) / static_cast<double>(config.trials);
            }
        }
        double p = crossings_of(config.p_grid, resampled).second;
        if (!std::isnan(p)) {
            estimates.push_back(p);
        }
    }
    scan.p_c_ci = estimates.empty() ? Interval{kNaN, kNaN} : Interval{percentile(estimates, 0.025), percentile(estimates, 0.975)};
    return scan;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>> &points, FitModel model) {
    std::size_t n = points.size();
    if (n < 3) {
        throw DegenerateFit("a scaling fit needs at least three points");
    }
    std::size_t k = model == FitModel::quadratic_exponential ? 3 : 2;
    Eigen::MatrixXd design(n, k);
    Eigen::VectorXd y(n);
    for (std::size_t r = 0; r < n; r++) {
        auto [x, v] = points[r];
        if (!(v > 0) || (model == FitModel::power_law && !(x > 0))) {
            throw DomainError("scaling fits need positive data");
        }
        y(r) = std::log(v);
        switch (model) {
            case FitModel::power_law:
                design(r, 0) = 1;
                design(r, 1) = std::log(x);
                break;
            case FitModel::quadratic_exponential:
                design(r, 0) = x * x;
                design(r, 1) = x;
                design(r, 2) = 1;
                break;
            case FitModel::linear_exponential:
                design(r, 0) = x;
                design(r, 1) = 1;
                break;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(k)) {
        throw DegenerateFit("scaling fit design matrix is rank deficient");
    }
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - design * beta;

    ScalingFit fit;
    fit.model = model;
    fit.coef.assign(beta.data(), beta.data() + k);
    fit.residuals.assign(resid.data(), resid.data() + n);
    std::size_t dof = n - k;
    if (dof == 0) {
        fit.std_errors.assign(k, kNaN);
    } else {
        double s2 = resid.squaredNorm() / static_cast<double>(dof);
        Eigen::MatrixXd cov = s2 * (design.transpose() * design).inverse();
        for (std::size_t c = 0; c < k; c++) {
            fit.std_errors.push_back(std::sqrt(cov(c, c)));
        }
    }
    return fit;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> &task) {
    unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1u << 16))));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; t++) {
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string memtime_csv_header() {
    return "run_id,L,H,gamma_z,zeta,ca_enabled,beta,n_samples,median_T,ci_low,ci_high,seed_base";
}

std::string memtime_csv_row(const MemoryCurveRow &row, const std::string &run_id) {
    std::ostringstream out;
    out << run_id << ',' << row.dims.L << ',' << row.dims.H << ',' << fmt(row.gamma_z) << ','
        << (std::isinf(row.zeta) ? std::string("inf") : fmt(row.zeta)) << ',' << (row.ca_enabled ? 1 : 0) << ','
        << fmt(row.beta) << ',' << row.n_samples << ',' << fmt(row.half_life.median) << ',' << fmt(row.half_life.ci_low)
        << ',' << fmt(row.half_life.ci_high) << ',' << row.seed_base;
    return out.str();
}

std::string threshold_csv_header() {
    return "L,H,p_tot,zeta_p,trials,failures,fail_rate,ci_low,ci_high";
}

std::string threshold_csv_row(const ThresholdPoint &p) {
    std::ostringstream out;
    out << p.dims.L << ',' << p.dims.H << ',' << fmt(p.p_tot) << ','
        << (std::isinf(p.zeta_p) ? std::string("inf") : fmt(p.zeta_p)) << ',' << p.trials << ',' << p.failures << ','
        << fmt(p.fail_rate) << ',' << fmt(p.ci.low) << ',' << fmt(p.ci.high);
    return out.str();
}

}  // namespace xyzca
