#include "xyzca/dynamics.h"

#include <cmath>

#include "json.hpp"
#include "xyzca/errors.h"

namespace xyzca {

double beta_from_rate(double gamma_z) {
    if (!(gamma_z > 0) || std::isinf(gamma_z)) {
        throw DomainError("beta_from_rate needs a finite gamma_z > 0");
    }
    return std::log1p(6.0 / gamma_z) / 6.0;
}

double total_rate(double omega, double beta) {
    if (!(beta > 0)) {
        throw DomainError("total_rate needs beta > 0");
    }
    if (omega == 0) {
        return 1.0 / beta;
    }
    return omega / -std::expm1(-beta * omega);
}

double ca_rate(double omega, double beta, double gamma_z) {
    double g = total_rate(omega, beta);
    double r = g - gamma_z;
    if (r < 0) {
        if (r > -1e-12 * std::max(g, gamma_z)) {
            return 0;
        }
        throw NegativeRate("beta is too large for gamma_z: the automaton rate would be negative");
    }
    return r;
}

double y_rate(double gamma_z, double zeta) {
    if (!(zeta > 0)) {
        throw DomainError("bias zeta must be positive");
    }
    return std::isinf(zeta) ? 0.0 : gamma_z / zeta;
}

RateTable RateTable::build(const NoiseParams &noise, bool ca_enabled) {
    noise.validate();
    if (noise.gamma_x != 0) {
        throw ConfigError("the dynamics supports Z and Y noise only");
    }
    if (!(noise.gamma_z > 0)) {
        throw ConfigError("gamma_z must be positive");
    }
    RateTable t;
    t.gamma_z = noise.gamma_z;
    t.zeta = noise.zeta();
    t.ca_enabled = ca_enabled;
    t.beta = beta_from_rate(noise.gamma_z);
    for (int c = 0; c < kEnergyClasses; c++) {
        int delta_e = 2 * c - 6;
        double w = -delta_e;
        t.z_flip[c] = ca_enabled ? t.gamma_z + ca_rate(w, t.beta, t.gamma_z) : t.gamma_z;
    }
    t.y = noise.gamma_y;
    return t;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace {

// Defect kinds toggled by P on a sublattice: bit 0 = A, bit 1 = B.
constexpr std::array<std::array<std::uint8_t, 4>, 2> kToggles{{
    {0, 2, 1, 3},  // black: X -> B, Z -> A, Y -> both
    {0, 3, 2, 1},  // white: X -> both, Z -> B, Y -> A
}};

int plaquette_energy(int a, int b) {
    return a + b + (a ^ b);
}

constexpr std::uint8_t kInactive = 0xff;

}  // namespace

Engine::Engine(const EngineConfig &config)
    : config_(config), rates_(RateTable::build(config.noise, config.ca_enabled)), rng_(config.seed) {
    const auto &d = config_.dims;
    build_lattice(d.L, d.H);
    std::size_t cells = d.cells();
    state_.assign(2 * cells, 0);
    a_.assign(cells, 0);
    b_.assign(cells, 0);
    class_of_.assign(2 * cells, kInactive);
    slot_.assign(2 * cells, 0);
    plaquettes_.resize(2 * cells);
    sites_.resize(cells);
    for (std::size_t idx = 0; idx < 2 * cells; idx++) {
        auto pls = plaquettes_of(d, coord(idx));
        for (std::size_t k = 0; k < 3; k++) {
            plaquettes_[idx][k] = static_cast<std::uint32_t>(d.cell(pls[k].i, pls[k].j));
        }
    }
    for (std::size_t j = 0; j < d.H; j++) {
        for (std::size_t i = 0; i < d.L; i++) {
            auto s = plaquette_sites(d, i, j);
            for (std::size_t k = 0; k < 6; k++) {
                sites_[d.cell(i, j)][k] = static_cast<std::uint32_t>(index(s[k]));
            }
        }
    }
    std::size_t n_active = config_.active == ActiveQubits::all ? 2 * cells : cells;
    for (std::size_t idx = 0; idx < n_active; idx++) {
        active_.push_back(static_cast<std::uint32_t>(idx));
        rebucket(idx);
    }
}

QubitCoord Engine::coord(std::size_t idx) const {
    const auto &d = config_.dims;
    std::size_t cells = d.cells();
    auto s = idx >= cells ? Sublattice::white : Sublattice::black;
    std::size_t c = idx % cells;
    return {c % d.L, c / d.L, s};
}

int Engine::z_delta(std::size_t idx) const {
    int kinds = kToggles[idx >= config_.dims.cells()][static_cast<int>(Pauli::Z)];
    int delta = 0;
    for (auto cell : plaquettes_[idx]) {
        int a = a_[cell];
        int b = b_[cell];
        delta += plaquette_energy(a ^ (kinds & 1), b ^ (kinds >> 1)) - plaquette_energy(a, b);
    }
    return delta;
}

void Engine::rebucket(std::size_t idx) {
    auto c = static_cast<std::uint8_t>(energy_class(z_delta(idx)));
    std::uint8_t old = class_of_[idx];
    if (old == c) {
        return;
    }
    if (old != kInactive) {
        auto &from = buckets_[old];
        std::uint32_t moved = from.back();
        from[slot_[idx]] = moved;
        slot_[moved] = slot_[idx];
        from.pop_back();
    }
    auto &to = buckets_[c];
    slot_[idx] = static_cast<std::uint32_t>(to.size());
    to.push_back(static_cast<std::uint32_t>(idx));
    class_of_[idx] = c;
}

void Engine::apply(std::size_t idx, Pauli p) {
    int kinds = kToggles[idx >= config_.dims.cells()][static_cast<int>(p)];
    state_[idx] ^= static_cast<std::uint8_t>(p);
    if (kinds == 0) {
        return;
    }
    for (auto cell : plaquettes_[idx]) {
        a_[cell] ^= kinds & 1;
        b_[cell] ^= kinds >> 1;
    }
    for (auto cell : plaquettes_[idx]) {
        for (auto site : sites_[cell]) {
            if (class_of_[site] != kInactive) {
                rebucket(site);
            }
        }
    }
}

double Engine::total_rate() const {
    double total = static_cast<double>(active_.size()) * rates_.y;
    for (int c = 0; c < kEnergyClasses; c++) {
        total += static_cast<double>(buckets_[c].size()) * rates_.z_flip[c];
    }
    return total;
}

double Engine::recomputed_total_rate() const {
    double total = 0;
    for (auto idx : active_) {
        total += rates_.z_flip_rate(z_delta(idx)) + rates_.y;
    }
    return total;
}

Event Engine::fire(double dt, double total) {
    std::uniform_real_distribution<double> pick(0.0, total);
    double u = pick(rng_);
    Event e;
    e.dt = dt;
    int chosen = -1;
    int last_nonempty = -1;
    for (int c = 0; c < kEnergyClasses; c++) {
        double r = static_cast<double>(buckets_[c].size()) * rates_.z_flip[c];
        if (r <= 0) {
            continue;
        }
        last_nonempty = c;
        if (u < r) {
            chosen = c;
            break;
        }
        u -= r;
    }
    bool y_event = chosen < 0 && !active_.empty() && rates_.y > 0;
    if (chosen < 0 && !y_event) {
        // u fell past the end through round-off.
        chosen = last_nonempty;
    }
    std::size_t idx = 0;
    if (y_event) {
        std::uniform_int_distribution<std::size_t> which(0, active_.size() - 1);
        idx = active_[which(rng_)];
        e.letter = Pauli::Y;
    } else {
        const auto &bucket = buckets_[chosen];
        std::uniform_int_distribution<std::size_t> which(0, bucket.size() - 1);
        idx = bucket[which(rng_)];
        e.letter = Pauli::Z;
        e.delta_e = 2 * chosen - 6;
    }
    if (e.letter == Pauli::Y) {
        int delta = 0;
        int kinds = kToggles[idx >= config_.dims.cells()][static_cast<int>(Pauli::Y)];
        for (auto cell : plaquettes_[idx]) {
            int a = a_[cell];
            int b = b_[cell];
            delta += plaquette_energy(a ^ (kinds & 1), b ^ (kinds >> 1)) - plaquette_energy(a, b);
        }
        e.delta_e = delta;
    }
    e.q = coord(idx);
    apply(idx, e.letter);
    clock_ += dt;
    events_++;
    return e;
}

Event Engine::step() {
    double total = total_rate();
    if (!(total > 0)) {
        throw DomainError("no event has a positive rate");
    }
    std::exponential_distribution<double> wait(total);
    return fire(wait(rng_), total);
}

void Engine::run_until(double t_stop) {
    while (clock_ < t_stop) {
        double total = total_rate();
        if (!(total > 0)) {
            clock_ = t_stop;
            return;
        }
        std::exponential_distribution<double> wait(total);
        double dt = wait(rng_);
        if (clock_ + dt > t_stop) {
            clock_ = t_stop;
            return;
        }
        fire(dt, total);
    }
}

PauliFrame Engine::frame() const {
    PauliFrame f(config_.dims);
    for (std::size_t idx = 0; idx < state_.size(); idx++) {
        if (state_[idx] != 0) {
            f.apply(coord(idx), static_cast<Pauli>(state_[idx]));
        }
    }
    return f;
}

Syndrome Engine::syndrome() const {
    const auto &d = config_.dims;
    Syndrome s(d);
    for (std::size_t cell = 0; cell < d.cells(); cell++) {
        if (a_[cell]) {
            s.a.flip(cell % d.L, cell / d.L);
        }
        if (b_[cell]) {
            s.b.flip(cell % d.L, cell / d.L);
        }
    }
    return s;
}

long Engine::energy() const {
    long total = 0;
    for (std::size_t cell = 0; cell < a_.size(); cell++) {
        total += plaquette_energy(a_[cell], b_[cell]);
    }
    return total;
}

std::string Engine::snapshot_json() const {
    nlohmann::json j;
    j["clock"] = clock_;
    j["event_count"] = events_;
    j["seed"] = config_.seed;
    j["frame"] = nlohmann::json::parse(frame_to_json(frame()));
    return j.dump();
}

Engine init_engine(const LatticeDims &dims, const NoiseParams &noise, bool ca_enabled, std::uint64_t seed) {
    return Engine(EngineConfig{dims, noise, ca_enabled, seed, ActiveQubits::all});
}

}  // namespace xyzca
