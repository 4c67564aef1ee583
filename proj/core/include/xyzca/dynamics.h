#ifndef XYZCA_DYNAMICS_H
#define XYZCA_DYNAMICS_H

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xyzca/lattice.h"

namespace xyzca {

/// Inverse temperature at which the cellular-automaton rate of the most
/// favourable move is exactly zero: (1/6) ln((6 + gamma_z) / gamma_z).
double beta_from_rate(double gamma_z);

/// G(w) = w / (1 - exp(-beta w)), with G(0) = 1/beta. Obeys G(w) = e^{beta w} G(-w).
double total_rate(double omega, double beta);

/// G(w) - gamma_z. Throws NegativeRate if that is negative beyond round-off.
double ca_rate(double omega, double beta, double gamma_z);

/// Y flips per qubit per unit time: gamma_z / zeta (0 at infinite bias).
double y_rate(double gamma_z, double zeta);

/// Number of energy classes of a Z flip: dE in {-6, -4, ..., +6}.
inline constexpr int kEnergyClasses = 7;

inline constexpr int energy_class(int delta_e) {
    return (delta_e + 6) / 2;
}

/// Per-qubit event rates of the continuous-time dynamics.
///
/// A Z flip that changes the energy by dE releases w = -dE, and happens at
/// rate G(w) with the cellular automaton on (noise gamma_z plus automaton
/// gamma_q(w)), or at rate gamma_z with it off. Detailed balance then makes
/// exp(-beta E) stationary under Z flips alone.
struct RateTable {
    double beta = 0;
    double gamma_z = 0;
    double zeta = 0;
    bool ca_enabled = true;
    /// Z-flip rate indexed by energy_class(dE).
    std::array<double, kEnergyClasses> z_flip{};
    double y = 0;

    static RateTable build(const NoiseParams &noise, bool ca_enabled);

    double z_flip_rate(int delta_e) const {
        return z_flip[energy_class(delta_e)];
    }
};

/// splitmix64 finalizer; used to spread seeds across samples.
std::uint64_t splitmix64(std::uint64_t x);
/// Seed of sample `index` in a run with base seed `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class ActiveQubits : std::uint8_t { all, black_only };

struct EngineConfig {
    LatticeDims dims;
    NoiseParams noise;
    bool ca_enabled = true;
    std::uint64_t seed = 0;
    /// black_only freezes the white sublattice (single-sublattice dynamics).
    ActiveQubits active = ActiveQubits::all;
};

struct Event {
    QubitCoord q;
    Pauli letter = Pauli::I;
    /// Time spent in the previous state.
    double dt = 0;
    int delta_e = 0;
};

/// Rejection-free (n-fold way) simulation of Z and Y flips. Each qubit sits
/// in one Z bucket keyed by the energy change of flipping it; Y flips are
/// uniform. After a flip only qubits sharing a plaquette with it are rebucketed.
class Engine {
   public:
    explicit Engine(const EngineConfig &config);

    /// Draws the waiting time and event, applies it, advances the clock.
    /// Requires total_rate() > 0.
    Event step();

    /// Steps until the next event would land after t_stop; the clock then
    /// rests at t_stop (the waiting time is memoryless).
    void run_until(double t_stop);

    /// Steps until pred(event) returns true; returns that event.
    template <class Pred>
    Event run_until_event(Pred &&pred) {
        while (true) {
            Event e = step();
            if (pred(e)) {
                return e;
            }
        }
    }

    double clock() const {
        return clock_;
    }
    std::uint64_t event_count() const {
        return events_;
    }
    std::uint64_t seed() const {
        return config_.seed;
    }
    const LatticeDims &dims() const {
        return config_.dims;
    }
    const RateTable &rates() const {
        return rates_;
    }

    /// Sum of all event rates from the bucket populations.
    double total_rate() const;
    /// Same total computed by re-evaluating every qubit from the syndrome.
    double recomputed_total_rate() const;
    std::size_t class_population(int delta_e) const {
        return buckets_[energy_class(delta_e)].size();
    }

    Pauli pauli_at(const QubitCoord &q) const {
        return static_cast<Pauli>(state_[index(q)]);
    }
    PauliFrame frame() const;
    Syndrome syndrome() const;
    long energy() const;

    /// {"clock", "event_count", "seed", "frame"}; frame uses the frame JSON format.
    std::string snapshot_json() const;

   private:
    std::size_t index(const QubitCoord &q) const {
        return static_cast<std::size_t>(q.s) * config_.dims.cells() + config_.dims.cell(q.i, q.j);
    }
    QubitCoord coord(std::size_t idx) const;
    int z_delta(std::size_t idx) const;
    void rebucket(std::size_t idx);
    void apply(std::size_t idx, Pauli p);
    Event fire(double dt, double total);

    EngineConfig config_;
    RateTable rates_;
    std::mt19937_64 rng_;
    double clock_ = 0;
    std::uint64_t events_ = 0;

    std::vector<std::uint8_t> state_;
    std::vector<std::uint8_t> a_;
    std::vector<std::uint8_t> b_;
    std::vector<std::uint32_t> active_;
    std::array<std::vector<std::uint32_t>, kEnergyClasses> buckets_;
    std::vector<std::uint8_t> class_of_;
    std::vector<std::uint32_t> slot_;
    // plaquette cells touched by each qubit, and the qubits of each plaquette
    std::vector<std::array<std::uint32_t, 3>> plaquettes_;
    std::vector<std::array<std::uint32_t, 6>> sites_;
};

Engine init_engine(const LatticeDims &dims, const NoiseParams &noise, bool ca_enabled, std::uint64_t seed);

}  // namespace xyzca

#endif
