#ifndef XYZCA_LATTICE_H
#define XYZCA_LATTICE_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "xyzca/gf2.h"

namespace xyzca {

/// Periodic L x H lattice of two-qubit unit cells (one black, one white qubit
/// per cell) with one A and one B plaquette per cell.
struct LatticeDims {
    std::size_t L = 0;
    std::size_t H = 0;

    std::size_t cells() const {
        return L * H;
    }
    std::size_t num_qubits() const {
        return 2 * L * H;
    }
    std::size_t cell(std::size_t i, std::size_t j) const {
        return j * L + i;
    }
    std::size_t wrap_i(std::ptrdiff_t i) const {
        auto l = static_cast<std::ptrdiff_t>(L);
        return static_cast<std::size_t>(((i % l) + l) % l);
    }
    std::size_t wrap_j(std::ptrdiff_t j) const {
        auto h = static_cast<std::ptrdiff_t>(H);
        return static_cast<std::size_t>(((j % h) + h) % h);
    }
    bool operator==(const LatticeDims &) const = default;
};

/// Validates L and H (>= 3, multiples of 3). Throws DimensionError.
LatticeDims build_lattice(std::size_t L, std::size_t H);

enum class Sublattice : std::uint8_t { black = 0, white = 1 };

/// Two-bit symplectic encoding: bit 0 = X component, bit 1 = Z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_char(Pauli p);

enum class StabilizerKind : std::uint8_t { A, B };

struct QubitCoord {
    std::size_t i = 0;
    std::size_t j = 0;
    Sublattice s = Sublattice::black;
    bool operator==(const QubitCoord &) const = default;
};

struct PlaquetteCoord {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const PlaquetteCoord &) const = default;
};

/// The three plaquettes containing qubit q.
///   black (i,j): (i,j), (i,j-1), (i-1,j-1)
///   white (i,j): (i,j-1), (i,j), (i+1,j)
std::array<PlaquetteCoord, 3> plaquettes_of(const LatticeDims &dims, const QubitCoord &q);

/// Sites of plaquette (i,j): black (i,j),(i,j+1),(i+1,j+1); white (i,j),(i,j+1),(i-1,j).
std::array<QubitCoord, 6> plaquette_sites(const LatticeDims &dims, std::size_t i, std::size_t j);

/// L x H bit grid indexed (column i, row j), stored row-major so row j is a
/// contiguous length-L bit row.
class BitPlane {
   public:
    BitPlane() = default;
    BitPlane(std::size_t L, std::size_t H) : bits_(H, L) {
    }

    std::size_t width() const {
        return bits_.cols();
    }
    std::size_t height() const {
        return bits_.rows();
    }

    bool at(std::size_t i, std::size_t j) const {
        return bits_.get(j, i);
    }
    void set(std::size_t i, std::size_t j, bool value) {
        bits_.set(j, i, value);
    }
    void flip(std::size_t i, std::size_t j) {
        bits_.flip(j, i);
    }

    std::span<std::uint64_t> row(std::size_t j) {
        return bits_.row(j);
    }
    std::span<const std::uint64_t> row(std::size_t j) const {
        return bits_.row(j);
    }
    BitRow row_copy(std::size_t j) const {
        return bits_.row_copy(j);
    }
    void set_row(std::size_t j, const BitRow &r) {
        bits_.set_row(j, r);
    }

    std::size_t weight() const {
        return bits_.weight();
    }
    bool any() const {
        return bits_.any();
    }

    BitPlane &operator^=(const BitPlane &other) {
        bits_ ^= other.bits_;
        return *this;
    }
    friend BitPlane operator^(BitPlane a, const BitPlane &b) {
        a ^= b;
        return a;
    }
    BitPlane operator&(const BitPlane &other) const;
    bool operator==(const BitPlane &) const = default;

   private:
    BitMatrix bits_;
};

/// A Pauli operator on all 2LH qubits, up to phase, as X and Z bit planes per
/// sublattice. Composition is XOR of the planes.
class PauliFrame {
   public:
    PauliFrame() = default;
    explicit PauliFrame(const LatticeDims &dims);

    const LatticeDims &dims() const {
        return dims_;
    }

    BitPlane &x(Sublattice s) {
        return planes_[2 * static_cast<int>(s)];
    }
    const BitPlane &x(Sublattice s) const {
        return planes_[2 * static_cast<int>(s)];
    }
    BitPlane &z(Sublattice s) {
        return planes_[2 * static_cast<int>(s) + 1];
    }
    const BitPlane &z(Sublattice s) const {
        return planes_[2 * static_cast<int>(s) + 1];
    }

    Pauli get(const QubitCoord &q) const;
    /// Multiplies P onto qubit q.
    void apply(const QubitCoord &q, Pauli p);

    /// Number of qubits acted on non-trivially.
    std::size_t weight() const;
    std::size_t weight(Sublattice s) const;
    bool is_identity() const;
    /// True when no qubit carries an X component.
    bool is_pure_z() const;

    /// Copy keeping only the qubits of one sublattice.
    PauliFrame restricted(Sublattice s) const;

    PauliFrame &operator^=(const PauliFrame &other);
    friend PauliFrame operator^(PauliFrame a, const PauliFrame &b) {
        a ^= b;
        return a;
    }
    bool operator==(const PauliFrame &) const = default;

   private:
    LatticeDims dims_;
    std::array<BitPlane, 4> planes_;
};

/// Value-returning form of PauliFrame::apply.
PauliFrame apply_pauli(PauliFrame frame, const QubitCoord &q, Pauli p);

struct StabilizerSite {
    QubitCoord q;
    Pauli letter;
};

/// The six (site, letter) pairs of A_{i,j} (X on black, Z on white) or
/// B_{i,j} (Z on black, Y on white). Indices wrap.
std::array<StabilizerSite, 6> stabilizer_support(
    const LatticeDims &dims, StabilizerKind kind, std::ptrdiff_t i, std::ptrdiff_t j);

/// Defect configuration: one bit per A plaquette and one per B plaquette.
struct Syndrome {
    BitPlane a;
    BitPlane b;

    Syndrome() = default;
    explicit Syndrome(const LatticeDims &dims) : a(dims.L, dims.H), b(dims.L, dims.H) {
    }

    bool any() const {
        return a.any() || b.any();
    }
    std::size_t weight() const {
        return a.weight() + b.weight();
    }
    Syndrome &operator^=(const Syndrome &other) {
        a ^= other.a;
        b ^= other.b;
        return *this;
    }
    bool operator==(const Syndrome &) const = default;
};

Syndrome syndrome(const PauliFrame &frame);

/// Defect plane produced by the pair (black plane, white plane) through the
/// plaquette incidence map shared by both defect kinds:
///   out(i,j) = black(i,j) + black(i,j+1) + black(i+1,j+1) + white(i,j+1) + white(i,j) + white(i-1,j).
/// A defects come from (black Z, white X); B defects from (black X, white X^Z).
BitPlane incidence_map(const BitPlane &black, const BitPlane &white);

/// Energy of the symmetric Newman-Moore Hamiltonian in 0/1 units:
/// sum over plaquettes of a + b + (a xor b).
long energy(const Syndrome &s);

/// Change in energy when P is applied to q, read from the <= 3 plaquettes around q.
int local_energy_change(const Syndrome &s, const QubitCoord &q, Pauli p);
int local_energy_change(const PauliFrame &frame, const QubitCoord &q, Pauli p);

/// Poisson rates and per-interval probabilities of single-qubit Pauli noise.
struct NoiseParams {
    double gamma_x = 0;
    double gamma_y = 0;
    double gamma_z = 0;
    double p_x = 0;
    double p_y = 0;
    double p_z = 0;

    double gamma_tot() const {
        return gamma_x + gamma_y + gamma_z;
    }
    double p_tot() const {
        return p_x + p_y + p_z;
    }
    /// gamma_z / gamma_y; infinity when gamma_y == 0.
    double zeta() const;
    /// p_z / p_y; infinity when p_y == 0.
    double zeta_p() const;
    bool infinite_bias() const {
        return gamma_x == 0 && gamma_y == 0;
    }

    /// Y+Z noise with gamma_z + gamma_y == gamma_tot and gamma_z / gamma_y == zeta.
    static NoiseParams from_total_rate(double gamma_tot, double zeta);
    /// Y+Z noise with p_z + p_y == p_tot and p_z / p_y == zeta_p.
    static NoiseParams from_total_probability(double p_tot, double zeta_p);

    /// Throws ConfigError unless rates are >= 0 and probabilities lie in [0, 1/2].
    void validate() const;
};

constexpr double kInfiniteBias = std::numeric_limits<double>::infinity();

/// JSON {"L":..,"H":..,"x_plane":hex,"z_plane":hex}. Each plane packs 2LH
/// bits, black sublattice first then white, each row-major (k = j*L + i);
/// bit k lives in byte k/8 at position k%8 (LSB first); bytes are written as
/// two lowercase hex digits each.
std::string frame_to_json(const PauliFrame &frame);
PauliFrame frame_from_json(const std::string &text);

/// JSON {"L":..,"H":..,"a_defects":hex,"b_defects":hex} with LH bits per plane,
/// same packing as the frame format.
std::string syndrome_to_json(const LatticeDims &dims, const Syndrome &s);
Syndrome syndrome_from_json(const std::string &text, LatticeDims *dims_out);

}  // namespace xyzca

#endif
