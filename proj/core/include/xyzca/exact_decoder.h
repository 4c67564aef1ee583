#ifndef XYZCA_EXACT_DECODER_H
#define XYZCA_EXACT_DECODER_H

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "xyzca/gf2.h"
#include "xyzca/lattice.h"
#include "xyzca/logicals.h"

namespace xyzca {

struct SublatticeDecode {
    /// Weight of the candidate in each tiling class, indexed by I, L, M, LM.
    std::array<std::size_t, 4> class_weights{};
    /// Tiling multiplied onto the raw correction; Other when a non-tiling
    /// kernel element won (possible only at uncertified sizes).
    LogicalClass chosen = LogicalClass::I;
};

struct DecodeResult {
    /// Pure-Z frame with the input syndrome.
    PauliFrame correction;
    SublatticeDecode black;
    SublatticeDecode white;

    const SublatticeDecode &on(Sublattice s) const {
        return s == Sublattice::black ? black : white;
    }
};

/// Clears every defect row except row 0 by placing Z on the given sublattice,
/// sweeping from row H-1 upward. Black reads A defects, white reads B defects.
/// Returns the sweep frame and the remaining row-0 defects.
std::pair<PauliFrame, BitRow> sweep_to_row0(const Syndrome &syndrome, Sublattice s);

/// Pure-Z frame on one sublattice whose syndrome is `residual` on row 0 and
/// zero elsewhere; nullopt when no such frame exists.
std::optional<PauliFrame> solve_row0(const BitRow &residual, const LatticeDims &dims, Sublattice s);

/// Per sublattice, the lightest of C, L.C, M.C, LM.C (ties go to the earlier label).
DecodeResult minimize_over_logicals(const PauliFrame &c, const LogicalSet &logicals);

/// Decoder for pure-Z noise. Construction factors (I + F^H) once so repeated
/// decodes on the same lattice cost two sweeps and two back-substitutions.
class ExactDecoder {
   public:
    explicit ExactDecoder(const LatticeDims &dims);

    const LatticeDims &dims() const {
        return dims_;
    }
    const LogicalSet &logicals() const {
        return logicals_;
    }
    /// Number of independent periodic row configurations per sublattice.
    std::size_t kernel_dimension() const {
        return kernel_rows_.size();
    }

    /// nullopt when the syndrome cannot come from Z errors alone.
    std::optional<DecodeResult> decode(const Syndrome &syndrome) const;

    /// Black-geometry Z plane whose defects are `residual` on row 0 only.
    std::optional<BitPlane> solve_row0_plane(const BitRow &residual) const;

    /// Lightest of c times each biased logical of sublattice s; c is the Z
    /// plane of that sublattice and is replaced by the winner.
    SublatticeDecode minimize_plane(BitPlane &c, Sublattice s) const;

   private:
    BitPlane expand_row0(const BitRow &row0) const;

    LatticeDims dims_;
    LogicalSet logicals_;
    Gf2Solver solver_;
    std::vector<BitRow> kernel_rows_;
    // Z planes of I, L, M, LM per sublattice.
    std::array<std::array<BitPlane, 4>, 2> class_planes_;
    // Kernel elements outside the tiling group; only filled at uncertified
    // sizes with a small kernel.
    std::array<std::vector<BitPlane>, 2> extra_kernel_;
};

/// One-shot convenience wrapper around ExactDecoder.
std::optional<DecodeResult> decode_infinite_bias(const Syndrome &syndrome, const LatticeDims &dims);

/// True iff E.C acts as a non-trivial logical. Throws NotInNormalizer when the
/// syndromes of E and C differ.
bool is_failure(const PauliFrame &error, const PauliFrame &correction, const LogicalSet &logicals);

/// 3 exp(-(4n/3)(p - 1/2)^2): failure bound for one sublattice of n qubits under
/// i.i.d. Z flips with probability p (its three biased logicals each cover 2n/3).
double hoeffding_failure_bound(std::size_t n_support, double p);

/// Point reflections that map white-sublattice geometry onto black:
/// plaquettes (i,j) -> (-i,-j), qubits (i,j) -> (-i, 1-j). Both are involutions.
BitPlane reflect_plaquettes(const BitPlane &p);
BitPlane reflect_qubits(const BitPlane &p);

}  // namespace xyzca

#endif
