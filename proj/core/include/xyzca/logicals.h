#ifndef XYZCA_LOGICALS_H
#define XYZCA_LOGICALS_H

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "xyzca/lattice.h"

namespace xyzca {

/// Label of a biased (single-letter, single-sublattice) logical relative to
/// the tiling pair (L, M). `Other` marks anything outside {I, L, M, LM}.
enum class LogicalClass : std::uint8_t { I = 0, L = 1, M = 2, LM = 3, Other = 4 };

std::string_view class_name(LogicalClass c);

/// Frame with `letter` on sublattice `s` wherever block[j % 3][i % 3] == '1'.
PauliFrame tile_frame(const LatticeDims &dims, Sublattice s, Pauli letter, const std::array<std::string_view, 3> &block);

/// Row blocks of the two independent tilings (rows j = 0, 1, 2).
inline constexpr std::array<std::string_view, 3> kTileBlockL{"110", "101", "011"};
inline constexpr std::array<std::string_view, 3> kTileBlockM{"101", "011", "110"};

struct SublatticeTilings {
    PauliFrame l;
    PauliFrame m;
};

/// Pure-Z tilings of the 3x3 periodic block, two per sublattice.
struct TilingLogicals {
    SublatticeTilings black;
    SublatticeTilings white;

    const SublatticeTilings &on(Sublattice s) const {
        return s == Sublattice::black ? black : white;
    }
};

TilingLogicals tile_logicals(std::size_t L, std::size_t H);

/// Order of string_logicals(): Zbar_{x,R}, Zbar_{y,R}, Zbar_{x,B}, Zbar_{y,B},
/// Xbar_{x,R}, Xbar_{y,R}, Xbar_{x,B}, Xbar_{y,B}.
inline constexpr std::array<std::string_view, 8> kStringLogicalNames{
    "Z_xR", "Z_yR", "Z_xB", "Z_yB", "X_xR", "X_yR", "X_xB", "X_yB"};

/// Horizontal and vertical string logicals of the underlying color code,
/// rotated into the XYZ basis. Colors advance by shifting one column left.
std::array<PauliFrame, 8> string_logicals(std::size_t L, std::size_t H);

/// +1 if the frames commute, -1 if they anticommute.
int pauli_commutes(const PauliFrame &a, const PauliFrame &b);

/// dim ker(F^H + I) over length-L rows: number of independent biased logicals
/// per sublattice (before quotienting by stabilizers).
std::size_t count_biased_logicals(std::size_t L, std::size_t H);

/// True iff exactly two biased logicals per sublattice and not both sides even.
bool certify_size(std::size_t L, std::size_t H);

/// Sizes (3*2^n, 3*(2^n + 1)) for n = 1..n_max that pass certify_size.
std::vector<std::pair<std::size_t, std::size_t>> propose_sizes(unsigned n_max);

/// Heights H = 3p, p prime and not dividing Pi_L, that certify with width L.
std::vector<std::size_t> prime_construction_heights(std::size_t L, std::size_t count);

/// Biased-logical tilings, string logicals, and the pairing signatures used to
/// classify zero-syndrome frames.
struct LogicalSet {
    LatticeDims dims;
    TilingLogicals tilings;
    std::array<PauliFrame, 8> strings;

    static LogicalSet build(const LatticeDims &dims);

    /// Bit k set iff the frame anticommutes with strings[k].
    std::uint8_t signature(const PauliFrame &frame) const;
    /// Tiling frame for a class label (I gives the identity).
    PauliFrame class_frame(Sublattice s, LogicalClass c) const;
};

struct SublatticeClasses {
    LogicalClass black = LogicalClass::I;
    LogicalClass white = LogicalClass::I;
    bool operator==(const SublatticeClasses &) const = default;
};

/// Class label per sublattice of a zero-syndrome frame, read from its pairing
/// with the string logicals. Both labels are Other when the frame lies outside
/// the group of Z tilings. Throws NotInNormalizer on a nonzero syndrome.
SublatticeClasses logical_class(const PauliFrame &frame, const LogicalSet &basis);

/// True iff a zero-syndrome frame acts non-trivially on the code space.
bool is_nontrivial_logical(const PauliFrame &frame, const LogicalSet &basis);

}  // namespace xyzca

#endif
