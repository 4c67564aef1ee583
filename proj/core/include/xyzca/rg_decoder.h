#ifndef XYZCA_RG_DECODER_H
#define XYZCA_RG_DECODER_H

#include <optional>
#include <vector>

#include "xyzca/lattice.h"

namespace xyzca {

struct Defect {
    StabilizerKind kind = StabilizerKind::A;
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const Defect &) const = default;
};

/// Rectangle on the torus: columns i0 .. i0+width-1 and rows j0 .. j0+height-1,
/// all taken modulo (L, H).
struct TorusBox {
    std::size_t i0 = 0;
    std::size_t j0 = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    bool operator==(const TorusBox &) const = default;
};

struct Cluster {
    /// Raster order: row, then column, then A before B.
    std::vector<Defect> defects;
    /// Smallest torus rectangle holding every defect.
    TorusBox box;
    unsigned level = 0;
};

/// Chebyshev distance on the L x H torus.
std::size_t torus_distance(const LatticeDims &dims, std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2);

/// All defects of a syndrome in raster order.
std::vector<Defect> list_defects(const Syndrome &syndrome);

/// Connected components of the defects when any two at Chebyshev distance
/// <= 2^level are linked. Ordered by their first defect in raster order.
std::vector<Cluster> cluster_defects(const Syndrome &syndrome, unsigned level);

struct RgOptions {
    /// Cells added on every side of a cluster's bounding box before solving.
    std::size_t box_margin = 0;
    /// rg_decode retries a cluster that fails in its box with this many extra
    /// cells per side (0 disables the retry).
    std::size_t retry_margin = 1;
};

/// A frame supported inside the cluster's box whose syndrome is exactly the
/// cluster's defects, or nullopt if none exists. Boxes spanning a full torus
/// period are never neutralized.
std::optional<PauliFrame> neutralize_cluster(const Cluster &cluster, const LatticeDims &dims, const RgOptions &options = {});

/// Top level of the clustering hierarchy: ceil(log2(max(L, H))).
unsigned rg_max_level(const LatticeDims &dims);

/// Clusters and neutralizes defects at linking radius 1, 2, 4, ... up to
/// rg_max_level. Returns the accumulated correction, or nullopt (heralded
/// failure) when defects remain after the last level. Uses no noise model.
std::optional<PauliFrame> rg_decode(const Syndrome &syndrome, const LatticeDims &dims, const RgOptions &options = {});

}  // namespace xyzca

#endif
