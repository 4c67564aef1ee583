#include "xyzca/exact_decoder.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "xyzca/errors.h"

namespace xyzca {

namespace {

constexpr auto kBlack = Sublattice::black;
constexpr auto kWhite = Sublattice::white;

// Beyond this kernel dimension only the tiling classes are searched.
constexpr std::size_t kMaxEnumeratedKernel = 12;

// I + F^H: row-0 configurations that come back to themselves after H steps.
BitMatrix periodicity_matrix(std::size_t L, std::size_t H) {
    BitMatrix m = mat_pow(rule108_matrix(L), H);
    m ^= BitMatrix::identity(L);
    return m;
}

std::size_t xor_weight(const BitPlane &a, const BitPlane &b) {
    std::size_t total = 0;
    for (std::size_t j = 0; j < a.height(); j++) {
        auto ra = a.row(j);
        auto rb = b.row(j);
        for (std::size_t k = 0; k < ra.size(); k++) {
            total += std::popcount(ra[k] ^ rb[k]);
        }
    }
    return total;
}

// Black geometry: clears defect rows H-1..1, returns Z plane and row-0 remainder.
std::pair<BitPlane, BitRow> sweep_plane(BitPlane d) {
    std::size_t L = d.width();
    std::size_t H = d.height();
    BitPlane c(L, H);
    std::vector<std::uint64_t> scratch(words_for_bits(L));
    for (std::size_t j = H - 1; j >= 1; j--) {
        auto row = d.row(j);
        if (!bitops::any(row)) {
            continue;
        }
        bitops::xor_into(c.row(j), row);
        bitops::rule108(row, scratch, L);
        bitops::xor_into(d.row(j - 1), scratch);
        std::fill(row.begin(), row.end(), 0);
    }
    return {std::move(c), d.row_copy(0)};
}

BitRow reverse_row(const BitRow &r) {
    std::size_t n = r.size();
    BitRow out(n);
    for (std::size_t i = 0; i < n; i++) {
        if (r.get(i)) {
            out.flip((n - i) % n);
        }
    }
    return out;
}

PauliFrame z_frame(const LatticeDims &dims, Sublattice s, BitPlane plane) {
    PauliFrame f(dims);
    f.z(s) = std::move(plane);
    return f;
}

}  // namespace

BitPlane reflect_plaquettes(const BitPlane &p) {
    std::size_t L = p.width();
    std::size_t H = p.height();
    BitPlane out(L, H);
    for (std::size_t j = 0; j < H; j++) {
        for (std::size_t i = 0; i < L; i++) {
            if (p.at(i, j)) {
                out.flip((L - i) % L, (H - j) % H);
            }
        }
    }
    return out;
}

BitPlane reflect_qubits(const BitPlane &p) {
    std::size_t L = p.width();
    std::size_t H = p.height();
    BitPlane out(L, H);
    for (std::size_t j = 0; j < H; j++) {
        for (std::size_t i = 0; i < L; i++) {
            if (p.at(i, j)) {
                out.flip((L - i) % L, (H + 1 - j) % H);
            }
        }
    }
    return out;
}

ExactDecoder::ExactDecoder(const LatticeDims &dims)
    : dims_(build_lattice(dims.L, dims.H)),
      logicals_(LogicalSet::build(dims_)),
      solver_(periodicity_matrix(dims_.L, dims_.H)),
      kernel_rows_(solver_.nullspace()) {
    for (auto s : {kBlack, kWhite}) {
        for (std::size_t c = 0; c < 4; c++) {
            class_planes_[static_cast<int>(s)][c] = logicals_.class_frame(s, static_cast<LogicalClass>(c)).z(s);
        }
    }
    std::size_t k = kernel_rows_.size();
    if (k <= 2 || k > kMaxEnumeratedKernel) {
        return;
    }
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); mask++) {
        BitRow row0(dims_.L);
        for (std::size_t b = 0; b < k; b++) {
            if ((mask >> b) & 1) {
                row0 ^= kernel_rows_[b];
            }
        }
        BitPlane black = expand_row0(row0);
        for (auto s : {kBlack, kWhite}) {
            BitPlane plane = s == kBlack ? black : reflect_qubits(black);
            const auto &classes = class_planes_[static_cast<int>(s)];
            if (std::find(classes.begin(), classes.end(), plane) == classes.end()) {
                extra_kernel_[static_cast<int>(s)].push_back(std::move(plane));
            }
        }
    }
}

BitPlane ExactDecoder::expand_row0(const BitRow &row0) const {
    std::size_t L = dims_.L;
    std::size_t H = dims_.H;
    BitPlane c(L, H);
    c.set_row(0, row0);
    // Zero defects on rows 1..H-1 forces C_j = f(C_{j+1}), wrapping through row 0.
    std::size_t prev = 0;
    for (std::size_t j = H - 1; j >= 1; j--) {
        bitops::rule108(c.row(prev), c.row(j), L);
        prev = j;
    }
    return c;
}

std::optional<BitPlane> ExactDecoder::solve_row0_plane(const BitRow &residual) const {
    if (residual.size() != dims_.L) {
        throw DimensionError("residual row length does not match the lattice width");
    }
    auto row0 = solver_.solve(residual);
    if (!row0) {
        return std::nullopt;
    }
    return expand_row0(*row0);
}

SublatticeDecode ExactDecoder::minimize_plane(BitPlane &c, Sublattice s) const {
    const auto &classes = class_planes_[static_cast<int>(s)];
    SublatticeDecode out;
    std::size_t best = 0;
    for (std::size_t k = 0; k < 4; k++) {
        out.class_weights[k] = xor_weight(c, classes[k]);
        if (out.class_weights[k] < out.class_weights[best]) {
            best = k;
        }
    }
    out.chosen = static_cast<LogicalClass>(best);
    std::size_t best_weight = out.class_weights[best];
    const BitPlane *winner = &classes[best];
    for (const auto &extra : extra_kernel_[static_cast<int>(s)]) {
        std::size_t w = xor_weight(c, extra);
        if (w < best_weight) {
            best_weight = w;
            winner = &extra;
            out.chosen = LogicalClass::Other;
        }
    }
    c ^= *winner;
    return out;
}

std::optional<DecodeResult> ExactDecoder::decode(const Syndrome &syndrome) const {
    if (syndrome.a.width() != dims_.L || syndrome.a.height() != dims_.H) {
        throw DimensionError("syndrome shape does not match the decoder lattice");
    }
    auto [c_black, res_black] = sweep_plane(syndrome.a);
    auto fix_black = solve_row0_plane(res_black);
    if (!fix_black) {
        return std::nullopt;
    }
    auto [c_white, res_white] = sweep_plane(reflect_plaquettes(syndrome.b));
    auto fix_white = solve_row0_plane(res_white);
    if (!fix_white) {
        return std::nullopt;
    }
    c_black ^= *fix_black;
    c_white ^= *fix_white;
    BitPlane z_white = reflect_qubits(c_white);

    DecodeResult result;
    result.black = minimize_plane(c_black, kBlack);
    result.white = minimize_plane(z_white, kWhite);
    result.correction = PauliFrame(dims_);
    result.correction.z(kBlack) = std::move(c_black);
    result.correction.z(kWhite) = std::move(z_white);
    return result;
}

std::pair<PauliFrame, BitRow> sweep_to_row0(const Syndrome &syndrome, Sublattice s) {
    LatticeDims dims{syndrome.a.width(), syndrome.a.height()};
    if (s == kBlack) {
        auto [c, res] = sweep_plane(syndrome.a);
        return {z_frame(dims, s, std::move(c)), std::move(res)};
    }
    auto [c, res] = sweep_plane(reflect_plaquettes(syndrome.b));
    return {z_frame(dims, s, reflect_qubits(c)), reverse_row(res)};
}

std::optional<PauliFrame> solve_row0(const BitRow &residual, const LatticeDims &dims, Sublattice s) {
    ExactDecoder decoder(dims);
    if (s == kBlack) {
        auto plane = decoder.solve_row0_plane(residual);
        if (!plane) {
            return std::nullopt;
        }
        return z_frame(dims, s, std::move(*plane));
    }
    auto plane = decoder.solve_row0_plane(reverse_row(residual));
    if (!plane) {
        return std::nullopt;
    }
    return z_frame(dims, s, reflect_qubits(*plane));
}

DecodeResult minimize_over_logicals(const PauliFrame &c, const LogicalSet &logicals) {
    DecodeResult result;
    result.correction = c;
    for (auto s : {kBlack, kWhite}) {
        SublatticeDecode part;
        std::size_t best = 0;
        for (std::size_t k = 0; k < 4; k++) {
            auto cls = static_cast<LogicalClass>(k);
            part.class_weights[k] = xor_weight(c.z(s), logicals.class_frame(s, cls).z(s));
            if (part.class_weights[k] < part.class_weights[best]) {
                best = k;
            }
        }
        part.chosen = static_cast<LogicalClass>(best);
        result.correction ^= logicals.class_frame(s, part.chosen);
        (s == kBlack ? result.black : result.white) = part;
    }
    return result;
}

std::optional<DecodeResult> decode_infinite_bias(const Syndrome &syndrome, const LatticeDims &dims) {
    return ExactDecoder(dims).decode(syndrome);
}

bool is_failure(const PauliFrame &error, const PauliFrame &correction, const LogicalSet &logicals) {
    PauliFrame product = error ^ correction;
    if (syndrome(product).any()) {
        throw NotInNormalizer("error and correction have different syndromes");
    }
    return logicals.signature(product) != 0;
}

double hoeffding_failure_bound(std::size_t n_support, double p) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError("probability must lie in [0, 1]");
    }
    double d = p - 0.5;
    return 3.0 * std::exp(-(4.0 * static_cast<double>(n_support) / 3.0) * d * d);
}

}  // namespace xyzca
