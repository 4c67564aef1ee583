#include "xyzca/logicals.h"

#include <bit>

#include "xyzca/errors.h"

namespace xyzca {

namespace {

constexpr auto kBlack = Sublattice::black;
constexpr auto kWhite = Sublattice::white;

// Parity of popcount(a & b) over two planes of equal shape.
bool and_parity(const BitPlane &a, const BitPlane &b) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < a.height(); j++) {
        auto ra = a.row(j);
        auto rb = b.row(j);
        for (std::size_t k = 0; k < ra.size(); k++) {
            acc ^= ra[k] & rb[k];
        }
    }
    return std::popcount(acc) & 1;
}

bool anticommutes(const PauliFrame &a, const PauliFrame &b) {
    bool odd = false;
    for (auto s : {kBlack, kWhite}) {
        odd ^= and_parity(a.x(s), b.z(s));
        odd ^= and_parity(a.z(s), b.x(s));
    }
    return odd;
}

// Translate every plane by k columns so that out(i) = in(i + k).
PauliFrame shift_left(const PauliFrame &f, std::size_t k) {
    const auto &d = f.dims();
    PauliFrame out(d);
    for (auto s : {kBlack, kWhite}) {
        for (std::size_t j = 0; j < d.H; j++) {
            for (std::size_t i = 0; i < d.L; i++) {
                QubitCoord src{(i + k) % d.L, j, s};
                out.apply({i, j, s}, f.get(src));
            }
        }
    }
    return out;
}

// Z -> X, Y -> Z on every qubit.
PauliFrame z_to_x(const PauliFrame &f) {
    PauliFrame out(f.dims());
    for (auto s : {kBlack, kWhite}) {
        out.x(s) = f.z(s) ^ (f.x(s) & f.z(s));
        out.z(s) = f.x(s) & f.z(s);
    }
    return out;
}

bool pattern_bit(std::string_view pattern, std::size_t k) {
    return pattern[k % 3] == '1';
}

}  // namespace

std::string_view class_name(LogicalClass c) {
    switch (c) {
        case LogicalClass::I:
            return "I";
        case LogicalClass::L:
            return "L";
        case LogicalClass::M:
            return "M";
        case LogicalClass::LM:
            return "LM";
        case LogicalClass::Other:
            break;
    }
    return "Other";
}

PauliFrame tile_frame(const LatticeDims &dims, Sublattice s, Pauli letter, const std::array<std::string_view, 3> &block) {
    PauliFrame f(dims);
    for (std::size_t j = 0; j < dims.H; j++) {
        for (std::size_t i = 0; i < dims.L; i++) {
            if (pattern_bit(block[j % 3], i)) {
                f.apply({i, j, s}, letter);
            }
        }
    }
    return f;
}

TilingLogicals tile_logicals(std::size_t L, std::size_t H) {
    auto d = build_lattice(L, H);
    return TilingLogicals{
        {tile_frame(d, kBlack, Pauli::Z, kTileBlockL), tile_frame(d, kBlack, Pauli::Z, kTileBlockM)},
        {tile_frame(d, kWhite, Pauli::Z, kTileBlockL), tile_frame(d, kWhite, Pauli::Z, kTileBlockM)},
    };
}

std::array<PauliFrame, 8> string_logicals(std::size_t L, std::size_t H) {
    auto d = build_lattice(L, H);
    constexpr std::string_view kBlackPattern = "011";
    constexpr std::string_view kWhitePattern = "101";

    // Horizontal red string along row 2.
    PauliFrame x_red(d);
    for (std::size_t i = 0; i < L; i++) {
        if (pattern_bit(kBlackPattern, i)) {
            x_red.apply({i, 2, kBlack}, Pauli::Z);
        }
        if (pattern_bit(kWhitePattern, i)) {
            x_red.apply({i, 2, kWhite}, Pauli::Y);
        }
    }
    // Vertical red string through black column 1 and white column 0.
    PauliFrame y_red(d);
    for (std::size_t j = 0; j < H; j++) {
        if (pattern_bit(kBlackPattern, j)) {
            y_red.apply({1, j, kBlack}, Pauli::Z);
        }
        if (pattern_bit(kWhitePattern, j)) {
            y_red.apply({0, j, kWhite}, Pauli::Y);
        }
    }
    PauliFrame x_blue = shift_left(x_red, 2);
    PauliFrame y_blue = shift_left(y_red, 2);
    return {x_red, y_red, x_blue, y_blue, z_to_x(x_red), z_to_x(y_red), z_to_x(x_blue), z_to_x(y_blue)};
}

int pauli_commutes(const PauliFrame &a, const PauliFrame &b) {
    return anticommutes(a, b) ? -1 : 1;
}

std::size_t count_biased_logicals(std::size_t L, std::size_t H) {
    build_lattice(L, H);
    BitMatrix m = mat_pow(rule108_matrix(L), H);
    m ^= BitMatrix::identity(L);
    return L - m.rank();
}

bool certify_size(std::size_t L, std::size_t H) {
    return count_biased_logicals(L, H) == 2 && !(L % 2 == 0 && H % 2 == 0);
}

std::vector<std::pair<std::size_t, std::size_t>> propose_sizes(unsigned n_max) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (unsigned n = 1; n <= n_max; n++) {
        std::size_t p = std::size_t{1} << n;
        std::size_t L = 3 * p;
        std::size_t H = 3 * (p + 1);
        if (certify_size(L, H)) {
            out.emplace_back(L, H);
        }
    }
    return out;
}

std::vector<std::size_t> prime_construction_heights(std::size_t L, std::size_t count) {
    std::uint64_t pi = cycle_length_from_single_one(L);
    std::vector<std::size_t> out;
    std::vector<std::size_t> primes;
    for (std::size_t p = 2; out.size() < count; p++) {
        bool prime = true;
        for (auto q : primes) {
            if (q * q > p) {
                break;
            }
            if (p % q == 0) {
                prime = false;
                break;
            }
        }
        if (!prime) {
            continue;
        }
        primes.push_back(p);
        if (pi % p != 0 && certify_size(L, 3 * p)) {
            out.push_back(3 * p);
        }
    }
    return out;
}

LogicalSet LogicalSet::build(const LatticeDims &dims) {
    return LogicalSet{dims, tile_logicals(dims.L, dims.H), string_logicals(dims.L, dims.H)};
}

std::uint8_t LogicalSet::signature(const PauliFrame &frame) const {
    std::uint8_t sig = 0;
    for (std::size_t k = 0; k < strings.size(); k++) {
        if (anticommutes(frame, strings[k])) {
            sig |= std::uint8_t(1u << k);
        }
    }
    return sig;
}

PauliFrame LogicalSet::class_frame(Sublattice s, LogicalClass c) const {
    const auto &t = tilings.on(s);
    switch (c) {
        case LogicalClass::I:
            return PauliFrame(dims);
        case LogicalClass::L:
            return t.l;
        case LogicalClass::M:
            return t.m;
        case LogicalClass::LM:
            return t.l ^ t.m;
        case LogicalClass::Other:
            break;
    }
    throw DomainError("no frame for class Other");
}

SublatticeClasses logical_class(const PauliFrame &frame, const LogicalSet &basis) {
    if (syndrome(frame).any()) {
        throw NotInNormalizer("frame has a nonzero syndrome");
    }
    // Stabilizers pair trivially with every string, so the signature fixes the
    // class; match it against the 16 products of black and white tilings.
    std::uint8_t sig = basis.signature(frame);
    std::array<std::uint8_t, 4> black{};
    std::array<std::uint8_t, 4> white{};
    for (std::size_t c = 0; c < 4; c++) {
        black[c] = basis.signature(basis.class_frame(kBlack, static_cast<LogicalClass>(c)));
        white[c] = basis.signature(basis.class_frame(kWhite, static_cast<LogicalClass>(c)));
    }
    for (std::size_t b = 0; b < 4; b++) {
        for (std::size_t w = 0; w < 4; w++) {
            if ((black[b] ^ white[w]) == sig) {
                return {static_cast<LogicalClass>(b), static_cast<LogicalClass>(w)};
            }
        }
    }
    return {LogicalClass::Other, LogicalClass::Other};
}

bool is_nontrivial_logical(const PauliFrame &frame, const LogicalSet &basis) {
    return basis.signature(frame) != 0;
}

}  // namespace xyzca
