#include "xyzca/lattice.h"

#include <bit>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "xyzca/errors.h"

namespace xyzca {

LatticeDims build_lattice(std::size_t L, std::size_t H) {
    if (L < 3 || H < 3 || L % 3 != 0 || H % 3 != 0) {
        std::ostringstream msg;
        msg << "lattice dimensions must be positive multiples of 3, got " << L << "x" << H;
        throw DimensionError(msg.str());
    }
    return LatticeDims{L, H};
}

char pauli_char(Pauli p) {
    return "IXZY"[static_cast<int>(p)];
}

std::array<PlaquetteCoord, 3> plaquettes_of(const LatticeDims &d, const QubitCoord &q) {
    auto i = static_cast<std::ptrdiff_t>(q.i);
    auto j = static_cast<std::ptrdiff_t>(q.j);
    if (q.s == Sublattice::black) {
        return {{{d.wrap_i(i), d.wrap_j(j)}, {d.wrap_i(i), d.wrap_j(j - 1)}, {d.wrap_i(i - 1), d.wrap_j(j - 1)}}};
    }
    return {{{d.wrap_i(i), d.wrap_j(j - 1)}, {d.wrap_i(i), d.wrap_j(j)}, {d.wrap_i(i + 1), d.wrap_j(j)}}};
}

std::array<QubitCoord, 6> plaquette_sites(const LatticeDims &d, std::size_t pi, std::size_t pj) {
    auto i = static_cast<std::ptrdiff_t>(pi);
    auto j = static_cast<std::ptrdiff_t>(pj);
    constexpr auto b = Sublattice::black;
    constexpr auto w = Sublattice::white;
    return {{
        {d.wrap_i(i), d.wrap_j(j), b},
        {d.wrap_i(i), d.wrap_j(j + 1), b},
        {d.wrap_i(i + 1), d.wrap_j(j + 1), b},
        {d.wrap_i(i), d.wrap_j(j), w},
        {d.wrap_i(i), d.wrap_j(j + 1), w},
        {d.wrap_i(i - 1), d.wrap_j(j), w},
    }};
}

BitPlane BitPlane::operator&(const BitPlane &other) const {
    BitPlane out(width(), height());
    for (std::size_t j = 0; j < height(); j++) {
        auto dst = out.row(j);
        auto a = row(j);
        auto b = other.row(j);
        for (std::size_t k = 0; k < dst.size(); k++) {
            dst[k] = a[k] & b[k];
        }
    }
    return out;
}

PauliFrame::PauliFrame(const LatticeDims &dims) : dims_(dims) {
    for (auto &p : planes_) {
        p = BitPlane(dims.L, dims.H);
    }
}

Pauli PauliFrame::get(const QubitCoord &q) const {
    int v = (x(q.s).at(q.i, q.j) ? 1 : 0) | (z(q.s).at(q.i, q.j) ? 2 : 0);
    return static_cast<Pauli>(v);
}

void PauliFrame::apply(const QubitCoord &q, Pauli p) {
    auto v = static_cast<int>(p);
    if (v & 1) {
        x(q.s).flip(q.i, q.j);
    }
    if (v & 2) {
        z(q.s).flip(q.i, q.j);
    }
}

std::size_t PauliFrame::weight(Sublattice s) const {
    std::size_t total = 0;
    const auto &xs = x(s);
    const auto &zs = z(s);
    for (std::size_t j = 0; j < dims_.H; j++) {
        auto a = xs.row(j);
        auto b = zs.row(j);
        for (std::size_t k = 0; k < a.size(); k++) {
            total += std::popcount(a[k] | b[k]);
        }
    }
    return total;
}

std::size_t PauliFrame::weight() const {
    return weight(Sublattice::black) + weight(Sublattice::white);
}

bool PauliFrame::is_identity() const {
    for (const auto &p : planes_) {
        if (p.any()) {
            return false;
        }
    }
    return true;
}

bool PauliFrame::is_pure_z() const {
    return !x(Sublattice::black).any() && !x(Sublattice::white).any();
}

PauliFrame PauliFrame::restricted(Sublattice s) const {
    PauliFrame out(dims_);
    out.x(s) = x(s);
    out.z(s) = z(s);
    return out;
}

PauliFrame &PauliFrame::operator^=(const PauliFrame &other) {
    for (std::size_t k = 0; k < planes_.size(); k++) {
        planes_[k] ^= other.planes_[k];
    }
    return *this;
}

PauliFrame apply_pauli(PauliFrame frame, const QubitCoord &q, Pauli p) {
    frame.apply(q, p);
    return frame;
}

std::array<StabilizerSite, 6> stabilizer_support(
    const LatticeDims &dims, StabilizerKind kind, std::ptrdiff_t i, std::ptrdiff_t j) {
    auto sites = plaquette_sites(dims, dims.wrap_i(i), dims.wrap_j(j));
    Pauli on_black = kind == StabilizerKind::A ? Pauli::X : Pauli::Z;
    Pauli on_white = kind == StabilizerKind::A ? Pauli::Z : Pauli::Y;
    std::array<StabilizerSite, 6> out;
    for (std::size_t k = 0; k < 6; k++) {
        out[k] = {sites[k], sites[k].s == Sublattice::black ? on_black : on_white};
    }
    return out;
}

BitPlane incidence_map(const BitPlane &black, const BitPlane &white) {
    std::size_t L = black.width();
    std::size_t H = black.height();
    BitPlane out(L, H);
    std::vector<std::uint64_t> scratch(words_for_bits(L));
    for (std::size_t j = 0; j < H; j++) {
        std::size_t next = (j + 1) % H;
        auto dst = out.row(j);
        // black(i,j) + black(i,j+1) + black(i+1,j+1)
        bitops::rule108(black.row(next), scratch, L);
        bitops::xor_into(dst, scratch);
        bitops::xor_into(dst, black.row(j));
        // white(i,j+1) + white(i,j) + white(i-1,j)
        bitops::rule108_mirrored(white.row(j), scratch, L);
        bitops::xor_into(dst, scratch);
        bitops::xor_into(dst, white.row(next));
    }
    return out;
}

Syndrome syndrome(const PauliFrame &frame) {
    constexpr auto b = Sublattice::black;
    constexpr auto w = Sublattice::white;
    Syndrome s;
    s.a = incidence_map(frame.z(b), frame.x(w));
    s.b = incidence_map(frame.x(b), frame.x(w) ^ frame.z(w));
    return s;
}

long energy(const Syndrome &s) {
    long total = 0;
    for (std::size_t j = 0; j < s.a.height(); j++) {
        auto a = s.a.row(j);
        auto b = s.b.row(j);
        for (std::size_t k = 0; k < a.size(); k++) {
            total += std::popcount(a[k]) + std::popcount(b[k]) + std::popcount(a[k] ^ b[k]);
        }
    }
    return total;
}

namespace {

// Which defect kinds P on q toggles: bit 0 = A, bit 1 = B.
int toggled_kinds(const QubitCoord &q, Pauli p) {
    bool xb = static_cast<int>(p) & 1;
    bool zb = static_cast<int>(p) & 2;
    if (q.s == Sublattice::black) {
        // A carries X on black (anticommutes with Z part), B carries Z (anticommutes with X part).
        return (zb ? 1 : 0) | (xb ? 2 : 0);
    }
    // A carries Z on white (anticommutes with X part), B carries Y (anticommutes with X^Z).
    return (xb ? 1 : 0) | ((xb != zb) ? 2 : 0);
}

int plaquette_energy(bool a, bool b) {
    return int(a) + int(b) + int(a != b);
}

}  // namespace

int local_energy_change(const Syndrome &s, const QubitCoord &q, Pauli p) {
    LatticeDims d{s.a.width(), s.a.height()};
    int kinds = toggled_kinds(q, p);
    if (kinds == 0) {
        return 0;
    }
    int delta = 0;
    for (const auto &pl : plaquettes_of(d, q)) {
        bool a = s.a.at(pl.i, pl.j);
        bool b = s.b.at(pl.i, pl.j);
        bool a2 = a != bool(kinds & 1);
        bool b2 = b != bool(kinds & 2);
        delta += plaquette_energy(a2, b2) - plaquette_energy(a, b);
    }
    return delta;
}

int local_energy_change(const PauliFrame &frame, const QubitCoord &q, Pauli p) {
    const auto &d = frame.dims();
    int kinds = toggled_kinds(q, p);
    if (kinds == 0) {
        return 0;
    }
    int delta = 0;
    for (const auto &pl : plaquettes_of(d, q)) {
        bool a = false;
        bool b = false;
        for (const auto &site : plaquette_sites(d, pl.i, pl.j)) {
            int k = toggled_kinds(site, frame.get(site));
            a ^= bool(k & 1);
            b ^= bool(k & 2);
        }
        bool a2 = a != bool(kinds & 1);
        bool b2 = b != bool(kinds & 2);
        delta += plaquette_energy(a2, b2) - plaquette_energy(a, b);
    }
    return delta;
}

double NoiseParams::zeta() const {
    return gamma_y == 0 ? kInfiniteBias : gamma_z / gamma_y;
}

double NoiseParams::zeta_p() const {
    return p_y == 0 ? kInfiniteBias : p_z / p_y;
}

NoiseParams NoiseParams::from_total_rate(double gamma_tot, double zeta) {
    if (!(gamma_tot >= 0) || !(zeta > 0)) {
        throw ConfigError("need gamma_tot >= 0 and zeta > 0");
    }
    NoiseParams n;
    if (std::isinf(zeta)) {
        n.gamma_z = gamma_tot;
    } else {
        n.gamma_z = gamma_tot * zeta / (zeta + 1);
        n.gamma_y = gamma_tot / (zeta + 1);
    }
    return n;
}

NoiseParams NoiseParams::from_total_probability(double p_tot, double zeta_p) {
    if (!(p_tot >= 0) || !(zeta_p > 0)) {
        throw ConfigError("need p_tot >= 0 and zeta_p > 0");
    }
    NoiseParams n;
    if (std::isinf(zeta_p)) {
        n.p_z = p_tot;
    } else {
        n.p_z = p_tot * zeta_p / (zeta_p + 1);
        n.p_y = p_tot / (zeta_p + 1);
    }
    return n;
}

void NoiseParams::validate() const {
    for (double g : {gamma_x, gamma_y, gamma_z}) {
        if (!(g >= 0) || std::isinf(g)) {
            throw ConfigError("noise rates must be finite and non-negative");
        }
    }
    for (double p : {p_x, p_y, p_z}) {
        if (!(p >= 0 && p <= 0.5)) {
            throw ConfigError("noise probabilities must lie in [0, 1/2]");
        }
    }
}

namespace {

std::string pack_hex(const std::vector<const BitPlane *> &planes) {
    std::vector<std::uint8_t> bytes;
    std::size_t k = 0;
    for (const auto *p : planes) {
        for (std::size_t j = 0; j < p->height(); j++) {
            for (std::size_t i = 0; i < p->width(); i++, k++) {
                if (k % 8 == 0) {
                    bytes.push_back(0);
                }
                if (p->at(i, j)) {
                    bytes.back() |= std::uint8_t(1u << (k % 8));
                }
            }
        }
    }
    static const char *digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    throw FormatError(std::string("invalid hex digit '") + c + "'");
}

void unpack_hex(const std::string &hex, const std::vector<BitPlane *> &planes) {
    std::size_t total = 0;
    for (auto *p : planes) {
        total += p->width() * p->height();
    }
    if (hex.size() != 2 * ((total + 7) / 8)) {
        throw FormatError("hex plane has wrong length: expected " + std::to_string(2 * ((total + 7) / 8)) + " digits");
    }
    std::size_t k = 0;
    for (auto *p : planes) {
        for (std::size_t j = 0; j < p->height(); j++) {
            for (std::size_t i = 0; i < p->width(); i++, k++) {
                int byte = hex_value(hex[2 * (k / 8)]) * 16 + hex_value(hex[2 * (k / 8) + 1]);
                p->set(i, j, (byte >> (k % 8)) & 1);
            }
        }
    }
    // Padding bits must be zero so the encoding is canonical.
    for (; k % 8 != 0; k++) {
        int byte = hex_value(hex[2 * (k / 8)]) * 16 + hex_value(hex[2 * (k / 8) + 1]);
        if ((byte >> (k % 8)) & 1) {
            throw FormatError("nonzero padding bits in hex plane");
        }
    }
}

LatticeDims read_dims(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("L") || !j.contains("H")) {
        throw FormatError("expected an object with integer fields L and H");
    }
    try {
        return build_lattice(j.at("L").get<std::size_t>(), j.at("H").get<std::size_t>());
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("bad L/H: ") + e.what());
    }
}

std::string read_string(const nlohmann::json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw FormatError(std::string("missing string field '") + key + "'");
    }
    return j.at(key).get<std::string>();
}

nlohmann::json parse_json(const std::string &text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

std::string frame_to_json(const PauliFrame &frame) {
    constexpr auto b = Sublattice::black;
    constexpr auto w = Sublattice::white;
    nlohmann::json j;
    j["L"] = frame.dims().L;
    j["H"] = frame.dims().H;
    j["x_plane"] = pack_hex({&frame.x(b), &frame.x(w)});
    j["z_plane"] = pack_hex({&frame.z(b), &frame.z(w)});
    return j.dump();
}

PauliFrame frame_from_json(const std::string &text) {
    constexpr auto b = Sublattice::black;
    constexpr auto w = Sublattice::white;
    auto j = parse_json(text);
    PauliFrame frame(read_dims(j));
    unpack_hex(read_string(j, "x_plane"), {&frame.x(b), &frame.x(w)});
    unpack_hex(read_string(j, "z_plane"), {&frame.z(b), &frame.z(w)});
    return frame;
}

std::string syndrome_to_json(const LatticeDims &dims, const Syndrome &s) {
    nlohmann::json j;
    j["L"] = dims.L;
    j["H"] = dims.H;
    j["a_defects"] = pack_hex({&s.a});
    j["b_defects"] = pack_hex({&s.b});
    return j.dump();
}

Syndrome syndrome_from_json(const std::string &text, LatticeDims *dims_out) {
    auto j = parse_json(text);
    auto dims = read_dims(j);
    Syndrome s(dims);
    unpack_hex(read_string(j, "a_defects"), {&s.a});
    unpack_hex(read_string(j, "b_defects"), {&s.b});
    if (dims_out != nullptr) {
        *dims_out = dims;
    }
    return s;
}

}  // namespace xyzca
