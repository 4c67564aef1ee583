#include "xyzca/cli.h"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xyzca/dynamics.h"
#include "xyzca/errors.h"
#include "xyzca/exact_decoder.h"
#include "xyzca/experiments.h"
#include "xyzca/gf2.h"
#include "xyzca/logicals.h"
#include "xyzca/rg_decoder.h"

namespace xyzca::cli {

namespace {

using nlohmann::json;

enum class Kind { uint, real, boolean, choice, sizes, grid, text };

constexpr unsigned bit(Subcommand s) {
    return 1u << static_cast<unsigned>(s);
}

constexpr unsigned kAll = 0x1f;
constexpr unsigned kMem = bit(Subcommand::memtime);
constexpr unsigned kSim = bit(Subcommand::simulate);

struct KeySpec {
    std::string name;
    std::string fallback;
    Kind kind;
    unsigned subcommands;
    std::string help;
    std::vector<std::string> choices = {};
};

const std::vector<KeySpec> &schema() {
    static const std::vector<KeySpec> keys{
        {"seed", "0", Kind::uint, kAll, "base seed"},
        {"workers", "1", Kind::uint, kAll, "worker threads"},
        {"out", "", Kind::text, kAll, "output file (stdout when empty)"},
        {"format", "csv", Kind::choice, kAll, "output format", {"csv", "json"}},
        {"L", "6", Kind::uint, bit(Subcommand::certify_size) | kSim, "lattice width"},
        {"H", "9", Kind::uint, bit(Subcommand::certify_size) | kSim, "lattice height"},
        {"input", "-", Kind::text, bit(Subcommand::decode), "frame or syndrome JSON file ('-' for stdin)"},
        {"decoder", "auto", Kind::choice, bit(Subcommand::decode) | kMem, "auto picks exact at infinite bias", {"auto", "exact", "rg"}},
        {"sizes", "6x9", Kind::sizes, kMem | bit(Subcommand::threshold), "comma-separated LxH list"},
        {"gamma-tot", "0.01", Kind::real, kMem | kSim, "total Pauli rate per qubit"},
        {"zeta", "inf", Kind::real, kMem | kSim, "rate bias gamma_z/gamma_y"},
        {"ca", "true", Kind::boolean, kMem | kSim, "cellular-automaton dynamics on"},
        {"samples", "100", Kind::uint, kMem, "samples per size"},
        {"check-fraction", "0.001", Kind::real, kMem, "check spacing as a fraction of elapsed time"},
        {"max-time", "inf", Kind::real, kMem, "censoring time"},
        {"run-id", "run", Kind::text, kMem, "run label in the CSV"},
        {"p-grid", "0.04,0.08,0.12,0.16", Kind::grid, bit(Subcommand::threshold), "comma-separated p_tot values"},
        {"zeta-p", "1", Kind::real, bit(Subcommand::threshold), "probability bias p_z/p_y"},
        {"trials", "1000", Kind::uint, bit(Subcommand::threshold), "trials per point"},
        {"bootstrap", "200", Kind::uint, bit(Subcommand::threshold), "bootstrap resamples for p_c"},
        {"time", "100", Kind::real, kSim, "simulated time"},
    };
    return keys;
}

const KeySpec &spec_of(const std::string &key) {
    for (const auto &k : schema()) {
        if (k.name == key) {
            return k;
        }
    }
    throw UsageError("unknown key '" + key + "'");
}

const std::vector<std::pair<std::string, Subcommand>> kSubcommands{
    {"certify-size", Subcommand::certify_size}, {"decode", Subcommand::decode},     {"memtime", Subcommand::memtime},
    {"threshold", Subcommand::threshold},       {"simulate", Subcommand::simulate},
};

std::string describe(Subcommand s) {
    switch (s) {
        case Subcommand::certify_size:
            return "Check that an LxH lattice has exactly two biased logicals per sublattice";
        case Subcommand::decode:
            return "Decode a frame or syndrome JSON file";
        case Subcommand::memtime:
            return "Measure memory half-lives under the continuous-time dynamics";
        case Subcommand::threshold:
            return "Scan RG decoder failure rates under i.i.d. Y+Z noise";
        case Subcommand::simulate:
            return "Run the dynamics for a fixed time and report the final state";
    }
    return "";
}

std::string format_real(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

double parse_real(const std::string &text, const std::string &key) {
    auto t = lower(text);
    if (t == "inf" || t == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    double x = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || r.ec != std::errc{} || r.ptr != text.data() + text.size() || std::isnan(x)) {
        throw UsageError("invalid number '" + text + "' for key '" + key + "'");
    }
    return x;
}

std::uint64_t parse_uint(const std::string &text, const std::string &key) {
    std::uint64_t x = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        throw UsageError("invalid unsigned integer '" + text + "' for key '" + key + "'");
    }
    return x;
}

LatticeDims parse_size(const std::string &text, const std::string &key) {
    auto parts = split(lower(text), 'x');
    if (parts.size() != 2) {
        throw UsageError("invalid size '" + text + "' for key '" + key + "' (expected LxH)");
    }
    try {
        return build_lattice(parse_uint(parts[0], key), parse_uint(parts[1], key));
    } catch (const DimensionError &e) {
        throw UsageError("invalid size '" + text + "' for key '" + key + "': " + e.what());
    }
}

std::string canonical(const KeySpec &k, const std::string &raw) {
    switch (k.kind) {
        case Kind::uint:
            return std::to_string(parse_uint(raw, k.name));
        case Kind::real:
            return format_real(parse_real(raw, k.name));
        case Kind::boolean: {
            auto t = lower(raw);
            if (t == "true" || t == "1" || t == "yes" || t == "on") {
                return "true";
            }
            if (t == "false" || t == "0" || t == "no" || t == "off") {
                return "false";
            }
            throw UsageError("invalid boolean '" + raw + "' for key '" + k.name + "'");
        }
        case Kind::choice:
            if (std::find(k.choices.begin(), k.choices.end(), raw) == k.choices.end()) {
                throw UsageError("invalid value '" + raw + "' for key '" + k.name + "'");
            }
            return raw;
        case Kind::sizes: {
            std::string out;
            for (const auto &item : split(raw, ',')) {
                auto d = parse_size(item, k.name);
                out += (out.empty() ? "" : ",") + std::to_string(d.L) + "x" + std::to_string(d.H);
            }
            if (out.empty()) {
                throw UsageError("key '" + k.name + "' needs at least one size");
            }
            return out;
        }
        case Kind::grid: {
            std::string out;
            for (const auto &item : split(raw, ',')) {
                double p = parse_real(item, k.name);
                if (p < 0 || p > 1) {
                    throw UsageError("probability '" + item + "' for key '" + k.name + "' is outside [0, 1]");
                }
                out += (out.empty() ? "" : ",") + format_real(p);
            }
            if (out.empty()) {
                throw UsageError("key '" + k.name + "' needs at least one value");
            }
            return out;
        }
        case Kind::text:
            return raw;
    }
    return raw;
}

std::string env_name(const std::string &key) {
    std::string out = "XYZCA_";
    for (char c : key) {
        out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string json_scalar_text(const json &v, const std::string &key) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<std::uint64_t>());
    }
    if (v.is_number()) {
        return format_real(v.get<double>());
    }
    throw UsageError("config key '" + key + "' must be a string, number or boolean");
}

std::map<std::string, std::string> read_config_file(const std::string &path, Subcommand sub) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config file '" + path + "' must hold a JSON object");
    }
    std::map<std::string, std::string> out;
    for (const auto &[key, value] : j.items()) {
        const auto &k = spec_of(key);
        if (!(k.subcommands & bit(sub))) {
            throw UsageError("key '" + key + "' does not apply to " + subcommand_name(sub));
        }
        out[key] = json_scalar_text(value, key);
    }
    return out;
}

void check_conflicts(const RunConfig &c) {
    if (c.subcommand == Subcommand::memtime && c.str("decoder") == "exact" && !std::isinf(c.real("zeta"))) {
        throw UsageError("key 'decoder': the exact decoder requires infinite bias (zeta=inf)");
    }
}

std::string read_all(std::istream &in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Data problems in user-supplied input, reported with the invalid-data code.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecoderFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json config_json(const RunConfig &c) {
    json j = json::object();
    j["subcommand"] = subcommand_name(c.subcommand);
    for (const auto &[k, v] : c.values) {
        j[k] = v;
    }
    return j;
}

std::string json_text(const json &j) {
    return j.dump(2) + "\n";
}

std::string run_certify(const RunConfig &c) {
    auto d = build_lattice(c.uint("L"), c.uint("H"));
    auto pi = cycle_length_from_single_one(d.L);
    auto kernel = count_biased_logicals(d.L, d.H);
    bool ok = certify_size(d.L, d.H);
    if (c.str("format") == "json") {
        json j{{"config", config_json(c)}, {"L", d.L}, {"H", d.H}, {"pi_L", pi}, {"kernel_dim", kernel}, {"certified", ok}};
        return json_text(j);
    }
    std::ostringstream os;
    os << config_header(c) << "L,H,pi_L,kernel_dim,certified\n"
       << d.L << "," << d.H << "," << pi << "," << kernel << "," << (ok ? "true" : "false") << "\n";
    return os.str();
}

std::string run_decode(const RunConfig &c) {
    std::string text;
    if (c.str("input") == "-") {
        text = read_all(std::cin);
    } else {
        std::ifstream in(c.str("input"));
        if (!in) {
            throw DataError("cannot open input '" + c.str("input") + "'");
        }
        text = read_all(in);
    }
    LatticeDims dims;
    Syndrome syn;
    std::optional<PauliFrame> error;
    try {
        auto j = json::parse(text);
        if (j.contains("x_plane")) {
            error = frame_from_json(text);
            dims = error->dims();
            syn = syndrome(*error);
        } else {
            syn = syndrome_from_json(text, &dims);
        }
    } catch (const json::exception &e) {
        throw DataError(std::string("input is not valid JSON: ") + e.what());
    } catch (const Error &e) {
        throw DataError(std::string("malformed input: ") + e.what());
    }

    std::string decoder = c.str("decoder");
    if (decoder == "auto") {
        decoder = error && error->is_pure_z() ? "exact" : "rg";
    }
    PauliFrame correction(dims);
    std::optional<LogicalSet> basis;
    std::optional<DecodeResult> exact;
    if (decoder == "exact") {
        if (error && !error->is_pure_z()) {
            throw DataError("input frame has X or Y components; the exact decoder assumes Z-only errors");
        }
        ExactDecoder dec(dims);
        auto r = dec.decode(syn);
        if (!r) {
            throw DataError("syndrome is inconsistent with Z-only errors: the linear system for the exact decoder has no solution");
        }
        correction = r->correction;
        basis = dec.logicals();
        exact = r;
    } else {
        auto r = rg_decode(syn, dims);
        if (!r) {
            throw DecoderFailure("renormalization-group decoder left defects after the last level");
        }
        correction = *r;
    }
    std::size_t defects = syn.weight();
    std::string black;
    std::string white;
    if (error) {
        if (!basis) {
            basis = LogicalSet::build(dims);
        }
        auto cls = logical_class(*error ^ correction, *basis);
        black = class_name(cls.black);
        white = class_name(cls.white);
    }
    if (c.str("format") == "json") {
        json j{{"config", config_json(c)},
               {"decoder", decoder},
               {"L", dims.L},
               {"H", dims.H},
               {"defects", defects},
               {"correction_weight", correction.weight()},
               {"consistent", true},
               {"correction", json::parse(frame_to_json(correction))}};
        if (exact) {
            j["class_weights"] = {{"black", exact->black.class_weights}, {"white", exact->white.class_weights}};
            j["chosen_class"] = {{"black", class_name(exact->black.chosen)}, {"white", class_name(exact->white.chosen)}};
        }
        if (error) {
            j["residual_class"] = {{"black", black}, {"white", white}};
        }
        return json_text(j);
    }
    std::ostringstream os;
    os << config_header(c) << "decoder,L,H,defects,correction_weight,black_class,white_class\n"
       << decoder << "," << dims.L << "," << dims.H << "," << defects << "," << correction.weight() << "," << black << "," << white << "\n";
    return os.str();
}

NoiseParams noise_of(const RunConfig &c) {
    double zeta = c.real("zeta");
    return NoiseParams::from_total_rate(c.real("gamma-tot"), zeta);
}

std::string run_memtime(const RunConfig &c) {
    MemTimeConfig base;
    base.noise = noise_of(c);
    base.ca_enabled = c.flag("ca");
    std::string decoder = c.str("decoder");
    if (decoder == "auto") {
        decoder = base.noise.infinite_bias() ? "exact" : "rg";
    }
    base.decoder = decoder == "exact" ? FailureDecoder::exact : FailureDecoder::rg;
    base.check_fraction = c.real("check-fraction");
    base.n_samples = c.uint("samples");
    base.seed_base = c.uint("seed");
    base.max_time = c.real("max-time");
    auto rows = memory_curve(c.sizes("sizes"), base, static_cast<unsigned>(c.uint("workers")));
    if (c.str("format") == "json") {
        json out{{"config", config_json(c)}, {"rows", json::array()}};
        for (const auto &r : rows) {
            out["rows"].push_back({{"run_id", c.str("run-id")},
                                   {"L", r.dims.L},
                                   {"H", r.dims.H},
                                   {"gamma_z", r.gamma_z},
                                   {"zeta", format_real(r.zeta)},
                                   {"ca_enabled", r.ca_enabled},
                                   {"beta", r.beta},
                                   {"n_samples", r.n_samples},
                                   {"n_censored", r.n_censored},
                                   {"median_T", r.half_life.median},
                                   {"ci_low", r.half_life.ci_low},
                                   {"ci_high", r.half_life.ci_high},
                                   {"seed_base", r.seed_base}});
        }
        return json_text(out);
    }
    std::string s = config_header(c) + memtime_csv_header() + "\n";
    for (const auto &r : rows) {
        s += memtime_csv_row(r, c.str("run-id")) + "\n";
    }
    return s;
}

std::string run_threshold(const RunConfig &c) {
    ThresholdConfig t;
    t.sizes = c.sizes("sizes");
    t.p_grid = c.grid("p-grid");
    t.zeta_p = c.real("zeta-p");
    t.trials = c.uint("trials");
    t.seed_base = c.uint("seed");
    t.bootstrap = c.uint("bootstrap");
    auto scan = threshold_scan(t, static_cast<unsigned>(c.uint("workers")));
    if (c.str("format") == "json") {
        json out{{"config", config_json(c)}, {"points", json::array()}, {"crossings", json::array()}};
        for (const auto &p : scan.points) {
            out["points"].push_back({{"L", p.dims.L},
                                     {"H", p.dims.H},
                                     {"p_tot", p.p_tot},
                                     {"zeta_p", format_real(p.zeta_p)},
                                     {"trials", p.trials},
                                     {"failures", p.failures},
                                     {"fail_rate", p.fail_rate},
                                     {"ci_low", p.ci.low},
                                     {"ci_high", p.ci.high},
                                     {"seed", p.seed}});
        }
        for (const auto &x : scan.crossings) {
            out["crossings"].push_back({{"small", t.sizes[x.small].L}, {"large", t.sizes[x.large].L}, {"p", format_real(x.p)}});
        }
        out["p_c"] = format_real(scan.p_c);
        out["p_c_ci"] = {format_real(scan.p_c_ci.low), format_real(scan.p_c_ci.high)};
        return json_text(out);
    }
    std::string s = config_header(c) + threshold_csv_header() + "\n";
    for (const auto &p : scan.points) {
        s += threshold_csv_row(p) + "\n";
    }
    s += "# p_c=" + format_real(scan.p_c) + " ci=" + format_real(scan.p_c_ci.low) + ":" + format_real(scan.p_c_ci.high) + "\n";
    return s;
}

std::string run_simulate(const RunConfig &c) {
    auto d = build_lattice(c.uint("L"), c.uint("H"));
    auto engine = init_engine(d, noise_of(c), c.flag("ca"), c.uint("seed"));
    engine.run_until(c.real("time"));
    auto frame = engine.frame();
    if (c.str("format") == "json") {
        json out{{"config", config_json(c)}, {"energy", engine.energy()}, {"weight", frame.weight()}};
        out["snapshot"] = json::parse(engine.snapshot_json());
        return json_text(out);
    }
    std::ostringstream os;
    os << config_header(c) << "L,H,clock,events,energy,weight\n"
       << d.L << "," << d.H << "," << format_real(engine.clock()) << "," << engine.event_count() << "," << engine.energy() << ","
       << frame.weight() << "\n";
    return os.str();
}

}  // namespace

std::string subcommand_name(Subcommand s) {
    for (const auto &[name, sub] : kSubcommands) {
        if (sub == s) {
            return name;
        }
    }
    return "?";
}

const std::string &RunConfig::str(const std::string &key) const {
    auto it = values.find(key);
    if (it == values.end()) {
        throw UsageError("key '" + key + "' does not apply to " + subcommand_name(subcommand));
    }
    return it->second;
}

std::uint64_t RunConfig::uint(const std::string &key) const {
    return parse_uint(str(key), key);
}

double RunConfig::real(const std::string &key) const {
    return parse_real(str(key), key);
}

bool RunConfig::flag(const std::string &key) const {
    return str(key) == "true";
}

std::vector<LatticeDims> RunConfig::sizes(const std::string &key) const {
    std::vector<LatticeDims> out;
    for (const auto &item : split(str(key), ',')) {
        out.push_back(parse_size(item, key));
    }
    return out;
}

std::vector<double> RunConfig::grid(const std::string &key) const {
    std::vector<double> out;
    for (const auto &item : split(str(key), ',')) {
        out.push_back(parse_real(item, key));
    }
    return out;
}

EnvLookup process_env() {
    return [](const std::string &name) -> std::optional<std::string> {
        const char *v = std::getenv(name.c_str());
        if (v == nullptr) {
            return std::nullopt;
        }
        return std::string(v);
    };
}

std::vector<std::string> keys_of(Subcommand s) {
    std::vector<std::string> out;
    for (const auto &k : schema()) {
        if (k.subcommands & bit(s)) {
            out.push_back(k.name);
        }
    }
    return out;
}

RunConfig parse_config(const std::vector<std::string> &args, const EnvLookup &env) {
    CLI::App app{"Simulation and decoding tools for the XYZ color code", "xyzca"};
    app.require_subcommand(1, 1);
    std::map<Subcommand, CLI::App *> apps;
    std::map<std::string, std::string> flags;
    std::string config_path;
    for (const auto &[name, sub] : kSubcommands) {
        auto *sc = app.add_subcommand(name, describe(sub));
        sc->allow_extras();
        sc->add_option("--config", config_path, "JSON file with flat key/value pairs");
        for (const auto &k : schema()) {
            if (k.subcommands & bit(sub)) {
                sc->add_option("--" + k.name, flags[k.name], k.help + " [" + k.fallback + "]");
            }
        }
        apps[sub] = sc;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        auto *sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        throw HelpRequested(sub->help());
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }

    RunConfig c;
    CLI::App *chosen = app.get_subcommands().front();
    for (const auto &extra : chosen->remaining()) {
        if (extra.rfind("--", 0) == 0) {
            auto key = extra.substr(2, extra.find('=') - 2);
            throw UsageError("unknown key '" + key + "' for " + chosen->get_name());
        }
        throw UsageError("unexpected argument '" + extra + "' for " + chosen->get_name());
    }
    for (const auto &[name, sub] : kSubcommands) {
        if (name == chosen->get_name()) {
            c.subcommand = sub;
        }
    }
    std::map<std::string, std::string> file;
    if (!config_path.empty()) {
        file = read_config_file(config_path, c.subcommand);
    }
    for (const auto &key : keys_of(c.subcommand)) {
        const auto &k = spec_of(key);
        std::string raw = k.fallback;
        if (auto it = file.find(key); it != file.end()) {
            raw = it->second;
        }
        if (auto v = env(env_name(key))) {
            raw = *v;
        }
        if (chosen->get_option("--" + key)->count() > 0) {
            raw = flags[key];
        }
        c.values[key] = canonical(k, raw);
    }
    check_conflicts(c);
    return c;
}

std::vector<std::string> emit(const RunConfig &config) {
    std::vector<std::string> out{subcommand_name(config.subcommand)};
    for (const auto &[k, v] : config.values) {
        out.push_back("--" + k);
        out.push_back(v);
    }
    return out;
}

std::string config_header(const RunConfig &config) {
    std::string s = "# xyzca " + subcommand_name(config.subcommand) + "\n";
    for (const auto &key : keys_of(config.subcommand)) {
        s += "# " + key + "=" + config.str(key) + "\n";
    }
    return s;
}

void write_file_atomically(const std::string &path, const std::string &contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        f << contents;
        f.flush();
        if (!f) {
            fs::remove(tmp);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    fs::rename(tmp, target);
}

int dispatch(const RunConfig &config, std::ostream &out, std::ostream &err) {
    std::string text;
    try {
        switch (config.subcommand) {
            case Subcommand::certify_size:
                text = run_certify(config);
                break;
            case Subcommand::decode:
                text = run_decode(config);
                break;
            case Subcommand::memtime:
                text = run_memtime(config);
                break;
            case Subcommand::threshold:
                text = run_threshold(config);
                break;
            case Subcommand::simulate:
                text = run_simulate(config);
                break;
        }
    } catch (const DataError &e) {
        err << "invalid data: " << e.what() << "\n";
        return kExitInvalidData;
    } catch (const DecoderFailure &e) {
        err << "decoder failure: " << e.what() << "\n";
        return kExitDecoderFailure;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        // Parameter problems surface from the library as these types.
        bool usage = dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const DomainError *>(&e) ||
                     dynamic_cast<const ProbabilityError *>(&e) || dynamic_cast<const DimensionError *>(&e);
        err << (usage ? "usage error: " : "invalid data: ") << e.what() << "\n";
        return usage ? kExitUsage : kExitInvalidData;
    }
    if (config.str("out").empty()) {
        out << text;
        return kExitOk;
    }
    try {
        write_file_atomically(config.str("out"), text);
    } catch (const std::exception &e) {
        err << "output error: " << e.what() << "\n";
        return kExitInvalidData;
    }
    return kExitOk;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const EnvLookup &env) {
    RunConfig config;
    try {
        config = parse_config(args, env);
    } catch (const HelpRequested &h) {
        out << h.what();
        return kExitOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return dispatch(config, out, err);
}

}  // namespace xyzca::cli
