#ifndef XYZCA_CLI_H
#define XYZCA_CLI_H

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xyzca/lattice.h"

namespace xyzca::cli {

/// Bad flags, config keys or values. The message names the offending key.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; carries the help text.
struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Subcommand { certify_size, decode, memtime, threshold, simulate };

std::string subcommand_name(Subcommand s);

/// Exit codes of dispatch and run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalidData = 3;
inline constexpr int kExitDecoderFailure = 4;

/// Fully resolved configuration: every key of the subcommand is present, and
/// values are stored in canonical text form.
struct RunConfig {
    Subcommand subcommand = Subcommand::certify_size;
    std::map<std::string, std::string> values;

    bool operator==(const RunConfig &) const = default;

    const std::string &str(const std::string &key) const;
    std::uint64_t uint(const std::string &key) const;
    double real(const std::string &key) const;
    bool flag(const std::string &key) const;
    std::vector<LatticeDims> sizes(const std::string &key) const;
    std::vector<double> grid(const std::string &key) const;
};

/// Looks up an environment variable; nullopt when unset.
using EnvLookup = std::function<std::optional<std::string>(const std::string &)>;

EnvLookup process_env();

/// Keys accepted by a subcommand, in echo order.
std::vector<std::string> keys_of(Subcommand s);

/// args excludes the program name. Precedence: flags, then XYZCA_<KEY>
/// environment variables, then the JSON file given by --config, then defaults.
/// Throws UsageError.
RunConfig parse_config(const std::vector<std::string> &args, const EnvLookup &env = process_env());

/// Arguments that parse back to the same config.
std::vector<std::string> emit(const RunConfig &config);

/// "# key=value" lines echoing the resolved config.
std::string config_header(const RunConfig &config);

/// Runs the subcommand, writing to --out atomically or to `out` when unset.
int dispatch(const RunConfig &config, std::ostream &out, std::ostream &err);

/// parse_config + dispatch with error reporting; returns the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const EnvLookup &env = process_env());

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomically(const std::string &path, const std::string &contents);

}  // namespace xyzca::cli

#endif
