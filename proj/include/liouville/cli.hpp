#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/ode.hpp"
#include "liouville/verify.hpp"

namespace liouville::cli {

enum class Command { help, thresholds, solve, sweep, limits, verify, normalize, curve };
enum class Format { csv, json, text };

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

struct RunConfig {
    Command command = Command::help;
    std::optional<double> tau;
    double bigN = 1.0;

    std::optional<double> alpha;
    double alpha_min = -20.0;
    double alpha_max = 20.0;
    int steps = 41;

    std::optional<double> target;
    double bracket_lo = -20.0;
    double bracket_hi = 20.0;

    double limit_alpha = 30.0;

    std::optional<double> beta1;
    std::optional<double> beta2;
    double tol = 1e-5;

    ode::IntegratorConfig integrator;
    verify::GeneralSystem general;
    int samples = 101;
    unsigned threads = 0;

    std::string out; // empty: standard output
    std::optional<Format> format;
    std::string help_text;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the arguments after the program name. Throws UsageError naming
/// the offending flag; --help yields command == help with help_text set.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes the command; returns kExitOk, kExitUsage or kExitNotConverged.
/// LIOUVILLE_THREADS caps the number of sweep workers.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run, with usage errors reported on err.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
