#pragma once

#include "sperner/antichain.hpp"
#include "sperner/measure.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace sperner::cli {

enum class Command { levels, chain_sample, verify, lym, sperner, maxantichain, bound, mc_check, enumerate };
enum class OutputFormat { json, csv };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct RunConfig {
    Command command = Command::levels;
    std::string measure_path;
    std::optional<std::string> family_path;
    std::uint64_t seed = 0;
    /// Defaults per command: chain-sample 10, mc-check 100000.
    std::optional<long long> trials;
    OutputFormat output = OutputFormat::json;
    int precision = 12;
    /// mc-check level; defaults to floor(n / 2).
    std::optional<int> level;
    /// enumerate reports n = 0..max_n.
    int max_n = 5;
    /// 0 selects default_worker_count().
    unsigned workers = 0;
};

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kStatisticalFailure = 2,
    kTheoremViolation = 3,
};

/// Measure file: {"p": [...], "name": "..."}; `source` names the input in
/// error messages.
ProductMeasure parse_measure(std::string_view text, std::string_view source);
ProductMeasure load_measure(const std::string& path);

/// Family file: {"n": int, "members": ["0x5", ...]}.
AntichainFamily parse_family(std::string_view text, std::string_view source);
AntichainFamily load_family(const std::string& path);

/// Exactly `precision` significant digits, C locale, "null" for non-finite.
std::string format_real(double value, int precision);

/// Executes one command; the report goes to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace sperner::cli
