#include "sperner/cli.hpp"

#include "sperner/anticoncentration.hpp"
#include "sperner/chain.hpp"
#include "sperner/error.hpp"
#include "sperner/montecarlo.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <variant>

namespace sperner::cli {

namespace {

using nlohmann::json;

constexpr long long kDefaultChainTrials = 10;
constexpr long long kDefaultMcTrials = 100000;
constexpr double kIdentityTolerance = 1e-8;
constexpr double kTightnessTolerance = 1e-9;

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommandNames{{
    {Command::levels, "levels"},
    {Command::chain_sample, "chain-sample"},
    {Command::verify, "verify"},
    {Command::lym, "lym"},
    {Command::sperner, "sperner"},
    {Command::maxantichain, "maxantichain"},
    {Command::bound, "bound"},
    {Command::mc_check, "mc-check"},
    {Command::enumerate, "enumerate"},
}};

/// Raised for malformed input files; maps to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_json(std::string_view text, std::string_view source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string(source) + ": parse error at byte " + std::to_string(e.byte) +
                         ": " + e.what());
    }
}

SubsetMask parse_hex_mask(const std::string& text, int n, std::string_view source) {
    std::string_view digits(text);
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        digits.remove_prefix(2);
    }
    std::uint64_t bits = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bits, 16);
    if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
        throw InputError(std::string(source) + ": member \"" + text + "\" is not a hex mask");
    }
    if ((bits & ~universe_bits(n)) != 0) {
        throw InputError(std::string(source) + ": member " + text + " exceeds universe size " +
                         std::to_string(n));
    }
    return SubsetMask(n, bits);
}

// A flat report: scalar fields, optionally followed by a table of rows.
using Field = std::variant<long long, double, bool, std::string, std::vector<std::string>>;
using Record = std::vector<std::pair<std::string, Field>>;

struct Report {
    Record summary;
    std::string table_name;
    std::vector<Record> rows;
};

std::string json_string(const std::string& s) { return json(s).dump(); }

std::string render_json_field(const Field& field, int precision) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(v, precision);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return json_string(v);
            } else {
                std::string out = "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i > 0) out += ", ";
                    out += json_string(v[i]);
                }
                return out + "]";
            }
        },
        field);
}

std::string render_csv_field(const Field& field, int precision) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(v, precision);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string out = "\"";
                for (char c : v) out += c == '"' ? std::string("\"\"") : std::string(1, c);
                return out + "\"";
            } else {
                std::string out;
                for (std::size_t i = 0; i < v.size(); ++i) out += (i > 0 ? " " : "") + v[i];
                return out;
            }
        },
        field);
}

std::string render_json_record(const Record& record, int precision) {
    std::string out = "{";
    for (std::size_t i = 0; i < record.size(); ++i) {
        if (i > 0) out += ", ";
        out += json_string(record[i].first) + ": " + render_json_field(record[i].second, precision);
    }
    return out + "}";
}

void emit(const Report& report, OutputFormat format, int precision, std::ostream& out) {
    if (format == OutputFormat::json) {
        std::string body = render_json_record(report.summary, precision);
        if (!report.table_name.empty()) {
            body.pop_back();
            if (!report.summary.empty()) body += ", ";
            body += json_string(report.table_name) + ": [";
            for (std::size_t i = 0; i < report.rows.size(); ++i) {
                body += (i > 0 ? ", " : "") + render_json_record(report.rows[i], precision);
            }
            body += "]}";
        }
        out << body << '\n';
        return;
    }
    auto line = [&](const Record& record, bool header) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i > 0) out << ',';
            out << (header ? record[i].first : render_csv_field(record[i].second, precision));
        }
        out << '\n';
    };
    const bool tabular = !report.table_name.empty();
    if (tabular && !report.rows.empty()) {
        line(report.rows.front(), true);
        for (const auto& row : report.rows) line(row, false);
    } else if (!tabular) {
        line(report.summary, true);
        line(report.summary, false);
    }
}

std::vector<std::string> hex_members(const AntichainFamily& family) {
    std::vector<std::string> out;
    for (const auto& m : family.members()) out.push_back(to_hex(m));
    return out;
}

AntichainFamily require_family(const RunConfig& config, const ProductMeasure& measure) {
    if (!config.family_path) throw InputError("--family is required for this command");
    AntichainFamily family = load_family(*config.family_path);
    if (family.universe() != measure.size()) {
        throw InputError(*config.family_path + ": family universe " +
                         std::to_string(family.universe()) + " does not match measure dimension " +
                         std::to_string(measure.size()));
    }
    if (!family.verify()) throw InputError(*config.family_path + ": family is not an antichain");
    return family;
}

unsigned resolve_workers(const RunConfig& config) {
    return config.workers > 0 ? config.workers : default_worker_count();
}

struct Outcome {
    Report report;
    int code = kSuccess;
};

Outcome run_levels(const ProductMeasure& measure) {
    const LevelPMF pmf = level_pmf(measure);
    Outcome o;
    o.report.summary = {{"n", static_cast<long long>(measure.size())},
                        {"max_probability", pmf.max_probability()},
                        {"argmax", static_cast<long long>(pmf.argmax())}};
    o.report.table_name = "levels";
    for (int ell = 0; ell <= pmf.max_level(); ++ell) {
        o.report.rows.push_back({{"level", static_cast<long long>(ell)}, {"probability", pmf.probs[ell]}});
    }
    return o;
}

Outcome run_verify(const RunConfig& config, const ProductMeasure& measure) {
    const int n = measure.size();
    Outcome o;
    double worst = 0.0;
    bool exhaustive = true;
    o.report.table_name = "levels";
    for (int ell = 0; ell < n; ++ell) {
        const auto r = verify_kernel_identities(measure, ell, 256, config.seed);
        worst = std::max(worst, r.max_residual());
        exhaustive = exhaustive && r.exhaustive;
        o.report.rows.push_back({{"level", static_cast<long long>(ell)},
                                 {"row_residual", r.row_residual},
                                 {"column_residual", r.column_residual},
                                 {"sets_checked", static_cast<long long>(r.sets_checked)}});
    }
    const bool passed = worst <= kIdentityTolerance;
    o.report.summary = {{"n", static_cast<long long>(n)},
                        {"exhaustive", exhaustive},
                        {"max_residual", worst},
                        {"tolerance", kIdentityTolerance},
                        {"passed", passed}};
    o.code = passed ? kSuccess : kTheoremViolation;
    return o;
}

Outcome run_lym(const RunConfig& config, const ProductMeasure& measure) {
    const AntichainFamily family = require_family(config, measure);
    Outcome o;
    try {
        const double sum = lym_sum(measure, family);
        o.report.summary = {{"lym_sum", sum}, {"satisfied", true}};
    } catch (const TheoremViolation&) {
        o.report.summary = {{"lym_sum", std::nan("")}, {"satisfied", false}};
        o.code = kTheoremViolation;
    }
    return o;
}

Outcome run_sperner(const RunConfig& config, const ProductMeasure& measure) {
    const AntichainFamily family = require_family(config, measure);
    const SpernerReport r = sperner_check(measure, family);
    Outcome o;
    o.report.summary = {{"measure", r.measure}, {"max_level", r.max_level}, {"satisfied", r.satisfied}};
    o.code = r.satisfied ? kSuccess : kTheoremViolation;
    return o;
}

Outcome run_maxantichain(const ProductMeasure& measure) {
    const MaxAntichainResult r = max_weight_antichain(measure);
    const double max_level = level_pmf(measure).max_probability();
    const bool tight = std::abs(r.flow_value - max_level) <= kTightnessTolerance &&
                       std::abs(r.weight - max_level) <= kTightnessTolerance;
    Outcome o;
    o.report.summary = {{"n", static_cast<long long>(measure.size())},
                        {"weight", r.weight},
                        {"flow_value", r.flow_value},
                        {"max_level", max_level},
                        {"tight", tight},
                        {"members", hex_members(r.family)}};
    o.code = tight ? kSuccess : kTheoremViolation;
    return o;
}

Outcome run_bound(const ProductMeasure& measure) {
    const BoundReport r = level_bound_check(measure);
    Outcome o;
    o.report.summary = {{"sigma", r.sigma},
                        {"exact_max", r.exact_max},
                        {"quadrature_bound", r.quadrature_bound},
                        {"closed_bound", r.closed_bound},
                        {"constant_used", r.constant_used},
                        {"sqrt_pi_bound", r.sqrt_pi_bound},
                        {"ordered", r.ordered}};
    o.code = r.ordered ? kSuccess : kTheoremViolation;
    return o;
}

Outcome run_mc_check(const RunConfig& config, const ProductMeasure& measure) {
    McOptions options;
    options.workers = resolve_workers(config);
    const int ell = config.level.value_or(measure.size() / 2);
    const GofReport r = estimate_level_marginal(measure, ell, config.trials.value_or(kDefaultMcTrials),
                                                config.seed, options);
    Outcome o;
    o.report.summary = {{"mode", std::string(r.mode == GofMode::histogram ? "histogram" : "marginals")},
                        {"level", static_cast<long long>(r.level)},
                        {"trials", r.trials},
                        {"workers", static_cast<long long>(options.workers)},
                        {"statistic", r.statistic},
                        {"dof", static_cast<long long>(r.dof)},
                        {"threshold", r.threshold},
                        {"pass", r.pass},
                        {"tv_distance", r.tv_distance.value_or(std::nan(""))}};
    o.code = r.pass ? kSuccess : kStatisticalFailure;
    return o;
}

Outcome run_enumerate(const RunConfig& config) {
    Outcome o;
    o.report.table_name = "counts";
    for (int n = 0; n <= config.max_n; ++n) {
        long long count = 0;
        for_each_antichain(n, [&](const AntichainFamily&) { ++count; });
        o.report.rows.push_back({{"n", static_cast<long long>(n)}, {"antichains", count}});
    }
    return o;
}

void run_chain_sample(const RunConfig& config, const ProductMeasure& measure, std::ostream& out) {
    const long long trials = config.trials.value_or(kDefaultChainTrials);
    if (trials < 0) throw InputError("--trials must be non-negative");
    ChainSampler sampler(measure);
    Rng rng(config.seed);
    std::string line;
    for (long long t = 0; t < trials; ++t) {
        const ChainSample chain = sampler.sample_chain(rng);
        line.clear();
        for (std::size_t ell = 1; ell < chain.sets.size(); ++ell) {
            if (ell > 1) line += ',';
            line += to_hex(chain.sets[ell]);
        }
        out << line << '\n';
    }
}

} // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [command, text] : kCommandNames) {
        if (text == name) return command;
    }
    return std::nullopt;
}

std::string_view command_name(Command command) {
    for (const auto& [c, text] : kCommandNames) {
        if (c == command) return text;
    }
    return "unknown";
}

ProductMeasure parse_measure(std::string_view text, std::string_view source) {
    const json doc = parse_json(text, source);
    if (!doc.is_object() || !doc.contains("p") || !doc["p"].is_array()) {
        throw InputError(std::string(source) + ": expected an object with an array field \"p\"");
    }
    std::vector<double> p;
    for (const auto& v : doc["p"]) {
        if (!v.is_number()) throw InputError(std::string(source) + ": \"p\" must contain only numbers");
        p.push_back(v.get<double>());
    }
    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw InputError(std::string(source) + ": \"name\" must be a string");
        name = doc["name"].get<std::string>();
    }
    try {
        return ProductMeasure(std::move(p), std::move(name));
    } catch (const InvalidArgument& e) {
        throw InputError(std::string(source) + ": " + e.what());
    }
}

ProductMeasure load_measure(const std::string& path) { return parse_measure(read_file(path), path); }

AntichainFamily parse_family(std::string_view text, std::string_view source) {
    const json doc = parse_json(text, source);
    if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer() ||
        !doc.contains("members") || !doc["members"].is_array()) {
        throw InputError(std::string(source) +
                         ": expected {\"n\": int, \"members\": [hex strings]}");
    }
    const auto n = doc["n"].get<long long>();
    if (n < 0 || n > SubsetMask::kMaxUniverse) {
        throw InputError(std::string(source) + ": \"n\" must lie in [0, 64]");
    }
    std::vector<SubsetMask> members;
    for (const auto& m : doc["members"]) {
        if (!m.is_string()) throw InputError(std::string(source) + ": members must be hex strings");
        members.push_back(parse_hex_mask(m.get<std::string>(), static_cast<int>(n), source));
    }
    try {
        return AntichainFamily(static_cast<int>(n), std::move(members));
    } catch (const InvalidArgument& e) {
        throw InputError(std::string(source) + ": " + e.what());
    }
}

AntichainFamily load_family(const std::string& path) { return parse_family(read_file(path), path); }

std::string format_real(double value, int precision) {
    if (!std::isfinite(value)) return "null";
    std::array<char, 64> buffer{};
    std::snprintf(buffer.data(), buffer.size(), "%#.*g", precision, value);
    return buffer.data();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.precision < 1 || config.precision > 17) {
        err << "error: --precision must lie in [1, 17]\n";
        return kUsageError;
    }
    try {
        if (config.command == Command::enumerate) {
            if (config.max_n < 0 || config.max_n > 5) throw InputError("--n must lie in [0, 5]");
            const Outcome o = run_enumerate(config);
            emit(o.report, config.output, config.precision, out);
            return o.code;
        }
        if (config.measure_path.empty()) throw InputError("--measure is required");
        const ProductMeasure measure = load_measure(config.measure_path);
        if (config.command == Command::chain_sample) {
            run_chain_sample(config, measure, out);
            return kSuccess;
        }
        Outcome o;
        switch (config.command) {
        case Command::levels:
            o = run_levels(measure);
            break;
        case Command::verify:
            o = run_verify(config, measure);
            break;
        case Command::lym:
            o = run_lym(config, measure);
            break;
        case Command::sperner:
            o = run_sperner(config, measure);
            break;
        case Command::maxantichain:
            o = run_maxantichain(measure);
            break;
        case Command::bound:
            o = run_bound(measure);
            break;
        case Command::mc_check:
            o = run_mc_check(config, measure);
            break;
        case Command::chain_sample:
        case Command::enumerate:
            break;
        }
        emit(o.report, config.output, config.precision, out);
        if (o.code == kTheoremViolation) {
            err << "error: a proven inequality failed numerically; this is a bug\n";
        }
        return o.code;
    } catch (const TheoremViolation& e) {
        err << "error: " << e.what() << '\n';
        return kTheoremViolation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
}

} // namespace sperner::cli
