#include "sperner/cli.hpp"
#include "sperner/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sperner;
using namespace sperner::cli;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sperner_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string write(const std::string& name, const std::string& body) const {
        const auto file = path / name;
        std::ofstream(file) << body;
        return file.string();
    }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const RunConfig& config) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(config, out, err);
    return {code, out.str(), err.str()};
}

RunConfig config_for(Command command, std::string measure) {
    RunConfig c;
    c.command = command;
    c.measure_path = std::move(measure);
    c.workers = 1;
    return c;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("command names round-trip") {
    for (auto c : {Command::levels, Command::chain_sample, Command::verify, Command::lym, Command::sperner,
                   Command::maxantichain, Command::bound, Command::mc_check, Command::enumerate}) {
        CHECK(parse_command(command_name(c)) == c);
    }
    CHECK_FALSE(parse_command("nope").has_value());
}

TEST_CASE("format_real uses exactly `precision` significant digits") {
    CHECK(format_real(0.43, 12) == "0.430000000000");
    CHECK(format_real(1.0, 3) == "1.00");
    CHECK(format_real(0.0, 4) == "0.000");
    CHECK(format_real(1.5e-20, 2) == "1.5e-20");
    CHECK(format_real(NAN, 5) == "null");
}

TEST_CASE("levels in csv") {
    TempDir dir;
    auto c = config_for(Command::levels, dir.write("m.json", R"({"p": [0.2, 0.5, 0.7], "name": "small"})"));
    c.output = OutputFormat::csv;
    c.precision = 6;
    const auto r = invoke(c);
    CHECK(r.code == kSuccess);
    CHECK(r.out == "level,probability\n0,0.120000\n1,0.430000\n2,0.380000\n3,0.0700000\n");
}

TEST_CASE("levels in json round-trips through the schema") {
    TempDir dir;
    const auto r = invoke(config_for(Command::levels, dir.write("m.json", R"({"p": [0.5, 0.5]})")));
    REQUIRE(r.code == kSuccess);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["n"] == 2);
    CHECK(doc["argmax"] == 1);
    CHECK(doc["levels"].size() == 3);
    CHECK(doc["levels"][1]["probability"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("lym and sperner on uniform n = 3") {
    TempDir dir;
    const auto measure = dir.write("m.json", R"({"p": [0.5, 0.5, 0.5]})");
    auto c = config_for(Command::lym, measure);
    c.family_path = dir.write("f.json", R"({"n": 3, "members": ["0x1", "0x2", "0x4"]})");
    const auto r = invoke(c);
    CHECK(r.code == kSuccess);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["lym_sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(doc["satisfied"] == true);

    c.command = Command::sperner;
    const auto s = nlohmann::json::parse(invoke(c).out);
    CHECK(s["measure"].get<double>() == doctest::Approx(0.375));
    CHECK(s["satisfied"] == true);

    c.family_path = dir.write("bad.json", R"({"n": 3, "members": ["0x1", "0x3"]})");
    const auto bad = invoke(c);
    CHECK(bad.code == kUsageError);
    CHECK(bad.err.find("not an antichain") != std::string::npos);

    c.family_path.reset();
    CHECK(invoke(c).code == kUsageError);
}

TEST_CASE("verify on uniform n = 4") {
    TempDir dir;
    const auto r = invoke(config_for(Command::verify, dir.write("m.json", R"({"p": [0.5, 0.5, 0.5, 0.5]})")));
    CHECK(r.code == kSuccess);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["max_residual"].get<double>() < 1e-12);
    CHECK(doc["exhaustive"] == true);
    CHECK(doc["levels"].size() == 4);
}

TEST_CASE("maxantichain, bound, enumerate") {
    TempDir dir;
    const auto measure = dir.write("m.json", R"({"p": [0.2, 0.5, 0.7]})");
    const auto mx = nlohmann::json::parse(invoke(config_for(Command::maxantichain, measure)).out);
    CHECK(mx["tight"] == true);
    CHECK(mx["members"] == nlohmann::json::array({"0x1", "0x2", "0x4"}));

    const auto b = invoke(config_for(Command::bound, measure));
    CHECK(b.code == kSuccess);
    const auto bd = nlohmann::json::parse(b.out);
    CHECK(bd["exact_max"].get<double>() == doctest::Approx(0.43));
    CHECK(bd["ordered"] == true);

    auto e = config_for(Command::enumerate, "");
    e.max_n = 4;
    e.output = OutputFormat::csv;
    CHECK(invoke(e).out == "n,antichains\n0,2\n1,3\n2,6\n3,20\n4,168\n");
}

TEST_CASE("chain-sample line format") {
    TempDir dir;
    auto c = config_for(Command::chain_sample, dir.write("m.json", R"({"p": [0.3, 0.6, 0.45]})"));
    c.trials = 5;
    c.seed = 42;
    const auto r = invoke(c);
    CHECK(r.code == kSuccess);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        CHECK(std::count(line.begin(), line.end(), ',') == 2);
        CHECK(line.substr(line.rfind(',') + 1) == "0x7");
    }
    CHECK(count == 5);
    CHECK(invoke(c).out == r.out);
}

TEST_CASE("mc-check exit codes") {
    TempDir dir;
    auto c = config_for(Command::mc_check, dir.write("m.json", R"({"p": [0.5, 0.5, 0.5, 0.5]})"));
    c.trials = 20000;
    c.level = 2;
    const auto r = invoke(c);
    CHECK(r.code == kSuccess);
    CHECK(nlohmann::json::parse(r.out)["pass"] == true);
    c.trials = 10;
    CHECK(invoke(c).code == kUsageError);
}

TEST_CASE("parse errors name the file and offset") {
    TempDir dir;
    const auto path = dir.write("broken.json", R"({"p": [0.5, )");
    const auto r = invoke(config_for(Command::levels, path));
    CHECK(r.code == kUsageError);
    CHECK(r.err.find(path) != std::string::npos);
    CHECK(r.err.find("byte") != std::string::npos);

    CHECK(invoke(config_for(Command::levels, dir.path.string() + "/missing.json")).code == kUsageError);
    CHECK(invoke(config_for(Command::levels, dir.write("r.json", R"({"p": [1.5]})"))).code == kUsageError);
    CHECK(invoke(config_for(Command::verify, dir.write("t.json", R"({"p": [1.0, 0.5]})"))).code == kUsageError);
    CHECK_THROWS_AS(parse_family(R"({"n": 2, "members": ["0x8"]})", "inline"), Error);
    CHECK_THROWS_AS(parse_family(R"({"n": 2, "members": ["zz"]})", "inline"), Error);
    CHECK(parse_family(R"({"n": 3, "members": ["0x6", "0X1"]})", "inline").size() == 2);
}

}
