#include "dosx/cli.hpp"
#include "dosx/errors.hpp"

#include <doctest.h>

#include <string>

using namespace dosx;

namespace {

const std::string kBase = R"(box.L = 4
box.d = 1
box.p_max = 3
profile.kind = gaussian
profile.width = 1
distribution.kind = uniform01
window.E = 1
window.eta = 0.5
window.epsilon = 0.25
window.lambda = 0.1
window.lambda0 = 1
orders.N = 2
sampling.samples = 200
sampling.seed = 1
)";

std::string drop(const std::string& key) {
    std::string out;
    std::size_t pos = 0;
    while (pos < kBase.size()) {
        const auto end = kBase.find('\n', pos);
        const std::string line = kBase.substr(pos, end - pos + 1);
        if (line.rfind(key + " ", 0) != 0) out += line;
        pos = end + 1;
    }
    return out;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("base configuration parses") {
    const auto cfg = parse_config(kBase);
    CHECK(cfg.box.L() == 4.0);
    CHECK(cfg.window.eta == 0.5);
    CHECK(cfg.psi.size() == 3);
}

TEST_CASE("missing keys are named") {
    CHECK(error_of(drop("window.eta")).find("window.eta") != std::string::npos);
    CHECK(error_of(drop("sampling.seed")).find("sampling.seed") != std::string::npos);
}

TEST_CASE("unknown, duplicate and malformed entries are rejected") {
    CHECK(error_of(kBase + "window.etaa = 1\n").find("window.etaa") != std::string::npos);
    CHECK(error_of(kBase + "box.L = 5\n").find("box.L") != std::string::npos);
    CHECK(error_of(kBase + "oops\n") != "");
    CHECK(error_of(drop("window.eta") + "window.eta = fast\n").find("window.eta") != std::string::npos);
    CHECK(error_of(drop("distribution.kind") + "distribution.kind = constant\n").find("distribution.c") !=
          std::string::npos);
}

TEST_CASE("comments and blank lines are ignored") {
    CHECK_NOTHROW(parse_config("# header\n\n" + kBase + "  # trailing\n"));
}

TEST_CASE("CSV quoting follows RFC 4180") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvTable t{"t", {"x", "y"}, {{"1", "a\nb"}}};
    CHECK(csv_render(t) == "x,y\r\n1,\"a\nb\"\r\n");
}

TEST_CASE("numbers round-trip through their text form") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("execute is deterministic and the summary carries a schema version") {
    const auto cfg = parse_config(kBase);
    const auto a = execute("crosscheck", cfg);
    const auto b = execute("crosscheck", cfg);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK(a.summary["schema_version"] == kSchemaVersion);
    CHECK_FALSE(a.summary.contains("timestamp"));
    CHECK(a.exit_code == 0);
}

TEST_CASE("without_timestamp removes only the timestamp key") {
    json j = {{"a", 1}, {"timestamp", {{"utc", "x"}}}};
    const auto k = without_timestamp(j);
    CHECK(k.size() == 1);
    CHECK(k["a"] == 1);
}

}
