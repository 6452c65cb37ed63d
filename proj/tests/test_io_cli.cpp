#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "cubedual/cubedual.hpp"

using namespace cubedual;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string cli() { return std::string(CUBEDUAL_CLI_PATH); }

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

const char* kCheckerboard = "2\n2 2\n0 1\n1 0\n";
const char* kCheckerboardV = "dim,birth,death\n0,0,1\n0,0,inf\n";
const char* kCheckerboardT = "dim,birth,death\n0,0,inf\n";

PersistenceDiagram sample_diagram() {
    PersistenceDiagram dgm;
    dgm.add(1, 0.5, 2);
    dgm.add(0, -3);
    dgm.add(0, -3, -1);
    return dgm;
}

}  // namespace

TEST_CASE("diagram CSV round trip", "[io_cli]") {
    const PersistenceDiagram dgm = sample_diagram();
    std::ostringstream os;
    write_csv(dgm, os);
    CHECK(os.str() == "dim,birth,death\n0,-3,-1\n0,-3,inf\n1,0.5,2\n");

    std::istringstream is(os.str());
    CHECK(read_csv(is) == dgm);
}

TEST_CASE("diagram CSV parse errors", "[io_cli]") {
    auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return read_csv(is);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("birth,death\n"), ParseError);
    CHECK_THROWS_AS(parse("dim,birth,death\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse("dim,birth,death\n0,1,2,3\n"), ParseError);
    CHECK_THROWS_AS(parse("dim,birth,death\nx,0,1\n"), ParseError);
    CHECK_THROWS_AS(parse("dim,birth,death\n0,y,1\n"), ParseError);
    CHECK_THROWS_AS(parse("dim,birth,death\n0,0,never\n"), ParseError);

    try {
        parse("dim,birth,death\nx,0,1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() == 16);  // start of the bad line
    }

    // Blank lines and CRLF endings are tolerated.
    std::istringstream is("dim,birth,death\r\n\r\n0,0,inf\r\n");
    PersistenceDiagram expected;
    expected.add(0, 0);
    CHECK(read_csv(is) == expected);
}

TEST_CASE("diagram JSON round trip", "[io_cli]") {
    const PersistenceDiagram dgm = sample_diagram();
    const nlohmann::json arr = to_json(dgm);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 3);
    CHECK(arr[1]["death"].is_null());
    CHECK(arr[0]["dim"] == 0);
    CHECK(diagram_from_json(arr) == dgm);

    CHECK_THROWS_AS(diagram_from_json(nlohmann::json::object()), ParseError);
    CHECK_THROWS_AS(diagram_from_json(nlohmann::json::parse(R"([{"dim":0,"birth":1}])")),
                    ParseError);
    CHECK_THROWS_AS(diagram_from_json(nlohmann::json::parse(R"([{"dim":0,"birth":1,"death":"x"}])")),
                    ParseError);
    CHECK_THROWS_AS(
        diagram_from_json(nlohmann::json::parse(R"([{"dim":0.5,"birth":1,"death":null}])")),
        ParseError);
}

TEST_CASE("compute subcommand", "[io_cli]") {
    const std::string img = temp_file("cubedual_test_checker.ndtext", kCheckerboard);

    const RunResult v = run(cli() + " compute '" + img + "' -c V");
    CHECK(v.exit_code == 0);
    CHECK(v.out == kCheckerboardV);

    const RunResult t = run(cli() + " compute '" + img + "' -c T");
    CHECK(t.exit_code == 0);
    CHECK(t.out == kCheckerboardT);

    const RunResult per = run(cli() + " compute '" + img + "' -c V --periodic");
    CHECK(per.exit_code == 0);
    CHECK(per.out == "dim,birth,death\n0,0,1\n0,0,inf\n1,1,inf\n1,1,inf\n2,1,inf\n");

    const std::string out_path =
        (std::filesystem::temp_directory_path() / "cubedual_test_out.csv").string();
    const RunResult to_file = run(cli() + " compute '" + img + "' -c T -o '" + out_path + "'");
    CHECK(to_file.exit_code == 0);
    std::ifstream in(out_path, std::ios::binary);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == kCheckerboardT);

    const RunResult js = run(cli() + " compute '" + img + "' -c V --out-format json");
    CHECK(js.exit_code == 0);
    const nlohmann::json arr = nlohmann::json::parse(js.out);
    PersistenceDiagram expected;
    expected.add(0, 0, 1);
    expected.add(0, 0);
    CHECK(diagram_from_json(arr) == expected);
}

TEST_CASE("compute reads PGM input", "[io_cli]") {
    const std::string pgm = temp_file("cubedual_test_img.pgm", "P2\n2 2\n1\n0 1\n1 0\n");
    const RunResult r = run(cli() + " compute '" + pgm + "' -c V");
    CHECK(r.exit_code == 0);
    CHECK(r.out == kCheckerboardV);
}

TEST_CASE("bad invocations exit with code two", "[io_cli]") {
    const std::string img = temp_file("cubedual_test_checker2.ndtext", kCheckerboard);
    CHECK(run(cli() + " compute /nonexistent.ndtext -c V").exit_code == 2);
    CHECK(run(cli() + " compute '" + img + "' -c X").exit_code == 2);
    CHECK(run(cli() + " compute '" + img + "'").exit_code == 2);  // construction is required
    CHECK(run(cli() + " frobnicate").exit_code == 2);
    CHECK(run(cli()).exit_code == 2);

    const std::string junk = temp_file("cubedual_test_junk.ndtext", "2\n2 2\n0 1 1\n");
    CHECK(run(cli() + " compute '" + junk + "' -c V").exit_code == 2);
}

TEST_CASE("transform subcommand", "[io_cli]") {
    const std::string img = temp_file("cubedual_test_checker3.ndtext", kCheckerboard);

    const RunResult from_v = run(cli() + " transform '" + img + "' --have V");
    CHECK(from_v.exit_code == 0);
    CHECK(from_v.out == kCheckerboardT);

    const RunResult from_t = run(cli() + " transform '" + img + "' --have T");
    CHECK(from_t.exit_code == 0);
    CHECK(from_t.out == kCheckerboardV);
}

TEST_CASE("transform drives an external engine", "[io_cli]") {
    const std::string img = temp_file("cubedual_test_checker4.ndtext", kCheckerboard);

    // The tool itself plays the engine role.
    const RunResult r = run(cli() + " transform '" + img + "' --have V --engine '" + cli() +
                            " compute -c V'");
    CHECK(r.exit_code == 0);
    CHECK(r.out == kCheckerboardT);

    CHECK(run(cli() + " transform '" + img + "' --have V --engine 'echo not-a-diagram'").exit_code ==
          3);
    CHECK(run(cli() + " transform '" + img + "' --have V --engine false").exit_code == 3);
}

TEST_CASE("verify subcommand", "[io_cli]") {
    const RunResult ok = run(cli() + " verify --random 3x3 --trials 3 --seed 42");
    CHECK(ok.exit_code == 0);
    for (const char* name :
         {"oracle-equivalence", "dual-pairing-torus", "dual-pairing-sphere", "dual-complex-pairs",
          "dual-diagram-map", "padding-invariance", "cap-attachment", "quotient-diagram",
          "construction-transforms", "complex-invariants", "rank-identities"}) {
        CHECK(ok.out.find(name) != std::string::npos);
    }
    CHECK(ok.out.find("FAIL") == std::string::npos);

    // Identical runs are byte-identical regardless of the thread count.
    const RunResult one = run(cli() + " verify --random 3x3 --trials 6 --seed 9 --threads 1");
    const RunResult four = run(cli() + " verify --random 3x3 --trials 6 --seed 9 --threads 4");
    CHECK(one.exit_code == 0);
    CHECK(one.out == four.out);

    const std::string img = temp_file("cubedual_test_checker5.ndtext", kCheckerboard);
    CHECK(run(cli() + " verify '" + img + "'").exit_code == 0);

    // A deliberately corrupted matrix must be flagged, driving the failure
    // path end to end.
    const RunResult fault =
        run("CUBEDUAL_INJECT_FAULT=1 " + cli() + " verify --random 3x3 --trials 2 --seed 3");
    CHECK(fault.exit_code == 1);
    CHECK(fault.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify-duality subcommand", "[io_cli]") {
    const std::string img = temp_file("cubedual_test_checker6.ndtext", kCheckerboard);
    const RunResult r = run(cli() + " verify-duality '" + img + "'");
    CHECK(r.exit_code == 0);
    const nlohmann::json report = nlohmann::json::parse(r.out);
    CHECK(report["pass"] == true);
    REQUIRE(report["cases"].size() == 4);
    for (const auto& row : report["cases"]) {
        CHECK(row["skipped"] == false);
        CHECK(row["pass"] == true);
        CHECK(row["antitranspose_equal"] == true);
    }

    // An axis of extent one has no periodic model; those cases are skipped.
    const std::string line = temp_file("cubedual_test_line.ndtext", "2\n1 4\n3 1 4 1\n");
    const RunResult skipped = run(cli() + " verify-duality '" + line + "' --case torus");
    CHECK(skipped.exit_code == 0);
    const nlohmann::json line_report = nlohmann::json::parse(skipped.out);
    REQUIRE(line_report["cases"].size() == 2);
    CHECK(line_report["cases"][0]["skipped"] == true);

    const RunResult only_t = run(cli() + " verify-duality '" + img + "' --case sphere-t");
    const nlohmann::json t_report = nlohmann::json::parse(only_t.out);
    REQUIRE(t_report["cases"].size() == 1);
    CHECK(t_report["cases"][0]["name"] == "sphere-t");
}
