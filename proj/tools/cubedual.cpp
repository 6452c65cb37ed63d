// cubedual: persistence diagrams of d-dimensional grayscale images under the
// vertex (V) and top-cell (T) cubical models, diagram transforms between the
// two models, and self-verification of the identities behind them.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubedual/cubedual.hpp"

namespace {

using namespace cubedual;

// exit codes
constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;
constexpr int kEngineFailed = 3;
constexpr int kIntegrity = 4;

struct EngineFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GrayscaleImage load_from_file(const std::string& path, const std::string& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    ImageFormat fmt = ImageFormat::ndtext;
    if (format == "pgm") {
        fmt = ImageFormat::pgm;
    } else if (format == "auto") {
        std::string ext = std::filesystem::path(path).extension().string();
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == ".pgm") fmt = ImageFormat::pgm;
    }
    return load_image(in, fmt);
}

void write_to_output(const std::string& path, const PersistenceDiagram& dgm, DiagramFormat fmt) {
    if (path == "-") {
        write_diagram(dgm, std::cout, fmt);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_diagram(dgm, out, fmt);
    if (!out) throw Error("failed writing '" + path + "'");
}

Construction parse_construction(const std::string& s) {
    if (s == "V" || s == "v") return Construction::V;
    if (s == "T" || s == "t") return Construction::T;
    throw Error("construction must be V or T");
}

/// Runs `command <ndtext-path>` and parses its stdout as diagram CSV.
PersistenceDiagram run_external_engine(const std::string& command, const GrayscaleImage& img) {
    std::string path = (std::filesystem::temp_directory_path() / "cubedual-XXXXXX").string();
    const int fd = mkstemp(path.data());
    if (fd < 0) throw EngineFailure("cannot create a temporary image file");
    close(fd);
    {
        std::ofstream out(path, std::ios::binary);
        save_ndtext(img, out);
        if (!out) {
            std::filesystem::remove(path);
            throw EngineFailure("cannot write the temporary image file");
        }
    }
    const std::string cmdline = command + " '" + path + "'";
    FILE* pipe = popen(cmdline.c_str(), "r");
    if (!pipe) {
        std::filesystem::remove(path);
        throw EngineFailure("cannot start engine: " + command);
    }
    std::string output;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    const int status = pclose(pipe);
    std::filesystem::remove(path);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw EngineFailure("engine exited abnormally: " + command);
    std::istringstream in(output);
    try {
        return read_csv(in);
    } catch (const ParseError& e) {
        throw EngineFailure(std::string("malformed engine output: ") + e.what());
    }
}

bool fault_injection_requested() {
    const char* s = std::getenv("CUBEDUAL_INJECT_FAULT");
    return s != nullptr && *s != '\0' && std::string(s) != "0";
}

std::vector<int> parse_dims(const std::string& spec) {
    std::vector<int> dims;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t x = spec.find_first_of("xX", pos);
        if (x == std::string::npos) x = spec.size();
        long long v = 0;
        if (!parse_integer(std::string_view(spec).substr(pos, x - pos), v) || v < 1)
            throw Error("bad dimensions '" + spec + "', expected the form 4x4");
        dims.push_back(static_cast<int>(v));
        pos = x + 1;
        if (x == spec.size()) break;
    }
    if (dims.empty()) throw Error("bad dimensions '" + spec + "'");
    return dims;
}

std::pair<int, int> parse_value_range(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    long long lo = 0, hi = 0;
    if (colon == std::string::npos ||
        !parse_integer(std::string_view(spec).substr(0, colon), lo) ||
        !parse_integer(std::string_view(spec).substr(colon + 1), hi) || lo > hi)
        throw Error("bad value range '" + spec + "', expected the form lo:hi");
    return {static_cast<int>(lo), static_cast<int>(hi)};
}

struct CheckTally {
    std::string name;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
};

int run_verify(const std::string& input, const std::string& format, const std::string& random_dims,
               int trials, std::uint64_t seed, const std::string& value_range, int threads) {
    const Index oracle_limit = oracle_size_guard();
    const bool inject = fault_injection_requested();

    std::vector<std::vector<CheckOutcome>> per_trial;
    std::vector<GrayscaleImage> images;

    if (!input.empty()) {
        images.push_back(load_from_file(input, format));
        per_trial.push_back(run_image_checks(images.front(), oracle_limit, inject));
    } else {
        const std::vector<int> dims = parse_dims(random_dims);
        const auto [lo, hi] = parse_value_range(value_range);
        per_trial.resize(static_cast<std::size_t>(trials));
        images.reserve(static_cast<std::size_t>(trials));
        for (int t = 0; t < trials; ++t) {
            SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
            images.push_back(random_image(rng, dims, lo, hi));
        }
        unsigned hw = std::thread::hardware_concurrency();
        int workers = threads > 0 ? threads : static_cast<int>(std::min(hw ? hw : 1u, 8u));
        workers = std::max(1, std::min(workers, trials));
        std::atomic<int> next{0};
        auto work = [&]() {
            for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
                per_trial[static_cast<std::size_t>(t)] =
                    run_image_checks(images[static_cast<std::size_t>(t)], oracle_limit, inject);
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
    }

    std::vector<CheckTally> tallies;
    auto tally_of = [&tallies](const std::string& name) -> CheckTally& {
        for (CheckTally& t : tallies)
            if (t.name == name) return t;
        tallies.push_back(CheckTally{name});
        return tallies.back();
    };
    int first_failure = -1;
    std::string first_failure_detail;
    for (std::size_t t = 0; t < per_trial.size(); ++t) {
        for (const CheckOutcome& oc : per_trial[t]) {
            CheckTally& tally = tally_of(oc.name);
            if (oc.skipped) ++tally.skipped;
            else if (oc.pass) ++tally.passed;
            else {
                ++tally.failed;
                if (first_failure < 0) {
                    first_failure = static_cast<int>(t);
                    first_failure_detail = oc.name + ": " + oc.detail;
                }
            }
        }
    }
    {
        const CheckOutcome oc = checks::rank_identities(seed, 10, 40);
        CheckTally& tally = tally_of(oc.name);
        if (oc.pass) ++tally.passed;
        else {
            ++tally.failed;
            if (first_failure < 0) {
                first_failure = 0;
                first_failure_detail = oc.name + ": " + oc.detail;
            }
        }
    }

    bool all_pass = true;
    for (const CheckTally& t : tallies) {
        const int total = t.passed + t.failed;
        std::printf("%-26s %s  %d/%d", t.name.c_str(), t.failed == 0 ? "pass" : "FAIL", t.passed,
                    total);
        if (t.skipped > 0) std::printf("  (%d skipped)", t.skipped);
        std::printf("\n");
        all_pass = all_pass && t.failed == 0;
    }
    if (!all_pass && first_failure >= 0) {
        std::cerr << "first counterexample (trial " << first_failure << "): " << first_failure_detail
                  << "\n";
        std::ostringstream os;
        save_ndtext(images[static_cast<std::size_t>(first_failure)], os);
        std::cerr << os.str();
        return kVerifyFailed;
    }
    return kOk;
}

int run_verify_duality(const std::string& input, const std::string& format,
                       const std::string& which, const std::string& output) {
    const GrayscaleImage img = load_from_file(input, format);
    const int d = img.dimension();
    const Real shell = choose_N(img);
    bool torus_ok = true;
    for (int e : img.extents()) torus_ok = torus_ok && e >= 2;

    nlohmann::json cases = nlohmann::json::array();
    bool all_pass = true;
    auto emit = [&](const std::string& name, bool skipped, const char* why_skipped,
                    const std::optional<DualityReport>& rep) {
        nlohmann::json row{{"name", name}, {"skipped", skipped}};
        if (skipped) {
            row["reason"] = why_skipped;
        } else {
            row["pass"] = rep->pass;
            row["cells"] = rep->cells;
            row["pairs"] = rep->pairs_checked;
            row["essential"] = rep->essential_checked;
            row["antitranspose_equal"] = rep->antitranspose_equal;
            row["mismatches"] = rep->mismatches;
            all_pass = all_pass && rep->pass;
        }
        cases.push_back(std::move(row));
    };

    const bool want_torus = which == "all" || which == "torus";
    if (want_torus && torus_ok) {
        emit("torus-v", false, "", check_dual_pairing(build_v_complex(img, true), d));
        emit("torus-t", false, "", check_dual_pairing(build_t_complex(img, true), d));
    } else if (want_torus) {
        emit("torus-v", true, "needs every axis extent >= 2", std::nullopt);
        emit("torus-t", true, "needs every axis extent >= 2", std::nullopt);
    }
    if (which == "all" || which == "sphere-t")
        emit("sphere-t", false, "", check_dual_pairing(t_construction_with_cap(img, shell), d));
    if (which == "all" || which == "sphere-v")
        emit("sphere-v", false, "",
             check_dual_pairing(v_construction_padded_with_cap(img, shell), d));

    nlohmann::json report{{"input", input}, {"pass", all_pass}, {"cases", std::move(cases)}};
    const std::string text = report.dump(2) + "\n";
    if (output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw Error("cannot open '" + output + "' for writing");
        out << text;
    }
    return all_pass ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Persistence diagrams of grayscale images under the vertex (V) and\n"
        "top-cell (T) cubical models, and exact transforms between the two."};
    app.require_subcommand(1);

    std::string input, output = "-", format = "auto", out_format = "csv";
    std::string construction_name, engine = "internal";
    bool periodic = false;

    CLI::App* compute = app.add_subcommand("compute", "Compute the diagram of an image");
    compute->add_option("input", input, "image file")->required();
    compute->add_option("-c,--construction", construction_name, "V (voxels are vertices) or T (voxels are top cells)")
        ->required();
    compute->add_option("--format", format, "input format: auto, ndtext or pgm (default auto)");
    compute->add_flag("--periodic", periodic, "glue opposite box sides (needs every extent >= 2)");
    compute->add_option("-o,--output", output, "output path, '-' for stdout (default)");
    compute->add_option("--out-format", out_format, "csv or json (default csv)");

    CLI::App* transform = app.add_subcommand(
        "transform",
        "Derive one construction's diagram from an engine for the other.\n"
        "The engine runs once, on the negated padded image; the loop then runs\n"
        "over that engine output (finite intervals not born at the shell value\n"
        "map to [-death,-birth) with the degree flipped to d-k-1, and the one\n"
        "essential interval [min,inf) in degree 0 is added).");
    transform->add_option("input", input, "image file")->required();
    transform->add_option("--have", construction_name, "construction the engine computes: V or T")
        ->required();
    transform
        ->add_option("--engine", engine,
                     "'internal' or a command runnable as: CMD <ndtext-path>, writing diagram CSV "
                     "to stdout (default internal)");
    transform->add_option("--format", format, "input format: auto, ndtext or pgm (default auto)");
    transform->add_option("-o,--output", output, "output path, '-' for stdout (default)");
    transform->add_option("--out-format", out_format, "csv or json (default csv)");

    std::string random_dims = "4x4", value_range = "0:9";
    int trials = 100, threads = 0;
    std::uint64_t seed = 1;
    std::string verify_input;

    CLI::App* verify = app.add_subcommand(
        "verify", "Check the library's identities on a given or random images");
    verify->add_option("input", verify_input, "image file (omit to use --random)");
    verify->add_option("--random", random_dims, "random-image dimensions, e.g. 4x4 or 3x3x3");
    verify->add_option("--trials", trials, "number of random images (default 100)");
    verify->add_option("--seed", seed, "base seed (default 1)");
    verify->add_option("--value-range", value_range, "voxel value range lo:hi (default 0:9)");
    verify->add_option("--threads", threads, "worker threads, 0 = auto");
    verify->add_option("--format", format, "input format: auto, ndtext or pgm (default auto)");

    std::string duality_case = "all";
    CLI::App* verify_duality = app.add_subcommand(
        "verify-duality", "Check the pairing correspondence under dualization, reporting JSON");
    verify_duality->add_option("input", input, "image file")->required();
    verify_duality->add_option("--case", duality_case, "all, torus, sphere-t or sphere-v");
    verify_duality->add_option("--format", format, "input format: auto, ndtext or pgm (default auto)");
    verify_duality->add_option("-o,--output", output, "output path, '-' for stdout (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (compute->parsed()) {
            const Construction c = parse_construction(construction_name);
            const GrayscaleImage img = load_from_file(input, format);
            write_to_output(output, compute_diagram(img, c, periodic),
                            out_format == "json" ? DiagramFormat::json : DiagramFormat::csv);
            return kOk;
        }
        if (transform->parsed()) {
            const Construction have = parse_construction(construction_name);
            const GrayscaleImage img = load_from_file(input, format);
            DiagramEngine eng;
            if (engine == "internal") {
                eng = internal_engine(have);
            } else {
                eng = [&engine](const GrayscaleImage& i) { return run_external_engine(engine, i); };
            }
            const PersistenceDiagram dgm =
                have == Construction::V ? t_from_v(img, eng) : v_from_t(img, eng);
            write_to_output(output, dgm,
                            out_format == "json" ? DiagramFormat::json : DiagramFormat::csv);
            return kOk;
        }
        if (verify->parsed())
            return run_verify(verify_input, format, random_dims, trials, seed, value_range, threads);
        if (verify_duality->parsed())
            return run_verify_duality(input, format, duality_case, output);
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kIntegrity;
    } catch (const EngineFailure& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kEngineFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
