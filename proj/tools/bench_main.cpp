// bench run --case dlist|bfs|sexpr|all --engines <list> --sizes k1..k2
//           --reps N --seed S --out path.csv
//
// Sizes outside a case's bounds, and engines that do not apply to a case,
// are skipped. DPS_REGION_BLOCK overrides the region block size.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dps/bench.hpp"

namespace {

using namespace dps::bench;

bool parse_sizes(const std::string& s, int& lo, int& hi) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(s);
        } else {
            lo = std::stoi(s.substr(0, dots));
            hi = std::stoi(s.substr(dots + 2));
        }
    } catch (const std::exception&) {
        return false;
    }
    return lo <= hi;
}

std::size_t block_size_from_env() {
    const char* v = std::getenv("DPS_REGION_BLOCK");
    if (v == nullptr || *v == '\0') return dps::Region::kDefaultBlockSize;
    return static_cast<std::size_t>(std::stoull(v));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"destination-passing benchmarks"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "run benchmark cases and write a CSV report");

    std::string case_name = "all";
    std::vector<std::string> engine_names{"naive", "functional_dlist", "dps"};
    std::string sizes = "10..12";
    int reps = 10;
    int warmup = 3;
    std::uint64_t seed = 42;
    std::string out_path;

    run->add_option("--case", case_name, "dlist, bfs, sexpr or all")
        ->check(CLI::IsMember({"dlist", "bfs", "sexpr", "all"}));
    run->add_option("--engines", engine_names, "naive, functional_dlist, dps")->delimiter(',');
    run->add_option("--sizes", sizes, "size exponents k1..k2");
    run->add_option("--reps", reps, "timed repetitions")->check(CLI::PositiveNumber);
    run->add_option("--warmup", warmup, "discarded repetitions")->check(CLI::NonNegativeNumber);
    run->add_option("--seed", seed, "input seed");
    run->add_option("--out", out_path, "CSV output path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    int lo = 0, hi = 0;
    if (!parse_sizes(sizes, lo, hi)) {
        std::cerr << "error: bad --sizes '" << sizes << "'\n";
        return 1;
    }
    std::vector<Engine> engines;
    for (const auto& name : engine_names) {
        const auto e = parse_engine(name);
        if (!e) {
            std::cerr << "error: unknown engine '" << name << "'\n";
            return 1;
        }
        engines.push_back(*e);
    }
    std::vector<CaseKind> kinds;
    if (case_name == "all") {
        kinds = {CaseKind::dlist, CaseKind::bfs, CaseKind::sexpr};
    } else {
        kinds = {*parse_case(case_name)};
    }

    std::size_t block_size = 0;
    try {
        block_size = block_size_from_env();
    } catch (const std::exception&) {
        std::cerr << "error: DPS_REGION_BLOCK is not a number\n";
        return 1;
    }

    std::vector<BenchRow> rows;
    try {
        for (CaseKind kind : kinds) {
            for (Engine engine : engines) {
                if (!engine_applies(kind, engine)) continue;
                for (int k = lo; k <= hi; ++k) {
                    if (!k_in_bounds(kind, k)) continue;
                    BenchCase c{kind, engine, k, reps, warmup, seed, block_size};
                    std::cerr << to_string(kind) << '/' << to_string(engine) << " k=" << k << '\n';
                    rows.push_back(run_case(c));
                }
            }
        }
    } catch (const dps::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == dps::ErrorCode::OracleMismatch ? 2 : 1;
    }

    if (out_path.empty()) {
        emit_report(rows, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return 1;
        }
        emit_report(rows, out);
    }
    return 0;
}
