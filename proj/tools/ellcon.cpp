#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ellcon/cli.hpp"
#include "ellcon/error.hpp"

using namespace ellcon;

int main(int argc, char** argv) {
    CLI::App app{"Rank-2 logarithmic connections on elliptic curves: computations and checks"};
    std::string command, input;
    cli::Options opts;
    std::uint64_t seed = 0;
    std::vector<std::string> tols;
    bool no_timestamp = false, quiet = false;

    app.add_option("--command", command, "Command to run")->required()->check(CLI::IsMember(cli::commands()));
    app.add_option("--input", input, "Problem instance (JSON)")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Seed, overrides the instance file");
    app.add_option("--trials", opts.trials, "Random trials per check")->check(CLI::PositiveNumber);
    app.add_option("--tol", tols, "Tolerance override NAME=VALUE (repeatable)");
    app.add_option("--sub", opts.sub, "Sub-command for symplectic, stability and app");
    app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");
    app.add_flag("--quiet", quiet, "No summary on standard error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (seed_opt->count() > 0) opts.seed = seed;

    cli::Report report;
    try {
        for (const std::string& t : tols) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--tol expects NAME=VALUE, got '" + t + "'");
            try {
                opts.tolerances.emplace_back(t.substr(0, eq), std::stod(t.substr(eq + 1)));
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::ParseError, "--tol value is not a number in '" + t + "'");
            }
        }
        std::optional<cli::ProblemInstance> instance;
        if (!input.empty()) {
            std::ifstream in(input);
            std::stringstream buf;
            buf << in.rdbuf();
            instance = cli::parse_instance(buf.str());
        }
        report = cli::execute(command, instance, opts);
    } catch (const std::exception& e) {
        report = cli::error_report(command, opts.sub, e.what());
    }

    std::cout << cli::to_json(report, !no_timestamp) << '\n';
    if (!quiet) std::cerr << cli::summary(report);
    return cli::exit_code(report);
}
