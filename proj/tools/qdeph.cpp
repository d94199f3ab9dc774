// qdeph: command-line scenario runner
//
//   qdeph run --config scenario.json [--output results.csv] [--format csv|json]
//   qdeph limits --config scenario.json
//   qdeph selftest
//
// Exit codes: 0 success, 2 config error, 3 numerical error, 4 I/O error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdeph/qdeph.hpp"
#include "qdeph/selftest.hpp"

namespace {

enum ExitCode { Success = 0, Internal = 1, ConfigError = 2, NumericalError = 3, IoError = 4 };

int report(const char* kind, const std::exception& e, int code) {
    std::cerr << "qdeph: " << kind << ": " << e.what() << '\n';
    return code;
}

int run(const std::string& config_path, const std::string& output, const std::string& format) {
    const auto cfg = qdeph::load_config(config_path);
    const auto table = qdeph::run_scenario(cfg);
    const auto fmt = format == "json" ? qdeph::OutputFormat::Json : qdeph::OutputFormat::Csv;
    if (output.empty() || output == "-")
        qdeph::emit(table, fmt, std::cout);
    else
        qdeph::emit(table, fmt, output);
    return Success;
}

int limits(const std::string& config_path) {
    const auto cfg = qdeph::load_config(config_path);
    std::cout << qdeph::scenario_limits(cfg).dump(2) << '\n';
    return Success;
}

int selftest() {
    int failed = 0;
    const auto checks = qdeph::run_selftest();
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.passed) std::cout << "  observed " << qdeph::format_number(c.observed) << " expected " << qdeph::format_number(c.expected);
        std::cout << '\n';
        failed += c.passed ? 0 : 1;
    }
    std::cout << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
    return failed == 0 ? Success : NumericalError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit dephasing by a bosonic bath in vacuum, coherent or Schrödinger-cat states"};
    app.require_subcommand(1);

    std::string config_path, output, format = "csv";
    auto* run_cmd = app.add_subcommand("run", "evaluate a scenario over its time grid");
    run_cmd->add_option("--config", config_path, "scenario JSON")->required();
    run_cmd->add_option("--output", output, "output path (default: standard output)");
    run_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* limits_cmd = app.add_subcommand("limits", "print ohmicity class and long-time values");
    limits_cmd->add_option("--config", config_path, "scenario JSON")->required();

    auto* selftest_cmd = app.add_subcommand("selftest", "run the analytic-oracle battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Success : ConfigError;
    }

    try {
        if (run_cmd->parsed()) return run(config_path, output, format);
        if (limits_cmd->parsed()) return limits(config_path);
        if (selftest_cmd->parsed()) return selftest();
    } catch (const qdeph::IOError& e) {
        return report("I/O error", e, IoError);
    } catch (const qdeph::ConvergenceError& e) {
        return report("numerical error", e, NumericalError);
    } catch (const qdeph::SaturationError& e) {
        return report("numerical error", e, NumericalError);
    } catch (const qdeph::DomainError& e) {
        return report("numerical error", e, NumericalError);
    } catch (const qdeph::EigenFailure& e) {
        return report("numerical error", e, NumericalError);
    } catch (const qdeph::Error& e) {
        return report("config error", e, ConfigError);
    } catch (const std::exception& e) {
        return report("internal error", e, Internal);
    }
    return Internal;
}
