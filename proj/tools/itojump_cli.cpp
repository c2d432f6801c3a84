// itojump command line: simulate | converge | truncate.
//
// Exit codes: 0 success, 2 usage or configuration error, 1 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "itojump/harness.hpp"

namespace fs = std::filesystem;
using namespace itojump;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<unsigned> threads;
    std::string out_dir = ".";
    std::size_t path_index = 0;
    std::string dump_path;
};

StudyConfig load(const Options& opt) {
    nlohmann::json j = read_json_file(opt.config);
    if (opt.seed) j["seed"] = *opt.seed;
    if (opt.paths) j["paths"] = *opt.paths;
    if (opt.threads) j["threads"] = *opt.threads;
    return config_from_json(j);
}

std::ofstream open_output(const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
}

int run_simulate(const Options& opt) {
    const StudyConfig cfg = load(opt);
    const auto result = simulate_one(cfg, opt.path_index);
    fs::create_directories(opt.out_dir);
    auto out = open_output(fs::path(opt.out_dir) / "trajectory.csv");
    write_simulation_csv(result, out);
    if (!opt.dump_path.empty()) {
        auto dump = open_output(opt.dump_path);
        write_path_binary(result.path, dump);
    }
    std::cout << "wrote " << result.times.size() << " rows to "
              << (fs::path(opt.out_dir) / "trajectory.csv").string() << '\n';
    return 0;
}

int run_converge(const Options& opt) {
    const StudyConfig cfg = load(opt);
    const auto report = strong_error_study(cfg);
    fs::create_directories(opt.out_dir);
    auto csv = open_output(fs::path(opt.out_dir) / "errors.csv");
    write_errors_csv(report, csv);
    auto json = open_output(fs::path(opt.out_dir) / "report.json");
    json << report_json(report).dump(2) << '\n';
    std::cout << scheme_name(report.scheme) << ": slope " << report.fit.slope << " (95% CI "
              << report.fit.ci_low << ", " << report.fit.ci_high << ")"
              << (report.fit.excluded_coarsest ? " [coarsest level excluded]" : "") << '\n';
    return 0;
}

int run_truncate(const Options& opt) {
    const StudyConfig cfg = load(opt);
    const auto report = truncation_study(cfg);
    fs::create_directories(opt.out_dir);
    auto csv = open_output(fs::path(opt.out_dir) / "truncation.csv");
    write_truncation_csv(report, csv);
    auto json = open_output(fs::path(opt.out_dir) / "truncation.json");
    json << truncation_json(report).dump(2) << '\n';
    std::cout << "truncation slope " << report.fit.slope << " (95% CI " << report.fit.ci_low << ", "
              << report.fit.ci_high << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong approximation of jump-diffusion SDEs"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config, "study configuration (JSON)")->required();
        sub->add_option("--seed", opt.seed, "override the master seed");
        sub->add_option("--paths", opt.paths, "override the Monte-Carlo path count");
        sub->add_option("--threads", opt.threads, "worker threads (0: all cores)");
        sub->add_option("--out-dir", opt.out_dir, "output directory");
    };
    auto* simulate = app.add_subcommand("simulate", "one trajectory and its oracle to trajectory.csv");
    add_common(simulate);
    simulate->add_option("--path-index", opt.path_index, "which path of the seed to draw");
    simulate->add_option("--dump-path", opt.dump_path, "also write the driving path (binary)");
    auto* converge = app.add_subcommand("converge", "strong-error study to errors.csv and report.json");
    add_common(converge);
    auto* trunc = app.add_subcommand("truncate", "epsilon-truncation study to truncation.csv");
    add_common(trunc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (converge->parsed()) return run_converge(opt);
        return run_truncate(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
