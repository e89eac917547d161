// gaplab: command-line front end. One subcommand per experiment, each
// reading a JSON config; `report DIR` summarizes a finished run.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaplab/cli/config.hpp"
#include "gaplab/cli/run.hpp"
#include "gaplab/error.hpp"

namespace {

using namespace gaplab;
using namespace gaplab::cli;

enum Exit { kOk = 0, kFailure = 1, kBadConfig = 2, kIo = 3 };

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string output_dir;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read config " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// The subcommand names the experiment; a config may omit "experiment" but
// must not contradict it.
RunConfig load(const Options& o, Experiment e) {
    std::string text = read_text(o.config_path);
    try {
        auto j = nlohmann::json::parse(text);
        if (j.is_object() && !j.contains("experiment")) {
            j["experiment"] = experiment_name(e);
            text = j.dump();
        }
    } catch (const nlohmann::json::parse_error&) {
        // parse_config reports it
    }
    RunConfig c = parse_config(text);
    if (c.experiment != e)
        throw ConfigError({{"experiment", "config is for '" + std::string(experiment_name(c.experiment)) +
                                              "' but the subcommand is '" + std::string(experiment_name(e)) + "'"}});
    if (o.seed) c.set_seed(*o.seed);
    if (o.workers) c.workers = *o.workers;
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    return c;
}

int run_experiment(const Options& o, Experiment e) {
    const RunConfig c = load(o, e);
    const RunSummary s = run(c);
    std::cout << "wrote";
    for (const auto& f : s.files) std::cout << ' ' << s.output_dir << '/' << f;
    std::cout << " (" << s.wall_seconds << " s)\n";
    return kOk;
}

int run_report(const std::string& dir) {
    const ReportResult r = report(dir);
    std::cout << r.summary;
    return kOk;
}

int report_error(const Error& e) {
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
        std::cerr << "gaplab: invalid config\n";
        for (const auto& v : ce->violations()) std::cerr << "  " << v.field << ": " << v.message << '\n';
        return kBadConfig;
    }
    std::cerr << "gaplab: " << e.what() << '\n';
    switch (e.kind()) {
        case ErrorKind::InvalidConfig: return kBadConfig;
        case ErrorKind::Io:
        case ErrorKind::MissingManifest: return kIo;
        default: return kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaplab: random-matrix eigenvalue-gap experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Options opts;
    std::optional<Experiment> chosen;
    for (Experiment e : {Experiment::sample, Experiment::tails, Experiment::mingap, Experiment::simple, Experiment::lcd,
                         Experiment::smallball, Experiment::nodal, Experiment::power}) {
        auto* sub = app.add_subcommand(std::string(experiment_name(e)), "run the " + std::string(experiment_name(e)) + " experiment");
        sub->add_option("--config,-c", opts.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "master seed, overrides the config");
        sub->add_option("--workers", opts.workers, "worker threads, overrides config and GAPLAB_WORKERS")
            ->check(CLI::PositiveNumber);
        sub->add_option("--output-dir,-o", opts.output_dir, "output directory, overrides the config");
        sub->callback([&chosen, e] { chosen = e; });
    }
    std::string report_dir;
    auto* rep = app.add_subcommand("report", "summarize the outputs of a finished run");
    rep->add_option("dir", report_dir, "directory holding manifest.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) return run_report(report_dir);
        return run_experiment(opts, *chosen);
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "gaplab: " << e.what() << '\n';
        return kFailure;
    }
}
