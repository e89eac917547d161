#include "gaplab/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "gaplab/cli/csv.hpp"
#include "gaplab/eigenvector_analysis.hpp"
#include "gaplab/error.hpp"
#include "gaplab/gap_experiments.hpp"
#include "gaplab/littlewood_offord.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/rng.hpp"
#include "gaplab/smoothed_power.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab::cli {
namespace fs = std::filesystem;

namespace {

// Runs body(i) for i in [0, count) and tags any Error with the item label.
template <class Body>
void for_each_item(std::size_t count, std::size_t workers, const char* label, Body body) {
    parallel_for(count, workers, [&](std::size_t i) {
        try {
            body(i);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(label) + " " + std::to_string(i) + ": " + e.what());
        }
    });
}

double sqrt_n(std::size_t n) { return std::sqrt(static_cast<double>(n)); }

OutputFile sample_csv(const RunConfig& c) {
    const std::size_t trials = c.sample.trials;
    std::vector<std::vector<double>> spectra(trials);
    for_each_item(trials, c.resolved_workers(), "trial", [&](std::size_t t) {
        spectra[t] = eigenvalues(sample(c.ensemble, derive_seed(c.seed, t)));
    });
    CsvWriter w({"trial", "index", "eigenvalue", "seed"});
    for (std::size_t t = 0; t < trials; ++t)
        for (std::size_t i = 0; i < spectra[t].size(); ++i) {
            w.cell(std::uint64_t{t}).cell(std::uint64_t{i}).cell(spectra[t][i]).cell(derive_seed(c.seed, t));
            w.end_row();
        }
    return {"sample.csv", w.str()};
}

OutputFile tails_csv(const RunConfig& c) {
    ExperimentConfig e;
    e.ensemble = c.ensemble;
    e.trials = c.tails.trials;
    e.l = c.tails.l;
    e.delta_grid = c.tails.delta_grid;
    e.index_mode = c.tails.index_mode;
    e.master_seed = c.seed;
    e.workers = c.resolved_workers();
    const TailCurve curve = run_tail_experiment(e);
    CsvWriter w({"n", "l", "index_mode", "delta", "trials", "successes", "p_hat", "ci_lo", "ci_hi", "seed"});
    const std::string mode = curve.index_mode.label();
    for (const auto& p : curve.points) {
        w.cell(std::uint64_t{curve.n}).cell(std::uint64_t{curve.l}).cell(std::string_view(mode)).cell(p.delta);
        w.cell(p.trials).cell(p.successes).cell(p.p_hat).cell(p.ci_lo).cell(p.ci_hi).cell(curve.seed);
        w.end_row();
    }
    return {"tails.csv", w.str()};
}

OutputFile mingap_csv(const RunConfig& c) {
    const MinGapSummary s = min_gap_experiment(c.ensemble, c.mingap.trials, c.resolved_workers());
    CsvWriter w({"trial", "n", "min_gap", "min_gap_scaled", "seed"});
    for (const auto& r : s.records) {
        w.cell(r.trial).cell(std::uint64_t{r.n}).cell(r.min_gap).cell(r.min_gap_scaled).cell(r.seed);
        w.end_row();
    }
    return {"mingap.csv", w.str()};
}

OutputFile simple_csv(const RunConfig& c) {
    const double tol = c.simple.tol.value_or(1e-10 * sqrt_n(c.ensemble.n));
    const SimpleSpectrumResult s = simple_spectrum_experiment(c.ensemble, c.simple.trials, tol, c.resolved_workers());
    CsvWriter w({"trial", "min_gap", "is_simple"});
    for (const auto& r : s.records) {
        w.cell(r.trial).cell(r.min_gap).cell(r.is_simple);
        w.end_row();
    }
    return {"simple.csv", w.str()};
}

OutputFile lcd_csv(const RunConfig& c) {
    const auto& p = c.lcd;
    LcdParams params{p.kappa, p.gamma, p.theta_max};
    std::vector<LcdResult> results(p.vectors.size());
    for_each_item(p.vectors.size(), c.resolved_workers(), "vector", [&](std::size_t id) {
        const auto& x = p.vectors[id];
        if (!p.alpha) {
            results[id] = lcd(x, params);
            return;
        }
        // the regularized form is defined for unit vectors
        std::vector<double> u = x;
        const double norm = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
        for (auto& t : u) t /= norm;
        const RegularizedLcd r = regularized_lcd(u, *p.alpha, params, p.compress, p.budget, derive_seed(c.seed, id));
        std::vector<double> sub;
        for (std::size_t i : r.witness) sub.push_back(u[i]);
        const double sn = std::sqrt(std::inner_product(sub.begin(), sub.end(), sub.begin(), 0.0));
        for (auto& t : sub) t /= sn;
        results[id] = lcd(sub, params);
        results[id].bounded = r.bounded;
        results[id].value = r.value;
    });
    CsvWriter w({"vector_id", "kappa", "gamma", "value", "achieved_distance", "bounded"});
    for (std::size_t id = 0; id < results.size(); ++id) {
        const auto& r = results[id];
        w.cell(std::uint64_t{id}).cell(p.kappa).cell(p.gamma).cell(r.value).cell(r.achieved_distance).cell(r.bounded);
        w.end_row();
    }
    return {"lcd.csv", w.str()};
}

std::string_view method_name(SmallBallMethod m) {
    return m == SmallBallMethod::exact_enumeration ? "exact" : "monte_carlo";
}

OutputFile smallball_csv(const RunConfig& c) {
    const auto& p = c.smallball;
    const std::size_t nd = p.deltas.size();
    std::vector<SmallBallEstimate> out(p.vectors.size() * nd);
    for_each_item(out.size(), c.resolved_workers(), "job", [&](std::size_t job) {
        const auto& x = p.vectors[job / nd];
        const double delta = p.deltas[job % nd];
        const std::uint64_t seed = derive_seed(c.seed, job);
        if (p.alpha) {
            SegmentalStrategy s;
            s.law = p.law;
            out[job] = segmental_small_ball(x, delta, *p.alpha, s, p.trials, seed).estimate;
            return;
        }
        bool exact = p.method == SmallBallMode::exact;
        if (p.method == SmallBallMode::automatic) exact = p.law.discrete() && x.size() <= 20;
        out[job] = exact ? small_ball_exact(x, delta, p.law) : small_ball(x, delta, p.law, p.trials, seed);
    });
    CsvWriter w({"vector_id", "delta", "method", "estimate", "half_width"});
    for (std::size_t job = 0; job < out.size(); ++job) {
        const auto& e = out[job];
        w.cell(std::uint64_t{job / nd}).cell(p.deltas[job % nd]).cell(method_name(e.method)).cell(e.estimate);
        w.cell(e.half_width);
        w.end_row();
    }
    return {"smallball.csv", w.str()};
}

OutputFile nodal_csv(const RunConfig& c) {
    const std::size_t trials = c.nodal.trials;
    const double tol = c.nodal.zero_tol.value_or(default_zero_tol(c.ensemble.n));
    std::vector<NodalReport> reports(trials);
    for_each_item(trials, c.resolved_workers(), "trial", [&](std::size_t t) {
        const SymmetricMatrix a = sample(c.ensemble, derive_seed(c.seed, t));
        reports[t] = nodal_report(a, eigen_decompose(a), tol);
    });
    CsvWriter w({"trial", "eigen_index", "eigenvalue", "min_abs_coord", "strong_count", "weak_count"});
    for (std::size_t t = 0; t < trials; ++t)
        for (const auto& e : reports[t].eigenvectors) {
            w.cell(std::uint64_t{t}).cell(std::uint64_t{e.index}).cell(e.eigenvalue).cell(e.min_abs.value);
            w.cell(std::uint64_t{e.strong_count()}).cell(std::uint64_t{e.weak_count()});
            w.end_row();
        }
    return {"nodal.csv", w.str()};
}

OutputFile power_csv(const RunConfig& c) {
    const auto& p = c.power;
    const SymmetricMatrix& f = *p.matrix;
    const double sigma = p.sigma.value_or(default_sigma(f));
    PowerOptions o;
    o.tol = p.tol;
    o.max_iter = p.max_iter;
    o.criterion = p.criterion;
    std::vector<SmoothedResult> results(p.runs);
    for_each_item(p.runs, c.resolved_workers(), "run", [&](std::size_t r) {
        results[r] = smoothed_solve(f, sigma, o, derive_seed(c.seed, r));
    });
    CsvWriter w({"seed", "sigma", "iterations", "converged", "lambda_est", "gap_perturbed", "weyl_bound"});
    for (std::size_t r = 0; r < results.size(); ++r) {
        const auto& s = results[r];
        w.cell(derive_seed(c.seed, r)).cell(s.sigma).cell(std::uint64_t{s.trace.iterations}).cell(s.trace.converged);
        w.cell(s.trace.lambda).cell(s.gap_perturbed).cell(s.weyl_bound);
        w.end_row();
    }
    return {"power.csv", w.str()};
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

}  // namespace

std::vector<OutputFile> compute(const RunConfig& c) {
    switch (c.experiment) {
        case Experiment::sample: return {sample_csv(c)};
        case Experiment::tails: return {tails_csv(c)};
        case Experiment::mingap: return {mingap_csv(c)};
        case Experiment::simple: return {simple_csv(c)};
        case Experiment::lcd: return {lcd_csv(c)};
        case Experiment::smallball: return {smallball_csv(c)};
        case Experiment::nodal: return {nodal_csv(c)};
        case Experiment::power: return {power_csv(c)};
        case Experiment::report: break;
    }
    throw Error(ErrorKind::InvalidConfig, "report is not a computing experiment");
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root)) throw Error(ErrorKind::Io, "cannot create output directory " + dir);

    std::vector<fs::path> temps;
    auto cleanup = [&] {
        for (const auto& t : temps) fs::remove(t, ec);
    };
    try {
        for (const auto& f : files) {
            temps.push_back(root / (f.name + ".partial"));
            write_file(temps.back(), f.contents);
        }
    } catch (...) {
        cleanup();
        throw;
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        fs::rename(temps[i], root / files[i].name, ec);
        if (ec) {
            cleanup();
            throw Error(ErrorKind::Io, "cannot move " + files[i].name + " into place: " + ec.message());
        }
    }
}

RunSummary run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<OutputFile> files = compute(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(serialize_config(config));
    manifest["experiment"] = experiment_name(config.experiment);
    manifest["seed"] = config.seed;
    manifest["version"] = kVersion;
    manifest["wall_time_seconds"] = wall;
    manifest["workers"] = config.resolved_workers();
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(f.name);
    manifest["outputs"] = names;
    files.push_back({"manifest.json", manifest.dump(2) + "\n"});

    write_outputs(config.output_dir, files);
    names.push_back("manifest.json");
    return {config.output_dir, names, wall};
}

}  // namespace gaplab::cli
