#pragma once

// JSON run configuration for the gaplab command line. One schema
// (schema_version 1) covers every subcommand: an "ensemble" block shared by
// the matrix experiments and a "params" block whose keys depend on the
// experiment. Unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaplab/ensembles.hpp"
#include "gaplab/error.hpp"
#include "gaplab/gap_experiments.hpp"
#include "gaplab/littlewood_offord.hpp"
#include "gaplab/smoothed_power.hpp"

namespace gaplab::cli {

enum class Experiment { sample, tails, mingap, simple, lcd, smallball, nodal, power, report };

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct Violation {
    std::string field;  // dotted path, e.g. "params.gamma"
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct SampleParams {
    std::size_t trials = 1;
};

struct TailsParams {
    std::size_t trials = 1000;
    std::size_t l = 1;
    std::vector<double> delta_grid{0.1, 0.2, 0.4, 0.8};
    IndexMode index_mode = IndexMode::bulk(0.25);
};

struct MinGapParams {
    std::size_t trials = 1000;
};

struct SimpleParams {
    std::size_t trials = 1000;
    std::optional<double> tol;  // default 1e-10 sqrt(n)
};

struct LcdRunParams {
    std::vector<std::vector<double>> vectors;
    double kappa = 0.5;
    double gamma = 0.5;
    double theta_max = 0.0;  // 0 selects 8 sqrt(n) / gamma
    std::optional<double> alpha;  // set: regularized LCD over ceil(alpha n)-subsets of the spread set
    CompressParams compress;
    std::size_t budget = 64;      // random subsets tried by the regularized search
};

enum class SmallBallMode { automatic, exact, monte_carlo };

struct SmallBallParams {
    std::vector<std::vector<double>> vectors;
    std::vector<double> deltas{0.1};
    EntryLaw law = EntryLaw::rademacher();
    SmallBallMode method = SmallBallMode::automatic;  // automatic: exact when possible
    std::uint64_t trials = 100000;
    std::optional<double> alpha;  // set: segmental rho_{delta, alpha} instead of rho_delta
};

struct NodalParams {
    std::size_t trials = 50;
    std::optional<double> zero_tol;  // default 1e-10 sqrt(n)
};

struct PowerParams {
    std::optional<SymmetricMatrix> matrix;  // required
    std::optional<double> sigma;            // default 1e-2 ||F||_2
    double tol = 1e-6;
    std::size_t max_iter = 10000;
    std::size_t runs = 20;
    ConvergenceCriterion criterion = ConvergenceCriterion::eigenvector_error;
};

struct ReportParams {
    std::string input_dir;  // empty: output_dir
};

struct RunConfig {
    static constexpr int kSchemaVersion = 1;

    Experiment experiment = Experiment::tails;
    std::uint64_t seed = 0;
    std::string output_dir = "gaplab-out";
    std::optional<std::size_t> workers;  // default: GAPLAB_WORKERS or hardware

    EnsembleSpec ensemble;  // seed mirrors `seed`

    SampleParams sample;
    TailsParams tails;
    MinGapParams mingap;
    SimpleParams simple;
    LcdRunParams lcd;
    SmallBallParams smallball;
    NodalParams nodal;
    PowerParams power;
    ReportParams report;

    /// Overrides the seed everywhere it is stored.
    void set_seed(std::uint64_t s);
    std::size_t resolved_workers() const;
    bool uses_ensemble() const;
};

/// Parses and validates; throws ConfigError listing every violation, or
/// Error(InvalidConfig) for malformed JSON.
RunConfig parse_config(std::string_view text);

/// Canonical form: every field explicit, keys sorted, two-space indent.
std::string serialize_config(const RunConfig& config);

}  // namespace gaplab::cli
