#include "gaplab/cli/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "gaplab/parallel.hpp"

namespace gaplab::cli {

using nlohmann::json;

namespace {

std::string join_violations(const std::vector<Violation>& v) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += "; ";
        s += x.field + ": " + x.message;
    }
    return s;
}

std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// Reads fields of one JSON object, records violations, and flags keys that
// were never asked for.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<Violation>& out) : obj_(obj), path_(std::move(path)), out_(out) {
        if (!obj_.is_object()) fail("", "must be an object");
    }

    bool ok() const { return obj_.is_object(); }
    std::string path(std::string_view key) const { return child(path_, key); }
    void fail(std::string_view key, std::string msg) const { out_.push_back({key.empty() ? path_ : path(key), std::move(msg)}); }

    const json* get(std::string_view key) {
        seen_.insert(std::string(key));
        if (!ok()) return nullptr;
        auto it = obj_.find(std::string(key));
        if (it == obj_.end()) return nullptr;
        return &*it;
    }

    void number(std::string_view key, double& dst) {
        if (const json* j = get(key)) {
            if (j->is_number()) dst = j->get<double>();
            else fail(key, "must be a number");
        }
    }

    void optional_number(std::string_view key, std::optional<double>& dst) {
        if (const json* j = get(key)) {
            if (j->is_null()) dst.reset();
            else if (j->is_number()) dst = j->get<double>();
            else fail(key, "must be a number or null");
        }
    }

    template <class Int>
    void integer(std::string_view key, Int& dst) {
        if (const json* j = get(key)) {
            if (j->is_number_unsigned()) dst = static_cast<Int>(j->get<std::uint64_t>());
            else if (j->is_number_integer()) fail(key, "must be non-negative");
            else fail(key, "must be an integer");
        }
    }

    void optional_size(std::string_view key, std::optional<std::size_t>& dst) {
        if (const json* j = get(key)) {
            if (j->is_null()) dst.reset();
            else if (j->is_number_unsigned()) dst = j->get<std::size_t>();
            else fail(key, "must be a non-negative integer or null");
        }
    }

    void string(std::string_view key, std::string& dst) {
        if (const json* j = get(key)) {
            if (j->is_string()) dst = j->get<std::string>();
            else fail(key, "must be a string");
        }
    }

    void number_list(std::string_view key, std::vector<double>& dst) {
        if (const json* j = get(key)) {
            if (!j->is_array()) return fail(key, "must be an array of numbers");
            std::vector<double> v;
            for (const auto& e : *j) {
                if (!e.is_number()) return fail(key, "must be an array of numbers");
                v.push_back(e.get<double>());
            }
            dst = std::move(v);
        }
    }

    void vector_list(std::string_view key, std::vector<std::vector<double>>& dst) {
        if (const json* j = get(key)) {
            if (!j->is_array()) return fail(key, "must be an array of number arrays");
            std::vector<std::vector<double>> out;
            for (const auto& row : *j) {
                if (!row.is_array()) return fail(key, "must be an array of number arrays");
                std::vector<double> v;
                for (const auto& e : row) {
                    if (!e.is_number()) return fail(key, "must be an array of number arrays");
                    v.push_back(e.get<double>());
                }
                out.push_back(std::move(v));
            }
            dst = std::move(out);
        }
    }

    void finish() {
        if (!ok()) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) out_.push_back({path(it.key()), "unknown field"});
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<Violation>& out_;
    std::set<std::string> seen_;
};

std::optional<EntryLaw> read_law(const json& j, const std::string& path, std::vector<Violation>& out) {
    if (j.is_string()) {
        const auto k = parse_law(j.get<std::string>());
        if (!k) {
            out.push_back({path, "unknown law '" + j.get<std::string>() + "'"});
            return std::nullopt;
        }
        if (*k == LawKind::centered_bernoulli) {
            out.push_back({path, "centered_bernoulli needs an object with \"p\""});
            return std::nullopt;
        }
        return EntryLaw{*k, 0.5};
    }
    Reader r(j, path, out);
    if (!r.ok()) return std::nullopt;
    std::string kind;
    r.string("kind", kind);
    EntryLaw law;
    r.number("p", law.p);
    r.finish();
    const auto k = parse_law(kind);
    if (!k) {
        out.push_back({child(path, "kind"), "unknown law '" + kind + "'"});
        return std::nullopt;
    }
    law.kind = *k;
    if (law.kind == LawKind::centered_bernoulli && !(law.p > 0.0 && law.p < 1.0))
        out.push_back({child(path, "p"), "must lie in (0, 1)"});
    return law;
}

json write_law(const EntryLaw& law) {
    if (law.kind == LawKind::centered_bernoulli) return json{{"kind", law_name(law.kind)}, {"p", law.p}};
    return std::string(law_name(law.kind));
}

std::optional<SymmetricMatrix> read_matrix(const json& j, const std::string& path, std::vector<Violation>& out) {
    Reader r(j, path, out);
    if (!r.ok()) return std::nullopt;
    std::optional<std::size_t> n;
    r.optional_size("n", n);
    std::vector<double> diag;
    std::vector<std::vector<double>> dense;
    const bool has_diag = r.get("diagonal") != nullptr;
    const bool has_dense = r.get("dense") != nullptr;
    r.number_list("diagonal", diag);
    r.vector_list("dense", dense);
    r.finish();
    if (has_diag == has_dense) {
        out.push_back({path, "give exactly one of \"diagonal\" or \"dense\""});
        return std::nullopt;
    }
    try {
        if (has_diag) {
            const std::size_t dim = n.value_or(diag.size());
            if (diag.size() > dim) {
                out.push_back({child(path, "diagonal"), "longer than n"});
                return std::nullopt;
            }
            diag.resize(dim, 0.0);
            for (double d : diag)
                if (!std::isfinite(d)) throw Error(ErrorKind::InvalidConfig, "non-finite entry");
            return SymmetricMatrix::diagonal(diag);
        }
        const std::size_t dim = dense.size();
        if (n && *n != dim) {
            out.push_back({child(path, "n"), "does not match the dense row count"});
            return std::nullopt;
        }
        std::vector<double> flat;
        for (const auto& row : dense) {
            if (row.size() != dim) throw Error(ErrorKind::InvalidConfig, "dense matrix is not square");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return SymmetricMatrix::from_dense(dim, flat);
    } catch (const Error& e) {
        out.push_back({path, e.what()});
        return std::nullopt;
    }
}

json write_matrix(const SymmetricMatrix& m) {
    const std::size_t n = m.n();
    bool diagonal = true;
    for (std::size_t i = 0; i < n && diagonal; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m(i, j) != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = m(i, i);
        return json{{"n", n}, {"diagonal", d}};
    }
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = m(i, j);
        rows.push_back(row);
    }
    return json{{"n", n}, {"dense", rows}};
}

void read_ensemble(const json& j, EnsembleSpec& e, std::vector<Violation>& out) {
    Reader r(j, "ensemble", out);
    if (!r.ok()) return;
    std::string kind = std::string(ensemble_name(e.kind));
    r.string("kind", kind);
    if (auto k = parse_ensemble(kind)) e.kind = *k;
    else r.fail("kind", "unknown ensemble '" + kind + "'");
    r.integer("n", e.n);
    if (const json* off = r.get("off_diag")) {
        if (auto law = read_law(*off, r.path("off_diag"), out)) e.off_diag = *law;
    }
    if (const json* d = r.get("diag")) {
        if (d->is_null()) e.diag.reset();
        else if (auto law = read_law(*d, r.path("diag"), out)) e.diag = *law;
    } else {
        e.diag = e.off_diag;
    }
    r.number("p", e.p);
    r.number("sigma", e.sigma);
    if (const json* m = r.get("deterministic_part")) {
        if (m->is_null()) e.deterministic_part.reset();
        else e.deterministic_part = read_matrix(*m, r.path("deterministic_part"), out);
    }
    r.finish();

    if (e.n < 2) out.push_back({"ensemble.n", "must be at least 2"});
    if (e.kind == EnsembleKind::adjacency && !(e.p > 0.0 && e.p < 1.0)) out.push_back({"ensemble.p", "must lie in (0, 1)"});
    if (e.kind == EnsembleKind::perturbed) {
        if (!(e.sigma >= 0.0) || !std::isfinite(e.sigma)) out.push_back({"ensemble.sigma", "must be finite and >= 0"});
        if (e.deterministic_part && e.deterministic_part->n() != e.n)
            out.push_back({"ensemble.deterministic_part", "dimension differs from ensemble.n"});
    }
}

json write_ensemble(const EnsembleSpec& e) {
    json j{{"kind", ensemble_name(e.kind)}, {"n", e.n}};
    if (e.kind == EnsembleKind::adjacency) {
        j["p"] = e.p;
        return j;
    }
    j["off_diag"] = write_law(e.off_diag);
    j["diag"] = e.diag ? write_law(*e.diag) : json(nullptr);
    if (e.kind == EnsembleKind::perturbed) {
        j["sigma"] = e.sigma;
        j["deterministic_part"] = e.deterministic_part ? write_matrix(*e.deterministic_part) : json(nullptr);
    }
    return j;
}

void read_index_mode(const json& j, IndexMode& m, std::vector<Violation>& out) {
    Reader r(j, "params.index_mode", out);
    if (!r.ok()) return;
    std::string kind = "bulk";
    r.string("kind", kind);
    if (kind == "bulk") {
        m = IndexMode::bulk(0.25);
        r.number("epsilon", m.epsilon);
    } else if (kind == "single") {
        m = IndexMode::single(0);
        r.integer("index", m.index);
    } else if (kind == "all_min") {
        m = IndexMode::all_min();
    } else {
        r.fail("kind", "must be one of bulk, single, all_min");
    }
    r.finish();
}

json write_index_mode(const IndexMode& m) {
    switch (m.kind) {
        case IndexModeKind::single: return json{{"kind", "single"}, {"index", m.index}};
        case IndexModeKind::bulk_average: return json{{"kind", "bulk"}, {"epsilon", m.epsilon}};
        case IndexModeKind::all_min: return json{{"kind", "all_min"}};
    }
    return json{};
}

void check_trials(std::size_t trials, std::vector<Violation>& out) {
    if (trials < 1) out.push_back({"params.trials", "must be at least 1"});
}

void read_params(const json* j, RunConfig& c, std::vector<Violation>& out) {
    static const json empty = json::object();
    Reader r(j ? *j : empty, "params", out);
    if (!r.ok()) return;
    const std::size_t n = c.ensemble.n;
    switch (c.experiment) {
        case Experiment::sample:
            r.integer("trials", c.sample.trials);
            check_trials(c.sample.trials, out);
            break;
        case Experiment::tails: {
            auto& t = c.tails;
            r.integer("trials", t.trials);
            r.integer("l", t.l);
            r.number_list("delta_grid", t.delta_grid);
            if (const json* m = r.get("index_mode")) read_index_mode(*m, t.index_mode, out);
            check_trials(t.trials, out);
            if (t.l < 1 || t.l >= n) out.push_back({"params.l", "must satisfy 1 <= l <= n-1"});
            if (t.delta_grid.empty()) out.push_back({"params.delta_grid", "must not be empty"});
            for (std::size_t k = 0; k < t.delta_grid.size(); ++k) {
                if (!(t.delta_grid[k] > 0.0) || !std::isfinite(t.delta_grid[k])) {
                    out.push_back({"params.delta_grid", "entries must be positive"});
                    break;
                }
                if (k > 0 && !(t.delta_grid[k] > t.delta_grid[k - 1])) {
                    out.push_back({"params.delta_grid", "must be strictly ascending"});
                    break;
                }
            }
            if (t.index_mode.kind == IndexModeKind::single && t.index_mode.index + t.l >= n)
                out.push_back({"params.index_mode.index", "index + l must be < n"});
            if (t.index_mode.kind == IndexModeKind::bulk_average) {
                const double eps = t.index_mode.epsilon;
                if (!(eps >= 0.0 && eps < 0.5)) out.push_back({"params.index_mode.epsilon", "must lie in [0, 0.5)"});
            }
            break;
        }
        case Experiment::mingap:
            r.integer("trials", c.mingap.trials);
            check_trials(c.mingap.trials, out);
            break;
        case Experiment::simple:
            r.integer("trials", c.simple.trials);
            r.optional_number("tol", c.simple.tol);
            check_trials(c.simple.trials, out);
            if (c.simple.tol && !(*c.simple.tol >= 0.0)) out.push_back({"params.tol", "must be >= 0"});
            break;
        case Experiment::lcd: {
            auto& p = c.lcd;
            r.vector_list("vectors", p.vectors);
            r.number("kappa", p.kappa);
            r.number("gamma", p.gamma);
            r.number("theta_max", p.theta_max);
            r.optional_number("alpha", p.alpha);
            r.number("c0", p.compress.c0);
            r.number("c1", p.compress.c1);
            r.integer("budget", p.budget);
            if (p.vectors.empty()) out.push_back({"params.vectors", "must list at least one vector"});
            for (const auto& v : p.vectors) {
                bool nonzero = false;
                for (double x : v) nonzero |= x != 0.0;
                if (!nonzero) {
                    out.push_back({"params.vectors", "vectors must be nonzero"});
                    break;
                }
            }
            if (!(p.kappa > 0.0)) out.push_back({"params.kappa", "must be positive"});
            if (!(p.gamma > 0.0 && p.gamma < 1.0)) out.push_back({"params.gamma", "must lie in (0, 1)"});
            if (!(p.theta_max >= 0.0)) out.push_back({"params.theta_max", "must be >= 0"});
            if (!(p.compress.c0 > 0.0 && p.compress.c0 < 1.0)) out.push_back({"params.c0", "must lie in (0, 1)"});
            if (!(p.compress.c1 > 0.0 && p.compress.c1 < 1.0)) out.push_back({"params.c1", "must lie in (0, 1)"});
            if (p.alpha && !(*p.alpha > 0.0 && *p.alpha < p.compress.c_prime() / 4.0))
                out.push_back({"params.alpha", "must lie in (0, c0 c1^2 / 16)"});
            break;
        }
        case Experiment::smallball: {
            auto& p = c.smallball;
            r.vector_list("vectors", p.vectors);
            r.number_list("deltas", p.deltas);
            if (const json* l = r.get("law")) {
                if (auto law = read_law(*l, "params.law", out)) p.law = *law;
            }
            std::string method = "auto";
            r.string("method", method);
            if (method == "auto") p.method = SmallBallMode::automatic;
            else if (method == "exact") p.method = SmallBallMode::exact;
            else if (method == "monte_carlo") p.method = SmallBallMode::monte_carlo;
            else r.fail("method", "must be one of auto, exact, monte_carlo");
            r.integer("trials", p.trials);
            r.optional_number("alpha", p.alpha);
            if (p.alpha && !(*p.alpha > 0.0 && *p.alpha <= 1.0)) out.push_back({"params.alpha", "must lie in (0, 1]"});
            if (p.vectors.empty()) out.push_back({"params.vectors", "must list at least one vector"});
            if (p.deltas.empty()) out.push_back({"params.deltas", "must not be empty"});
            for (double d : p.deltas)
                if (!(d >= 0.0) || !std::isfinite(d)) {
                    out.push_back({"params.deltas", "entries must be finite and >= 0"});
                    break;
                }
            if (p.trials < 100) out.push_back({"params.trials", "must be at least 100"});
            if (p.method == SmallBallMode::exact) {
                if (!p.law.discrete()) out.push_back({"params.method", "exact needs a two-point law"});
                for (const auto& v : p.vectors)
                    if (v.size() > 20) {
                        out.push_back({"params.method", "exact needs vectors of length <= 20"});
                        break;
                    }
            }
            break;
        }
        case Experiment::nodal:
            r.integer("trials", c.nodal.trials);
            r.optional_number("zero_tol", c.nodal.zero_tol);
            check_trials(c.nodal.trials, out);
            if (c.nodal.zero_tol && !(*c.nodal.zero_tol >= 0.0)) out.push_back({"params.zero_tol", "must be >= 0"});
            if (c.ensemble.kind != EnsembleKind::adjacency) out.push_back({"ensemble.kind", "nodal needs the adjacency ensemble"});
            break;
        case Experiment::power: {
            auto& p = c.power;
            if (const json* m = r.get("matrix")) p.matrix = read_matrix(*m, "params.matrix", out);
            else out.push_back({"params.matrix", "is required"});
            r.optional_number("sigma", p.sigma);
            r.number("tol", p.tol);
            r.integer("max_iter", p.max_iter);
            r.integer("runs", p.runs);
            std::string crit = "eigenvector_error";
            r.string("criterion", crit);
            if (crit == "residual") p.criterion = ConvergenceCriterion::residual;
            else if (crit == "eigenvector_error") p.criterion = ConvergenceCriterion::eigenvector_error;
            else r.fail("criterion", "must be residual or eigenvector_error");
            if (p.sigma && !(*p.sigma >= 0.0)) out.push_back({"params.sigma", "must be >= 0"});
            if (!(p.tol > 0.0)) out.push_back({"params.tol", "must be positive"});
            if (p.max_iter < 1) out.push_back({"params.max_iter", "must be at least 1"});
            if (p.runs < 1) out.push_back({"params.runs", "must be at least 1"});
            if (p.matrix && p.matrix->n() < 2) out.push_back({"params.matrix", "needs dimension >= 2"});
            break;
        }
        case Experiment::report:
            r.string("input_dir", c.report.input_dir);
            break;
    }
    r.finish();
}

json write_params(const RunConfig& c) {
    switch (c.experiment) {
        case Experiment::sample: return json{{"trials", c.sample.trials}};
        case Experiment::tails:
            return json{{"trials", c.tails.trials},
                        {"l", c.tails.l},
                        {"delta_grid", c.tails.delta_grid},
                        {"index_mode", write_index_mode(c.tails.index_mode)}};
        case Experiment::mingap: return json{{"trials", c.mingap.trials}};
        case Experiment::simple:
            return json{{"trials", c.simple.trials}, {"tol", c.simple.tol ? json(*c.simple.tol) : json(nullptr)}};
        case Experiment::lcd:
            return json{{"vectors", c.lcd.vectors},
                        {"kappa", c.lcd.kappa},
                        {"gamma", c.lcd.gamma},
                        {"theta_max", c.lcd.theta_max},
                        {"alpha", c.lcd.alpha ? json(*c.lcd.alpha) : json(nullptr)},
                        {"c0", c.lcd.compress.c0},
                        {"c1", c.lcd.compress.c1},
                        {"budget", c.lcd.budget}};
        case Experiment::smallball: {
            const char* method = c.smallball.method == SmallBallMode::exact         ? "exact"
                                 : c.smallball.method == SmallBallMode::monte_carlo ? "monte_carlo"
                                                                                    : "auto";
            return json{{"vectors", c.smallball.vectors},
                        {"deltas", c.smallball.deltas},
                        {"law", write_law(c.smallball.law)},
                        {"method", method},
                        {"trials", c.smallball.trials},
                        {"alpha", c.smallball.alpha ? json(*c.smallball.alpha) : json(nullptr)}};
        }
        case Experiment::nodal:
            return json{{"trials", c.nodal.trials}, {"zero_tol", c.nodal.zero_tol ? json(*c.nodal.zero_tol) : json(nullptr)}};
        case Experiment::power:
            return json{{"matrix", c.power.matrix ? write_matrix(*c.power.matrix) : json(nullptr)},
                        {"sigma", c.power.sigma ? json(*c.power.sigma) : json(nullptr)},
                        {"tol", c.power.tol},
                        {"max_iter", c.power.max_iter},
                        {"runs", c.power.runs},
                        {"criterion", c.power.criterion == ConvergenceCriterion::residual ? "residual" : "eigenvector_error"}};
        case Experiment::report: return json{{"input_dir", c.report.input_dir}};
    }
    return json::object();
}

}  // namespace

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::sample: return "sample";
        case Experiment::tails: return "tails";
        case Experiment::mingap: return "mingap";
        case Experiment::simple: return "simple";
        case Experiment::lcd: return "lcd";
        case Experiment::smallball: return "smallball";
        case Experiment::nodal: return "nodal";
        case Experiment::power: return "power";
        case Experiment::report: return "report";
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::sample, Experiment::tails, Experiment::mingap, Experiment::simple, Experiment::lcd,
                         Experiment::smallball, Experiment::nodal, Experiment::power, Experiment::report})
        if (name == experiment_name(e)) return e;
    return std::nullopt;
}

ConfigError::ConfigError(std::vector<Violation> violations)
    : Error(ErrorKind::InvalidConfig, join_violations(violations)), violations_(std::move(violations)) {}

void RunConfig::set_seed(std::uint64_t s) {
    seed = s;
    ensemble.master_seed = s;
}

std::size_t RunConfig::resolved_workers() const { return workers.value_or(default_workers()); }

bool RunConfig::uses_ensemble() const {
    switch (experiment) {
        case Experiment::sample:
        case Experiment::tails:
        case Experiment::mingap:
        case Experiment::simple:
        case Experiment::nodal: return true;
        default: return false;
    }
}

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }

    std::vector<Violation> out;
    RunConfig c;
    Reader r(root, "", out);
    if (!r.ok()) throw ConfigError(out);

    if (const json* v = r.get("schema_version")) {
        if (!v->is_number_integer() || v->get<std::int64_t>() != RunConfig::kSchemaVersion)
            out.push_back({"schema_version", "must be 1"});
    } else {
        out.push_back({"schema_version", "is required"});
    }

    std::string name;
    if (r.get("experiment")) r.string("experiment", name);
    else out.push_back({"experiment", "is required"});
    if (auto e = parse_experiment(name)) c.experiment = *e;
    else if (!name.empty()) out.push_back({"experiment", "unknown experiment '" + name + "'"});

    std::uint64_t seed = 0;
    r.integer("seed", seed);
    r.string("output_dir", c.output_dir);
    r.optional_size("workers", c.workers);
    if (c.workers && *c.workers == 0) out.push_back({"workers", "must be at least 1"});
    if (c.output_dir.empty()) out.push_back({"output_dir", "must not be empty"});

    const json* ens = r.get("ensemble");
    if (c.uses_ensemble()) {
        if (ens) read_ensemble(*ens, c.ensemble, out);
        else out.push_back({"ensemble", "is required for " + name});
    } else if (ens) {
        out.push_back({"ensemble", "is not used by " + name});
    }
    read_params(r.get("params"), c, out);
    r.finish();

    c.set_seed(seed);
    if (!out.empty()) throw ConfigError(out);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json j{{"schema_version", RunConfig::kSchemaVersion},
           {"experiment", experiment_name(c.experiment)},
           {"seed", c.seed},
           {"output_dir", c.output_dir},
           {"workers", c.workers ? json(*c.workers) : json(nullptr)},
           {"params", write_params(c)}};
    if (c.uses_ensemble()) j["ensemble"] = write_ensemble(c.ensemble);
    return j.dump(2) + "\n";
}

}  // namespace gaplab::cli
