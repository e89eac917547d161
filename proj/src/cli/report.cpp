#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gaplab/cli/csv.hpp"
#include "gaplab/cli/run.hpp"
#include "gaplab/error.hpp"
#include "gaplab/gap_experiments.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab::cli {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Plain SVG scatter/line/bar plots on a fixed 480 x 320 canvas.
class Svg {
public:
    Svg(std::string title, double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
        if (!(y1_ > y0_)) y1_ = y0_ + 1.0;
        body_ << "<text x=\"240\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
        body_ << "<path d=\"M60 20 V280 H460\" fill=\"none\" stroke=\"black\"/>\n";
    }

    void axis_labels(const std::string& x, const std::string& y) {
        body_ << "<text x=\"260\" y=\"312\" text-anchor=\"middle\" font-size=\"12\">" << x << "</text>\n";
        body_ << "<text x=\"14\" y=\"150\" font-size=\"12\" transform=\"rotate(-90 14 150)\">" << y << "</text>\n";
        tick(x0_, y0_, "start");
        tick(x1_, y0_, "end");
        body_ << "<text x=\"56\" y=\"280\" text-anchor=\"end\" font-size=\"10\">" << format_double(round3(y0_))
              << "</text>\n";
        body_ << "<text x=\"56\" y=\"28\" text-anchor=\"end\" font-size=\"10\">" << format_double(round3(y1_))
              << "</text>\n";
    }

    void point(double x, double y) {
        body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\"/>\n";
    }

    void segment(double xa, double ya, double xb, double yb, const char* colour) {
        body_ << "<path d=\"M" << px(xa) << ' ' << py(ya) << " L" << px(xb) << ' ' << py(yb) << "\" stroke=\"" << colour
              << "\" fill=\"none\"/>\n";
    }

    void bar(double xa, double xb, double h) {
        const double top = py(h), base = py(y0_);
        body_ << "<path d=\"M" << px(xa) << ' ' << base << " V" << top << " H" << px(xb) << " V" << base
              << " Z\" fill=\"#8aa\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }

    std::string str() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\">\n" + body_.str() + "</svg>\n";
    }

private:
    static double round3(double v) { return std::round(v * 1000.0) / 1000.0; }
    double px(double x) const { return 60.0 + 400.0 * (x - x0_) / (x1_ - x0_); }
    double py(double y) const { return 280.0 - 260.0 * (y - y0_) / (y1_ - y0_); }
    void tick(double x, double, const char* anchor) {
        body_ << "<text x=\"" << px(x) << "\" y=\"294\" text-anchor=\"" << anchor << "\" font-size=\"10\">"
              << format_double(round3(x)) << "</text>\n";
    }

    double x0_, x1_, y0_, y1_;
    std::ostringstream body_;
};

std::string histogram(const std::string& title, const std::string& xlabel, const std::vector<double>& data,
                      std::size_t bins) {
    const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
    double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) hi = lo + 1.0;
    std::vector<double> count(bins, 0.0);
    for (double v : data) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        count[std::min(b, bins - 1)] += 1.0;
    }
    Svg svg(title, lo, hi, 0.0, *std::max_element(count.begin(), count.end()));
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) svg.bar(lo + w * static_cast<double>(b), lo + w * static_cast<double>(b + 1), count[b]);
    svg.axis_labels(xlabel, "count");
    return svg.str();
}

struct Report {
    std::ostringstream text;
    bool pass = true;
    std::vector<std::pair<std::string, std::string>> plots;

    void check(bool ok, const std::string& what) {
        text << (ok ? "PASS " : "FAIL ") << what << '\n';
        pass = pass && ok;
    }
};

std::string interval(double lo, double hi) { return "[" + format_double(lo) + ", " + format_double(hi) + "]"; }

TailCurve curve_from_csv(const CsvTable& t) {
    TailCurve c;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (r == 0) {
            c.n = t.integer(r, "n");
            c.l = t.integer(r, "l");
            c.seed = t.integer(r, "seed");
        }
        TailPoint p;
        p.delta = t.number(r, "delta");
        p.trials = t.integer(r, "trials");
        p.successes = t.integer(r, "successes");
        p.p_hat = t.number(r, "p_hat");
        p.ci_lo = t.number(r, "ci_lo");
        p.ci_hi = t.number(r, "ci_hi");
        c.points.push_back(p);
    }
    return c;
}

void report_tails(const CsvTable& t, Report& rep, std::optional<double>& slope_out) {
    const TailCurve c = curve_from_csv(t);
    if (c.points.empty()) throw Error(ErrorKind::InsufficientData, "tails.csv has no rows");
    rep.text << "tail probabilities, n = " << c.n << ", l = " << c.l << ", index mode " << t.text(0, "index_mode") << '\n';
    for (const auto& p : c.points)
        rep.text << "  delta " << format_double(p.delta) << ": p_hat " << format_double(p.p_hat) << " (" << p.successes
                 << "/" << p.trials << "), Wilson 95% " << interval(p.ci_lo, p.ci_hi) << '\n';

    const Rational cl = c_exponent(static_cast<std::uint32_t>(c.l));
    rep.text << "  c_l = " << cl.num << "/" << cl.den << '\n';
    std::optional<ExponentFit> fit;
    try {
        fit = fit_exponent(c, c.points.front().delta, c.points.back().delta);
    } catch (const Error& e) {
        rep.text << "  slope unavailable: " << e.what() << '\n';
    }
    if (fit) {
        slope_out = fit->slope;
        rep.text << "slope: " << format_double(fit->slope) << '\n';
        if (fit->used.size() > 2)
            rep.text << "  slope 95% " << interval(fit->slope - 1.96 * fit->slope_stderr, fit->slope + 1.96 * fit->slope_stderr)
                     << " from " << fit->used.size() << " points";
        else
            rep.text << "  two points, no slope interval";
        if (!fit->excluded.empty()) rep.text << ", " << fit->excluded.size() << " zero-success points excluded";
        rep.text << '\n';
    }

    if (c.l == 1) {
        bool linear = true;
        for (const auto& p : c.points) linear = linear && p.p_hat <= 2.0 * p.delta;
        rep.check(linear, "p_hat <= 2 delta at every grid point");
        rep.check(fit && fit->slope >= 1.5 && fit->slope <= 2.5, "fitted slope in [1.5, 2.5]");
    } else if (c.l == 2) {
        rep.check(fit && fit->slope >= 2.5, "fitted slope >= 2.5");
    }

    double ymin = 0.0, ymax = 0.0, xmin = std::log10(c.points.front().delta), xmax = std::log10(c.points.back().delta);
    bool any = false;
    for (const auto& p : c.points) {
        if (p.successes == 0) continue;
        const double lo = std::log10(std::max(p.ci_lo, p.p_hat * 1e-3)), hi = std::log10(p.ci_hi);
        ymin = any ? std::min(ymin, lo) : lo;
        ymax = any ? std::max(ymax, hi) : hi;
        any = true;
    }
    if (any) {
        Svg svg("log10 p_hat against log10 delta", xmin, xmax, ymin, ymax);
        for (const auto& p : c.points) {
            if (p.successes == 0) continue;
            const double x = std::log10(p.delta);
            svg.point(x, std::log10(p.p_hat));
            svg.segment(x, std::log10(std::max(p.ci_lo, p.p_hat * 1e-3)), x, std::log10(p.ci_hi), "gray");
        }
        if (fit) svg.segment(xmin, (fit->intercept + fit->slope * xmin * std::log(10.0)) / std::log(10.0), xmax,
                             (fit->intercept + fit->slope * xmax * std::log(10.0)) / std::log(10.0), "red");
        svg.axis_labels("log10 delta", "log10 p_hat");
        rep.plots.emplace_back("tails.svg", svg.str());
    }
}

void report_sample(const CsvTable& t, const nlohmann::json& config, Report& rep) {
    const std::size_t n = config.at("ensemble").at("n").get<std::size_t>();
    std::map<std::uint64_t, std::vector<double>> spectra;
    std::vector<double> scaled;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double ev = t.number(r, "eigenvalue");
        spectra[t.integer(r, "trial")].push_back(ev);
        scaled.push_back(ev / std::sqrt(static_cast<double>(n)));
    }
    std::size_t in_range = 0;
    for (const auto& [trial, ev] : spectra) in_range += spectrum_in_range(ev, 10.0) ? 1 : 0;
    rep.text << "sampled spectra: " << spectra.size() << " trials, n = " << n << '\n';
    rep.check(in_range == spectra.size(), "spectrum inside [-10 sqrt(n), 10 sqrt(n)] in " + std::to_string(in_range) +
                                              "/" + std::to_string(spectra.size()) + " trials");
    if (!scaled.empty()) rep.plots.emplace_back("sample.svg", histogram("eigenvalues / sqrt(n)", "lambda / sqrt(n)", scaled, 40));
}

void report_mingap(const CsvTable& t, Report& rep) {
    std::vector<double> scaled;
    for (std::size_t r = 0; r < t.rows.size(); ++r) scaled.push_back(t.number(r, "min_gap_scaled"));
    if (scaled.empty()) throw Error(ErrorKind::InsufficientData, "mingap.csv has no rows");
    std::sort(scaled.begin(), scaled.end());
    rep.text << "minimum gap times n^{3/2} over " << scaled.size() << " trials: min " << format_double(scaled.front())
             << ", median " << format_double(quantile_sorted(scaled, 0.5)) << ", max " << format_double(scaled.back())
             << '\n';
    const auto above = static_cast<std::size_t>(std::count_if(scaled.begin(), scaled.end(), [](double v) { return v >= 1.0; }));
    rep.check(above == scaled.size(), "min gap >= n^{-3/2} in " + std::to_string(above) + "/" + std::to_string(scaled.size()) +
                                          " trials");
    std::vector<double> logs;
    for (double v : scaled) logs.push_back(std::log10(std::max(v, 1e-300)));
    rep.plots.emplace_back("mingap.svg", histogram("log10 of min gap times n^{3/2}", "log10 scaled min gap", logs, 30));
}

void report_simple(const CsvTable& t, Report& rep) {
    std::size_t simple = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) simple += t.text(r, "is_simple") == "true" ? 1 : 0;
    const std::size_t trials = t.rows.size();
    const WilsonInterval w = wilson_interval(simple, trials);
    rep.text << "simple spectra: " << simple << "/" << trials << ", Wilson 95% " << interval(w.lo, w.hi) << '\n';
    rep.check(trials > 0 && simple == trials, "every sampled spectrum is simple");
}

void report_nodal(const CsvTable& t, Report& rep) {
    std::map<std::uint64_t, std::vector<std::size_t>> strong;  // per trial, by eigen index
    double min_abs = INFINITY;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        auto& s = strong[t.integer(r, "trial")];
        const std::size_t idx = t.integer(r, "eigen_index");
        if (s.size() <= idx) s.resize(idx + 1);
        s[idx] = t.integer(r, "strong_count");
        min_abs = std::min(min_abs, t.number(r, "min_abs_coord"));
    }
    std::size_t good = 0;
    for (const auto& [trial, s] : strong) {
        bool ok = !s.empty() && s.back() == 1;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) ok = ok && s[i] == 2;
        good += ok ? 1 : 0;
    }
    const std::size_t trials = strong.size();
    rep.text << "nodal domains: " << trials << " trials, smallest |v_i| " << format_double(min_abs) << '\n';
    rep.check(min_abs > 1e-8, "every eigenvector coordinate exceeds 1e-8 in magnitude");
    rep.check(trials > 0 && 50 * good >= 49 * trials, "two strong domains below the top, one at the top, in " +
                                                          std::to_string(good) + "/" + std::to_string(trials) + " trials");
}

void report_power(const CsvTable& t, const nlohmann::json& config, Report& rep) {
    const auto& m = config.at("params").at("matrix");
    const double tol = config.at("params").at("tol").get<double>();
    double lambda_f = 0.0;
    if (m.contains("diagonal")) {
        const auto d = m.at("diagonal").get<std::vector<double>>();
        lambda_f = *std::max_element(d.begin(), d.end());
    } else {
        const auto rows = m.at("dense").get<std::vector<std::vector<double>>>();
        std::vector<double> flat;
        for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        lambda_f = eigenvalues(SymmetricMatrix::from_dense(rows.size(), flat)).back();
    }
    std::size_t converged = 0, certified = 0;
    std::vector<double> iters;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const bool c = t.text(r, "converged") == "true";
        converged += c ? 1 : 0;
        iters.push_back(t.number(r, "iterations"));
        const double err = std::abs(t.number(r, "lambda_est") - lambda_f);
        certified += c && err <= t.number(r, "weyl_bound") + tol + 1e-12 * (1.0 + std::abs(lambda_f)) ? 1 : 0;
    }
    const std::size_t runs = t.rows.size();
    rep.text << "power iteration: " << converged << "/" << runs << " runs converged, lambda_max(F) = "
             << format_double(lambda_f) << '\n';
    rep.check(certified == converged, "Weyl certificate holds for " + std::to_string(certified) + "/" +
                                          std::to_string(converged) + " converged runs");
    if (!iters.empty()) rep.plots.emplace_back("power.svg", histogram("iterations per run", "iterations", iters, 20));
}

void report_lcd(const CsvTable& t, Report& rep) {
    rep.text << "least common denominators:\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        rep.text << "  vector " << t.text(r, "vector_id") << ": " << (t.text(r, "bounded") == "true" ? "" : ">= ")
                 << t.text(r, "value") << " (distance " << t.text(r, "achieved_distance") << ")\n";
}

void report_smallball(const CsvTable& t, Report& rep) {
    rep.text << "small-ball probabilities:\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        rep.text << "  vector " << t.text(r, "vector_id") << ", delta " << t.text(r, "delta") << ": "
                 << t.text(r, "estimate") << " +- " << t.text(r, "half_width") << " (" << t.text(r, "method") << ")\n";
}

}  // namespace

ReportResult report(const std::string& dir) {
    const fs::path root(dir);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(root / "manifest.json"));
    } catch (const std::exception& e) {
        throw Error(ErrorKind::MissingManifest, "no readable manifest.json in " + dir);
    }
    if (!manifest.is_object() || !manifest.contains("experiment") || !manifest.contains("config") ||
        !manifest.contains("outputs"))
        throw Error(ErrorKind::MissingManifest, "manifest.json in " + dir + " is incomplete");

    const std::string experiment = manifest.at("experiment").get<std::string>();
    const auto& config = manifest.at("config");
    Report rep;
    ReportResult out;
    rep.text << "gaplab " << manifest.value("version", std::string("?")) << " report for " << experiment << ", seed "
             << manifest.at("seed").dump() << '\n';

    auto table = [&](const std::string& name) { return parse_csv(read_file(root / name)); };
    if (experiment == "tails") report_tails(table("tails.csv"), rep, out.slope);
    else if (experiment == "sample") report_sample(table("sample.csv"), config, rep);
    else if (experiment == "mingap") report_mingap(table("mingap.csv"), rep);
    else if (experiment == "simple") report_simple(table("simple.csv"), rep);
    else if (experiment == "nodal") report_nodal(table("nodal.csv"), rep);
    else if (experiment == "power") report_power(table("power.csv"), config, rep);
    else if (experiment == "lcd") report_lcd(table("lcd.csv"), rep);
    else if (experiment == "smallball") report_smallball(table("smallball.csv"), rep);
    else throw Error(ErrorKind::MissingManifest, "manifest names unknown experiment '" + experiment + "'");

    std::vector<OutputFile> files;
    for (auto& [name, svg] : rep.plots) {
        out.plots.push_back(name);
        files.push_back({name, svg});
    }
    out.summary = rep.text.str();
    out.all_checks_pass = rep.pass;
    files.push_back({"summary.txt", out.summary});
    write_outputs(dir, files);
    return out;
}

}  // namespace gaplab::cli
