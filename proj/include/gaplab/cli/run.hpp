#pragma once

// Experiment orchestration for the gaplab command line: computes every
// output in memory, then writes the CSV files and manifest.json atomically.

#include <optional>
#include <string>
#include <vector>

#include "gaplab/cli/config.hpp"

namespace gaplab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct OutputFile {
    std::string name;  // relative to the output directory
    std::string contents;
};

/// Runs the experiment and renders its CSV files. No filesystem access.
std::vector<OutputFile> compute(const RunConfig& config);

struct RunSummary {
    std::string output_dir;
    std::vector<std::string> files;  // written names, manifest last
    double wall_seconds = 0.0;
};

/// compute() followed by write_outputs(). Io when the directory cannot be
/// created or written; no output file is left behind in that case.
RunSummary run(const RunConfig& config);

/// Writes each file through a temporary sibling and a rename, after all
/// temporaries were written successfully.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

struct ReportResult {
    std::string summary;             // also written to summary.txt
    std::vector<std::string> plots;  // SVG files written next to the CSVs
    bool all_checks_pass = true;
    std::optional<double> slope;     // tails only: fit_exponent over the whole grid
};

/// Reads manifest.json and the CSVs in `dir`. MissingManifest when the
/// manifest is absent or unreadable.
ReportResult report(const std::string& dir);

}  // namespace gaplab::cli
