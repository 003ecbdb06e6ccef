#pragma once

#include <string>
#include <vector>

#include "fkfp/verify/verify.hpp"

namespace fkfp::verify {

// Verdict JSON and CSV files are deterministic: runtimes and timestamps go to
// the run manifest only, so identical configs give byte-identical reports.
void write_verdict_json(const std::string& path, const VerdictReport& rep);
void write_summary_csv(const std::string& path, const std::vector<VerdictReport>& reps);
// (x, y) columns per curve + a matplotlib script that plots every *.plot.csv
void write_plot_data(const std::string& dir, const VerdictReport& rep);
void write_plot_script(const std::string& dir);

std::string format_criterion_line(const VerdictReport& rep, const Criterion& c);

}  // namespace fkfp::verify
