#include "fkfp/verify/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fkfp::verify {

namespace {
void ensure_open(const std::ofstream& os, const std::string& path) {
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
}
}  // namespace

void write_verdict_json(const std::string& path, const VerdictReport& rep) {
  nlohmann::ordered_json j;
  j["experiment"] = rep.id;
  j["pass"] = rep.pass();
  auto crits = nlohmann::ordered_json::array();
  for (const auto& c : rep.criteria) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["measured"] = c.measured;
    jc["target"] = c.target;
    jc["tolerance"] = c.tol;
    jc["comparison"] = c.cmp;
    jc["pass"] = c.pass;
    crits.push_back(jc);
  }
  j["criteria"] = crits;
  nlohmann::ordered_json vals;
  for (const auto& [k, v] : rep.values) vals[k] = v;
  j["values"] = vals;
  std::ofstream os(path, std::ios::binary);
  ensure_open(os, path);
  os << j.dump(2) << "\n";
}

void write_summary_csv(const std::string& path, const std::vector<VerdictReport>& reps) {
  std::ofstream os(path, std::ios::binary);
  ensure_open(os, path);
  os << "experiment,criterion,measured,target,tolerance,comparison,pass\n";
  char buf[768];
  for (const auto& r : reps)
    for (const auto& c : r.criteria) {
      std::snprintf(buf, sizeof buf, "%s,\"%s\",%.17g,%.17g,%.17g,%s,%d\n", r.id.c_str(),
                    c.name.c_str(), c.measured, c.target, c.tol, c.cmp.c_str(), c.pass ? 1 : 0);
      os << buf;
    }
}

void write_plot_data(const std::string& dir, const VerdictReport& rep) {
  int idx = 0;
  for (const auto& [name, rows] : rep.curves) {
    const std::string path = dir + "/" + rep.id + "." + std::to_string(idx++) + ".plot.csv";
    std::ofstream os(path, std::ios::binary);
    ensure_open(os, path);
    os << "# " << name << "\n";
    os << "x,y\n";
    char buf[128];
    for (const auto& [x, y] : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
      os << buf;
    }
  }
}

void write_plot_script(const std::string& dir) {
  const std::string path = dir + "/plot_all.py";
  std::ofstream os(path, std::ios::binary);
  ensure_open(os, path);
  os << R"(#!/usr/bin/env python3
"""Plot every *.plot.csv in this directory (log-log) to PNG."""
import csv, glob, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

for path in sorted(glob.glob(os.path.join(os.path.dirname(__file__) or ".", "*.plot.csv"))):
    with open(path) as fh:
        title = fh.readline().lstrip("# ").strip()
        rows = list(csv.DictReader(fh))
    xs = [float(r["x"]) for r in rows]
    ys = [abs(float(r["y"])) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(xs, ys, "o-")
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("x")
    ax.set_ylabel("norm")
    fig.tight_layout()
    fig.savefig(path.replace(".plot.csv", ".png"), dpi=120)
    plt.close(fig)
print("plotted", len(glob.glob("*.plot.csv")), "curves")
)";
}

std::string format_criterion_line(const VerdictReport& rep, const Criterion& c) {
  char buf[768];
  std::snprintf(buf, sizeof buf, "[%s] %s :: %s: measured=%.6g target=%.6g tol=%.3g (%s)",
                c.pass ? "PASS" : "FAIL", rep.id.c_str(), c.name.c_str(), c.measured, c.target,
                c.tol, c.cmp.c_str());
  return buf;
}

}  // namespace fkfp::verify
