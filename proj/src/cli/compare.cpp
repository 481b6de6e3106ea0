// Copyright 2026 The hybridcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hybridcq/cli/commands.hpp"
#include "hybridcq/errors.hpp"

namespace hybridcq::cli {

namespace {

namespace fs = std::filesystem;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.columns.size()) throw InvalidInput(path.string() + ": ragged row '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw InvalidInput(path.string() + ": no column header");
  return t;
}

bool parse(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

bool same_key(const std::string& a, const std::string& b) {
  double x = 0.0;
  double y = 0.0;
  if (parse(a, x) && parse(b, y)) return std::abs(x - y) <= 1e-9 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
  return a == b;
}

const std::set<std::string> kKeyColumns = {"t", "level", "n1", "n2", "k", "n", "m", "mode"};

bool is_magnitude(const std::string& column) { return column.rfind("mean", 0) == 0 || column == "abs"; }

struct QuantityReport {
  std::size_t rows = 0;
  double max_rel = 0.0;
  double max_abs_z = 0.0;
  bool z_available = false;
  bool pass = true;
};

}  // namespace

int cmd_compare(const CompareOptions& options, std::ostream& out) {
  std::vector<fs::path> oracle_files;
  try {
    if (!fs::is_directory(options.sim_dir)) throw InvalidInput("simulation directory '" + options.sim_dir + "' not found");
    if (!fs::is_directory(options.oracle_dir)) throw InvalidInput("oracle directory '" + options.oracle_dir + "' not found");
    for (const auto& entry : fs::directory_iterator(options.oracle_dir)) {
      if (entry.path().extension() == ".csv" && fs::exists(fs::path(options.sim_dir) / entry.path().filename())) {
        oracle_files.push_back(entry.path());
      }
    }
    std::sort(oracle_files.begin(), oracle_files.end());
    if (oracle_files.empty()) throw InvalidInput("no CSV file is present in both directories");
  } catch (const std::exception& e) {
    out << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  bool all_pass = true;
  std::size_t checked = 0;
  out << "file,quantity,rows,max_rel_error,max_abs_z,status\n";
  for (const auto& ofile : oracle_files) {
    const fs::path sfile = fs::path(options.sim_dir) / ofile.filename();
    Table oracle;
    Table sim;
    try {
      oracle = read_table(ofile);
      sim = read_table(sfile);
    } catch (const std::exception& e) {
      out << "error: " << e.what() << '\n';
      return kExitInvalid;
    }

    std::vector<int> okeys;
    std::vector<int> skeys;
    std::vector<std::string> values;
    for (std::size_t c = 0; c < oracle.columns.size(); ++c) {
      const auto& name = oracle.columns[c];
      if (kKeyColumns.count(name)) {
        const int si = sim.index(name);
        if (si < 0) {
          out << "error: " << sfile.string() << " lacks key column '" << name << "'\n";
          return kExitInvalid;
        }
        okeys.push_back(static_cast<int>(c));
        skeys.push_back(si);
      } else if (sim.index(name) >= 0) {
        values.push_back(name);
      }
    }

    // The time grids must coincide.
    const int ot = oracle.index("t");
    const int st = sim.index("t");
    if (ot >= 0 && st >= 0) {
      auto distinct = [](const Table& tab, int col) {
        std::vector<std::string> v;
        for (const auto& r : tab.rows) {
          const bool seen = std::any_of(v.begin(), v.end(), [&](const std::string& x) { return same_key(x, r[col]); });
          if (!seen) v.push_back(r[col]);
        }
        return v;
      };
      const auto a = distinct(oracle, ot);
      const auto b = distinct(sim, st);
      const bool match = a.size() == b.size() && std::all_of(a.begin(), a.end(), [&](const std::string& x) {
                           return std::any_of(b.begin(), b.end(), [&](const std::string& y) { return same_key(x, y); });
                         });
      if (!match) {
        out << "error: time grids of " << ofile.filename().string() << " differ between simulation and oracle\n";
        return kExitInvalid;
      }
    }

    std::map<std::string, QuantityReport> reports;
    for (const auto& orow : oracle.rows) {
      const std::vector<std::string>* match = nullptr;
      for (const auto& srow : sim.rows) {
        bool eq = true;
        for (std::size_t k = 0; k < okeys.size() && eq; ++k) eq = same_key(orow[okeys[k]], srow[skeys[k]]);
        if (eq) {
          match = &srow;
          break;
        }
      }
      if (!match) {
        std::string key;
        for (int k : okeys) key += oracle.columns[k] + "=" + orow[k] + " ";
        out << "error: no simulation row for " << key << "in " << ofile.filename().string() << '\n';
        return kExitInvalid;
      }
      for (const auto& name : values) {
        auto& rep = reports[name];
        double o = 0.0;
        double s = 0.0;
        ++rep.rows;
        if (!parse(orow[oracle.index(name)], o) || !parse((*match)[sim.index(name)], s) || !std::isfinite(s)) {
          rep.pass = false;
          rep.max_rel = INFINITY;
          continue;
        }
        if (is_magnitude(name)) {
          o = std::abs(o);
          s = std::abs(s);
        }
        const double diff = s - o;
        const double rel = diff == 0.0 ? 0.0 : (o == 0.0 ? INFINITY : std::abs(diff) / std::abs(o));
        rep.max_rel = std::max(rep.max_rel, rel);
        if (options.rel_max && !(rel <= *options.rel_max)) rep.pass = false;
        const int se_col = sim.index(name + "_se");
        double se = 0.0;
        if (se_col >= 0 && parse((*match)[se_col], se)) {
          rep.z_available = true;
          const double z = diff == 0.0 ? 0.0 : (se > 0.0 ? std::abs(diff) / se : INFINITY);
          rep.max_abs_z = std::max(rep.max_abs_z, z);
          if (options.z_max > 0.0 && !(z <= options.z_max)) rep.pass = false;
        }
      }
    }
    for (const auto& [name, rep] : reports) {
      const bool checked_here = (options.z_max > 0.0 && rep.z_available) || options.rel_max.has_value();
      if (checked_here) ++checked;
      all_pass = all_pass && rep.pass;
      out << ofile.filename().string() << ',' << name << ',' << rep.rows << ',' << format_double(rep.max_rel) << ','
          << (rep.z_available ? format_double(rep.max_abs_z) : std::string("n/a")) << ','
          << (!checked_here ? "unchecked" : (rep.pass ? "pass" : "FAIL")) << '\n';
    }
  }
  if (checked == 0) {
    out << "error: no quantity could be checked (no standard errors and no --rel-max)\n";
    return kExitInvalid;
  }
  out << (all_pass ? "all declared tolerances met\n" : "tolerances violated\n");
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace hybridcq::cli
