#include "angof/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "angof/error.hpp"

namespace angof {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_real(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  return res.ec == std::errc() && res.ptr == last;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "na"; }

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::size_t DataTable::column(const std::string& key) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == key) return j;
  }
  std::size_t idx = 0;
  const auto res = std::from_chars(key.data(), key.data() + key.size(), idx);
  if (res.ec == std::errc() && res.ptr == key.data() + key.size() && idx >= 1 && idx <= names.size()) {
    return idx - 1;
  }
  throw ConfigError("no column named '" + key + "'");
}

DataTable parse_csv(std::istream& in, const std::string& source) {
  DataTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (!have_header) {
      t.names = cells;
      t.columns.assign(cells.size(), {});
      have_header = true;
      continue;
    }
    if (cells.size() != t.names.size()) {
      throw IoError(where(source, lineno) + "expected " + std::to_string(t.names.size()) + " fields, found " +
                    std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (is_missing(cells[j])) {
        ++t.missing;
      } else if (!parse_real(cells[j], v)) {
        throw IoError(where(source, lineno) + "cannot parse '" + cells[j] + "' as a real number");
      } else if (!std::isfinite(v)) {
        ++t.missing;
        v = std::numeric_limits<double>::quiet_NaN();
      }
      t.columns[j].push_back(v);
    }
    ++t.rows;
  }
  if (!have_header) throw IoError(source + ": empty file");
  if (t.names.size() < 2) throw IoError(source + ": need at least 2 columns");
  return t;
}

DataTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

BivariateSample pair_sample(const DataTable& t, std::size_t a, std::size_t b, std::size_t* dropped) {
  if (a >= t.columns.size() || b >= t.columns.size()) throw ConfigError("column index out of range");
  BivariateSample s;
  std::size_t skip = 0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    const double x = t.columns[a][i];
    const double y = t.columns[b][i];
    if (std::isnan(x) || std::isnan(y)) {
      ++skip;
      continue;
    }
    s.x1.push_back(x);
    s.x2.push_back(y);
  }
  if (dropped) *dropped = skip;
  return s;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_table(std::ostream& out, const CriticalValueTable& t) {
  out << "# angof critical-value table v1\n";
  out << "# family=" << to_string(t.family) << "\n";
  out << "# p=" << t.p.to_string() << "\n";
  out << "# q=" << to_string(t.q) << "\n";
  out << "# h=" << format_real(t.grid.h) << "\n";
  out << "# M=" << t.grid.M << "\n";
  out << "# N=" << t.grid.N << "\n";
  out << "# tails=" << (t.grid.tails ? 1 : 0) << "\n";
  out << "# rule=" << to_string(t.grid.rule) << "\n";
  out << "# B=" << t.B << "\n";
  out << "# seed=" << t.seed << "\n";
  out << "kind,r,key,value\n";
  for (std::size_t k = 0; k < t.r_grid.size(); ++k) {
    const std::string r = format_real(t.r_grid[k]);
    for (double level : t.levels) {
      out << "quantile," << r << "," << format_real(level) << ","
          << format_real(quantile(t.draws[k], level)) << "\n";
    }
  }
  for (std::size_t k = 0; k < t.r_grid.size(); ++k) {
    const std::string r = format_real(t.r_grid[k]);
    for (std::size_t b = 0; b < t.draws[k].size(); ++b) {
      out << "draw," << r << "," << b << "," << format_real(t.draws[k][b]) << "\n";
    }
  }
}

CriticalValueTable read_table(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> meta;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<double> quant_levels;
  std::map<double, std::vector<std::pair<std::size_t, double>>> draws;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (trim(line) != "kind,r,key,value") throw IoError(where(source, lineno) + "unexpected column header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    double r = 0.0;
    double key = 0.0;
    double value = 0.0;
    if (cells.size() != 4 || !parse_real(cells[1], r) || !parse_real(cells[2], key) ||
        !parse_real(cells[3], value)) {
      throw IoError(where(source, lineno) + "malformed row");
    }
    if (cells[0] == "quantile") {
      if (std::find(quant_levels.begin(), quant_levels.end(), key) == quant_levels.end()) quant_levels.push_back(key);
    } else if (cells[0] == "draw") {
      draws[r].emplace_back(static_cast<std::size_t>(key), value);
    } else {
      throw IoError(where(source, lineno) + "unknown row kind '" + cells[0] + "'");
    }
  }
  auto need = [&](const std::string& k) {
    const auto it = meta.find(k);
    if (it == meta.end()) throw IoError(source + ": missing header field '" + k + "'");
    return it->second;
  };
  CriticalValueTable t;
  try {
    t.family = parse_family(need("family"));
    t.p = PNorm::parse(need("p"));
    t.q = parse_weight_kind(need("q"));
    t.grid.h = std::stod(need("h"));
    t.grid.M = std::stoi(need("M"));
    t.grid.N = std::stoi(need("N"));
    t.grid.tails = need("tails") == "1";
    t.grid.rule = parse_cell_rule(need("rule"));
    t.B = std::stoi(need("B"));
    t.seed = std::stoull(need("seed"));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(source + ": bad header: " + e.what());
  }
  t.levels = quant_levels;
  for (auto& [r, rows] : draws) {
    std::sort(rows.begin(), rows.end());
    if (rows.size() != static_cast<std::size_t>(t.B)) {
      throw IoError(source + ": node r = " + format_real(r) + " has " + std::to_string(rows.size()) +
                    " draws, header says " + std::to_string(t.B));
    }
    std::vector<double> v;
    v.reserve(rows.size());
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (rows[b].first != b) throw IoError(source + ": draw indices are not 0..B-1");
      v.push_back(rows[b].second);
    }
    t.r_grid.push_back(r);
    t.draws.push_back(std::move(v));
  }
  if (t.r_grid.empty()) throw IoError(source + ": table has no draws");
  return t;
}

void save_table(const std::string& path, const CriticalValueTable& t) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_table(out, t);
  if (!out) throw IoError("write to '" + path + "' failed");
}

CriticalValueTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_table(in, path);
}

}  // namespace angof
