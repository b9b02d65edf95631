// Copyright 2026 The rratio Authors
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

#include "rratio/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rratio::io {
namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) noexcept {
  s = trim(s);
  if (s.empty()) {
    return std::nullopt;
  }
  if (s.front() == '+') {
    s.remove_prefix(1);
  }
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(0, "cannot open " + path.string());
  }
  return in;
}

// ---------------------------------------------------------------------------
// key = value files

struct KeyValues {
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> entries;

  [[nodiscard]] bool has(std::string_view key) const { return entries.find(key) != entries.end(); }
};

KeyValues read_key_values(std::istream& in, const std::set<std::string, std::less<>>& allowed) {
  KeyValues kv;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(number, "expected 'key = value'");
    }
    const std::string key{trim(view.substr(0, eq))};
    const std::string value{trim(view.substr(eq + 1))};
    if (key.empty() || value.empty()) {
      throw ParseError(number, "expected 'key = value'");
    }
    if (allowed.find(key) == allowed.end()) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (!kv.entries.emplace(key, std::make_pair(value, number)).second) {
      throw ConfigError("line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
  }
  return kv;
}

template <typename T>
T value_as(const KeyValues& kv, std::string_view key) {
  const auto& [text, line] = kv.entries.find(key)->second;
  const auto v = parse_number<T>(text);
  if (!v) {
    throw ConfigError("line " + std::to_string(line) + ": bad value for '" + std::string{key} + "'");
  }
  return *v;
}

template <typename T>
std::vector<T> list_as(const KeyValues& kv, std::string_view key) {
  const auto& [text, line] = kv.entries.find(key)->second;
  std::vector<T> out;
  for (const auto item : split(text, ',')) {
    const auto v = parse_number<T>(item);
    if (!v) {
      throw ConfigError("line " + std::to_string(line) + ": bad list entry for '" + std::string{key} + "'");
    }
    out.push_back(*v);
  }
  return out;
}

template <typename T>
void assign_if(const KeyValues& kv, std::string_view key, T& target) {
  if (kv.has(key)) {
    target = value_as<T>(kv, key);
  }
}

const std::string& text_of(const KeyValues& kv, std::string_view key) { return kv.entries.find(key)->second.first; }

FormulaVariant formulas_of(const KeyValues& kv, FormulaVariant fallback) {
  if (!kv.has("formulas")) {
    return fallback;
  }
  const std::string& v = text_of(kv, "formulas");
  if (v == "textbook") {
    return FormulaVariant::kTextbook;
  }
  if (v == "as-printed") {
    return FormulaVariant::kAsPrinted;
  }
  throw ConfigError("formulas must be 'textbook' or 'as-printed'");
}

FiellerGamma fieller_of(const KeyValues& kv, FiellerGamma fallback) {
  if (!kv.has("fieller_gamma")) {
    return fallback;
  }
  const std::string& v = text_of(kv, "fieller_gamma");
  if (v == "matched") {
    return FiellerGamma::kKindMatched;
  }
  if (v == "pooled") {
    return FiellerGamma::kPooled;
  }
  throw ConfigError("fieller_gamma must be 'matched' or 'pooled'");
}

MoverRestrictions mover_of(const KeyValues& kv, MoverRestrictions fallback) {
  if (!kv.has("mover_restrictions")) {
    return fallback;
  }
  const std::string& v = text_of(kv, "mover_restrictions");
  if (v == "required") {
    return MoverRestrictions::kRequired;
  }
  if (v == "as-printed") {
    return MoverRestrictions::kAsPrinted;
  }
  throw ConfigError("mover_restrictions must be 'required' or 'as-printed'");
}

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw ConfigError(what);
  }
}

std::string status_of(const IntervalResult& r) {
  return r.exists() ? std::string{"ok"} : std::string{to_string(r.failure)};
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_exact(*v) : std::string{"NA"}; }

nlohmann::json json_number(double v) {
  if (std::isnan(v)) {
    return nullptr;
  }
  return v;
}

nlohmann::json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : nlohmann::json(nullptr); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) {
    s.insert(0, width - s.size(), ' ');
  }
  return s;
}

std::string short_optional(const std::optional<double>& v) { return v ? format_short(*v) : std::string{"-"}; }

}  // namespace

// ---------------------------------------------------------------------------
// study CSV

TwoGroupStudy read_study_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  std::vector<ClusterRecord> treatment;
  std::vector<ClusterRecord> control;
  std::set<std::pair<std::string, std::string>> seen;

  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty()) {
      continue;
    }
    const auto fields = split(view, ',');
    if (!have_header) {
      if (fields.size() != 4 || fields[0] != "group" || fields[1] != "cluster" || fields[2] != "size" ||
          fields[3] != "successes") {
        throw ParseError(number, "expected header 'group,cluster,size,successes'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(number, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const std::string group{fields[0]};
    if (group != "treatment" && group != "control") {
      throw ParseError(number, "group must be 'treatment' or 'control'");
    }
    if (fields[1].empty()) {
      throw ParseError(number, "empty cluster identifier");
    }
    const auto size = parse_number<int>(fields[2]);
    const auto successes = parse_number<int>(fields[3]);
    if (!size || !successes) {
      throw ParseError(number, "size and successes must be integers");
    }
    if (*size < 1) {
      throw ValidationError("line " + std::to_string(number) + ": size must be >= 1");
    }
    if (*successes < 0 || *successes > *size) {
      throw ValidationError("line " + std::to_string(number) + ": successes must lie in [0, size]");
    }
    if (!seen.emplace(group, std::string{fields[1]}).second) {
      throw ValidationError("line " + std::to_string(number) + ": duplicate cluster '" + std::string{fields[1]} +
                            "' in group " + group);
    }
    (group == "treatment" ? treatment : control).push_back({*size, *successes});
  }
  if (!have_header) {
    throw ParseError(number == 0 ? 1 : number, "empty study file");
  }
  if (treatment.size() < 2 || control.size() < 2) {
    throw ValidationError("each group needs at least 2 clusters (treatment " + std::to_string(treatment.size()) +
                          ", control " + std::to_string(control.size()) + ")");
  }
  return TwoGroupStudy{GroupData{treatment}, GroupData{control}};
}

TwoGroupStudy read_study_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_study_csv(in);
}

void write_study_csv(std::ostream& out, const TwoGroupStudy& study) {
  out << "group,cluster,size,successes\n";
  for (const auto& [name, group] : {std::pair<const char*, const GroupData*>{"treatment", &study.treatment},
                                    std::pair<const char*, const GroupData*>{"control", &study.control}}) {
    for (std::size_t j = 0; j < group->cluster_count(); ++j) {
      const ClusterRecord c = group->cluster(j);
      out << name << ',' << (j + 1) << ',' << c.size << ',' << c.successes << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// configs

RunOptions GridConfig::run_options() const {
  RunOptions o;
  o.replications = replications;
  o.seed = seed;
  o.alpha = alpha;
  o.stall_cap = stall_cap;
  o.per_method_accounting = per_method_accounting;
  o.formulas = formulas;
  o.fieller_gamma = fieller_gamma;
  o.mover_restrictions = mover_restrictions;
  return o;
}

GridConfig parse_grid_config(std::istream& in) {
  static const std::set<std::string, std::less<>> allowed{
      "clusters", "cluster_sizes", "gamma1", "eta", "theta_pairs", "alpha", "replications",
      "seed", "stall_cap", "accounting", "formulas", "fieller_gamma", "mover_restrictions"};
  const KeyValues kv = read_key_values(in, allowed);
  GridConfig c;
  if (kv.has("clusters")) {
    c.clusters = list_as<int>(kv, "clusters");
  }
  if (kv.has("cluster_sizes")) {
    c.cluster_sizes = list_as<int>(kv, "cluster_sizes");
  }
  if (kv.has("eta")) {
    c.etas = list_as<double>(kv, "eta");
  }
  if (kv.has("theta_pairs")) {
    c.theta_pairs.clear();
    for (const auto item : split(text_of(kv, "theta_pairs"), ',')) {
      const auto parts = split(item, ':');
      require(parts.size() == 2, "theta_pairs entries must look like '0.1:0.25'");
      const auto t1 = parse_number<double>(parts[0]);
      const auto t2 = parse_number<double>(parts[1]);
      require(t1.has_value() && t2.has_value(), "theta_pairs entries must look like '0.1:0.25'");
      c.theta_pairs.emplace_back(t1.value(), t2.value());
    }
  }
  assign_if(kv, "gamma1", c.gamma1);
  assign_if(kv, "alpha", c.alpha);
  assign_if(kv, "replications", c.replications);
  assign_if(kv, "seed", c.seed);
  assign_if(kv, "stall_cap", c.stall_cap);
  if (kv.has("accounting")) {
    const std::string& v = text_of(kv, "accounting");
    require(v == "all" || v == "per-method", "accounting must be 'all' or 'per-method'");
    c.per_method_accounting = v == "per-method";
  }
  c.formulas = formulas_of(kv, c.formulas);
  c.fieller_gamma = fieller_of(kv, c.fieller_gamma);
  c.mover_restrictions = mover_of(kv, c.mover_restrictions);

  require(!c.clusters.empty() && !c.cluster_sizes.empty() && !c.etas.empty() && !c.theta_pairs.empty(),
          "grid axes must be non-empty");
  require(c.replications >= 1, "replications must be >= 1");
  require(c.stall_cap > 0.0, "stall_cap must be positive");
  require(c.alpha > 0.0 && c.alpha < 1.0, "alpha must lie in (0, 1)");
  try {
    for (const ScenarioSpec& spec : expand_grid(c)) {
      spec.validate();
    }
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

GridConfig read_grid_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_grid_config(in);
}

std::vector<ScenarioSpec> expand_grid(const GridConfig& config) {
  std::vector<ScenarioSpec> specs;
  specs.reserve(config.cell_count());
  for (const int clusters : config.clusters) {
    for (const int size : config.cluster_sizes) {
      for (const double eta : config.etas) {
        for (const auto& [t1, t2] : config.theta_pairs) {
          ScenarioSpec s;
          s.clusters_per_group = clusters;
          s.cluster_size = size;
          s.gamma1 = config.gamma1;
          s.eta = eta;
          s.theta1 = t1;
          s.theta2 = t2;
          s.alpha = config.alpha;
          s.replications = config.replications;
          s.seed = derive_seed(config.seed,
                               {static_cast<std::uint64_t>(clusters), static_cast<std::uint64_t>(size),
                                std::bit_cast<std::uint64_t>(config.gamma1), std::bit_cast<std::uint64_t>(eta),
                                std::bit_cast<std::uint64_t>(t1), std::bit_cast<std::uint64_t>(t2)});
          s.validate();
          specs.push_back(s);
        }
      }
    }
  }
  return specs;
}

RunOptions ParamsConfig::run_options() const {
  RunOptions o;
  o.replications = replications;
  o.seed = seed;
  o.alpha = params.alpha;
  o.stall_cap = stall_cap;
  o.formulas = formulas;
  o.fieller_gamma = fieller_gamma;
  o.mover_restrictions = mover_restrictions;
  return o;
}

ParamsConfig parse_params(std::istream& in) {
  static const std::set<std::string, std::less<>> allowed{
      "gamma_treatment", "gamma_control", "eta", "icc_treatment", "icc_control",
      "clusters_treatment", "clusters_control", "mean_size_treatment", "mean_size_control",
      "alpha", "replications", "seed", "stall_cap", "formulas", "fieller_gamma", "mover_restrictions"};
  const KeyValues kv = read_key_values(in, allowed);
  for (const char* key : {"gamma_treatment", "icc_treatment", "icc_control", "clusters_treatment",
                          "clusters_control", "mean_size_treatment", "mean_size_control"}) {
    require(kv.has(key), std::string{"missing key '"} + key + "'");
  }
  require(kv.has("eta") != kv.has("gamma_control"), "give exactly one of 'eta' and 'gamma_control'");

  ParamsConfig c;
  AppropriatenessParams& p = c.params;
  p.gamma_treatment = value_as<double>(kv, "gamma_treatment");
  p.eta = kv.has("eta") ? value_as<double>(kv, "eta") : p.gamma_treatment / value_as<double>(kv, "gamma_control");
  p.icc_treatment = value_as<double>(kv, "icc_treatment");
  p.icc_control = value_as<double>(kv, "icc_control");
  p.clusters_treatment = value_as<int>(kv, "clusters_treatment");
  p.clusters_control = value_as<int>(kv, "clusters_control");
  p.mean_size_treatment = value_as<double>(kv, "mean_size_treatment");
  p.mean_size_control = value_as<double>(kv, "mean_size_control");
  assign_if(kv, "alpha", p.alpha);
  assign_if(kv, "replications", c.replications);
  assign_if(kv, "seed", c.seed);
  assign_if(kv, "stall_cap", c.stall_cap);
  c.formulas = formulas_of(kv, c.formulas);
  c.fieller_gamma = fieller_of(kv, c.fieller_gamma);
  c.mover_restrictions = mover_of(kv, c.mover_restrictions);
  require(c.replications >= 1, "replications must be >= 1");
  require(p.alpha > 0.0 && p.alpha < 1.0, "alpha must lie in (0, 1)");
  try {
    (void)p.design();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ParamsConfig read_params(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_params(in);
}

// ---------------------------------------------------------------------------
// rendering

std::optional<Format> parse_format(std::string_view name) noexcept {
  if (name == "table") {
    return Format::kTable;
  }
  if (name == "csv") {
    return Format::kCsv;
  }
  if (name == "json") {
    return Format::kJson;
  }
  return std::nullopt;
}

std::string format_exact(double value) {
  if (std::isnan(value)) {
    return "NA";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  if (std::isnan(value)) {
    return "NA";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%#.6g", value);
  return buf;
}

void write_intervals(std::ostream& out, const IntervalSet& results, Format format) {
  switch (format) {
    case Format::kCsv:
      out << "method,lower,upper,width,estimate,status,flags\n";
      for (const IntervalResult& r : results) {
        out << to_string(r.method) << ',';
        if (r.exists()) {
          out << format_exact(r.limits->lower) << ',' << format_exact(r.limits->upper) << ','
              << format_exact(r.limits->width());
        } else {
          out << "NA,NA,NA";
        }
        out << ',' << format_exact(r.estimate) << ',' << status_of(r) << ',' << to_string(r.flags) << '\n';
      }
      return;
    case Format::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const IntervalResult& r : results) {
        nlohmann::json row;
        row["method"] = std::string{to_string(r.method)};
        row["lower"] = r.exists() ? json_number(r.limits->lower) : nullptr;
        row["upper"] = r.exists() ? json_number(r.limits->upper) : nullptr;
        row["width"] = r.exists() ? json_number(r.limits->width()) : nullptr;
        row["estimate"] = json_number(r.estimate);
        row["status"] = status_of(r);
        row["flags"] = to_string(r.flags);
        rows.push_back(std::move(row));
      }
      out << rows.dump(2) << '\n';
      return;
    }
    case Format::kTable:
      out << "method       lower       upper       width    estimate  status\n";
      for (const IntervalResult& r : results) {
        out << std::left << std::setw(6) << to_string(r.method) << std::right;
        if (r.exists()) {
          out << pad(format_short(r.limits->lower), 12) << pad(format_short(r.limits->upper), 12)
              << pad(format_short(r.limits->width()), 12);
        } else {
          out << pad("-", 12) << pad("-", 12) << pad("-", 12);
        }
        out << pad(format_short(r.estimate), 12) << "  ";
        out << (r.exists() ? std::string{"ok"} : "NONEXISTENT(" + status_of(r) + ")");
        if (!r.flags.empty()) {
          out << ' ' << to_string(r.flags);
        }
        out << '\n';
      }
      return;
  }
}

std::vector<IntervalRow> read_intervals_csv(std::istream& in) {
  std::vector<IntervalRow> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 || trim(line).empty()) {
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) {
      throw ParseError(number, "expected 7 fields");
    }
    IntervalRow row;
    row.method = std::string{f[0]};
    if (f[1] != "NA") {
      row.lower = parse_number<double>(f[1]);
      row.upper = parse_number<double>(f[2]);
    }
    row.status = std::string{f[5]};
    row.flags = std::string{f[6]};
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_metrics(std::ostream& out, const GridResult& grid, Format format) {
  if (format == Format::kJson) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
      const ScenarioSpec& s = grid.specs[i];
      const ScenarioMetrics& cell = grid.cells[i];
      for (std::size_t k = 0; k < kMethodCount; ++k) {
        const MethodMetrics& m = cell.methods[k];
        rows.push_back({{"cell", i},
                        {"clusters", s.clusters_per_group},
                        {"cluster_size", s.cluster_size},
                        {"gamma1", s.gamma1},
                        {"eta", s.eta},
                        {"theta1", s.theta1},
                        {"theta2", s.theta2},
                        {"method", std::string{to_string(kAllMethods[k])}},
                        {"cp", m.cp},
                        {"ew", m.ew},
                        {"disncp", m.disncp},
                        {"mesncp", m.mesncp},
                        {"dnptnp", json_optional(m.dnptnp)},
                        {"nonexistent", m.nonexistent},
                        {"good", cell.good_replications},
                        {"rejected_samples", cell.rejected_samples},
                        {"stalled", cell.stalled}});
      }
    }
    out << rows.dump(2) << '\n';
    return;
  }
  const bool csv = format == Format::kCsv;
  const char sep = csv ? ',' : '\t';
  out << "cell" << sep << "clusters" << sep << "cluster_size" << sep << "gamma1" << sep << "eta" << sep << "theta1"
      << sep << "theta2" << sep << "method" << sep << "cp" << sep << "ew" << sep << "disncp" << sep << "mesncp" << sep
      << "dnptnp" << sep << "nonexistent" << sep << "good" << sep << "rejected_samples" << sep << "stalled\n";
  const auto num = [csv](double v) { return csv ? format_exact(v) : format_short(v); };
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const ScenarioSpec& s = grid.specs[i];
    const ScenarioMetrics& cell = grid.cells[i];
    for (std::size_t k = 0; k < kMethodCount; ++k) {
      const MethodMetrics& m = cell.methods[k];
      out << i << sep << s.clusters_per_group << sep << s.cluster_size << sep << format_exact(s.gamma1) << sep
          << format_exact(s.eta) << sep << format_exact(s.theta1) << sep << format_exact(s.theta2) << sep
          << to_string(kAllMethods[k]) << sep << num(m.cp) << sep << num(m.ew) << sep << num(m.disncp) << sep
          << num(m.mesncp) << sep << (m.dnptnp ? num(*m.dnptnp) : std::string{"NA"}) << sep
          << m.nonexistent << sep << cell.good_replications << sep << cell.rejected_samples << sep << (cell.stalled ? "true" : "false")
          << '\n';
    }
  }
}

void write_medians(std::ostream& out, const std::array<MethodMedians, kMethodCount>& medians, Format format) {
  switch (format) {
    case Format::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t k = 0; k < kMethodCount; ++k) {
        rows.push_back({{"method", std::string{to_string(kAllMethods[k])}},
                        {"median_cp", json_optional(medians[k].cp)},
                        {"median_ew", json_optional(medians[k].ew)},
                        {"median_dnptnp", json_optional(medians[k].dnptnp)}});
      }
      out << rows.dump(2) << '\n';
      return;
    }
    case Format::kCsv:
      out << "method,median_cp,median_ew,median_dnptnp\n";
      for (std::size_t k = 0; k < kMethodCount; ++k) {
        out << to_string(kAllMethods[k]) << ',' << csv_optional(medians[k].cp) << ','
            << csv_optional(medians[k].ew) << ',' << csv_optional(medians[k].dnptnp) << '\n';
      }
      return;
    case Format::kTable:
      out << "method   median CP   median EW   median DNPTNP\n";
      for (std::size_t k = 0; k < kMethodCount; ++k) {
        out << std::left << std::setw(6) << to_string(kAllMethods[k]) << std::right
            << pad(short_optional(medians[k].cp), 12) << pad(short_optional(medians[k].ew), 12)
            << pad(short_optional(medians[k].dnptnp), 16) << '\n';
      }
      return;
  }
}

void write_appropriateness(std::ostream& out, const AppropriatenessReport& report, Format format) {
  switch (format) {
    case Format::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const Qualification& q : report.methods) {
        rows.push_back({{"method", std::string{to_string(q.method)}},
                        {"cp", q.cp},
                        {"ew", q.ew},
                        {"dnptnp", json_optional(q.dnptnp)},
                        {"cp_flag", q.cp_ok ? "PASS" : "FLAG"},
                        {"dnptnp_flag", q.dnptnp_ok ? "PASS" : "FLAG"}});
      }
      nlohmann::json doc{{"methods", rows},
                         {"good", report.metrics.good_replications},
                         {"rejected_samples", report.metrics.rejected_samples},
                         {"stalled", report.metrics.stalled}};
      out << doc.dump(2) << '\n';
      return;
    }
    case Format::kCsv:
      out << "method,cp,ew,dnptnp,cp_flag,dnptnp_flag\n";
      for (const Qualification& q : report.methods) {
        out << to_string(q.method) << ',' << format_exact(q.cp) << ',' << format_exact(q.ew) << ','
            << csv_optional(q.dnptnp) << ',' << (q.cp_ok ? "PASS" : "FLAG") << ','
            << (q.dnptnp_ok ? "PASS" : "FLAG") << '\n';
      }
      return;
    case Format::kTable:
      out << "method          CP          EW      DNPTNP  CP    DNPTNP\n";
      for (const Qualification& q : report.methods) {
        out << std::left << std::setw(6) << to_string(q.method) << std::right << pad(format_short(q.cp), 12)
            << pad(format_short(q.ew), 12) << pad(short_optional(q.dnptnp), 12) << "  "
            << (q.cp_ok ? "PASS" : "FLAG") << "  " << (q.dnptnp_ok ? "PASS" : "FLAG") << '\n';
      }
      out << "good replications: " << report.metrics.good_replications
          << ", rejected samples: " << report.metrics.rejected_samples
          << (report.metrics.stalled ? " (stalled)" : "") << '\n';
      return;
  }
}

}  // namespace rratio::io
