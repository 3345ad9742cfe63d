#include "teirp/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <tuple>

#include <fmt/format.h>

#include "teirp/log.hpp"

namespace teirp {

namespace fs = std::filesystem;

InstanceMeta instance_meta(const std::string& path, const Instance& inst) {
  InstanceMeta m;
  m.name = fs::path(path).stem().string();
  m.cls = m.name.substr(0, m.name.find('_'));
  m.combination = fmt::format("{}s{}", inst.num_suppliers(), inst.num_satellites());
  m.k2 = inst.second_fleet().vehicles;
  return m;
}

GapRange gap_range(const SolveReport& r) {
  if (!r.objective) return GapRange::kNoSolution;
  if (r.status == "optimal") return GapRange::kOptimal;
  if (!r.gap_f) return GapRange::kAtLeast5;
  if (*r.gap_f < 5e-4) return GapRange::kOptimal;
  if (*r.gap_f < 5e-2) return GapRange::kBelow5;
  return GapRange::kAtLeast5;
}

const char* to_string(GapRange g) {
  switch (g) {
    case GapRange::kOptimal: return "Optimal Solution";
    case GapRange::kBelow5: return "GapF<5%";
    case GapRange::kAtLeast5: return "GapF>=5%";
    case GapRange::kNoSolution: return "No Solution";
  }
  return "?";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(std::optional<double> v, int digits) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

std::optional<double> percent(std::optional<double> v) {
  if (!v) return std::nullopt;
  return *v * 100.0;
}

struct Mean {
  double sum = 0.0;
  int n = 0;
  void add(std::optional<double> v) {
    if (!v) return;
    sum += *v;
    ++n;
  }
  std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

// groups in first-seen order of class, then combination; K2 ascending
using Key = std::tuple<std::string, std::string>;

std::vector<Key> group_order(const std::vector<BenchRow>& rows) {
  std::vector<Key> keys;
  for (const auto& r : rows) {
    Key k{r.meta.cls, r.meta.combination};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  std::stable_sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

BenchTables bench_tables(const std::vector<BenchRow>& rows, bool timing) {
  BenchTables t;
  t.instances =
      "Instance,Instance Class,Combination,K2,Status,Objective,LB,UB,Gap0,Gap20,GapF,#Nodes,Time_root,Time,"
      "Gap Range,Valid,Error\n";
  for (const auto& r : rows) {
    const auto& rep = r.report;
    t.instances += fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.meta.name), csv_field(r.meta.cls),
        r.meta.combination, r.meta.k2, rep.status, fixed(rep.objective, 6), fixed(rep.lb, 6), fixed(rep.ub, 6),
        fixed(percent(rep.gap0), 4), fixed(percent(rep.gap20), 4), fixed(percent(rep.gap_f), 4), rep.nodes,
        timing ? fixed(rep.time_root, 2) : "", timing ? fixed(rep.time_total, 2) : "", to_string(gap_range(rep)),
        r.valid ? "yes" : "no", csv_field(r.error));
  }

  const auto keys = group_order(rows);
  std::vector<int> k2s;
  for (const auto& r : rows) k2s.push_back(r.meta.k2);
  std::sort(k2s.begin(), k2s.end());
  k2s.erase(std::unique(k2s.begin(), k2s.end()), k2s.end());

  // gaps of solved instances only, in percent
  t.gaps = "Instance Class,Combination,K2,Gap0,Gap20,GapF\n";
  auto gap_row = [&](const std::string& cls, const std::string& comb, const std::string& k2, auto keep) {
    Mean g0, g20, gf;
    for (const auto& r : rows)
      if (r.error.empty() && keep(r)) {
        g0.add(percent(r.report.gap0));
        g20.add(percent(r.report.gap20));
        gf.add(percent(r.report.gap_f));
      }
    t.gaps += fmt::format("{},{},{},{},{},{}\n", csv_field(cls), comb, k2, fixed(g0.value(), 2),
                          fixed(g20.value(), 2), fixed(gf.value(), 2));
  };
  for (const auto& [cls, comb] : keys) {
    for (int k2 : k2s) {
      auto keep = [&](const BenchRow& r) { return r.meta.cls == cls && r.meta.combination == comb && r.meta.k2 == k2; };
      if (std::any_of(rows.begin(), rows.end(), keep)) gap_row(cls, comb, std::to_string(k2), keep);
    }
    gap_row(cls, comb, "Average",
            [&](const BenchRow& r) { return r.meta.cls == cls && r.meta.combination == comb; });
  }
  gap_row("Average", "", "Average", [](const BenchRow&) { return true; });

  t.ranges = "Instance Class,Combination,Optimal Solution,GapF<5%,GapF>=5%,No Solution\n";
  auto range_row = [&](const std::string& cls, const std::string& comb, auto keep) {
    int n[4] = {0, 0, 0, 0};
    for (const auto& r : rows)
      if (keep(r)) ++n[static_cast<int>(gap_range(r.report))];
    t.ranges += fmt::format("{},{},{},{},{},{}\n", csv_field(cls), comb, n[0], n[1], n[2], n[3]);
  };
  for (const auto& [cls, comb] : keys)
    range_row(cls, comb, [&](const BenchRow& r) { return r.meta.cls == cls && r.meta.combination == comb; });
  range_row("Total", "", [](const BenchRow&) { return true; });

  t.times = "Instance Class,Combination,Gap Range,#Nodes,Time_root,Time\n";
  auto time_row = [&](const std::string& cls, const std::string& comb, GapRange g, auto keep) {
    Mean nodes, root, total;
    for (const auto& r : rows)
      if (keep(r) && gap_range(r.report) == g) {
        nodes.add(static_cast<double>(r.report.nodes));
        root.add(r.report.time_root);
        total.add(r.report.time_total);
      }
    if (nodes.n == 0) return;
    t.times += fmt::format("{},{},{},{},{},{}\n", csv_field(cls), comb, to_string(g), fixed(nodes.value(), 2),
                           timing ? fixed(root.value(), 2) : "", timing ? fixed(total.value(), 2) : "");
  };
  const GapRange solved[] = {GapRange::kOptimal, GapRange::kBelow5, GapRange::kAtLeast5};
  for (const auto& [cls, comb] : keys)
    for (GapRange g : solved)
      time_row(cls, comb, g, [&](const BenchRow& r) { return r.meta.cls == cls && r.meta.combination == comb; });
  for (GapRange g : solved) time_row("Total", "", g, [](const BenchRow&) { return true; });
  return t;
}

std::vector<std::string> list_instances(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<BenchRow> run_benchmark(const std::vector<std::string>& files, const BnpOptions& opts) {
  std::vector<BenchRow> rows;
  for (const auto& f : files) {
    BenchRow row;
    row.meta.name = fs::path(f).stem().string();
    row.meta.cls = row.meta.name.substr(0, row.meta.name.find('_'));
    try {
      const Instance inst = read_instance_file(f);
      row.meta = instance_meta(f, inst);
      row.report = branch_and_price(inst, opts);
      row.valid = !row.report.solution || validate_plan(inst, *row.report.solution).ok();
      if (!row.valid) logger()->error("{}: solver plan failed validation", row.meta.name);
    } catch (const std::exception& e) {
      row.report.status = "error";
      row.error = e.what();
      logger()->error("{}: {}", row.meta.name, e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace teirp
