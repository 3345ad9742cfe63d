#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "teirp/bench.hpp"
#include "teirp/generator.hpp"
#include "teirp/log.hpp"
#include "teirp/oracle.hpp"

using namespace teirp;

namespace {

struct SolveFlags {
  double time_limit = 3600.0;
  int kappa = 5;
  double half_point = 0.5;
  std::string search = "best-first";
  int threads = 1;
  int max_columns = 50;
  long node_limit = 1000000;
  bool no_timing = false;
  bool round_distances = false;

  void attach(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "seconds")->check(CLI::PositiveNumber);
    app->add_option("--kappa", kappa, "ng neighbourhood size")->check(CLI::PositiveNumber);
    app->add_option("--half-point", half_point, "share of Q2 for forward labels")->check(CLI::Range(0.0, 1.0));
    app->add_option("--search", search)->check(CLI::IsMember({"best-first", "local-depth-first"}));
    app->add_option("--threads", threads, "pricing threads")->check(CLI::PositiveNumber);
    app->add_option("--max-columns", max_columns, "columns per pricing call")->check(CLI::PositiveNumber);
    app->add_option("--node-limit", node_limit)->check(CLI::PositiveNumber);
    app->add_flag("--no-timing", no_timing, "write null times so reports compare byte for byte");
    app->add_flag("--round-distances", round_distances, "round travel costs to integers");
  }

  BnpOptions options() const {
    BnpOptions o;
    o.time_limit = time_limit;
    o.node_limit = node_limit;
    o.search = search == "best-first" ? SearchMode::kBestFirst : SearchMode::kLocalDepthFirst;
    o.colgen.threads = threads;
    o.colgen.pricing.ng_size = kappa;
    o.colgen.pricing.half_point = half_point;
    o.colgen.pricing.max_columns = max_columns;
    return o;
  }
};

nlohmann::json meta_json(const InstanceMeta& m) {
  return {{"name", m.name}, {"class", m.cls}, {"combination", m.combination}, {"k2", m.k2}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  out << text;
}

void emit(const nlohmann::json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_text(out, text);
}

std::string with_suffix(const std::string& csv, const std::string& suffix) {
  const auto dot = csv.rfind('.');
  if (dot == std::string::npos || csv.find('/', dot) != std::string::npos) return csv + suffix + ".csv";
  return csv.substr(0, dot) + suffix + csv.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-echelon inventory routing: branch-and-price solver and tools"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  std::string instance, out;
  auto* solve = app.add_subcommand("solve", "solve an instance by branch-and-price");
  solve->add_option("instance", instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "report file (stdout when omitted)");
  solve_flags.attach(solve);

  std::string report_path;
  auto* validate = app.add_subcommand("validate", "check a report's solution against an instance");
  validate->add_option("instance", instance)->required()->check(CLI::ExistingFile);
  validate->add_option("report", report_path)->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum of a tiny instance");
  oracle->add_option("instance", instance)->required()->check(CLI::ExistingFile);
  oracle->add_option("--out", out, "report file (stdout when omitted)");

  SolveFlags bench_flags;
  std::string dir;
  auto* bench = app.add_subcommand("bench", "solve every instance of a directory into CSV tables");
  bench->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  bench->add_option("--out", out, "per-instance CSV; aggregate tables go next to it")->required();
  bench_flags.attach(bench);

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  MicroConfig micro;
  auto* gen_micro = gen->add_subcommand("micro", "small random instance");
  gen_micro->add_option("--customers", micro.customers)->check(CLI::Range(1, 8));
  gen_micro->add_option("--horizon", micro.horizon)->check(CLI::Range(1, 4));
  gen_micro->add_option("--k2", micro.k2)->check(CLI::PositiveNumber);
  gen_micro->add_option("--satellites", micro.satellites)->check(CLI::PositiveNumber);
  gen_micro->add_option("--suppliers", micro.suppliers)->check(CLI::PositiveNumber);
  gen_micro->add_option("--seed", micro.seed);
  gen_micro->add_option("--out", out);
  GenConfig source_cfg;
  std::string source;
  auto* gen_source = gen->add_subcommand("source", "two-echelon instance from a single-depot benchmark file");
  gen_source->add_option("file", source)->required()->check(CLI::ExistingFile);
  gen_source->add_option("--suppliers", source_cfg.suppliers)->check(CLI::PositiveNumber);
  gen_source->add_option("--satellites", source_cfg.satellites)->check(CLI::PositiveNumber);
  gen_source->add_option("--k2", source_cfg.k2)->check(CLI::PositiveNumber);
  gen_source->add_option("--seed", source_cfg.seed);
  gen_source->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const Instance inst = read_instance_file(instance, solve_flags.round_distances);
      const auto report = branch_and_price(inst, solve_flags.options());
      auto j = report_to_json(report, !solve_flags.no_timing);
      j["instance"] = meta_json(instance_meta(instance, inst));
      emit(j, out);
      std::cerr << fmt::format("{} objective {} nodes {}\n", report.status,
                               report.objective ? fmt::format("{:.6f}", *report.objective) : "-", report.nodes);
      return 0;
    }
    if (validate->parsed()) {
      const Instance inst = read_instance_file(instance);
      std::ifstream in(report_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        std::cout << "schema: " << e.what() << "\n";
        return 2;
      }
      const auto v = validate_report(inst, j);
      for (const auto& e : v.schema_errors) std::cout << "schema: " << e << "\n";
      for (const auto& e : v.violations) std::cout << "violation: " << e << "\n";
      if (v.ok()) std::cout << "pass\n";
      return v.ok() ? 0 : (v.schema_errors.empty() ? 1 : 2);
    }
    if (oracle->parsed()) {
      const Instance inst = read_instance_file(instance);
      const auto res = oracle_solve(inst);
      nlohmann::json j;
      j["status"] = res ? "optimal" : "infeasible";
      j["objective"] = res ? nlohmann::json(res->objective) : nlohmann::json(nullptr);
      j["solution"] = res ? plan_to_json(res->plan) : nlohmann::json(nullptr);
      j["instance"] = meta_json(instance_meta(instance, inst));
      emit(j, out);
      return 0;
    }
    if (bench->parsed()) {
      const auto rows = run_benchmark(list_instances(dir), bench_flags.options());
      const auto tables = bench_tables(rows, !bench_flags.no_timing);
      write_text(out, tables.instances);
      write_text(with_suffix(out, "_gaps"), tables.gaps);
      write_text(with_suffix(out, "_ranges"), tables.ranges);
      write_text(with_suffix(out, "_times"), tables.times);
      return 0;
    }
    if (gen_micro->parsed()) {
      const auto text = instance_to_string(generate_micro(micro));
      if (out.empty()) std::cout << text;
      else write_text(out, text);
      return 0;
    }
    if (gen_source->parsed()) {
      const auto text = instance_to_string(transform_source(read_source_irp_file(source), source_cfg));
      if (out.empty()) std::cout << text;
      else write_text(out, text);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
