#pragma once

#include <string>
#include <vector>

#include "teirp/bnp.hpp"

namespace teirp {

/// Grouping keys of an instance in the result tables.
struct InstanceMeta {
  std::string name;         // file stem
  std::string cls;          // stem up to the first '_' (the whole stem without one)
  std::string combination;  // "<suppliers>s<satellites>"
  int k2 = 0;
};

InstanceMeta instance_meta(const std::string& path, const Instance& inst);

enum class GapRange { kOptimal, kBelow5, kAtLeast5, kNoSolution };

/// Optimal below 0.05%, then below 5%, else at least 5%; no incumbent is "no solution".
GapRange gap_range(const SolveReport& r);
const char* to_string(GapRange g);

struct BenchRow {
  InstanceMeta meta;
  SolveReport report;
  bool valid = false;
  std::string error;  // set when the instance could not be read or solved
};

struct BenchTables {
  std::string instances;  // one row per instance
  std::string gaps;       // average gaps per class, combination and K2
  std::string ranges;     // instance counts per gap range
  std::string times;      // average nodes and times per gap range
};

/// CSV text of every table; `timing` false leaves time fields empty.
BenchTables bench_tables(const std::vector<BenchRow>& rows, bool timing = true);

/// Instance files of a directory, sorted by name.
std::vector<std::string> list_instances(const std::string& dir);

/// Solves every file; failures become rows with an error, never exceptions.
std::vector<BenchRow> run_benchmark(const std::vector<std::string>& files, const BnpOptions& opts);

}  // namespace teirp
