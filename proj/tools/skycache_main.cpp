// Command-line harness for the semantic skyline cache: dataset
// generation, benchmark runs in the nc/ni/index modes, index dumps, and
// the scripted insertion walkthrough.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skycache/bench.hpp"

namespace {

using namespace skycache;

std::vector<Preference> parse_prefs(const std::vector<std::string>& tokens) {
  std::vector<Preference> prefs;
  prefs.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (t == "min") {
      prefs.push_back(Preference::MIN);
    } else if (t == "max") {
      prefs.push_back(Preference::MAX);
    } else {
      throw CLI::ValidationError("--prefs", "expected 'min' or 'max', got '" +
                                                t + "'");
    }
  }
  return prefs;
}

// Column names may carry a direction suffix, e.g. "points:max".
void split_column_prefs(std::vector<std::string>& columns,
                        std::vector<Preference>& prefs) {
  prefs.clear();
  bool any = false;
  for (std::string& c : columns) {
    const auto pos = c.rfind(':');
    Preference p = Preference::MIN;
    if (pos != std::string::npos) {
      const std::string suffix = c.substr(pos + 1);
      if (suffix == "max") {
        p = Preference::MAX;
      } else if (suffix != "min") {
        throw CLI::ValidationError("--columns",
                                   "bad direction suffix in '" + c + "'");
      }
      c.erase(pos);
      any = true;
    }
    prefs.push_back(p);
  }
  if (!any) prefs.clear();  // plain names keep the all-MIN default
}

struct RunFlags {
  std::string mode = "index";
  std::size_t n = 100000;
  std::size_t d = 6;
  std::uint64_t seed = 1;
  std::uint64_t workload_seed = 0;  // 0 means seed + 1
  double cache_frac = 0.05;
  std::size_t queries = 100;
  double repeat_prob = 0.3;
  std::size_t min_attrs = 2;
  std::size_t max_attrs = 0;  // 0 means d
  std::string csv_path;
  std::vector<std::string> columns;
  std::vector<std::string> prefs;
  std::string workload_file;
  std::string out;
  bool verify = false;
};

void add_run_flags(CLI::App& cmd, RunFlags& f, bool with_mode) {
  if (with_mode) {
    cmd.add_option("--mode", f.mode, "processing mode: nc, ni or index")
        ->check(CLI::IsMember({"nc", "ni", "index"}));
  }
  cmd.add_option("--n", f.n, "synthetic dataset cardinality");
  cmd.add_option("--d", f.d, "synthetic dataset dimensionality");
  cmd.add_option("--seed", f.seed, "dataset RNG seed");
  cmd.add_option("--workload-seed", f.workload_seed,
                 "workload RNG seed (default: seed + 1)");
  cmd.add_option("--cache-frac", f.cache_frac,
                 "cache budget as a fraction of N");
  cmd.add_option("--queries", f.queries, "number of workload queries");
  cmd.add_option("--repeat-prob", f.repeat_prob,
                 "probability a query repeats an earlier one");
  cmd.add_option("--min-attrs", f.min_attrs, "minimum query size");
  cmd.add_option("--max-attrs", f.max_attrs, "maximum query size (0 = d)");
  cmd.add_option("--csv", f.csv_path, "load the dataset from this CSV file");
  cmd.add_option("--columns", f.columns,
                 "CSV columns to use, optionally name:min or name:max")
      ->delimiter(',');
  cmd.add_option("--prefs", f.prefs,
                 "per-attribute directions for synthetic data (min/max)")
      ->delimiter(',');
  cmd.add_option("--workload", f.workload_file,
                 "read queries from this file instead of generating");
  cmd.add_option("--out", f.out, "output file (default: stdout)");
  cmd.add_flag("--verify", f.verify,
               "check every answer against the all-pairs skyline");
  cmd.set_config("--config", "", "key=value file; flags override it");
}

RunConfig to_config(RunFlags f) {
  RunConfig cfg;
  cfg.mode = *parse_mode(f.mode);
  cfg.cache_fraction = f.cache_frac;
  cfg.verify = f.verify;
  cfg.out_path = f.out;
  if (!f.csv_path.empty()) {
    if (f.columns.empty())
      throw CLI::ValidationError("--csv", "requires --columns");
    std::vector<Preference> col_prefs;
    split_column_prefs(f.columns, col_prefs);
    cfg.csv = CsvSource{f.csv_path, f.columns};
    cfg.prefs = std::move(col_prefs);
  } else {
    cfg.gen = GenSpec{f.n, f.d, f.seed};
    cfg.prefs = parse_prefs(f.prefs);
  }
  if (!f.workload_file.empty()) {
    cfg.workload_file = f.workload_file;
  } else {
    WorkloadSpec w;
    w.count = f.queries;
    w.min_attrs = f.min_attrs;
    w.max_attrs = f.max_attrs;
    w.repeat_prob = f.repeat_prob;
    w.rng_seed = f.workload_seed != 0 ? f.workload_seed : f.seed + 1;
    cfg.workload = w;
  }
  return cfg;
}

int cmd_generate(std::size_t n, std::size_t d, std::uint64_t seed,
                 const std::string& out) {
  const Relation rel = generate(GenSpec{n, d, seed});
  save_csv(rel, out);
  std::fprintf(stderr, "wrote %zu rows x %zu cols to %s (%zu duplicates dropped)\n",
               rel.size(), rel.dim(), out.c_str(), rel.dropped_duplicates());
  return 0;
}

int cmd_run(const RunFlags& flags) {
  const RunConfig cfg = to_config(flags);
  const RunSummary summary = run_benchmark(cfg);
  if (cfg.out_path.empty()) std::cout << to_csv(summary.rows);
  return 0;
}

int cmd_dump_index(const RunFlags& flags) {
  RunConfig cfg = to_config(flags);
  cfg.mode = Mode::INDEX;
  const Relation rel = build_relation(cfg);
  const std::vector<Query> queries = build_queries(cfg, rel.dim());
  SemanticCache cache(rel, Mode::INDEX,
                      budget_tuples(cfg.cache_fraction, rel.size()));
  run_queries(cache, rel, queries, cfg.verify);
  const std::string text = cache.index().dump();
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic caching benchmark for skyline queries"};
  app.require_subcommand(1);

  std::size_t gen_n = 100000;
  std::size_t gen_d = 6;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "write a synthetic dataset CSV");
  generate_cmd->add_option("--n", gen_n, "rows");
  generate_cmd->add_option("--d", gen_d, "columns");
  generate_cmd->add_option("--seed", gen_seed, "RNG seed");
  generate_cmd->add_option("--out", gen_out, "output CSV path")->required();

  RunFlags run_flags;
  CLI::App* run_cmd =
      app.add_subcommand("run", "run a workload and emit per-query metrics");
  add_run_flags(*run_cmd, run_flags, /*with_mode=*/true);

  RunFlags dump_flags;
  CLI::App* dump_cmd = app.add_subcommand(
      "dump-index", "run a workload in index mode and print the DAG");
  add_run_flags(*dump_cmd, dump_flags, /*with_mode=*/false);

  std::size_t fig2_n = 512;
  std::uint64_t fig2_seed = 7;
  CLI::App* fig2_cmd = app.add_subcommand(
      "replay-fig2", "scripted nine-query insertion walkthrough");
  fig2_cmd->add_option("--n", fig2_n, "rows of the synthetic relation");
  fig2_cmd->add_option("--seed", fig2_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate_cmd->parsed())
      return cmd_generate(gen_n, gen_d, gen_seed, gen_out);
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (dump_cmd->parsed()) return cmd_dump_index(dump_flags);
    if (fig2_cmd->parsed()) {
      std::cout << skycache::replay_fig2(fig2_n, fig2_seed);
      return 0;
    }
  } catch (const skycache::VerificationError& e) {
    std::fprintf(stderr, "verification failed: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
