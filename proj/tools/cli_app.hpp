#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tardy/core.hpp"
#include "tardy/dp.hpp"
#include "tardy/errors.hpp"
#include "tardy/generators.hpp"
#include "tardy/json_io.hpp"
#include "tardy/milp/lp_format.hpp"
#include "tardy/oracle.hpp"
#include "tardy/prd.hpp"
#include "tardy/pwd.hpp"

namespace tardy::cli {

/// Injected standard streams so tests can drive the tool in-process.
struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline const std::vector<std::string>& algo_names() {
  static const std::vector<std::string> names = {"oracle", "dp", "milp-prd", "milp-pwd",
                                                 "milp-pwr"};
  return names;
}

/// Work counters, uniform across algorithms; fields an algorithm never
/// touches stay zero so reports line up column for column.
struct Counters {
  long nodes = 0;
  long pivots = 0;
  long structures = 0;
  long profiles = 0;
  std::size_t cells = 0;
  std::size_t integer_vars = 0;
};

struct AlgoRun {
  Int best_weight = 0;
  Schedule schedule;
  Counters counters;
};

inline LoadedInstance read_instance(const std::string& path, std::istream& in) {
  if (path == "-") return load_instance(in);
  return load_instance_file(path);
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

inline std::vector<Int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<Int> out;
  for (const std::string& item : split_list(text)) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) {
      throw input_error(flag + ": \"" + item + "\" is not an integer");
    }
    out.push_back(static_cast<Int>(value));
  }
  return out;
}

/// Runs fn(0..count-1) on up to `threads` workers. Exceptions surface in
/// item order, so the thread count never changes which error is reported.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                                              count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto loop = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Profile sweep with a worker pool: values first, tables discarded, then
/// one more solve of the winning profile (smallest index among the best
/// values, the same tie-break as the sequential loop) for its schedule.
/// Any thread count gives the same weight, schedule and counters.
inline AlgoRun solve_dp_threaded(const Instance& inst, int threads) {
  DpOptions opts;
  std::vector<BoundaryProfile> profiles = enumerate_profiles(inst, opts);
  for (const BoundaryProfile& prof : profiles) {
    std::uint64_t need = tardy::detail::table_cell_bound(inst, prof);
    if (need > opts.cell_budget) {
      throw size_error("a profile table needs up to " + std::to_string(need) +
                       " cells; the budget is " + std::to_string(opts.cell_budget));
    }
  }

  std::vector<Int> values(profiles.size(), -1);
  std::vector<std::size_t> cells(profiles.size(), 0);
  parallel_for(profiles.size(), threads, [&](std::size_t i) {
    DpRun run = dp_solve(inst, profiles[i]);
    values[i] = run.value;
    cells[i] = run.table.finite_cells();
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < profiles.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }

  AlgoRun out;
  out.counters.profiles = static_cast<long>(profiles.size());
  out.counters.cells = *std::max_element(cells.begin(), cells.end());
  DpRun run = dp_solve(inst, profiles[best]);
  Schedule sched =
      backtrack(inst, profiles[best], run.table, inst.size(), run.table.unpack(run.best_cell));
  append_tardy_tail(inst, sched);
  out.best_weight = objective(inst, sched);
  if (out.best_weight != run.value) {
    throw internal_error("backtracked schedule disagrees with the table value");
  }
  out.schedule = std::move(sched);
  return out;
}

inline AlgoRun run_algo(const std::string& algo, const Instance& inst, int threads = 1) {
  AlgoRun out;
  if (algo == "oracle") {
    SolveResult res = solve_exact(inst);
    out.best_weight = res.best_weight;
    out.schedule = std::move(res.schedule);
  } else if (algo == "dp") {
    if (threads > 1) return solve_dp_threaded(inst, threads);
    DpOutcome res = solve_dp(inst);
    out.best_weight = res.best_weight;
    out.schedule = std::move(res.schedule);
    out.counters.profiles = res.profiles;
    out.counters.cells = res.table_cells;
  } else if (algo == "milp-prd") {
    WindowOutcome res = solve_windows(inst);
    out.best_weight = res.best_weight;
    out.schedule = std::move(res.schedule);
    out.counters.nodes = res.stats.nodes;
    out.counters.pivots = res.stats.pivots;
    out.counters.integer_vars = res.stats.integer_vars;
  } else if (algo == "milp-pwd" || algo == "milp-pwr") {
    PwdOutcome res = algo == "milp-pwd" ? solve_pwd(inst) : solve_pwr(inst);
    out.best_weight = res.best_weight;
    out.schedule = std::move(res.schedule);
    out.counters.structures = res.structures;
    out.counters.nodes = res.nodes;
    out.counters.pivots = res.pivots;
    out.counters.integer_vars = res.integer_vars;
  } else {
    throw input_error("unknown algorithm: " + algo);
  }
  return out;
}

inline void write_schedule_to(const std::string& path, const Schedule& sched, Streams& s) {
  if (path == "-") {
    save_schedule(s.out, sched);
    return;
  }
  std::ofstream out(path);
  if (!out) throw input_error("cannot open schedule output file: " + path);
  save_schedule(out, sched);
}

struct SolveFlags {
  std::string path;
  std::string algo;
  std::string schedule_out;
  bool json = false;
  int threads = 1;
};

inline int cmd_solve(const SolveFlags& f, Streams& s) {
  LoadedInstance loaded = read_instance(f.path, s.in);
  auto t0 = std::chrono::steady_clock::now();
  AlgoRun run;
  if (loaded.instance.size() > 0) {
    run = run_algo(f.algo, loaded.instance, f.threads);
  } else {
    run.schedule = Schedule::from_entries(0, {});
  }
  double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  // The report's own invariant: the weight it states is exactly what its
  // embedded schedule earns (plus the weight of dropped zero-length jobs).
  if (loaded.instance.size() > 0 &&
      objective(loaded.instance, run.schedule) != run.best_weight) {
    throw internal_error("reported weight does not match the witness schedule");
  }
  Int total = run.best_weight + loaded.weight_offset;
  const Counters& c = run.counters;

  if (f.json) {
    nlohmann::ordered_json report;
    report["algorithm"] = f.algo;
    report["digest"] = instance_digest(loaded.instance);
    report["best_weight"] = total;
    report["weight_offset"] = loaded.weight_offset;
    report["wall_ms"] = wall_ms;
    report["counters"] = {{"nodes", c.nodes},           {"pivots", c.pivots},
                          {"structures", c.structures}, {"profiles", c.profiles},
                          {"cells", c.cells},           {"integer_vars", c.integer_vars}};
    nlohmann::ordered_json starts = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < run.schedule.size(); ++j) {
      if (run.schedule.has(j)) starts.push_back({{"job", j}, {"start", run.schedule.start(j)}});
    }
    report["schedule"] = {{"starts", std::move(starts)}};
    s.out << report.dump(2) << "\n";
  } else {
    s.out << "W=" << total << "\n";
    s.out << "algo=" << f.algo << " digest=" << instance_digest(loaded.instance)
          << " offset=" << loaded.weight_offset << " nodes=" << c.nodes
          << " pivots=" << c.pivots << " structures=" << c.structures
          << " profiles=" << c.profiles << " cells=" << c.cells
          << " integer_vars=" << c.integer_vars << "\n";
  }
  if (!f.schedule_out.empty()) write_schedule_to(f.schedule_out, run.schedule, s);
  return 0;
}

inline int cmd_validate(const std::string& inst_path, const std::string& sched_path,
                        Streams& s) {
  LoadedInstance loaded = read_instance(inst_path, s.in);
  Schedule sched = sched_path == "-" ? load_schedule(s.in, loaded.instance.size())
                                     : load_schedule_file(sched_path, loaded.instance.size());
  ValidationReport report = validate(loaded.instance, sched);
  if (report.ok()) {
    s.out << "valid W=" << objective(loaded.instance, sched) + loaded.weight_offset << "\n";
    return 0;
  }
  s.out << "invalid violations=" << report.violations.size() << "\n";
  for (const Violation& v : report.violations) s.out << v.message << "\n";
  return 1;
}

inline int cmd_stats(const std::string& path, Streams& s) {
  LoadedInstance loaded = read_instance(path, s.in);
  ParamProfile prof = stats(loaded.instance);
  s.out << "n=" << loaded.instance.size() << " p#=" << prof.p_count << " w#=" << prof.w_count
        << " r#=" << prof.r_count << " d#=" << prof.d_count << "\n";
  return 0;
}

inline int cmd_reverse(const std::string& path, Streams& s) {
  LoadedInstance loaded = read_instance(path, s.in);
  save_instance(s.out, reverse_instance(loaded.instance));
  return 0;
}

inline int cmd_export_lp(const std::string& path, const std::string& formulation,
                         long structure_index, Streams& s) {
  LoadedInstance loaded = read_instance(path, s.in);
  const Instance& inst = loaded.instance;
  if (inst.size() == 0) throw input_error("the instance has no jobs to model");

  if (formulation == "prd") {
    WindowModel wm = build_window_model(inst);
    milp::export_lp(wm.model, s.out);
    return 0;
  }

  // Mirror the slot solvers' preprocessing: drop jobs that can never be
  // early, and mirror the time axis for the release-anchored variant.
  std::vector<Job> kept;
  for (const Job& job : inst.jobs()) {
    if (job.r + job.p <= job.d) kept.push_back(job);
  }
  if (kept.empty()) {
    throw input_error("every job misses its due date even alone; no model to export");
  }
  Instance sub{kept};
  if (formulation == "pwr") sub = reverse_instance(sub);

  std::vector<SlotType> types = tardy::detail::group_by_slot(sub);
  std::set<Int> due_set;
  for (const Job& job : sub.jobs()) due_set.insert(job.d);
  std::vector<Int> dues(due_set.begin(), due_set.end());
  std::vector<OverlapStructure> structures = enumerate_structures(types, dues);
  if (structure_index < 0 || static_cast<std::size_t>(structure_index) >= structures.size()) {
    throw input_error("structure index " + std::to_string(structure_index) +
                      " is out of range; the instance has " +
                      std::to_string(structures.size()) + " overlap structures");
  }
  SlotModel sm =
      build_slot_model(sub, types, dues, structures[static_cast<std::size_t>(structure_index)]);
  milp::export_lp(sm.model, s.out);
  return 0;
}

struct GenFlags {
  std::string sizes;
  std::string values;
  std::string numbers;
  Int bins = 1;
  Int capacity = 1;
  RandomSpec random;
};

struct CompareFlags {
  std::string algos_text;
  std::string dir;
  int threads = 1;
};

struct CompareRun {
  std::vector<std::string> algos;
  std::string dir;
  int threads = 1;
};

inline int cmd_compare(const CompareFlags& flags, Streams& s) {
  CompareRun f;
  f.algos = split_list(flags.algos_text);
  if (f.algos.empty()) throw input_error("--algos needs at least one algorithm");
  for (const std::string& algo : f.algos) {
    const std::vector<std::string>& known = algo_names();
    if (std::find(known.begin(), known.end(), algo) == known.end()) {
      throw input_error("unknown algorithm: " + algo);
    }
  }
  f.dir = flags.dir;
  f.threads = flags.threads;

  namespace fs = std::filesystem;
  if (!fs::is_directory(f.dir)) {
    throw input_error("not a directory: " + f.dir);
  }
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(f.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  if (files.empty()) throw input_error("no .json instance files in " + f.dir);

  const std::size_t cols = f.algos.size();
  std::vector<Int> weights(files.size() * cols, 0);
  parallel_for(files.size() * cols, f.threads, [&](std::size_t item) {
    std::size_t row = item / cols;
    LoadedInstance loaded = load_instance_file(files[row].string());
    Int w = loaded.weight_offset;
    if (loaded.instance.size() > 0) {
      w += run_algo(f.algos[item % cols], loaded.instance).best_weight;
    }
    weights[item] = w;
  });

  std::vector<std::string> names;
  names.reserve(files.size());
  for (const fs::path& p : files) names.push_back(p.filename().string());
  std::size_t name_width = std::string("instance").size();
  for (const std::string& name : names) name_width = std::max(name_width, name.size());
  std::vector<std::size_t> col_width(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    col_width[c] = f.algos[c].size();
    for (std::size_t row = 0; row < files.size(); ++row) {
      col_width[c] = std::max(col_width[c], std::to_string(weights[row * cols + c]).size());
    }
  }
  auto pad = [&](const std::string& text, std::size_t width) {
    s.out << text << std::string(width - text.size(), ' ');
  };

  pad("instance", name_width);
  for (std::size_t c = 0; c < cols; ++c) {
    s.out << "  ";
    pad(f.algos[c], col_width[c]);
  }
  s.out << "\n";
  std::size_t mismatched = 0;
  for (std::size_t row = 0; row < files.size(); ++row) {
    pad(names[row], name_width);
    bool equal = true;
    for (std::size_t c = 0; c < cols; ++c) {
      s.out << "  ";
      pad(std::to_string(weights[row * cols + c]), col_width[c]);
      equal = equal && weights[row * cols + c] == weights[row * cols];
    }
    if (!equal) {
      ++mismatched;
      s.out << "  MISMATCH";
    }
    s.out << "\n";
  }
  if (mismatched > 0) {
    s.out << "W mismatch on " << mismatched << " instance(s)\n";
    return 4;
  }
  s.out << "all W equal\n";
  return 0;
}

}  // namespace detail

/// Parses and executes one invocation. Arguments exclude the program name;
/// streams are injectable so tests capture output in-process. Exit codes:
/// 0 success, 1 a checked schedule is invalid, 2 bad input, 3 a resource
/// budget would be exceeded, 4 an internal invariant failed.
inline int run(const std::vector<std::string>& args, Streams s) {
  CLI::App app{"exact solvers for scheduling jobs on one machine to maximize the total "
               "weight of jobs finished by their due dates"};
  app.require_subcommand(1);

  detail::SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance and print W, the best "
                                                "early weight");
  solve->add_option("instance", solve_flags.path, "instance JSON file, or - for stdin")
      ->required();
  solve->add_option("--algo", solve_flags.algo, "oracle, dp, milp-prd, milp-pwd or milp-pwr")
      ->required()
      ->check(CLI::IsMember(detail::algo_names()));
  solve->add_flag("--json", solve_flags.json, "emit a JSON run report instead of text");
  solve->add_option("--schedule-out", solve_flags.schedule_out,
                    "write the witness schedule to this file (- for stdout)");
  solve->add_option("--threads", solve_flags.threads,
                    "worker threads; parallelizes the dp profile sweep, results are "
                    "independent of the count")
      ->check(CLI::Range(1, 256));

  std::string validate_inst, validate_sched;
  CLI::App* validate = app.add_subcommand("validate", "check a schedule against an instance");
  validate->add_option("instance", validate_inst, "instance JSON file, or - for stdin")
      ->required();
  validate->add_option("schedule", validate_sched, "schedule JSON file, or - for stdin")
      ->required();

  std::string stats_path;
  CLI::App* stats_cmd = app.add_subcommand("stats", "print distinct-value counts per field");
  stats_cmd->add_option("instance", stats_path, "instance JSON file, or - for stdin")
      ->required();

  std::string reverse_path;
  CLI::App* reverse_cmd = app.add_subcommand(
      "reverse", "mirror the time axis, swapping release dates and due dates");
  reverse_cmd->add_option("instance", reverse_path, "instance JSON file, or - for stdin")
      ->required();

  std::string export_path, export_form = "prd";
  long export_index = 0;
  CLI::App* export_cmd =
      app.add_subcommand("export-lp", "write a solver model in LP format to stdout");
  export_cmd->add_option("instance", export_path, "instance JSON file, or - for stdin")
      ->required();
  export_cmd
      ->add_option("--formulation", export_form,
                   "prd (job windows), pwd (due-date slots) or pwr (its mirror)")
      ->check(CLI::IsMember(std::vector<std::string>{"prd", "pwd", "pwr"}));
  export_cmd->add_option("--structure-index", export_index,
                         "which due-date overlap structure to model (pwd/pwr only)");

  detail::GenFlags gen_flags;
  CLI::App* gen = app.add_subcommand("gen", "generate an instance as JSON on stdout");
  gen->require_subcommand(1);
  CLI::App* gen_bp = gen->add_subcommand(
      "binpacking", "items become jobs, separator jobs fence off bin-sized sections; "
                    "all jobs early iff the items pack");
  gen_bp->add_option("--sizes", gen_flags.sizes, "item sizes, comma separated")->required();
  gen_bp->add_option("--bins", gen_flags.bins, "number of bins")->required();
  gen_bp->add_option("--capacity", gen_flags.capacity, "bin capacity")->required();
  CLI::App* gen_ks = gen->add_subcommand(
      "knapsack", "one shared deadline at the capacity; W maximizes packed value");
  gen_ks->add_option("--values", gen_flags.values, "item values, comma separated")
      ->required();
  gen_ks->add_option("--sizes", gen_flags.sizes, "item sizes, comma separated")->required();
  gen_ks->add_option("--capacity", gen_flags.capacity, "knapsack capacity")->required();
  CLI::App* gen_pt = gen->add_subcommand(
      "partition", "two bins of half the total; all jobs early iff an even split exists");
  gen_pt->add_option("--numbers", gen_flags.numbers, "numbers to split, comma separated")
      ->required();
  CLI::App* gen_rn = gen->add_subcommand(
      "random", "seeded random instance with exact distinct-value counts per field");
  gen_rn->add_option("--seed", gen_flags.random.seed, "random seed");
  gen_rn->add_option("--n", gen_flags.random.n, "number of jobs")->required();
  gen_rn->add_option("--p-count", gen_flags.random.distinct_p, "distinct processing times");
  gen_rn->add_option("--w-count", gen_flags.random.distinct_w, "distinct weights");
  gen_rn->add_option("--r-count", gen_flags.random.distinct_r, "distinct release dates");
  gen_rn->add_option("--d-count", gen_flags.random.distinct_d, "distinct due dates");
  gen_rn->add_option("--max-p", gen_flags.random.max_p, "largest processing time");
  gen_rn->add_option("--horizon", gen_flags.random.horizon, "largest release/due date");

  detail::CompareFlags compare_flags;
  CLI::App* compare = app.add_subcommand(
      "compare", "run several algorithms over a directory of instances and "
                 "check they report the same W");
  compare->add_option("dir", compare_flags.dir, "directory of instance .json files")
      ->required();
  compare->add_option("--algos", compare_flags.algos_text, "algorithms, comma separated")
      ->required();
  compare->add_option("--threads", compare_flags.threads,
                      "worker threads across instance/algorithm pairs")
      ->check(CLI::Range(1, 256));

  // CLI11's vector overload consumes the arguments back to front.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, s.out, s.err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return detail::cmd_solve(solve_flags, s);
    if (validate->parsed()) return detail::cmd_validate(validate_inst, validate_sched, s);
    if (stats_cmd->parsed()) return detail::cmd_stats(stats_path, s);
    if (reverse_cmd->parsed()) return detail::cmd_reverse(reverse_path, s);
    if (export_cmd->parsed()) {
      return detail::cmd_export_lp(export_path, export_form, export_index, s);
    }
    if (gen->parsed()) {
      Instance inst;
      if (gen_bp->parsed()) {
        inst = from_bin_packing({detail::parse_int_list(gen_flags.sizes, "--sizes"),
                                 gen_flags.bins, gen_flags.capacity});
      } else if (gen_ks->parsed()) {
        inst = from_knapsack(detail::parse_int_list(gen_flags.values, "--values"),
                             detail::parse_int_list(gen_flags.sizes, "--sizes"),
                             gen_flags.capacity);
      } else if (gen_pt->parsed()) {
        inst = from_partition(detail::parse_int_list(gen_flags.numbers, "--numbers"));
      } else {
        inst = random_instance(gen_flags.random);
      }
      save_instance(s.out, inst);
      return 0;
    }
    if (compare->parsed()) return detail::cmd_compare(compare_flags, s);
    throw state_error("no subcommand dispatched");
  } catch (const size_error& e) {
    s.err << "error: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    s.err << "error: " << e.what() << "\n";
    return 2;
  } catch (const internal_error& e) {
    s.err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    s.err << "error: " << e.what() << "\n";
    return 4;
  }
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  Streams s{std::cin, std::cout, std::cerr};
  return run(args, s);
}

}  // namespace tardy::cli
