#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "mvtsp/generate.hpp"
#include "mvtsp/heldkarp.hpp"
#include "mvtsp/io.hpp"
#include "mvtsp/oracle.hpp"
#include "mvtsp/transport.hpp"

namespace mvtsp::cli {

namespace {

const std::vector<std::string> kAlgos = {"exact", "tp25", "zk15", "mvtsp15"};

Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}};
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << error_json(kind, message).dump() << "\n";
  return code;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(path, j);
  }
}

Instance single_visit(Instance inst) {
  for (auto& r : inst.requests) r = 1;
  return inst;
}

Json decomposition_json(const PathCycleDecomposition& d) {
  Json cycles = Json::array();
  for (const auto& c : d.cycles) cycles.push_back({{"vertices", c.vertices}, {"multiplicity", c.multiplicity.get_str()}});
  return Json{{"path", d.path}, {"cycles", cycles}};
}

int cmd_validate(const std::string& path, std::ostream& out) {
  Instance inst = read_instance_file(path);
  try {
    check_structure(inst);
  } catch (const StructuralError& e) {
    out << Json{{"valid", false}, {"structural", e.what()}}.dump() << "\n";
    return 1;
  }
  const auto rep = validate_metric(inst);
  Json j{{"valid", rep.ok()}, {"n", inst.n}, {"variant", inst.t ? "path" : "cycle"}};
  if (!rep.ok()) {
    Json tri = Json::array();
    for (const auto& t : rep.triangle_violations) tri.push_back({t[0], t[1], t[2]});
    j["triangle_violations"] = tri;
    j["loop_violations"] = rep.loop_violations;
  }
  out << j.dump() << "\n";
  return rep.ok() ? 0 : 1;
}

struct BenchRow {
  std::string instance;
  std::string algo;
  std::string cost, lower_bound, oracle_cost, ratio, error;
  long long wall_ms = 0;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<BenchRow> bench_instance(const std::filesystem::path& file, const std::vector<std::string>& algos) {
  std::vector<BenchRow> rows;
  const std::string name = file.filename().string();
  Instance inst;
  try {
    inst = read_instance_file(file.string());
    check_structure(inst);
  } catch (const Error& e) {
    for (const auto& a : algos) rows.push_back({name, a, "", "", "", "", std::string(e.kind()) + ": " + e.what(), 0});
    return rows;
  }
  std::optional<Rational> oracle;
  try {
    oracle = inst.t ? exact_mvtsp_path(inst).cost : exact_mvtsp_cycle(inst).cost;
  } catch (const CapabilityError&) {
  }
  for (const auto& a : algos) {
    BenchRow row{name, a, "", "", "", "", "", 0};
    if (oracle) row.oracle_cost = oracle->get_str();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto s = solve_with(inst, a);
      row.cost = s.cost.get_str();
      if (s.lower_bound) row.lower_bound = s.lower_bound->get_str();
      if (oracle) {
        Rational ratio = sgn(*oracle) > 0 ? Rational(s.cost / *oracle) : Rational(s.cost == 0 ? 1 : 0);
        row.ratio = ratio.get_str();
      }
    } catch (const Error& e) {
      row.error = std::string(e.kind()) + ": " + e.what();
    }
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_bench(const std::string& dir, const std::string& algo_list, const std::string& report, int jobs,
              std::ostream& out, std::ostream& err) {
  std::vector<std::string> algos;
  std::stringstream ss(algo_list);
  for (std::string a; std::getline(ss, a, ',');) {
    if (std::find(kAlgos.begin(), kAlgos.end(), a) == kAlgos.end()) {
      return report_error(err, "usage", "unknown algorithm '" + a + "'", 2);
    }
    algos.push_back(a);
  }
  if (algos.empty()) return report_error(err, "usage", "no algorithms given", 2);
  if (!std::filesystem::is_directory(dir)) return report_error(err, "usage", "not a directory: " + dir, 2);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::vector<BenchRow>> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) results[i] = bench_instance(files[i], algos);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream csv(report);
  if (!csv) return report_error(err, "io", "cannot write " + report, 1);
  csv << "instance,algo,cost,lower_bound,oracle_cost,ratio,wall_ms,error\n";
  std::size_t count = 0, failed = 0;
  for (const auto& rows : results) {
    for (const auto& r : rows) {
      csv << csv_field(r.instance) << ',' << r.algo << ',' << r.cost << ',' << r.lower_bound << ','
          << r.oracle_cost << ',' << r.ratio << ',' << r.wall_ms << ',' << csv_field(r.error) << "\n";
      ++count;
      failed += r.error.empty() ? 0 : 1;
    }
  }
  out << Json{{"rows", count}, {"failed", failed}, {"report", report}}.dump() << "\n";
  return 0;
}

}  // namespace

Rational held_karp_bound(const Instance& inst) {
  if (inst.t) return held_karp_mv(inst).value;
  return held_karp_mv(split_cycle_instance(inst)).value;
}

SolveOutcome solve_with(const Instance& inst, const std::string& algo) {
  check_structure(inst);
  SolveOutcome s;
  const Vertex t = inst.t.value_or(inst.s);
  if (algo == "exact") {
    const auto sol = inst.t ? exact_mvtsp_path(inst) : exact_mvtsp_cycle(inst);
    s.multigraph = sol.multigraph;
    s.cost = sol.cost;
    s.decomposition = decompose_path_cycles(sol.multigraph, inst.s, t);
    return s;
  }
  TourSolution tour;
  if (algo == "tp25") {
    if (!inst.t) throw StructuralError("tp25 solves the path variant; use mvtsp15 for closed tours");
    const Instance sv = single_visit(inst);
    const CompactMultigraph path = inst.n <= 12 ? exact_single_visit_path(sv).multigraph : approx_15(sv).multigraph;
    tour = approx_25(inst, path);
  } else if (algo == "zk15") {
    if (!inst.t) throw StructuralError("zk15 solves the path variant; use mvtsp15 for closed tours");
    PipelineReport rep;
    tour = approx_15(inst, &rep);
    s.report = rep;
  } else if (algo == "mvtsp15") {
    if (inst.t) throw StructuralError("mvtsp15 solves closed tours; drop t or use zk15");
    PipelineReport rep;
    tour = mvtsp_15(inst, &rep);
    s.report = rep;
  } else {
    throw StructuralError("unknown algorithm '" + algo + "'");
  }
  s.multigraph = tour.multigraph;
  s.decomposition = tour.decomposition;
  s.cost = tour.total_cost;
  s.lower_bound = held_karp_bound(inst);
  return s;
}

Json solution_json(const std::string& algo, const SolveOutcome& s) {
  Json j = tour_to_json(s.multigraph, s.cost);
  j["algo"] = algo;
  j["decomposition"] = decomposition_json(s.decomposition);
  if (s.lower_bound) {
    j["lower_bound"] = format_rational(*s.lower_bound);
    if (sgn(*s.lower_bound) > 0) {
      Rational ratio = s.cost / *s.lower_bound;
      j["ratio_to_lb"] = format_rational(ratio);
    } else {
      j["ratio_to_lb"] = nullptr;
    }
  }
  return j;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Many-visits TSP solver"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", validate_file)->required();

  std::string solve_file, algo = "zk15", out_file, report_file;
  auto* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("file", solve_file)->required();
  solve->add_option("--algo", algo)->check(CLI::IsMember(kAlgos));
  solve->add_option("--out", out_file);
  solve->add_option("--report", report_file, "pipeline report JSON");

  int gen_n = 5;
  std::string gen_rmax = "3", gen_metric = "euclidean", gen_out;
  std::uint64_t gen_seed = 1;
  bool gen_cycle = false;
  auto* gen = app.add_subcommand("gen", "generate a random metric instance");
  gen->add_option("--n", gen_n)->check(CLI::Range(2, 1000));
  gen->add_option("--rmax", gen_rmax);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--metric", gen_metric)->check(CLI::IsMember({"euclidean", "random-metric"}));
  gen->add_flag("--cycle", gen_cycle, "omit t");
  gen->add_option("--out", gen_out);

  std::string bench_dir, bench_algos = "tp25,zk15", bench_report = "bench.csv";
  int bench_jobs = 1;
  auto* bench = app.add_subcommand("bench", "run algorithms over a directory of instances");
  bench->add_option("--dir", bench_dir)->required();
  bench->add_option("--algos", bench_algos);
  bench->add_option("--report", bench_report);
  bench->add_option("--jobs", bench_jobs)->check(CLI::Range(1, 256));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    return report_error(err, "usage", e.what(), 2);
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_file, out);
    if (solve->parsed()) {
      const Instance inst = read_instance_file(solve_file);
      const auto s = solve_with(inst, algo);
      emit(solution_json(algo, s), out_file, out);
      if (!report_file.empty()) {
        Json rep = s.report ? s.report->to_json() : Json{{"final_cost", s.cost.get_str()}};
        rep["algo"] = algo;
        write_json_file(report_file, rep);
      }
      return 0;
    }
    if (gen->parsed()) {
      GenerateOptions o;
      o.n = gen_n;
      if (o.r_max.set_str(gen_rmax, 10) != 0 || o.r_max < 1) throw ParseError("--rmax must be a positive integer");
      o.seed = gen_seed;
      o.metric = parse_metric_kind(gen_metric);
      o.cycle = gen_cycle;
      emit(instance_to_json(generate_instance(o)), gen_out, out);
      return 0;
    }
    if (bench->parsed()) return cmd_bench(bench_dir, bench_algos, bench_report, bench_jobs, out, err);
  } catch (const ParseError& e) {
    return report_error(err, e.kind(), e.what(), 2);
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what(), 1);
  }
  return 2;
}

}  // namespace mvtsp::cli
