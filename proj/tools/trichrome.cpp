// Command-line front end: instance ingestion/generation, solver invocation,
// oracle cross-checks, and operation-count tables (TSV, tab-separated).
// Exit codes: 0 success/agreement, 1 input error, 2 oracle mismatch,
// 3 resource cap.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trichrome/chromatic.hpp"
#include "trichrome/exponents.hpp"
#include "trichrome/gen.hpp"
#include "trichrome/setcover.hpp"

namespace tc = trichrome;

namespace {

std::uint64_t nnz_cap_from_env() {
  const char* v = std::getenv("TC_MAX_NNZ");
  if (!v) return tc::kDefaultNnzCap;
  char* end = nullptr;
  unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0' || parsed == 0) throw tc::parse_error("bad TC_MAX_NNZ value");
  return parsed;
}

tc::Rational rat(const std::string& s) { return tc::parse_decimal_rational(s); }

tc::SetFamily read_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tc::parse_error("cannot open " + path);
  return tc::parse_set_family(in);
}

tc::Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tc::parse_error("cannot open " + path);
  return tc::parse_dimacs(in);
}

std::string mask_str(tc::Mask m) {
  if (m == 0) return "-";
  std::string s;
  for (int v : tc::mask_elements(m)) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
  }
};

// One-row TSV report. Columns: command, instance summary, verdict, counters,
// wall time, oracle agreement ("-" without --oracle-check).
void report(const std::string& command, const std::string& instance, const std::string& verdict,
            const std::string& counters, long long wall_ms, const std::string& oracle) {
  std::cout << "command\tinstance\tverdict\tcounters\twall_ms\toracle\n"
            << command << "\t" << instance << "\t" << verdict << "\t" << counters << "\t"
            << wall_ms << "\t" << oracle << "\n";
}

int cmd_chromatic(const std::string& path, const std::string& d_str, bool oracle_check,
                  bool case_trace) {
  tc::Graph g = read_graph(path);
  tc::PipelineConfig cfg;
  cfg.d = rat(d_str);
  Timer t;
  std::vector<tc::CaseTraceRow> trace;
  int chi = tc::chromatic_number(g, cfg, nullptr, case_trace ? &trace : nullptr);
  long long ms = t.ms();
  std::string oracle = "-";
  int exit_code = 0;
  if (oracle_check) {
    int ref = tc::chromatic_brute(g);
    oracle = (ref == chi) ? "agree" : ("mismatch(brute=" + std::to_string(ref) + ")");
    if (ref != chi) exit_code = 2;
  }
  report("chromatic", "n=" + std::to_string(g.n) + " m=" + std::to_string(g.edge_count()),
         std::to_string(chi), "cases=" + std::to_string(trace.size()), ms, oracle);
  if (case_trace) {
    std::cout << "k\tcase\tverdict\n";
    for (const auto& row : trace)
      std::cout << row.k << "\t" << row.label << "\t" << (row.verdict ? "true" : "false") << "\n";
  }
  return exit_code;
}

int cmd_setcover(const std::string& path, int t, const std::string& delta_str, bool oracle_check) {
  tc::CoverInstance inst;
  inst.family = read_family(path);
  inst.universe = inst.family.universe;
  inst.t = t;
  inst.delta = rat(delta_str);
  tc::TripartitionContext ctx;
  tc::KCoverOptions opts;
  opts.tri.nnz_cap = nnz_cap_from_env();
  Timer timer;
  bool verdict = tc::solve_setcover(inst, ctx, opts);
  long long ms = timer.ms();
  std::string oracle = "-";
  int exit_code = 0;
  if (oracle_check) {
    bool ref = tc::brute_setcover(inst);
    oracle = (ref == verdict) ? "agree" : "mismatch";
    if (ref != verdict) exit_code = 2;
  }
  report("setcover",
         "n=" + std::to_string(inst.universe.n) + " F=" + std::to_string(inst.family.members.size()) +
             " t=" + std::to_string(t),
         verdict ? "true" : "false", "-", ms, oracle);
  return exit_code;
}

int cmd_partition3(const std::string& p1, const std::string& p2, const std::string& p3,
                   const std::string& nu_str, const std::string& delta_str,
                   const std::string& b_prime_str, bool no_force_small, bool witness,
                   bool oracle_check) {
  tc::SetFamily f1 = read_family(p1), f2 = read_family(p2), f3 = read_family(p3);
  tc::TripartitionOptions opts;
  opts.b_prime = rat(b_prime_str);
  opts.force_small = !no_force_small;
  opts.nnz_cap = nnz_cap_from_env();
  tc::TripartitionContext ctx;
  tc::TripartitionStats stats;
  Timer timer;
  bool verdict = tc::solve_tripartition(f1, f2, f3, rat(nu_str), rat(delta_str), ctx, opts, &stats);
  long long ms = timer.ms();
  std::string oracle = "-";
  int exit_code = 0;
  std::optional<tc::MaskTriple> wit;
  if (oracle_check || (witness && verdict)) wit = tc::brute_tripartition(f1, f2, f3);
  if (oracle_check) {
    bool ref = wit.has_value();
    oracle = (ref == verdict) ? "agree" : "mismatch";
    if (ref != verdict) exit_code = 2;
  }
  report("partition3",
         "n=" + std::to_string(f1.universe.n) + " F=" + std::to_string(f1.members.size()) + "," +
             std::to_string(f2.members.size()) + "," + std::to_string(f3.members.size()),
         verdict ? "true" : "false",
         "solver_calls=" + std::to_string(stats.block_solver_calls) +
             " family=" + std::to_string(stats.family_size),
         ms, oracle);
  if (witness && wit) {
    std::cout << "witness\t" << mask_str(wit->x1) << "\t" << mask_str(wit->x2) << "\t"
              << mask_str(wit->x3) << "\n";
  }
  return exit_code;
}

int cmd_list_covers(const std::string& path, int t, const std::string& nu_str) {
  tc::SetFamily f = read_family(path);
  int n = f.universe.n;
  if (n > 22) throw tc::resource_error("cover listing limited to n <= 22");
  tc::Rational nu = rat(nu_str);
  int s = static_cast<int>(tc::to_int64(tc::floor_rational(nu * n)));
  auto u = tc::SubsetClosedFamily::all_subsets_up_to(f.universe, s);
  tc::write_set_family(std::cout, tc::list_t_covered(f, u, t));
  return 0;
}

int cmd_tensor_build(const std::string& tau_str, int k, const std::string& out) {
  tc::SparseTensor t = tc::partitioning_tensor(rat(tau_str), k);
  std::cout << "tensor\tdim\tnnz\n"
            << "partitioning\t" << t.dims[0] << "\t" << t.nnz() << "\n";
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw tc::parse_error("cannot open " + out);
    tc::write_decomposition(os, tc::trivial_decomposition(t, 1, nnz_cap_from_env()));
  }
  return 0;
}

int cmd_tensor_kron(const std::string& tau_str, int k, int r) {
  tc::SparseTensor t = tc::partitioning_tensor(rat(tau_str), k);
  tc::SparseTensor p = tc::kronecker_power(t, r, nnz_cap_from_env());
  tc::SparseTensor remapped = tc::remap_partition_indices(p, k, r);
  std::cout << "tensor\tdim\tnnz\n"
            << "power\t" << p.dims[0] << "\t" << p.nnz() << "\n"
            << "remapped\t" << remapped.dims[0] << "\t" << remapped.nnz() << "\n";
  return 0;
}

int cmd_tensor_eval(const std::string& tau_str, int k, int r, std::uint64_t seed,
                    const std::string& decomp_path, bool oracle_check) {
  tc::SparseTensor t = tc::partitioning_tensor(rat(tau_str), k);
  tc::Decomposition d;
  if (!decomp_path.empty()) {
    std::ifstream in(decomp_path);
    if (!in) throw tc::parse_error("cannot open " + decomp_path);
    d = tc::parse_decomposition(in);
    std::string why;
    if (!tc::verify_decomposition(d, t, &why)) throw tc::parse_error("bad certificate: " + why);
  } else {
    d = tc::trivial_decomposition(t, 1, nnz_cap_from_env());
  }
  std::uint64_t len = 1;
  for (int i = 0; i < r; ++i) len *= t.dims[0];
  tc::SplitMix64 rng(seed);
  auto rand_vec = [&] {
    std::vector<tc::Rational> v(len);
    for (auto& x : v)
      x = tc::Rational(tc::Int(rng.below(201)) - 100, tc::Int(rng.below(9) + 1));
    return v;
  };
  auto x = rand_vec(), y = rand_vec(), z = rand_vec();
  Timer timer;
  auto res = tc::yates_evaluate(t, d, r, x, y, z);
  long long ms = timer.ms();
  std::string oracle = "-";
  int exit_code = 0;
  if (oracle_check) {
    tc::Rational ref = tc::direct_evaluate(tc::kronecker_power(t, r, nnz_cap_from_env()), x, y, z);
    oracle = (ref == res.value) ? "agree" : "mismatch";
    if (ref != res.value) exit_code = 2;
  }
  report("tensor eval", "c=" + std::to_string(t.dims[0]) + " r=" + std::to_string(r),
         tc::rational_to_string(res.value), "ops=" + std::to_string(res.ops.total()), ms, oracle);
  return exit_code;
}

int cmd_tensor_verify(const std::string& decomp_path, const std::string& tau_str, int k) {
  std::ifstream in(decomp_path);
  if (!in) throw tc::parse_error("cannot open " + decomp_path);
  tc::Decomposition d = tc::parse_decomposition(in);
  tc::SparseTensor t = tc::partitioning_tensor(rat(tau_str), k);
  std::string why;
  bool ok = tc::verify_decomposition(d, t, &why);
  std::cout << "decomp\trank\tverdict\treason\n"
            << decomp_path << "\t" << d.rank << "\t" << (ok ? "valid" : "invalid") << "\t"
            << (ok ? "-" : why) << "\n";
  return ok ? 0 : 2;
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed, const std::string& nu_str,
            int count, int permille, const std::string& out) {
  tc::SplitMix64 rng(seed);
  auto open_out = [&](const std::string& path) {
    auto os = std::make_unique<std::ofstream>(path);
    if (!*os) throw tc::parse_error("cannot open " + path);
    return os;
  };
  std::cout << "kind\tseed\tn\tdetail\n";
  if (kind == "graph") {
    tc::Graph g = tc::random_graph(n, permille, rng);
    if (out.empty())
      tc::write_dimacs(std::cout, g);
    else
      tc::write_dimacs(*open_out(out), g);
    std::cout << kind << "\t" << seed << "\t" << n << "\tm=" << g.edge_count() << "\n";
    return 0;
  }
  if (kind == "family") {
    tc::SetFamily f = tc::random_nu_bounded_family(n, rat(nu_str), count, rng);
    if (out.empty())
      tc::write_set_family(std::cout, f);
    else
      tc::write_set_family(*open_out(out), f);
    std::cout << kind << "\t" << seed << "\t" << n << "\tF=" << f.members.size() << "\n";
    return 0;
  }
  if (kind == "tripartition-yes" || kind == "tripartition-no") {
    if (out.empty()) throw tc::parse_error("tripartition kinds need --out <prefix>");
    tc::Rational nu = rat(nu_str);
    if (kind == "tripartition-yes") {
      tc::PlantedTripartition p = tc::planted_tripartition(n, nu, count, rng);
      tc::write_set_family(*open_out(out + ".1"), p.f1);
      tc::write_set_family(*open_out(out + ".2"), p.f2);
      tc::write_set_family(*open_out(out + ".3"), p.f3);
      std::cout << kind << "\t" << seed << "\t" << n << "\twitness=(" << mask_str(p.a1) << ")("
                << mask_str(p.a2) << ")(" << mask_str(p.a3) << ")\n";
      return 0;
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw tc::resource_error("no negative instance found in 1000 draws");
      tc::SetFamily f1 = tc::random_nu_bounded_family(n, nu, count, rng);
      tc::SetFamily f2 = tc::random_nu_bounded_family(n, nu, count, rng);
      tc::SetFamily f3 = tc::random_nu_bounded_family(n, nu, count, rng);
      if (tc::brute_tripartition(f1, f2, f3)) continue;
      tc::write_set_family(*open_out(out + ".1"), f1);
      tc::write_set_family(*open_out(out + ".2"), f2);
      tc::write_set_family(*open_out(out + ".3"), f3);
      std::cout << kind << "\t" << seed << "\t" << n << "\tverified-no attempts="
                << attempt + 1 << "\n";
      return 0;
    }
  }
  // Planted case profiles as complete multipartite graphs: the parts are the
  // unique optimal color classes, so the size profile is exact.
  if (kind == "case-b" || kind == "case-c" || kind == "case-d" || kind == "case-e") {
    std::vector<int> sizes;
    int left = n;
    auto take = [&](int s) {
      s = std::min(s, left);
      if (s > 0) sizes.push_back(s);
      left -= s;
    };
    if (kind == "case-b") {  // four huge classes, tiny leftovers
      for (int i = 0; i < 4; ++i) take((n + 3) / 5);
      while (left > 0) take(1);
    } else if (kind == "case-c") {  // two classes beyond half the graph
      take((n + 1) / 3);
      take((n + 1) / 3);
      while (left > 0) take(2);
    } else if (kind == "case-d") {  // one near-half class, tiny rest
      take(n / 2);
      while (left > 0) take(1);
    } else {  // balanced classes
      while (left > 0) take(std::max(1, n / 6));
    }
    std::sort(sizes.rbegin(), sizes.rend());
    tc::Graph g = tc::complete_multipartite(sizes);
    if (out.empty())
      tc::write_dimacs(std::cout, g);
    else
      tc::write_dimacs(*open_out(out), g);
    std::string profile;
    for (int s : sizes) profile += (profile.empty() ? "" : ",") + std::to_string(s);
    std::cout << kind << "\t" << seed << "\t" << n << "\tchi=" << sizes.size()
              << " profile=" << profile << "\n";
    return 0;
  }
  throw tc::parse_error("unknown --kind " + kind);
}

int cmd_exponents(const std::string& delta_str, const std::string& eps_str,
                  const std::string& t3_str, const std::string& t4_str, int sweep) {
  auto print_row = [](const tc::Rational& delta, const tc::ExponentReport& r) {
    std::cout << std::fixed << std::setprecision(6) << tc::rational_to_string(delta) << "\t"
              << r.tb << "\t" << r.tc << "\t" << r.td << "\t" << r.te << "\t" << r.max_base
              << "\n";
  };
  tc::Rational eps = rat(eps_str), t3 = rat(t3_str), t4 = rat(t4_str);
  std::cout << "delta\tt_b\tt_c\tt_d\tt_e\tmax\n";
  if (sweep > 0) {
    for (int i = 1; i <= sweep; ++i) {
      tc::Rational delta(i, 12 * (sweep + 1));
      print_row(delta, tc::exponent_report(delta, eps, t3, t4));
    }
  } else {
    tc::Rational delta = rat(delta_str);
    print_row(delta, tc::exponent_report(delta, eps, t3, t4));
  }
  return 0;
}

int cmd_bench(int n, int r) {
  std::cout << "op\tsize\tadds\tmuls\twall_ms\n";
  {
    auto u = tc::SubsetClosedFamily::all_subsets_up_to(tc::Universe(n), n);
    auto v = tc::LatticeVector<tc::Int>::zero(u);
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = tc::Int(i % 7);
    tc::OpCounter ops;
    Timer t;
    auto down = tc::down_transform(v, tc::Int(1), &ops);
    auto up = tc::down_transform(down, tc::Int(-1), &ops);
    std::cout << "lattice_roundtrip\t2^" << n << "\t" << ops.adds << "\t" << ops.muls << "\t"
              << t.ms() << "\n";
    if (up.values != v.values) throw tc::domain_error("round-trip failed");
  }
  {
    tc::SparseTensor t = tc::partitioning_tensor(tc::Rational(1, 3), 3);
    tc::Decomposition d = tc::trivial_decomposition(t, 1);
    std::uint64_t len = 1;
    for (int i = 0; i < r; ++i) len *= t.dims[0];
    std::vector<tc::Rational> x(len), y(len), z(len);
    tc::SplitMix64 rng(1);
    for (auto* v : {&x, &y, &z})
      for (auto& e : *v) e = tc::Rational(tc::Int(rng.below(7)));
    Timer timer;
    auto res = tc::yates_evaluate(t, d, r, x, y, z);
    std::cout << "yates\tc^" << r << "=" << len << "\t" << res.ops.adds << "\t" << res.ops.muls
              << "\t" << timer.ms() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for balanced tripartition, bounded set cover, and chromatic number"};
  app.require_subcommand(1);

  std::string graph_path, d_str = "0";
  bool oracle_check = false, case_trace = false, witness = false, no_force_small = false;
  bool force_small_flag = false;
  std::string family_path, nu_str = "1", delta_str = "1/100", b_prime_str = "0";
  std::string p1, p2, p3, tau_str = "1/3", decomp_path, out, kind, gen_nu_str = "5/12";
  std::string exp_delta_str = "1/145", eps_str = "0", t3_str = "1.3289", t4_str = "1.7215";
  int t = 1, k = 3, r = 2, count = 8, permille = 500, n = 10, sweep = 0;
  std::uint64_t seed = 1;

  auto* chromatic = app.add_subcommand("chromatic", "Chromatic number of a DIMACS graph");
  chromatic->add_option("--graph", graph_path)->required();
  chromatic->add_option("--d", d_str, "balance slack (default n/145)");
  chromatic->add_flag("--oracle-check", oracle_check);
  chromatic->add_flag("--case-trace", case_trace);

  auto* setcover = app.add_subcommand("setcover", "t-cover decision for a delta-bounded family");
  setcover->add_option("--family", family_path)->required();
  setcover->add_option("--t", t)->required();
  setcover->add_option("--delta", delta_str)->required();
  setcover->add_flag("--oracle-check", oracle_check);

  auto* partition3 = app.add_subcommand("partition3", "Three-way partition from three families");
  partition3->add_option("--f1", p1)->required();
  partition3->add_option("--f2", p2)->required();
  partition3->add_option("--f3", p3)->required();
  partition3->add_option("--nu", nu_str)->required();
  partition3->add_option("--delta", delta_str);
  partition3->add_option("--b-prime", b_prime_str);
  partition3->add_flag("--no-force-small", no_force_small);
  partition3->add_flag("--force-small", force_small_flag, "accepted for symmetry (default)");
  partition3->add_flag("--witness", witness);
  partition3->add_flag("--oracle-check", oracle_check);

  auto* list_covers = app.add_subcommand("list-covers", "List t-covered subsets of a family");
  list_covers->add_option("--family", family_path)->required();
  list_covers->add_option("--t", t)->required();
  list_covers->add_option("--nu", nu_str, "size bound on listed subsets (default 1)");

  auto* tensor = app.add_subcommand("tensor", "Partitioning-tensor utilities");
  tensor->require_subcommand(1);
  auto* tb = tensor->add_subcommand("build", "Materialize a partitioning tensor");
  tb->add_option("--tau", tau_str);
  tb->add_option("--k", k);
  tb->add_option("--out", out, "write the one-term-per-monomial certificate");
  auto* tk = tensor->add_subcommand("kron", "Kronecker power and index remap");
  tk->add_option("--tau", tau_str);
  tk->add_option("--k", k);
  tk->add_option("--power", r);
  auto* te = tensor->add_subcommand("eval", "Evaluate T^r at seeded random vectors");
  te->add_option("--tau", tau_str);
  te->add_option("--k", k);
  te->add_option("--power", r);
  te->add_option("--seed", seed);
  te->add_option("--decomp", decomp_path);
  te->add_flag("--oracle-check", oracle_check);
  auto* tv = tensor->add_subcommand("verify-decomp", "Check a decomposition certificate");
  tv->add_option("--decomp", decomp_path)->required();
  tv->add_option("--tau", tau_str);
  tv->add_option("--k", k);

  auto* gen = app.add_subcommand("gen", "Deterministic instance generators");
  gen->add_option("--kind", kind,
                  "graph|family|tripartition-yes|tripartition-no|case-b|case-c|case-d|case-e")
      ->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--seed", seed);
  gen->add_option("--nu", gen_nu_str);
  gen->add_option("--count", count, "noise members / family size");
  gen->add_option("--permille", permille, "edge probability in permille");
  gen->add_option("--out", out, "output file or prefix (default stdout)");

  auto* exponents = app.add_subcommand("exponents", "Case exponent bases");
  exponents->add_option("--delta", exp_delta_str);
  exponents->add_option("--epsilon", eps_str);
  exponents->add_option("--t3", t3_str);
  exponents->add_option("--t4", t4_str);
  exponents->add_option("--sweep", sweep, "rows across (0, 1/12)");

  auto* bench = app.add_subcommand("bench", "Operation-count micro benchmarks");
  bench->add_option("--n", n, "lattice universe size");
  bench->add_option("--power", r, "Kronecker power for the evaluation pass");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*chromatic) return cmd_chromatic(graph_path, d_str, oracle_check, case_trace);
    if (*setcover) return cmd_setcover(family_path, t, delta_str, oracle_check);
    if (*partition3)
      return cmd_partition3(p1, p2, p3, nu_str, delta_str, b_prime_str, no_force_small, witness,
                            oracle_check);
    if (*list_covers) return cmd_list_covers(family_path, t, nu_str);
    if (*tb) return cmd_tensor_build(tau_str, k, out);
    if (*tk) return cmd_tensor_kron(tau_str, k, r);
    if (*te) return cmd_tensor_eval(tau_str, k, r, seed, decomp_path, oracle_check);
    if (*tv) return cmd_tensor_verify(decomp_path, tau_str, k);
    if (*gen) return cmd_gen(kind, n, seed, gen_nu_str, count, permille, out);
    if (*exponents) return cmd_exponents(exp_delta_str, eps_str, t3_str, t4_str, sweep);
    if (*bench) return cmd_bench(n, r);
  } catch (const tc::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
