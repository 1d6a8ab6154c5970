#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fptmix/fptmix.hpp"
#include "fptmix/gen.hpp"
#include "fptmix/json_io.hpp"
#include "fptmix/parallel.hpp"

using namespace fptmix;
using io::Json;

namespace {

enum Exit { kAccept = 0, kReject = 1, kUsage = 2, kBudget = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::accept:
      return kAccept;
    case Verdict::reject:
      return kReject;
    case Verdict::budget_exceeded:
      return kBudget;
  }
  return kUsage;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) { return io::parse_text(read_file(path)); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

// --budget, else FPTMIX_BUDGET, else the library default
std::uint64_t resolve_budget(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FPTMIX_BUDGET")) {
    std::string s(env);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("FPTMIX_BUDGET must be a non-negative integer");
    try {
      return std::stoull(s);
    } catch (const std::out_of_range&) {
      throw UsageError("FPTMIX_BUDGET out of range");
    }
  }
  return Budget::default_limit;
}

int take_int(const std::optional<std::int64_t>& flag, const Json& doc, const char* name) {
  if (flag) return static_cast<int>(*flag);
  if (auto v = io::optional_int(doc, name)) return static_cast<int>(*v);
  throw UsageError(std::string("--") + name + " is required (flag or instance field)");
}

std::optional<Weight> take_weight(const std::optional<std::int64_t>& flag, const Json& doc) {
  if (flag) return *flag;
  return io::optional_int(doc, "W");
}

Json verdict_json(Verdict v) { return to_string(v); }

Json packing_json(const WeightedSetFamily& fam, const std::vector<std::size_t>& packing) {
  Json out = Json::array();
  for (std::size_t i : packing)
    out.push_back(Json{{"members", io::members_to_json(fam[i].members, fam.universe())}, {"weight", fam[i].weight}});
  return out;
}

struct Common {
  int jobs = 1;
  std::vector<std::string> argv;
};

Json command_echo(const Common& c) { return c.argv; }

// Wall time per phase, in milliseconds since the previous mark.
class Phases {
 public:
  void mark(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    times_[name + "_ms"] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  const Json& json() const { return times_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  Json times_ = Json::object();
};

// ---- solve ----

struct SolveArgs {
  std::string file;
  std::optional<std::int64_t> k, W;
  std::optional<std::uint64_t> budget;
  bool no_reduce = false;
  double c = 0;
  int inv_eps = 0;
  std::string delta = "1/12", gamma = "84/1000";
  double c1 = 1.504, c2 = 1.398, cl = 1.092, cr = 1.876;
  std::uint64_t seed = 1;
};

int solve_kiob_cmd(const SolveArgs& a, const Common& com) {
  Phases ph;
  Json doc = read_json(a.file);
  Digraph g = io::digraph_from_json(doc);
  const int k = take_int(a.k, doc, "k");
  Budget budget(resolve_budget(a.budget));
  KiobOptions opt{a.c, !a.no_reduce, &budget};
  Json out{{"command", command_echo(com)}, {"problem", "kiob"}, {"k", k}};
  ph.mark("parse");
  try {
    auto r = solve_kiob(g, k, opt);
    ph.mark("solve");
    if (r.accept) {
      if (auto bad = check_branching(g, r.branching)) throw std::logic_error("witness failed verification: " + *bad);
      out["witness"] = io::to_json(r.branching);
      ph.mark("verify");
    }
    out["accept"] = r.accept;
    out["verdict"] = verdict_json(r.accept ? Verdict::accept : Verdict::reject);
    out["peak_family"] = r.peak_family;
    out["timings"] = ph.json();
    print(out);
    return r.accept ? kAccept : kReject;
  } catch (const BudgetExceeded&) {
    out["accept"] = false;
    out["verdict"] = verdict_json(Verdict::budget_exceeded);
    ph.mark("solve");
    out["timings"] = ph.json();
    print(out);
    return kBudget;
  }
}

int solve_kpath_cmd(const SolveArgs& a, const Common& com) {
  Phases ph;
  Json doc = read_json(a.file);
  Digraph g = io::digraph_from_json(doc);
  const int k = take_int(a.k, doc, "k");
  auto W = take_weight(a.W, doc);
  if (!W) throw UsageError("--W is required (flag or instance field)");
  ph.mark("parse");
  PathAlgOptions opt;
  opt.inv_eps = a.inv_eps;
  opt.delta = Rational::parse(a.delta);
  opt.gamma = Rational::parse(a.gamma);
  opt.tradeoffs = {a.c1, a.c2, a.cl, a.cr};
  opt.budget = resolve_budget(a.budget);
  opt.seed = a.seed;
  auto r = path_alg(g, *W, k, opt);
  ph.mark("solve");
  Json out{{"command", command_echo(com)}, {"problem", "kpath"}, {"k", k}, {"W", *W}, {"seed", a.seed}};
  out["verdict"] = verdict_json(r.verdict);
  out["planned_work"] = r.planned_work;
  out["exhaustive_fallback"] = r.used_fallback;
  if (r.verdict == Verdict::accept) {
    auto chk = check_kpath(g, r.path, k, *W);
    if (auto* bad = std::get_if<std::string>(&chk)) throw std::logic_error("witness failed verification: " + *bad);
    out["weight"] = r.weight;
    out["path"] = r.path;
    ph.mark("verify");
  }
  out["timings"] = ph.json();
  print(out);
  return exit_for(r.verdict);
}

int solve_kcwp_cmd(const SolveArgs& a, const Common& com) {
  Phases ph;
  Json doc = read_json(a.file);
  KcwpInstance in = io::kcwp_from_json(doc);
  ph.mark("parse");
  Budget budget(resolve_budget(a.budget));
  KcwpOptions opt;
  opt.reduce = !a.no_reduce;
  opt.budget = &budget;
  Json out{{"command", command_echo(com)}, {"problem", "kcwp"}, {"k", in.k}, {"W", in.W}};
  try {
    auto r = solve_kcwp(in, opt);
    ph.mark("solve");
    out["accept"] = r.accept;
    out["verdict"] = verdict_json(r.accept ? Verdict::accept : Verdict::reject);
    out["peak_family"] = r.peak_family;
    if (r.accept) {
      auto chk = check_kcwp_solution(in, r.pieces);
      if (auto* bad = std::get_if<std::string>(&chk)) throw std::logic_error("witness failed verification: " + *bad);
      out["weight"] = r.weight;
      out["pieces"] = r.pieces;
      if (kcwp_piece_chain(in)) out["path"] = assemble_kcwp_path(in, r.pieces);
      ph.mark("verify");
    }
    out["timings"] = ph.json();
    print(out);
    return r.accept ? kAccept : kReject;
  } catch (const BudgetExceeded&) {
    out["accept"] = false;
    out["verdict"] = verdict_json(Verdict::budget_exceeded);
    ph.mark("solve");
    out["timings"] = ph.json();
    print(out);
    return kBudget;
  }
}

int solve_wsp_cmd(const SolveArgs& a, const Common& com) {
  Phases ph;
  Json doc = read_json(a.file);
  WeightedSetFamily fam = io::setfamily_from_json(doc, Objective::max);
  const int k = take_int(a.k, doc, "k");
  auto W = take_weight(a.W, doc);
  if (!W) throw UsageError("--W is required (flag or instance field)");
  ph.mark("parse");
  WspOptions opt;
  opt.inv_eps = a.inv_eps;
  opt.c = a.c;
  opt.reduce = !a.no_reduce;
  opt.budget = resolve_budget(a.budget);
  opt.jobs = com.jobs;
  auto r = wsp_alg(fam, *W, k, opt);
  ph.mark("solve");
  Json out{{"command", command_echo(com)}, {"problem", "wsp"}, {"k", k}, {"W", *W}};
  out["verdict"] = verdict_json(r.verdict);
  out["cuts_tried"] = r.cuts_tried;
  out["peak_family"] = r.peak_family;
  if (r.verdict == Verdict::accept) {
    auto chk = check_set_packing(fam, r.packing, k, *W);
    if (auto* bad = std::get_if<std::string>(&chk)) throw std::logic_error("witness failed verification: " + *bad);
    out["weight"] = r.weight;
    out["packing"] = packing_json(fam, r.packing);
    ph.mark("verify");
  }
  out["timings"] = ph.json();
  print(out);
  return exit_for(r.verdict);
}

int solve_p2p_cmd(const SolveArgs& a, const Common& com) {
  Phases ph;
  Json doc = read_json(a.file);
  Graph g = io::graph_from_json(doc);
  const int k = take_int(a.k, doc, "k");
  ph.mark("parse");
  P2Options opt;
  opt.inv_eps = a.inv_eps;
  opt.c = a.c;
  opt.reduce = !a.no_reduce;
  opt.budget = resolve_budget(a.budget);
  auto r = solve_p2packing(g, k, opt);
  ph.mark("solve");
  Json out{{"command", command_echo(com)}, {"problem", "p2p"}, {"k", k}};
  out["verdict"] = verdict_json(r.verdict);
  out["rounds"] = r.rounds;
  out["peak_family"] = r.peak_family;
  if (r.verdict == Verdict::accept) {
    if (auto bad = check_packing(g, r.packing); bad || static_cast<int>(r.packing.size()) != k)
      throw std::logic_error("witness failed verification");
    out["packing"] = io::to_json(r.packing);
    ph.mark("verify");
  }
  out["timings"] = ph.json();
  print(out);
  return exit_for(r.verdict);
}

// ---- check (oracles) ----

int check_cmd(const std::string& problem, const SolveArgs& a) {
  Json doc = read_json(a.file);
  Budget budget(resolve_budget(a.budget));
  Json out{{"problem", problem}, {"oracle", true}};
  Verdict v = Verdict::reject;
  try {
    if (problem == "kiob") {
      Digraph g = io::digraph_from_json(doc);
      const int k = take_int(a.k, doc, "k");
      auto best = oracle_kiob(g, &budget);
      out["k"] = k;
      out["optimum"] = best ? Json(best->internal) : Json(nullptr);
      v = best && best->internal >= k ? Verdict::accept : Verdict::reject;
    } else if (problem == "kpath") {
      Digraph g = io::digraph_from_json(doc);
      const int k = take_int(a.k, doc, "k");
      auto W = take_weight(a.W, doc);
      auto best = oracle_kpath(g, k, &budget);
      out["k"] = k;
      out["optimum"] = best ? Json(best->weight) : Json(nullptr);
      if (best) out["path"] = best->nodes;
      v = best && (!W || best->weight <= *W) ? Verdict::accept : Verdict::reject;
    } else if (problem == "wsp") {
      WeightedSetFamily fam = io::setfamily_from_json(doc, Objective::max);
      const int k = take_int(a.k, doc, "k");
      auto W = take_weight(a.W, doc);
      auto best = oracle_wsp(fam, k, &budget);
      out["k"] = k;
      out["optimum"] = best ? Json(*best) : Json(nullptr);
      v = best && (!W || *best >= *W) ? Verdict::accept : Verdict::reject;
    } else if (problem == "p2p") {
      Graph g = io::graph_from_json(doc);
      const int k = take_int(a.k, doc, "k");
      out["k"] = k;
      if (g.size() <= 20) {
        int best = oracle_p2p(g);
        out["optimum"] = best;
        v = best >= k ? Verdict::accept : Verdict::reject;
      } else {
        v = oracle_p2p_search(g, k, &budget) ? Verdict::accept : Verdict::reject;
      }
    } else if (problem == "kcwp") {
      KcwpInstance in = io::kcwp_from_json(doc);
      if (auto bad = validate_kcwp(in)) throw InvalidInput(*bad);
      auto best = oracle_kcwp(in, &budget);
      out["k"] = in.k;
      out["optimum"] = best ? Json(*best) : Json(nullptr);
      v = best && *best <= in.W ? Verdict::accept : Verdict::reject;
    } else if (problem == "matching") {
      Graph g = io::graph_from_json(doc);
      if (g.size() > 22) throw InvalidInput("matching oracle limited to 22 nodes");
      int best = oracle_matching(g);
      out["optimum"] = best;
      v = a.k && best < *a.k ? Verdict::reject : Verdict::accept;
    } else {
      throw UsageError("unknown problem: " + problem);
    }
  } catch (const BudgetExceeded&) {
    v = Verdict::budget_exceeded;
  }
  out["verdict"] = verdict_json(v);
  print(out);
  return exit_for(v);
}

// ---- bounds ----

std::string fmt(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string fmt_delta(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2e", x);
  return buf;
}

struct TableOut {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void print() const {
    std::vector<std::size_t> w(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      w[c] = header[c].size();
      for (const auto& r : rows) w[c] = std::max(w[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t c = 0; c < r.size(); ++c) {
        s += r[c];
        if (c + 1 < r.size()) s += std::string(w[c] - r[c].size() + 2, ' ');
      }
      std::cout << s << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

void add_cells(std::vector<std::string>& row, double ours, double paper, int digits) {
  row.push_back(fmt(ours, digits));
  row.push_back(fmt(paper, digits));
  row.push_back(fmt_delta(ours - paper));
}

int bounds_cmd(const std::string& which, const std::vector<std::string>& params) {
  namespace b = fptmix::bounds;
  if (which == "eval") throw UsageError("use: bounds eval <kiob-det|kiob-rand|kpath|wsp|p2p> --param name=value");
  TableOut t;
  if (which == "table1") {
    t.header = {"c", "alpha", "paper", "delta", "first", "paper", "delta", "threshold", "paper", "delta",
                "beta",  "paper", "delta", "second", "paper", "delta"};
    for (const auto& ref : b::table1_reference()) {
      auto r = b::alpha_beta_row(ref.params[0]);
      std::vector<std::string> row{fmt(ref.params[0], 3)};
      add_cells(row, r.alpha, ref.values[0], 5);
      add_cells(row, r.first, ref.values[1], 3);
      add_cells(row, r.threshold, ref.values[2], 5);
      add_cells(row, r.beta, ref.values[3], 5);
      add_cells(row, r.second, ref.values[4], 5);
      t.rows.push_back(row);
    }
  } else if (which == "table2") {
    t.header = {"c", "base", "paper", "delta"};
    for (const auto& ref : b::table2_reference()) {
      std::vector<std::string> row{fmt(ref.params[0], 3)};
      add_cells(row, b::kiob_det_bound(ref.params[0]), ref.values[0], 5);
      t.rows.push_back(row);
    }
  } else if (which == "table3") {
    t.header = {"l*/k", "c", "base", "paper", "delta", "2^(1+l*/k)"};
    for (const auto& ref : b::table3_reference()) {
      std::vector<std::string> row{fmt(ref.params[0], 4), fmt(ref.params[1], 3)};
      add_cells(row, b::kiob_rand_bound(ref.params[1], ref.params[0]), ref.values[0], 9);
      row.push_back(fmt(b::kiob_rand_cross_term(ref.params[0]), 6));
      t.rows.push_back(row);
    }
  } else if (which == "table4") {
    t.header = {"delta", "gamma", "c1", "c2", "cl", "cr", "Z", "paper", "delta", "Z1", "paper", "delta",
                "Z2",    "paper", "delta", "Z1_arg", "Z2_arg"};
    for (const auto& ref : b::table4_reference()) {
      const auto& p = ref.params;
      auto r = b::kpath_bound({p[0], p[1], p[2], p[3], p[4], p[5]});
      std::vector<std::string> row{fmt(p[0], 3), fmt(p[1], 3), fmt(p[2], 3), fmt(p[3], 3), fmt(p[4], 3), fmt(p[5], 3)};
      add_cells(row, r.z, ref.values[0], 7);
      add_cells(row, r.z1, ref.values[1], 7);
      add_cells(row, r.z2, ref.values[2], 7);
      row.push_back(fmt(r.z1_arg, 6));
      row.push_back(fmt(r.z2_arg, 6));
      t.rows.push_back(row);
    }
  } else if (which == "table5") {
    t.header = {"c", "base", "paper", "delta", "i", "paper", "delta", "T(i-1)", "paper", "delta"};
    for (const auto& ref : b::table5_reference()) {
      auto r = b::wsp_bound(ref.params[0]);
      std::vector<std::string> row{fmt(ref.params[0], 3)};
      add_cells(row, r.value, ref.values[0], 6);
      add_cells(row, static_cast<double>(r.i), ref.values[1], 0);
      add_cells(row, r.T, ref.values[2], 7);
      t.rows.push_back(row);
    }
  } else if (which == "p2p") {
    t.header = {"eps", "base", "paper", "delta", "i", "paper", "delta", "T(i-1)", "paper", "delta"};
    const auto& ref = b::p2p_reference();
    auto r = b::p2p_bound(ref.params[0]);
    std::vector<std::string> row{"1e-05"};
    add_cells(row, r.value, ref.values[0], 5);
    add_cells(row, static_cast<double>(r.i), ref.values[1], 0);
    add_cells(row, r.T, ref.values[2], 5);
    t.rows.push_back(row);
  } else {
    std::map<std::string, double> kv;
    for (const auto& p : params) {
      auto eq = p.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects name=value");
      try {
        kv[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--param value is not a number: " + p);
      }
    }
    auto v = b::eval_bound(which, kv);
    Json out{{"bound", which}, {"base", v.base}};
    for (const auto& [name, x] : v.argmax) out["details"][name] = x;
    print(out);
    return kAccept;
  }
  t.print();
  return kAccept;
}

// ---- universal sets ----

int uniset_cmd(int n, int k, int p, const std::string& mode, const std::optional<std::uint64_t>& seed) {
  UnisetMode m = parse_uniset_mode(mode);
  if (m == UnisetMode::randomized && !seed) throw UsageError("randomized mode requires --seed");
  auto u = build_universal(n, k, p, m, seed);
  for (const auto& f : u.functions) {
    std::string line(n, '0');
    f.for_each([&](int e) { line[e] = '1'; });
    std::cout << line << "\n";
  }
  return kAccept;
}

int check_uniset_cmd(const std::string& file, int n, int k, int p) {
  detail::check_uniset_params(n, k, p);
  std::istringstream in(read_file(file));
  UniversalSet u{n, k, p, {}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != n || line.find_first_not_of("01") != std::string::npos)
      throw UsageError("line " + std::to_string(lineno) + " is not a 0/1 string of length n");
    ElementSet f;
    for (int e = 0; e < n; ++e)
      if (line[e] == '1') f.insert(e);
    u.functions.push_back(f);
  }
  if (auto miss = find_uncovered(u)) {
    auto show = [](const ElementSet& s) {
      std::string out = "{";
      bool first = true;
      s.for_each([&](int e) {
        out += (first ? "" : ",") + std::to_string(e);
        first = false;
      });
      return out + "}";
    };
    std::cout << "invalid: no function is 1 on " << show(miss->first) << " and 0 on " << show(miss->second) << "\n";
    return kReject;
  }
  std::cout << "valid: " << u.functions.size() << " functions\n";
  return kAccept;
}

// ---- representative families ----

int repfam_cmd(const std::string& spec_file, const std::string& family_file, const std::string& objective, bool verify) {
  Objective obj;
  if (objective == "max")
    obj = Objective::max;
  else if (objective == "min")
    obj = Objective::min;
  else
    throw UsageError("--objective must be max or min");
  WeightedSetFamily fam = io::setfamily_from_json(read_json(family_file), obj);
  auto parts = io::partition_from_json(read_json(spec_file), fam.universe());
  RepStats stats;
  auto rep = gen_rep_alg(fam, parts, obj, &stats);
  Json out{{"family", io::to_json(rep)},
           {"stats",
            {{"inputSize", stats.input_size}, {"outputSize", stats.output_size}, {"productFamilySize", stats.product_size}}}};
  int code = kAccept;
  if (verify) {
    auto bad = find_representation_violation(fam, rep, parts, obj);
    out["valid"] = !bad.has_value();
    if (bad) {
      out["violation"] = *bad;
      code = kReject;
    }
  }
  print(out);
  return code;
}

// ---- matching ----

int matching_cmd(const std::string& file) {
  Graph g = io::graph_from_json(read_json(file));
  auto m = max_matching(g);
  if (!is_matching(g, m)) throw std::logic_error("matching failed verification");
  Json edges = Json::array();
  for (auto [u, v] : m) edges.push_back({std::min(u, v), std::max(u, v)});
  std::sort(edges.begin(), edges.end());
  print(Json{{"size", m.size()}, {"edges", edges}});
  return kAccept;
}

// ---- generator ----

struct GenArgs {
  std::string kind;
  int n = -1;
  double density = 0.3;
  int sets = 10;
  Weight wmin = 1, wmax = 9;
  std::optional<int> plant;
  std::optional<std::uint64_t> seed;
  std::string out, cert;
};

int gen_cmd(const GenArgs& a) {
  if (!a.seed) throw UsageError("gen requires --seed");
  if (a.n < 0) throw UsageError("--n is required");
  if (a.wmin > a.wmax) throw UsageError("--wmin exceeds --wmax");
  if (a.density < 0 || a.density > 1) throw UsageError("--density must lie in [0, 1]");
  gen::Rng rng(*a.seed);
  gen::WeightRange w{a.wmin, a.wmax};
  Json doc, cert;
  if (a.kind == "digraph") {
    Digraph g = gen::digraph(a.n, a.density, w, rng);
    if (a.plant) {
      auto path = gen::plant_path(g, *a.plant, w, rng);
      Weight total = 0;
      for (std::size_t t = 0; t + 1 < path.size(); ++t) total = checked_add(total, g.weight(path[t], path[t + 1]));
      cert = Json{{"kind", "kpath"}, {"k", *a.plant}, {"path", path}, {"weight", total}};
      doc = io::to_json(g);
      doc["k"] = *a.plant;
      doc["W"] = total;
    } else {
      doc = io::to_json(g);
    }
  } else if (a.kind == "graph") {
    Graph g = gen::graph(a.n, a.density, rng);
    if (a.plant) {
      auto packing = gen::plant_p2(g, *a.plant, rng);
      cert = Json{{"kind", "p2p"}, {"k", *a.plant}, {"packing", io::to_json(packing)}};
      doc = io::to_json(g);
      doc["k"] = *a.plant;
    } else {
      doc = io::to_json(g);
    }
  } else if (a.kind == "setfamily") {
    WeightedSetFamily fam = gen::setfamily(a.n, a.sets, w, rng);
    if (a.plant) {
      auto idx = gen::plant_sets(fam, *a.plant, w, rng);
      Weight total = 0;
      Json sets = Json::array();
      for (std::size_t i : idx) {
        total = checked_add(total, fam[i].weight);
        sets.push_back(Json{{"members", io::members_to_json(fam[i].members, fam.universe())}, {"weight", fam[i].weight}});
      }
      cert = Json{{"kind", "wsp"}, {"k", *a.plant}, {"sets", sets}, {"weight", total}};
      doc = io::to_json(fam);
      doc["k"] = *a.plant;
      doc["W"] = total;
    } else {
      doc = io::to_json(fam);
    }
  } else {
    throw UsageError("unknown kind: " + a.kind);
  }
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  if (a.plant) {
    std::string cert_path = !a.cert.empty() ? a.cert : (a.out.empty() ? "" : a.out + ".cert.json");
    if (cert_path.empty())
      std::cerr << cert.dump(2) << "\n";
    else
      write_file(cert_path, cert.dump(2) + "\n");
  }
  return kAccept;
}

// ---- bench ----

struct BenchRow {
  std::string name, problem;
  std::string file;  // instance document, or empty for generated rows
  Json doc;
  int k = 0;
  std::optional<Weight> W;
  int inv_eps = 2;
};

struct BenchResult {
  std::string verdict, oracle, agree;
  double wall_ms = 0;
  std::size_t peak = 0;
};

std::vector<BenchRow> builtin_suite(const std::string& name) {
  std::vector<BenchRow> rows;
  if (name == "empty") return rows;
  if (name != "small" && name != "tiny-budget") throw UsageError("missing suite: " + name);
  for (int s = 1; s <= 4; ++s) {
    gen::Rng rng(1000 + s);
    Digraph d = gen::digraph(6 + s % 3, 0.3, {1, 9}, rng);
    gen::make_reachable(d, 0, {1, 9}, rng);
    rows.push_back({"kiob-" + std::to_string(s), "kiob", "", io::to_json(d), 1 + s % 3, std::nullopt, 2});
    Graph g = gen::graph(7 + s, 0.25, rng);
    rows.push_back({"p2p-" + std::to_string(s), "p2p", "", io::to_json(g), 1 + s % 2, std::nullopt, 1 + s % 2});
    WeightedSetFamily f = gen::setfamily(7 + s, 8, {1, 9}, rng);
    rows.push_back({"wsp-" + std::to_string(s), "wsp", "", io::to_json(f), 1 + s % 2, 10, 1 + s % 2});
    Digraph p = gen::digraph(7, 0.35, {1, 9}, rng);
    rows.push_back({"kpath-" + std::to_string(s), "kpath", "", io::to_json(p), 3 + s % 2, 14, 13});
  }
  return rows;
}

std::vector<BenchRow> file_suite(const std::string& path) {
  Json suite = read_json(path);
  if (!suite.is_object() || !suite.contains("rows") || !suite["rows"].is_array())
    throw ParseError("suite file needs a \"rows\" array");
  const auto dir = std::filesystem::path(path).parent_path();
  std::vector<BenchRow> rows;
  for (const auto& r : suite["rows"]) {
    BenchRow row;
    row.problem = r.at("problem").get<std::string>();
    row.file = (dir / r.at("instance").get<std::string>()).string();
    row.name = r.value("name", r.at("instance").get<std::string>());
    row.doc = read_json(row.file);
    row.k = static_cast<int>(r.contains("k") ? r.at("k").get<std::int64_t>() : row.doc.at("k").get<std::int64_t>());
    if (r.contains("W"))
      row.W = r.at("W").get<std::int64_t>();
    else
      row.W = io::optional_int(row.doc, "W");
    row.inv_eps = static_cast<int>(r.value("inv_eps", 2));
    rows.push_back(row);
  }
  return rows;
}

BenchResult run_row(const BenchRow& row, std::uint64_t budget) {
  BenchResult res;
  Verdict v = Verdict::reject;
  std::optional<bool> truth;
  const std::uint64_t oracle_budget = 50'000'000;
  auto t0 = std::chrono::steady_clock::now();
  if (row.problem == "kiob") {
    Digraph g = io::digraph_from_json(row.doc);
    Budget b(budget);
    try {
      auto r = solve_kiob(g, row.k, KiobOptions{1.497, true, &b});
      v = r.accept ? Verdict::accept : Verdict::reject;
      res.peak = r.peak_family;
    } catch (const BudgetExceeded&) {
      v = Verdict::budget_exceeded;
    }
    auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    Budget ob(oracle_budget);
    try {
      auto o = oracle_kiob(g, &ob);
      truth = o && o->internal >= row.k;
    } catch (const BudgetExceeded&) {
    }
  } else if (row.problem == "wsp") {
    WeightedSetFamily f = io::setfamily_from_json(row.doc, Objective::max);
    const Weight W = row.W.value_or(0);
    WspOptions opt;
    opt.inv_eps = row.inv_eps;
    opt.budget = budget;
    auto r = wsp_alg(f, W, row.k, opt);
    v = r.verdict;
    res.peak = r.peak_family;
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Budget ob(oracle_budget);
    try {
      auto o = oracle_wsp(f, row.k, &ob);
      truth = o && *o >= W;
    } catch (const BudgetExceeded&) {
    }
  } else if (row.problem == "p2p") {
    Graph g = io::graph_from_json(row.doc);
    P2Options opt;
    opt.inv_eps = row.inv_eps;
    opt.budget = budget;
    auto r = solve_p2packing(g, row.k, opt);
    v = r.verdict;
    res.peak = r.peak_family;
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (g.size() <= 20) truth = oracle_p2p(g) >= row.k;
  } else if (row.problem == "kpath") {
    Digraph g = io::digraph_from_json(row.doc);
    const Weight W = row.W.value_or(std::numeric_limits<Weight>::max());
    PathAlgOptions opt;
    opt.inv_eps = row.inv_eps;
    opt.budget = budget;
    auto r = path_alg(g, W, row.k, opt);
    v = r.verdict;
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Budget ob(oracle_budget);
    try {
      auto o = oracle_kpath(g, row.k, &ob);
      truth = o && o->weight <= W;
    } catch (const BudgetExceeded&) {
    }
  } else {
    throw UsageError("unknown problem in suite: " + row.problem);
  }
  res.verdict = to_string(v);
  res.oracle = truth ? (*truth ? "accept" : "reject") : "skipped";
  if (!truth || v == Verdict::budget_exceeded)
    res.agree = "-";
  else
    res.agree = (v == Verdict::accept) == *truth ? "yes" : "no";
  return res;
}

int bench_cmd(const std::string& suite, const std::string& format, bool timing, const std::optional<std::uint64_t>& flag,
              const Common& com) {
  std::vector<BenchRow> rows =
      std::filesystem::is_regular_file(suite) ? file_suite(suite) : builtin_suite(suite);
  std::uint64_t budget = resolve_budget(flag);
  if (suite == "tiny-budget") budget = 1;
  std::vector<BenchResult> results(rows.size());
  parallel_for(rows.size(), com.jobs, [&](std::size_t i) { results[i] = run_row(rows[i], budget); });
  bool all_agree = true;
  for (const auto& r : results) all_agree = all_agree && r.agree != "no";
  auto wall = [&](const BenchResult& r) { return timing ? fmt(r.wall_ms, 3) : std::string("-"); };
  if (format == "json") {
    Json out = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
      out.push_back(Json{{"instance", rows[i].name},
                         {"problem", rows[i].problem},
                         {"k", rows[i].k},
                         {"verdict", results[i].verdict},
                         {"oracle", results[i].oracle},
                         {"agree", results[i].agree},
                         {"wall_ms", timing ? Json(results[i].wall_ms) : Json(nullptr)},
                         {"peak_family", results[i].peak}});
    print(out);
  } else if (format == "csv") {
    std::cout << "instance,problem,k,verdict,oracle,agree,wall_ms,peak_family\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      std::cout << rows[i].name << "," << rows[i].problem << "," << rows[i].k << "," << results[i].verdict << ","
                << results[i].oracle << "," << results[i].agree << "," << wall(results[i]) << "," << results[i].peak
                << "\n";
  } else {
    throw UsageError("--format must be csv or json");
  }
  return all_agree ? kAccept : kReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpt-mix: universal sets, representative families and parameterized solvers"};
  app.name("fpt-mix");
  app.require_subcommand(1);
  Common com;
  com.argv.emplace_back("fpt-mix");
  for (int i = 1; i < argc; ++i) com.argv.emplace_back(argv[i]);
  app.fallthrough();
  app.add_option("--jobs", com.jobs, "worker threads for cut enumeration and bench rows")->check(CLI::PositiveNumber);

  std::function<int()> action;

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver");
  solve->require_subcommand(1);
  static SolveArgs sa;
  auto common_solve = [&](CLI::App* s) {
    s->add_option("instance", sa.file, "instance JSON")->required();
    s->add_option("--budget", sa.budget, "enumeration cap (overrides FPTMIX_BUDGET)");
    s->add_flag("--no-reduce", sa.no_reduce, "disable representative-family reduction");
  };
  {
    auto* s = solve->add_subcommand("kiob", "k-internal out-branching");
    common_solve(s);
    s->add_option("--k", sa.k);
    s->add_option("--c", sa.c)->default_val(1.497);
    s->callback([&] { action = [&] { return solve_kiob_cmd(sa, com); }; });
  }
  {
    auto* s = solve->add_subcommand("kpath", "weighted k-path");
    common_solve(s);
    s->add_option("--k", sa.k);
    s->add_option("--W", sa.W);
    s->add_option("--inv-eps", sa.inv_eps)->default_val(13);
    s->add_option("--delta", sa.delta)->default_val("1/12");
    s->add_option("--gamma", sa.gamma)->default_val("84/1000");
    s->add_option("--c1", sa.c1)->default_val(1.504);
    s->add_option("--c2", sa.c2)->default_val(1.398);
    s->add_option("--cl", sa.cl)->default_val(1.092);
    s->add_option("--cr", sa.cr)->default_val(1.876);
    s->add_option("--seed", sa.seed)->default_val(1);
    s->callback([&] { action = [&] { return solve_kpath_cmd(sa, com); }; });
  }
  {
    auto* s = solve->add_subcommand("kcwp", "cut-path instance (inner solver)");
    common_solve(s);
    s->callback([&] { action = [&] { return solve_kcwp_cmd(sa, com); }; });
  }
  {
    auto* s = solve->add_subcommand("wsp", "weighted 3-set k-packing");
    common_solve(s);
    s->add_option("--k", sa.k);
    s->add_option("--W", sa.W);
    s->add_option("--inv-eps", sa.inv_eps)->default_val(2);
    s->add_option("--c", sa.c)->default_val(1.591);
    s->callback([&] { action = [&] { return solve_wsp_cmd(sa, com); }; });
  }
  {
    auto* s = solve->add_subcommand("p2p", "P2-packing");
    common_solve(s);
    s->add_option("--k", sa.k);
    s->add_option("--inv-eps", sa.inv_eps)->default_val(2);
    s->add_option("--c", sa.c)->default_val(1.0);
    s->callback([&] { action = [&] { return solve_p2p_cmd(sa, com); }; });
  }

  // check
  static std::string problem;
  static SolveArgs ca;
  {
    auto* s = app.add_subcommand("check", "oracle verdict");
    s->add_option("problem", problem, "kiob|kpath|wsp|p2p|kcwp|matching")->required();
    s->add_option("instance", ca.file)->required();
    s->add_option("--k", ca.k);
    s->add_option("--W", ca.W);
    s->add_option("--budget", ca.budget);
    s->callback([&] { action = [&] { return check_cmd(problem, ca); }; });
  }

  // bounds
  static std::string which;
  static std::vector<std::string> params;
  {
    auto* s = app.add_subcommand("bounds", "running-time bound tables");
    s->add_option("which", which, "table1..table5 | p2p | kiob-det | kiob-rand | kpath | wsp")->required();
    s->add_option("--param", params, "name=value for single evaluations");
    s->callback([&] { action = [&] { return bounds_cmd(which, params); }; });
  }

  // uniset / check-uniset
  static int un = -1, uk = -1, up = -1;
  static std::string mode = "greedy", ufile;
  static std::optional<std::uint64_t> useed;
  {
    auto* s = app.add_subcommand("uniset", "build an (n,k,p)-universal set");
    s->add_option("--n", un)->required();
    s->add_option("--k", uk)->required();
    s->add_option("--p", up)->required();
    s->add_option("--mode", mode)->check(CLI::IsMember({"greedy", "rand", "exhaustive"}));
    s->add_option("--seed", useed);
    s->callback([&] { action = [&] { return uniset_cmd(un, uk, up, mode, useed); }; });
  }
  {
    auto* s = app.add_subcommand("check-uniset", "verify a universal set");
    s->add_option("file", ufile)->required();
    s->add_option("--n", un)->required();
    s->add_option("--k", uk)->required();
    s->add_option("--p", up)->required();
    s->callback([&] { action = [&] { return check_uniset_cmd(ufile, un, uk, up); }; });
  }

  // repfam
  static std::string rspec, rfam, robj = "max";
  static bool rverify = false;
  {
    auto* s = app.add_subcommand("repfam", "generalized representative family");
    s->add_option("--spec", rspec)->required();
    s->add_option("--family", rfam)->required();
    s->add_option("--objective", robj);
    s->add_flag("--verify", rverify, "re-check the representation property exhaustively");
    s->callback([&] { action = [&] { return repfam_cmd(rspec, rfam, robj, rverify); }; });
  }

  // matching
  static std::string mfile;
  {
    auto* s = app.add_subcommand("matching", "maximum matching");
    s->add_option("graph", mfile)->required();
    s->callback([&] { action = [&] { return matching_cmd(mfile); }; });
  }

  // gen
  static GenArgs ga;
  {
    auto* s = app.add_subcommand("gen", "seeded instance generator");
    s->add_option("kind", ga.kind, "digraph|graph|setfamily")->required()->check(CLI::IsMember({"digraph", "graph", "setfamily"}));
    s->add_option("--n", ga.n)->required();
    s->add_option("--density", ga.density);
    s->add_option("--sets", ga.sets);
    s->add_option("--wmin", ga.wmin);
    s->add_option("--wmax", ga.wmax);
    s->add_option("--plant", ga.plant, "plant a k-path / k-packing / k disjoint sets");
    s->add_option("--seed", ga.seed);
    s->add_option("--out", ga.out);
    s->add_option("--cert", ga.cert, "certificate path (default <out>.cert.json)");
    s->callback([&] { action = [&] { return gen_cmd(ga); }; });
  }

  // bench
  static std::string suite, format = "csv";
  static bool no_timing = false;
  static std::optional<std::uint64_t> bbudget;
  {
    auto* s = app.add_subcommand("bench", "run a suite and cross-check with oracles");
    s->add_option("suite", suite, "empty | small | tiny-budget | suite.json")->required();
    s->add_option("--format", format);
    s->add_flag("--no-timing", no_timing, "print '-' for wall times");
    s->add_option("--budget", bbudget);
    s->callback([&] { action = [&] { return bench_cmd(suite, format, !no_timing, bbudget, com); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
