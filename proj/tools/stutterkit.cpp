// Command-line front end: classify, partition, reduce, check, truth, batch.
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stutterkit/check.hpp"
#include "stutterkit/hoa.hpp"
#include "stutterkit/kripke.hpp"
#include "stutterkit/ltl.hpp"
#include "stutterkit/petri.hpp"
#include "stutterkit/stutter.hpp"

using namespace stutterkit;
using Clock = std::chrono::steady_clock;

namespace {

struct Opts {
  std::uint64_t state_cap = 1'000'000;
  int rank_cap = -1;  // default: 2n for an n-state complement input
  double timeout_s = 15.0;
  bool require_trusted = false;
};

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--state-cap", o.state_cap,
                  "Cap on explored states per construction (markings, products, "
                  "complements)")
      ->capture_default_str();
  sub->add_option("--rank-cap", o.rank_cap,
                  "Rank bound for complementation (-1 = twice the automaton size)")
      ->capture_default_str();
  sub->add_option("--timeout-s", o.timeout_s, "Classification timeout in seconds")
      ->capture_default_str();
  sub->add_flag("--require-trusted", o.require_trusted,
                "Exit with status 3 when only an untrusted outcome was produced");
}

ExecLimits make_limits(const Opts& o, bool with_deadline) {
  ExecLimits lim;
  lim.state_cap = o.state_cap;
  lim.complement_cap = o.state_cap;
  lim.rank_bound = o.rank_cap;
  if (with_deadline)
    lim.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(o.timeout_s));
  return lim;
}

CheckSettings make_settings(const Opts& o) {
  CheckSettings s;
  s.lim = make_limits(o, false);
  s.classify_timeout_s = o.timeout_s;
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int run_classify(const std::string& formula, const Opts& o) {
  Ltl f = parse_ltl(formula);
  std::cout << to_string(classify_sensitivity(f, make_limits(o, true))) << "\n";
  return 0;
}

int run_partition(const std::string& formula, bool union_si_minus, const Opts& o) {
  Ltl f = parse_ltl(formula);
  LanguagePartition part = partition_language(f, make_limits(o, true), union_si_minus);
  std::cout << to_hoa(part.si_pm, "si_pm") << to_hoa(part.si_minus, "si_minus")
            << to_hoa(part.si_plus, "si_plus") << to_hoa(part.ss, "ss");
  return 0;
}

int run_reduce(const std::string& net_path, const std::string& formula, const Opts&) {
  auto [net, binding] = parse_net(read_file(net_path));
  Ltl f = parse_ltl(formula);
  // The formula's atoms are the observed alphabet; atoms outside it may watch
  // places the reduction removes, so only the restricted binding is emitted.
  PropertyBinding observed;
  for (const std::string& name : atoms_of(f)) {
    auto it = binding.atoms.find(name);
    if (it == binding.atoms.end())
      throw std::invalid_argument("atom '" + name + "' is not bound by the net");
    observed.atoms.emplace(name, it->second);
  }
  auto [reduced, stats] = reduce_fixpoint(net, observed);
  std::cout << write_net(reduced, observed);
  std::cout << "# places_removed=" << stats.places_removed
            << " transitions_removed=" << stats.transitions_removed
            << " agglomerations=" << stats.agglomerations << "\n";
  return 0;
}

int run_check(const std::string& net_path, const std::string& formula,
              const std::string& procedure, const Opts& o) {
  auto [net, binding] = parse_net(read_file(net_path));
  Ltl f = parse_ltl(formula);
  CheckSettings s = make_settings(o);
  Verdict v = procedure == "semi" ? semi_decide(net, binding, f, s)
                                  : revisited_decide(net, binding, f, s);
  std::cout << verdict_json(v).dump(2) << "\n";
  return o.require_trusted && !v.trusted ? 3 : 0;
}

int run_truth(const std::string& net_path, const std::string& formula, const Opts& o) {
  auto [net, binding] = parse_net(read_file(net_path));
  Ltl f = parse_ltl(formula);
  auto t0 = Clock::now();
  auto [holds, witness] = ground_truth_check(net, binding, f, make_settings(o));
  nlohmann::ordered_json j;
  j["outcome"] = holds ? "holds" : "violated";
  if (witness) j["witness"] = format_lasso_literal(*witness);
  j["stats"] = {{"wall_ms", ms_since(t0)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// batch

struct BatchRow {
  std::string formula;
  std::optional<SensitivityClass> cls;
  double classify_ms = 0;
  std::string error;  // parse or classification failure
  std::optional<Verdict> verdict;
  double check_ms = 0;
};

BatchRow run_row(const std::string& text, const PetriNet* net,
                 const PropertyBinding* binding, const std::string& procedure,
                 const Opts& o) {
  BatchRow row;
  row.formula = text;
  Ltl f;
  try {
    f = parse_ltl(text);
  } catch (const parse_error& e) {
    row.error = e.what();
    return row;
  }
  auto t0 = Clock::now();
  try {
    row.cls = classify_sensitivity(f, make_limits(o, true));
  } catch (const resource_error& e) {
    row.error = e.what();
  }
  row.classify_ms = ms_since(t0);
  if (net) {
    auto t1 = Clock::now();
    try {
      CheckSettings s = make_settings(o);
      row.verdict = procedure == "semi" ? semi_decide(*net, *binding, f, s)
                                        : revisited_decide(*net, *binding, f, s);
    } catch (const std::exception& e) {  // unbound atom, resource blowup
      if (row.error.empty()) row.error = e.what();
    }
    row.check_ms = ms_since(t1);
  }
  return row;
}

void print_table(const std::vector<BatchRow>& rows, bool with_net) {
  std::size_t wf = 7;
  for (const BatchRow& r : rows) wf = std::max(wf, r.formula.size());
  std::printf("%-*s  %-5s  %9s", static_cast<int>(wf), "formula", "class", "time-ms");
  if (with_net) std::printf("  %-8s  %-7s  %-28s  %9s", "outcome", "trusted", "procedure", "check-ms");
  std::printf("\n");
  for (const BatchRow& r : rows) {
    const char* cls = r.cls ? to_string(*r.cls) : "-";
    std::printf("%-*s  %-5s  %9.1f", static_cast<int>(wf), r.formula.c_str(), cls,
                r.classify_ms);
    if (with_net) {
      if (r.verdict)
        std::printf("  %-8s  %-7s  %-28s  %9.1f", to_string(r.verdict->outcome),
                    r.verdict->trusted ? "yes" : "no", r.verdict->procedure.c_str(),
                    r.check_ms);
      else
        std::printf("  %-8s  %-7s  %-28s  %9.1f", "-", "-", "-", r.check_ms);
    }
    std::printf("\n");
  }
}

int run_batch(const std::string& formulas_path, const std::string& net_path,
              const std::string& procedure, int jobs, bool as_json, const Opts& o) {
  std::vector<std::string> formulas;
  {
    std::istringstream in(read_file(formulas_path));
    std::string line;
    while (std::getline(in, line)) {
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      std::size_t e = line.find_last_not_of(" \t\r");
      formulas.push_back(line.substr(b, e - b + 1));
    }
  }
  std::optional<std::pair<PetriNet, PropertyBinding>> net;
  if (!net_path.empty()) net = parse_net(read_file(net_path));

  std::vector<BatchRow> rows(formulas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= formulas.size()) return;
      rows[i] = run_row(formulas[i], net ? &net->first : nullptr,
                        net ? &net->second : nullptr, procedure, o);
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::size_t counts[4] = {0, 0, 0, 0};
  std::size_t failed = 0;
  for (const BatchRow& r : rows) {
    if (r.cls)
      ++counts[static_cast<int>(*r.cls)];
    else
      ++failed;
  }

  if (as_json) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const BatchRow& r : rows) {
      nlohmann::ordered_json row;
      row["formula"] = r.formula;
      if (r.cls)
        row["class"] = to_string(*r.cls);
      else
        row["class"] = nullptr;
      if (!r.error.empty()) row["error"] = r.error;
      if (r.verdict) {
        row["outcome"] = to_string(r.verdict->outcome);
        row["trusted"] = r.verdict->trusted;
        row["procedure"] = r.verdict->procedure;
        if (r.verdict->witness) row["witness"] = format_lasso_literal(*r.verdict->witness);
      }
      nlohmann::ordered_json stats;
      stats["classify_ms"] = r.classify_ms;
      if (net) stats["check_ms"] = r.check_ms;
      row["stats"] = std::move(stats);
      j["rows"].push_back(std::move(row));
    }
    j["summary"] = {{"SI", counts[0]},   {"LI", counts[1]},    {"ShI", counts[2]},
                    {"LS", counts[3]},   {"failed", failed},   {"total", rows.size()}};
    j["failures"] = nlohmann::ordered_json::array();
    for (const BatchRow& r : rows)
      if (!r.error.empty()) j["failures"].push_back({{"formula", r.formula}, {"error", r.error}});
    std::cout << j.dump(2) << "\n";
  } else {
    print_table(rows, net.has_value());
    std::printf("\nSI %zu  LI %zu  ShI %zu  LS %zu  failed %zu  total %zu\n", counts[0],
                counts[1], counts[2], counts[3], failed, rows.size());
    for (const BatchRow& r : rows)
      if (!r.error.empty()) std::printf("failure: %s: %s\n", r.formula.c_str(), r.error.c_str());
  }

  if (o.require_trusted) {
    for (const BatchRow& r : rows)
      if (!r.error.empty() || (r.verdict && !r.verdict->trusted)) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stutter-sensitivity classification and reduction-aware LTL checking "
               "for Petri nets"};
  app.require_subcommand(1);
  Opts o;

  std::string formula, net_path, formulas_path;
  std::string procedure = "revisited";
  bool union_si_minus = false;
  int jobs = 1;
  bool as_json = false;

  CLI::App* classify = app.add_subcommand("classify", "Print the sensitivity class of a formula");
  classify->add_option("-f,--formula", formula, "LTL formula")->required();
  add_common(classify, o);

  CLI::App* partition =
      app.add_subcommand("partition", "Emit the four-part language partition as HOA automata "
                                      "(si_pm, si_minus, si_plus, ss)");
  partition->add_option("-f,--formula", formula, "LTL formula")->required();
  partition->add_flag("--union-si-minus", union_si_minus,
                      "Cheaper variant: si_minus and si_plus absorb si_pm");
  add_common(partition, o);

  CLI::App* reduce = app.add_subcommand(
      "reduce", "Apply agglomerations with the formula's atoms observed; print the "
                "reduced net and '# ...' stats");
  reduce->add_option("--net", net_path, "net file")->required();
  reduce->add_option("-f,--formula", formula, "LTL formula")->required();
  add_common(reduce, o);

  CLI::App* check = app.add_subcommand("check", "Decide the formula on the net; print a verdict as JSON");
  check->add_option("--net", net_path, "net file")->required();
  check->add_option("-f,--formula", formula, "LTL formula")->required();
  check->add_option("--procedure", procedure, "semi | revisited")
      ->check(CLI::IsMember({"semi", "revisited"}))
      ->capture_default_str();
  add_common(check, o);

  CLI::App* truth = app.add_subcommand(
      "truth", "Ground truth: full product on the unreduced state space");
  truth->add_option("--net", net_path, "net file")->required();
  truth->add_option("-f,--formula", formula, "LTL formula")->required();
  add_common(truth, o);

  CLI::App* batch = app.add_subcommand(
      "batch", "Classify (and with --net, check) every formula in a file; print an "
               "aligned table or, with --json, a JSON report");
  batch->add_option("--formulas", formulas_path, "file with one LTL formula per line, # comments")
      ->required();
  batch->add_option("--net", net_path, "net file");
  batch->add_option("--procedure", procedure, "semi | revisited")
      ->check(CLI::IsMember({"semi", "revisited"}))
      ->capture_default_str();
  batch->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  batch->add_flag("--json", as_json, "emit the report as JSON instead of a table");
  add_common(batch, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0, usage errors exit 1
  }

  try {
    if (app.got_subcommand(classify)) return run_classify(formula, o);
    if (app.got_subcommand(partition)) return run_partition(formula, union_si_minus, o);
    if (app.got_subcommand(reduce)) return run_reduce(net_path, formula, o);
    if (app.got_subcommand(check)) return run_check(net_path, formula, procedure, o);
    if (app.got_subcommand(truth)) return run_truth(net_path, formula, o);
    if (app.got_subcommand(batch))
      return run_batch(formulas_path, net_path, procedure, jobs, as_json, o);
  } catch (const resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
