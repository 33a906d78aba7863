#include "bhlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bhlab/algorithms.hpp"
#include "bhlab/analysis.hpp"
#include "bhlab/bruteforce.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/report.hpp"
#include "json.hpp"

namespace bhlab {

namespace {

using nlohmann::json;

struct Config {
  json document;
  json experiment = json::object();
};

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  Config config;
  try {
    in >> config.document;
  } catch (const json::exception& e) {
    throw SpecError("spec file " + path + ": " + e.what());
  }
  if (config.document.is_object() && config.document.contains("experiment")) {
    config.experiment = config.document["experiment"];
    if (!config.experiment.is_object()) throw SpecError("\"experiment\" must be an object");
  }
  return config;
}

// Flags beat the config file's "experiment" stanza, which beats defaults.
template <typename T>
T resolve(const CLI::Option* opt, const T& flag, const json& experiment, const char* key, T fallback) {
  if (opt != nullptr && opt->count() > 0) return flag;
  if (experiment.contains(key)) {
    try {
      return experiment[key].get<T>();
    } catch (const json::exception&) {
      throw SpecError(std::string("experiment.") + key + " has the wrong type");
    }
  }
  return fallback;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BHLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw SpecError("BHLAB_SEED is not an unsigned integer");
    }
  }
  return 0;
}

unsigned default_jobs() { return std::max(1U, std::thread::hardware_concurrency()); }

InputWord obtain_input(const ProblemSpec& spec, const std::string& text, const std::string& file,
                       std::uint64_t seed) {
  if (!text.empty()) return InputWord::from_string(text);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw MalformedInput("cannot open input file " + file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return InputWord::from_string(buffer.str());
  }
  Rng rng(mix64(seed));
  return encode_input(spec, generate_segments(spec, rng));
}

// Options shared by the commands that take a spec and an algorithm.
struct Common {
  std::string spec_path;
  std::string alg;
  std::string input;
  std::string input_file;
  std::uint64_t seed = 0;
  double eps = 0.0;
  unsigned jobs = 1;
  bool no_validate_tail = false;

  CLI::Option* alg_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* input_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool with_alg) {
  cmd->add_option("--spec", c.spec_path, "Problem spec JSON (optionally with an \"experiment\" stanza)")->required();
  if (with_alg) {
    c.alg_opt = cmd->add_option("--alg", c.alg, "qalg-b | qalg-a | ralg-a | ibh | table:<file>");
    c.eps_opt = cmd->add_option("--eps", c.eps, "Subroutine error probability for ralg-a");
    c.input_opt = cmd->add_option("--input", c.input, "Input word over 0/1/2 (default: generated from the seed)");
    cmd->add_option("--input-file", c.input_file, "File holding the input word");
    cmd->add_flag("--no-validate-tail", c.no_validate_tail, "Do not check the last segment against the promise");
    c.jobs_opt = cmd->add_option("--jobs", c.jobs, "Worker threads");
  }
  c.seed_opt = cmd->add_option("--seed", c.seed, "Seed (default: $BHLAB_SEED or 0)");
}

struct Resolved {
  ProblemSpec spec;
  json experiment;
  std::string alg;
  std::uint64_t seed;
  double eps;
  unsigned jobs;
  AlgorithmOptions options;
};

Resolved resolve_common(const Common& c, bool with_alg) {
  Config config = load_config(c.spec_path);
  Resolved r{ProblemSpec::from_json(config.document), config.experiment, "", 0, 0.0, 1, {}};
  r.seed = resolve<std::uint64_t>(c.seed_opt, c.seed, r.experiment, "seed", default_seed());
  if (with_alg) {
    r.alg = resolve<std::string>(c.alg_opt, c.alg, r.experiment, "alg", "");
    if (r.alg.empty()) throw SpecError("no algorithm given (--alg)");
    r.eps = resolve<double>(c.eps_opt, c.eps, r.experiment, "eps", 0.0);
    r.jobs = std::max(1U, resolve<unsigned>(c.jobs_opt, c.jobs, r.experiment, "jobs", default_jobs()));
    r.options.validate_last_segment = !c.no_validate_tail;
  }
  return r;
}

std::string input_text(const Common& c, const json& experiment) {
  return resolve<std::string>(c.input_opt, c.input, experiment, "input", "");
}

int cmd_gen_input(const Common& c, std::optional<std::int64_t> v, std::ostream& out) {
  const Resolved r = resolve_common(c, false);
  Rng rng(mix64(r.seed));
  out << encode_input(r.spec, generate_segments(r.spec, rng, v)).to_string() << '\n';
  return kExitOk;
}

int cmd_run(const Common& c, std::ostream& out) {
  const Resolved r = resolve_common(c, true);
  const AlgorithmSetup setup = resolve_algorithm(r.alg, r.spec, r.eps, r.options);
  const InputWord word = obtain_input(r.spec, input_text(c, r.experiment), c.input_file, r.seed);
  auto alg = setup.factory();
  SampledChoices choices(trial_seed(r.seed, 0));
  const RunTrace trace = run_online(*alg, r.spec, word, setup.advice, choices);
  json report = {{"spec_id", r.spec.id()}, {"spec", r.spec.to_json()}, {"alg", r.alg},
                 {"seed", r.seed},         {"eps", r.eps},              {"input", word.to_string()}};
  report.update(trace.to_json(r.spec));
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_expect(const Common& c, const CLI::Option* method_opt, const std::string& method_flag,
               const CLI::Option* trials_opt, std::size_t trials_flag, std::size_t branch_limit, std::ostream& out) {
  const Resolved r = resolve_common(c, true);
  const std::string method = resolve<std::string>(method_opt, method_flag, r.experiment, "method", "exact");
  const auto trials = resolve<std::size_t>(trials_opt, trials_flag, r.experiment, "trials", 100000);
  if (method != "closed" && method != "exact" && method != "mc" && method != "all")
    throw SpecError("unknown method \"" + method + "\"");
  const AlgorithmSetup setup = resolve_algorithm(r.alg, r.spec, r.eps, r.options);
  const std::size_t advice_bits = setup.factory()->advice_bits();
  const bool all = method == "all";

  std::vector<std::string> rows;
  if (method == "closed" || all) {
    const auto closed = closed_form_for(r.alg, r.spec, r.eps);
    if (closed) {
      ExpectationResult result;
      result.value = *closed;
      rows.push_back(expectation_csv_row(r.spec.id(), result, r.eps, advice_bits));
    } else if (!all) {
      throw SpecError("no closed form for " + r.alg);
    }
  }
  if (method == "exact" || method == "mc" || all) {
    if ((method == "mc" || all) && trials == 0) throw DomainError("--trials must be at least 1");
    const InputWord word = obtain_input(r.spec, input_text(c, r.experiment), c.input_file, r.seed);
    if (method == "exact" || all)
      rows.push_back(expectation_csv_row(
          r.spec.id(), exact_expected_cost(setup.factory, r.spec, word, setup.advice, branch_limit), r.eps,
          advice_bits));
    if (method == "mc" || all)
      rows.push_back(expectation_csv_row(
          r.spec.id(), monte_carlo_cost(setup.factory, r.spec, word, setup.advice, trials, r.seed, r.jobs),
          r.eps, advice_bits));
  }
  out << kExpectationCsvHeader << '\n';
  for (const auto& row : rows) out << row << '\n';
  return kExitOk;
}

struct SweepFlags {
  std::string axis;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  std::string out_dir;
  bool svg = false;
  std::string method = "exact";
  std::size_t trials = 10000;
};

inline constexpr const char* kSweepHeader = "axis,x,spec_id,alg,method,value,ratio,det_bound,rand_bound,status,reason";

int cmd_sweep(const Common& c, const SweepFlags& f, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve_common(c, true);
  if (f.axis != "eps" && f.axis != "b" && f.axis != "t" && f.axis != "u")
    throw SpecError("axis must be one of eps, b, t, u");
  if (!(f.step > 0.0) || f.to < f.from) throw SpecError("empty sweep range");
  if (f.method != "closed" && f.method != "exact" && f.method != "mc") throw SpecError("unknown method");
  if (f.svg && f.out_dir.empty()) throw SpecError("--svg needs --out");
  const auto points = static_cast<std::size_t>(std::floor((f.to - f.from) / f.step + 1e-9)) + 1;

  auto evaluate = [&](const ProblemSpec& spec, double eps) {
    const AlgorithmSetup setup = resolve_algorithm(r.alg, spec, eps, r.options);
    if (f.method == "closed") {
      const auto closed = closed_form_for(r.alg, spec, eps);
      if (!closed) throw SpecError("no closed form for " + r.alg);
      return *closed;
    }
    const InputWord word = obtain_input(spec, input_text(c, r.experiment), c.input_file, r.seed);
    if (f.method == "exact") return exact_expected_cost(setup.factory, spec, word, setup.advice).value;
    return monte_carlo_cost(setup.factory, spec, word, setup.advice, f.trials, r.seed, r.jobs).value;
  };
  const auto advice_bits = static_cast<int>(resolve_algorithm(r.alg, r.spec, r.eps, r.options).factory()->advice_bits());

  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  PlotSeries ratio_series{r.alg + " ratio", {}};
  PlotSeries det_series{"det. advice bound", {}};
  PlotSeries rand_series{"rand. advice bound", {}};
  std::optional<double> fixed_value;
  for (std::size_t n = 0; n < points; ++n) {
    const double x = f.from + static_cast<double>(n) * f.step;
    const auto xi = static_cast<int>(std::lround(x));
    std::optional<ProblemSpec> spec = r.spec;
    double eps = r.eps;
    int b = advice_bits;
    std::string reason;
    if (f.axis == "eps") {
      eps = x;
    } else if (f.axis == "b") {
      b = xi;
      if (b < 0) reason = "b must be nonnegative";
    } else if (f.axis == "t") {
      if (xi < 1 || r.spec.k() % xi != 0) {
        reason = "k mod t != 0";
      } else {
        spec = r.spec.with_t(xi);
      }
    } else {
      const int guardians = r.spec.guardian_count();
      if (xi < 1 || guardians % xi != 0 || r.spec.k() % (guardians / xi) != 0) {
        reason = "no t gives block length u";
      } else {
        spec = r.spec.with_t(guardians / xi);
      }
    }
    csv << f.axis << ',' << format_number(x) << ',';
    if (!reason.empty()) {
      csv << r.spec.id() << ',' << r.alg << ',' << f.method << ",,,,,rejected," << reason << '\n';
      continue;
    }
    double value;
    if (f.axis == "b") {
      if (!fixed_value) fixed_value = evaluate(*spec, eps);
      value = *fixed_value;
    } else {
      value = evaluate(*spec, eps);
    }
    const double ratio = competitive_ratio(value, *spec);
    const double det = det_advice_bound(*spec, b);
    const double rnd = rand_advice_bound(*spec, b);
    csv << spec->id() << ',' << r.alg << ',' << f.method << ',' << format_number(value) << ','
        << format_number(ratio) << ',' << format_number(det) << ',' << format_number(rnd) << ",ok,\n";
    ratio_series.points.emplace_back(x, ratio);
    det_series.points.emplace_back(x, det);
    rand_series.points.emplace_back(x, rnd);
  }

  if (f.out_dir.empty()) {
    out << csv.str();
    return kExitOk;
  }
  std::filesystem::create_directories(f.out_dir);
  const auto csv_path = std::filesystem::path(f.out_dir) / ("sweep_" + f.axis + ".csv");
  std::ofstream(csv_path, std::ios::binary) << csv.str();
  out << csv_path.string() << '\n';
  if (f.svg) {
    const auto svg_path = std::filesystem::path(f.out_dir) / ("sweep_" + f.axis + ".svg");
    std::ofstream(svg_path, std::ios::binary)
        << render_line_chart(r.spec.id() + ": " + r.alg, f.axis, "competitive ratio",
                             {ratio_series, det_series, rand_series});
    out << svg_path.string() << '\n';
  }
  (void)err;
  return kExitOk;
}

int cmd_brute(const Common& c, std::size_t states, int b, std::int64_t v_max, unsigned jobs, bool timing,
              std::ostream& out, std::ostream& err) {
  const Resolved r = resolve_common(c, false);
  SearchOptions options;
  options.v_max = v_max;
  options.jobs = jobs;
  const auto started = std::chrono::steady_clock::now();
  const SearchResult result = best_advice_ratio(r.spec, states, b, options);
  const auto elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  json witness = json::array();
  for (const auto& table : result.witness) witness.push_back(table.to_json());
  json report = {{"spec_id", r.spec.id()},
                 {"states", states},
                 {"b", b},
                 {"ratio", result.ratio},
                 {"worst_cost", result.worst_cost},
                 {"det_bound", det_advice_bound(r.spec, b)},
                 {"rand_bound", rand_advice_bound(r.spec, b)},
                 {"inputs", result.inputs},
                 {"tables", result.tables},
                 {"witness", witness}};
  if (b == 1) report["partition"] = result.partition;
  if (timing) report["elapsed_ms"] = elapsed;
  out << report.dump(2) << '\n';
  err << "elapsed_ms=" << format_number(elapsed) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Black Hats online problems: quantum, randomized and deterministic streaming algorithms", "bhlab"};
  app.require_subcommand(1);

  Common gen_c, run_c, expect_c, sweep_c, brute_c;

  auto* gen = app.add_subcommand("gen-input", "Print a random promise-respecting input word");
  add_common(gen, gen_c, false);
  std::int64_t pinned_v = 0;
  auto* v_opt = gen->add_option("--v", pinned_v, "Pin v for every PartialMOD segment");

  auto* run = app.add_subcommand("run", "Run one algorithm on one input and print the trace as JSON");
  add_common(run, run_c, true);

  auto* expect = app.add_subcommand("expect", "Expected cost as CSV (closed form, exact, Monte Carlo)");
  add_common(expect, expect_c, true);
  std::string method = "exact";
  std::size_t trials = 100000;
  std::size_t branch_limit = kDefaultBranchLimit;
  auto* method_opt = expect->add_option("--method", method, "closed | exact | mc | all");
  auto* trials_opt = expect->add_option("--trials", trials, "Monte Carlo trials");
  expect->add_option("--branch-limit", branch_limit, "Maximum branches for exact enumeration");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter; CSV plus optional SVG");
  add_common(sweep, sweep_c, true);
  SweepFlags sweep_flags;
  sweep->add_option("--axis", sweep_flags.axis, "eps | b | t | u")->required();
  sweep->add_option("--from", sweep_flags.from)->required();
  sweep->add_option("--to", sweep_flags.to)->required();
  sweep->add_option("--step", sweep_flags.step);
  sweep->add_option("--out", sweep_flags.out_dir, "Output directory");
  sweep->add_flag("--svg", sweep_flags.svg, "Also write an SVG chart");
  sweep->add_option("--method", sweep_flags.method, "closed | exact | mc");
  sweep->add_option("--trials", sweep_flags.trials, "Monte Carlo trials per point");

  auto* brute = app.add_subcommand("brute", "Exhaustive search over small table algorithms");
  add_common(brute, brute_c, false);
  std::size_t states = 2;
  int advice = 0;
  std::int64_t v_max = 3;
  unsigned brute_jobs = default_jobs();
  bool timing = false;
  brute->add_option("--states", states, "State count S");
  brute->add_option("--b", advice, "Advice bits (0 or 1)");
  brute->add_option("--v-max", v_max, "Largest v in the adversary's PartialMOD inputs");
  brute->add_option("--jobs", brute_jobs, "Worker threads");
  brute->add_flag("--timing", timing, "Include elapsed_ms in the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen_input(gen_c, v_opt->count() ? std::optional<std::int64_t>(pinned_v) : std::nullopt, out);
    if (*run) return cmd_run(run_c, out);
    if (*expect) return cmd_expect(expect_c, method_opt, method, trials_opt, trials, branch_limit, out);
    if (*sweep) return cmd_sweep(sweep_c, sweep_flags, out, err);
    if (*brute) return cmd_brute(brute_c, states, advice, v_max, brute_jobs, timing, out, err);
  } catch (const PromiseViolation& e) {
    err << "promise violation: " << e.what() << '\n';
    return kExitPromise;
  } catch (const BranchLimitExceeded& e) {
    err << "branch limit: " << e.what() << '\n';
    return kExitBranchLimit;
  } catch (const SpaceTooLarge& e) {
    err << "search space: " << e.what() << '\n';
    return kExitSearchSpace;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bhlab
