// csg: sequential growth dynamics on causal sets from the command line.
//
// Subcommands: enum, measure, zeta, classify, orig, sample. Every
// command reads a coupling family from inline flags, a couplings JSON
// spec, or a config file (flags win over the config file), and writes
// JSON or CSV to stdout or a file.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csg/catalog.hpp"
#include "csg/complex_literal.hpp"
#include "csg/couplings.hpp"
#include "csg/errors.hpp"
#include "csg/measure.hpp"
#include "csg/originary.hpp"
#include "csg/sampler.hpp"
#include "csg/variation.hpp"
#include "csg/version.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDegenerate = 3,
  kInconclusiveStrict = 4,
};

// ---------------------------------------------------------------------
// Options shared by every subcommand.

struct CommonOpts {
  std::string out = "-";
  std::string format = "json";
  int threads = 0; // 0 = available parallelism
  int level_cap = csg::kDefaultLevelCap;
  std::string config_path;

  // couplings sources
  std::string couplings_arg; // path or inline JSON
  std::string family;
  std::string q_literal;
  std::vector<std::string> t_literals;
  int single_k = 0;
  double single_s = 1.0;
  double single_phi = 0.0;
  std::vector<std::string> term_specs; // k:s:phi
  std::vector<std::string> head_literals;
  std::string tail_rule = "geometric";
  double tail_s = 0.5;
  double tail_phi0 = 0.0;

  std::string precision = "auto";
  int mantissa_bits = 256;

  CLI::App* cmd = nullptr;
};

void add_common_options(CLI::App* cmd, CommonOpts& o, bool with_couplings) {
  o.cmd = cmd;
  cmd->add_option("--out", o.out, "Output path, '-' for stdout");
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", o.threads,
                  "Worker pool size (0 = available parallelism)");
  cmd->add_option("--level-cap", o.level_cap,
                  "Enumeration level cap override");
  cmd->add_option("--config", o.config_path, "Run-config JSON file");
  if (!with_couplings) return;
  cmd->add_option("--couplings", o.couplings_arg,
                  "Couplings spec: JSON file path or inline JSON object");
  cmd->add_option("--family", o.family,
                  "Coupling family: percolation|explicit|single_k|"
                  "finite_set|tail_colinear");
  cmd->add_option("--q", o.q_literal, "percolation q, complex literal");
  cmd->add_option("--t", o.t_literals,
                  "explicit couplings, comma-separated complex literals")
      ->delimiter(',');
  cmd->add_option("--k", o.single_k, "single_k index k");
  cmd->add_option("--s", o.single_s, "single_k magnitude s");
  cmd->add_option("--phi", o.single_phi, "single_k phase phi");
  cmd->add_option("--terms", o.term_specs,
                  "finite_set terms k:s:phi, comma separated")
      ->delimiter(',');
  cmd->add_option("--head", o.head_literals,
                  "tail_colinear head, comma-separated complex literals")
      ->delimiter(',');
  cmd->add_option("--rule", o.tail_rule,
                  "tail_colinear rule: geometric|power_of_four");
  cmd->add_option("--tail-s", o.tail_s, "tail_colinear geometric base s");
  cmd->add_option("--phi0", o.tail_phi0, "tail_colinear common tail phase");
}

// Sweep precision is only consumed by the classify diagnostics.
void add_precision_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--precision", o.precision,
                  "Sweep precision: auto|double|extended")
      ->check(CLI::IsMember({"auto", "double", "extended"}));
  cmd->add_option("--mantissa-bits", o.mantissa_bits,
                  "Mantissa bits in extended precision");
}

// ---------------------------------------------------------------------
// Config file: flags override file values; unknown fields rejected.

const std::vector<std::string> kConfigKeys = {
    "couplings", "n",       "n_max",   "tol",    "precision",
    "mantissa_bits", "format", "out",     "seed",   "count",
    "threads",   "level_cap", "window", "margin", "strict",
    "event",     "level",   "aggregate", "numeric"};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw csg::ConfigError("cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw csg::ConfigError("config file '" + path + "' is not valid JSON: " +
                           e.what());
  }
  if (!cfg.is_object())
    throw csg::ConfigError("config file must hold a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), it.key()) ==
        kConfigKeys.end())
      throw csg::ConfigError("unknown config field '" + it.key() + "'");
  }
  return cfg;
}

template <class T>
void config_default(const CLI::App* cmd, const std::string& flag,
                    const json& cfg, const char* key, T& value) {
  if (cfg.contains(key) && cmd->count(flag) == 0) value = cfg.at(key).get<T>();
}

csg::Couplings resolve_couplings(const CommonOpts& o, const json& cfg) {
  const bool family_given = o.cmd->count("--family") > 0;
  if (family_given) {
    const std::string& f = o.family;
    if (f == "percolation") {
      if (o.cmd->count("--q") == 0)
        throw csg::ConfigError("percolation needs --q <complex>");
      return csg::Couplings::percolation(csg::parse_complex(o.q_literal));
    }
    if (f == "explicit") {
      if (o.t_literals.empty())
        throw csg::ConfigError("explicit needs --t <c0,c1,...>");
      std::vector<std::complex<double>> t;
      for (const auto& lit : o.t_literals) t.push_back(csg::parse_complex(lit));
      return csg::Couplings::explicit_list(std::move(t));
    }
    if (f == "single_k") {
      if (o.cmd->count("--k") == 0)
        throw csg::ConfigError("single_k needs --k, --s, --phi");
      return csg::Couplings::single_k(o.single_k, o.single_s, o.single_phi);
    }
    if (f == "finite_set") {
      if (o.term_specs.empty())
        throw csg::ConfigError("finite_set needs --terms k:s:phi,...");
      std::vector<csg::FiniteTerm> terms;
      for (const auto& spec : o.term_specs) {
        csg::FiniteTerm term;
        if (std::sscanf(spec.c_str(), "%d:%lf:%lf", &term.k, &term.s,
                        &term.phi) != 3)
          throw csg::ConfigError("bad finite_set term '" + spec +
                                 "', expected k:s:phi");
        terms.push_back(term);
      }
      return csg::Couplings::finite_set(std::move(terms));
    }
    if (f == "tail_colinear") {
      if (o.head_literals.empty())
        throw csg::ConfigError("tail_colinear needs --head, --rule, --tail-s, "
                               "--phi0");
      std::vector<std::complex<double>> head;
      for (const auto& lit : o.head_literals)
        head.push_back(csg::parse_complex(lit));
      csg::TailRule rule;
      if (o.tail_rule == "geometric")
        rule = csg::TailRule::Geometric;
      else if (o.tail_rule == "power_of_four")
        rule = csg::TailRule::PowerOfFour;
      else
        throw csg::ConfigError("--rule must be geometric or power_of_four");
      return csg::Couplings::tail_colinear(std::move(head), rule, o.tail_s,
                                           o.tail_phi0);
    }
    throw csg::ConfigError("unknown --family '" + f + "'");
  }

  if (!o.couplings_arg.empty()) {
    std::string text = o.couplings_arg;
    if (!text.empty() && text.front() != '{') {
      std::ifstream in(text);
      if (!in)
        throw csg::ConfigError("cannot open couplings file '" + text + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    json spec;
    try {
      spec = json::parse(text);
    } catch (const json::exception& e) {
      throw csg::ConfigError(std::string("couplings spec is not valid JSON: ") +
                             e.what());
    }
    return csg::Couplings::from_json(spec);
  }

  if (cfg.contains("couplings"))
    return csg::Couplings::from_json(cfg.at("couplings"));

  throw csg::ConfigError(
      "no couplings given: use --family ..., --couplings, or a config file");
}

csg::PrecisionOpts resolve_precision(const CommonOpts& o, const json& cfg) {
  std::string mode = o.precision;
  int bits = o.mantissa_bits;
  config_default(o.cmd, "--precision", cfg, "precision", mode);
  config_default(o.cmd, "--mantissa-bits", cfg, "mantissa_bits", bits);
  csg::PrecisionOpts p;
  p.mantissa_bits = bits;
  if (mode == "double")
    p.mode = csg::PrecisionOpts::Mode::Double;
  else if (mode == "extended")
    p.mode = csg::PrecisionOpts::Mode::Extended;
  else if (mode == "auto")
    p.mode = csg::PrecisionOpts::Mode::Auto;
  else
    throw csg::ConfigError("precision must be auto, double or extended");
  return p;
}

// Applies the config file to the options every command shares.
void apply_common_config(CommonOpts& o, const json& cfg) {
  config_default(o.cmd, "--out", cfg, "out", o.out);
  config_default(o.cmd, "--format", cfg, "format", o.format);
  config_default(o.cmd, "--threads", cfg, "threads", o.threads);
  config_default(o.cmd, "--level-cap", cfg, "level_cap", o.level_cap);
}

class OutputFile {
public:
  explicit OutputFile(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_)
        throw csg::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::string csv_escape_note(const std::string& s) {
  std::string out;
  for (char ch : s) out += (ch == ',' ? ';' : ch);
  return out;
}

// ---------------------------------------------------------------------
// Subcommand bodies.

int run_enum(CommonOpts& o, int n) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--n", cfg, "n", n);
  if (n < 1) throw csg::ConfigError("enum needs --n >= 1 (flag or config)");
  csg::GrowthTree tree(o.level_cap, o.threads);
  const csg::LevelCatalog& cat = tree.level(n);
  OutputFile out(o.out);
  if (o.format == "csv")
    csg::write_catalog_csv(cat, out.stream());
  else
    csg::write_catalog_jsonl(cat, out.stream());
  return kOk;
}

int run_measure(CommonOpts& o, int n, std::vector<std::uint32_t>& event) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--n", cfg, "n", n);
  config_default(o.cmd, "--event", cfg, "event", event);
  if (n < 1) throw csg::ConfigError("measure needs --n >= 1 (flag or config)");
  csg::Couplings couplings = resolve_couplings(o, cfg);
  csg::GrowthTree tree(o.level_cap, o.threads);
  csg::MeasureEngine engine(tree, couplings, o.threads);
  OutputFile out(o.out);

  if (o.cmd->count("--event") > 0 || cfg.contains("event")) {
    const csg::Event ev =
        csg::make_event(n, event, tree.level(n).count);
    const std::complex<double> mu = engine.event_measure(ev);
    if (o.format == "csv") {
      out.stream() << "n,members,re,im,abs\n"
                   << n << ',';
      for (std::size_t i = 0; i < ev.members.size(); ++i)
        out.stream() << (i ? ";" : "") << ev.members[i];
      out.stream() << ',' << csg::format_double(mu.real()) << ','
                   << csg::format_double(mu.imag()) << ','
                   << csg::format_double(std::abs(mu)) << '\n';
    } else {
      json j{{"n", n},
             {"members", ev.members},
             {"re", mu.real()},
             {"im", mu.imag()},
             {"abs", std::abs(mu)}};
      out.stream() << j.dump() << '\n';
    }
    return kOk;
  }

  auto measures = engine.level_measures(n);
  if (o.format == "csv") {
    out.stream() << "n,index,re,im,abs\n";
    for (std::size_t i = 0; i < measures.size(); ++i)
      out.stream() << n << ',' << i << ','
                   << csg::format_double(measures[i].real()) << ','
                   << csg::format_double(measures[i].imag()) << ','
                   << csg::format_double(std::abs(measures[i])) << '\n';
  } else {
    for (std::size_t i = 0; i < measures.size(); ++i) {
      json j{{"n", n},
             {"index", i},
             {"re", measures[i].real()},
             {"im", measures[i].imag()},
             {"abs", std::abs(measures[i])}};
      out.stream() << j.dump() << '\n';
    }
  }
  return kOk;
}

int run_zeta(CommonOpts& o, int n_max) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--n-max", cfg, "n_max", n_max);
  if (n_max < 1)
    throw csg::ConfigError("zeta needs --n-max >= 1 (flag or config)");
  csg::Couplings couplings = resolve_couplings(o, cfg);
  csg::GrowthTree tree(o.level_cap, o.threads);
  csg::MeasureEngine engine(tree, couplings, o.threads);
  OutputFile out(o.out);
  if (o.format == "csv")
    csg::write_zeta_csv(engine, n_max, out.stream());
  else
    out.stream() << csg::zeta_summary_json(engine, n_max).dump(2) << '\n';
  return kOk;
}

int run_classify(CommonOpts& o, std::vector<int>& window, double margin,
                 bool numeric, bool strict) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--window", cfg, "window", window);
  config_default(o.cmd, "--margin", cfg, "margin", margin);
  config_default(o.cmd, "--numeric", cfg, "numeric", numeric);
  config_default(o.cmd, "--strict", cfg, "strict", strict);
  csg::Couplings couplings = resolve_couplings(o, cfg);

  csg::ClassifyOpts opts;
  if (!window.empty()) {
    if (window.size() != 2)
      throw csg::ConfigError("--window needs two values: lo,hi");
    opts.window_lo = window[0];
    opts.window_hi = window[1];
  }
  opts.margin = margin;
  opts.force_numeric = numeric;
  opts.precision = resolve_precision(o, cfg);

  const csg::Verdict verdict = csg::classify(couplings, opts);
  OutputFile out(o.out);
  if (o.format == "csv") {
    out.stream() << "status,basis,window_lo,window_hi,fitted_x_a,fitted_x_c,"
                    "u_a_tail,u_c_tail,rescaled_t0,note\n"
                 << csg::to_string(verdict.status) << ','
                 << csg::to_string(verdict.basis) << ','
                 << verdict.evidence.window_lo << ','
                 << verdict.evidence.window_hi << ','
                 << csg::format_double(verdict.evidence.fitted_x_a) << ','
                 << csg::format_double(verdict.evidence.fitted_x_c) << ','
                 << csg::format_double(verdict.evidence.u_a_tail) << ','
                 << csg::format_double(verdict.evidence.u_c_tail) << ','
                 << (verdict.rescaled_t0 ? 1 : 0) << ','
                 << csv_escape_note(verdict.evidence.note) << '\n';
  } else {
    out.stream() << csg::verdict_json(verdict).dump(2) << '\n';
  }
  if (strict && verdict.status == csg::ExtensionStatus::Inconclusive)
    return kInconclusiveStrict;
  return kOk;
}

int run_orig(CommonOpts& o, int n_max, double tol) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--n-max", cfg, "n_max", n_max);
  config_default(o.cmd, "--tol", cfg, "tol", tol);
  csg::Couplings couplings = resolve_couplings(o, cfg);
  const csg::ProductState state = csg::originary_measure(couplings, n_max, tol);
  OutputFile out(o.out);
  if (o.format == "csv") {
    out.stream() << "value_re,value_im,n_terms,converged,formal,precluded\n"
                 << csg::format_double(state.value.real()) << ','
                 << csg::format_double(state.value.imag()) << ','
                 << state.n_terms << ',' << (state.converged ? 1 : 0) << ','
                 << (state.formal ? 1 : 0) << ','
                 << (csg::precluded(state, tol) ? 1 : 0) << '\n';
  } else {
    out.stream() << csg::orig_json(state, tol).dump(2) << '\n';
  }
  return kOk;
}

int run_sample(CommonOpts& o, int n, std::uint64_t count, std::uint64_t seed,
               int level, bool aggregate) {
  const json cfg = load_config(o.config_path);
  apply_common_config(o, cfg);
  config_default(o.cmd, "--n", cfg, "n", n);
  config_default(o.cmd, "--count", cfg, "count", count);
  config_default(o.cmd, "--seed", cfg, "seed", seed);
  config_default(o.cmd, "--level", cfg, "level", level);
  config_default(o.cmd, "--aggregate", cfg, "aggregate", aggregate);
  if (n < 1) throw csg::ConfigError("sample needs --n >= 1 (flag or config)");
  if (count < 1)
    throw csg::ConfigError("sample needs --count >= 1 (flag or config)");

  csg::SampleConfig sample_cfg{resolve_couplings(o, cfg), n, count, seed,
                               o.threads};
  OutputFile out(o.out);

  if (aggregate || o.format == "csv") {
    if (level == 0) level = n;
    csg::GrowthTree tree(o.level_cap, o.threads);
    const csg::FrequencyTable table =
        csg::empirical_frequencies(tree, sample_cfg, level);
    const csg::LevelCatalog& cat = tree.level(level);
    out.stream() << "level,node_index,iso_key,count,frequency\n";
    const auto freq = table.frequencies();
    for (std::size_t i = 0; i < table.counts.size(); ++i)
      out.stream() << level << ',' << i << ',' << cat.iso_key[i].hex() << ','
                   << table.counts[i] << ',' << csg::format_double(freq[i])
                   << '\n';
    return kOk;
  }

  for (std::uint64_t s = 0; s < count; ++s) {
    const csg::LabelledCauset sample = csg::sample_causet(sample_cfg, s);
    std::string line = "{\"n\":" + std::to_string(sample.size());
    line += ",\"index\":" + std::to_string(s);
    line += ",\"parent\":-1,\"past\":[";
    for (int i = 0; i < sample.size(); ++i) {
      if (i) line += ',';
      line += '[';
      bool first = true;
      for (int j = 0; j < i; ++j)
        if (sample.precedes(j, i)) {
          if (!first) line += ',';
          line += std::to_string(j);
          first = false;
        }
      line += ']';
    }
    line += "],\"iso_key\":\"" + csg::canonical_form(sample).hex() + "\"}";
    out.stream() << line << '\n';
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential growth dynamics on causal sets"};
  app.set_version_flag(
      "--version", std::string("csg ") + csg::kVersion + " (formula set " +
                       csg::kFormulaRevision + ", rng " + csg::kSamplerRng +
                       ")");
  app.require_subcommand(1);

  CommonOpts enum_opts, measure_opts, zeta_opts, classify_opts, orig_opts,
      sample_opts;

  auto* cmd_enum =
      app.add_subcommand("enum", "Enumerate one level of the growth tree");
  int enum_n = 0;
  cmd_enum->add_option("--n", enum_n, "Level to enumerate");
  add_common_options(cmd_enum, enum_opts, false);

  auto* cmd_measure =
      app.add_subcommand("measure", "Quantum measure of nodes or an event");
  int measure_n = 0;
  std::vector<std::uint32_t> measure_event;
  cmd_measure->add_option("--n", measure_n, "Level");
  cmd_measure
      ->add_option("--event", measure_event,
                   "Node indices of the event's fine partition")
      ->delimiter(',');
  add_common_options(cmd_measure, measure_opts, true);

  auto* cmd_zeta = app.add_subcommand(
      "zeta", "Per-node colinearity defects and level sums");
  int zeta_n_max = 0;
  cmd_zeta->add_option("--n-max", zeta_n_max, "Deepest level");
  add_common_options(cmd_zeta, zeta_opts, true);

  auto* cmd_classify =
      app.add_subcommand("classify", "Bounded-variation extension verdict");
  std::vector<int> classify_window;
  double classify_margin = 0.1;
  bool classify_numeric = false;
  bool classify_strict = false;
  cmd_classify
      ->add_option("--window", classify_window,
                   "Numeric diagnostic window lo,hi")
      ->delimiter(',');
  cmd_classify->add_option("--margin", classify_margin,
                           "Margin on the fitted tail exponent");
  cmd_classify->add_flag("--numeric", classify_numeric,
                         "Skip analytic rules, numeric diagnostic only");
  cmd_classify->add_flag("--strict", classify_strict,
                         "Exit 4 when the verdict is Inconclusive");
  add_common_options(cmd_classify, classify_opts, true);
  add_precision_options(cmd_classify, classify_opts);

  auto* cmd_orig =
      app.add_subcommand("orig", "Originary event measure (product form)");
  int orig_n_max = 512;
  double orig_tol = 1e-12;
  cmd_orig->add_option("--n-max", orig_n_max, "Maximum product terms");
  cmd_orig->add_option("--tol", orig_tol, "Convergence tolerance");
  add_common_options(cmd_orig, orig_opts, true);

  auto* cmd_sample =
      app.add_subcommand("sample", "Classical sequential growth sampling");
  int sample_n = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t sample_seed = 0;
  int sample_level = 0;
  bool sample_aggregate = false;
  cmd_sample->add_option("--n", sample_n, "Target causet size");
  cmd_sample->add_option("--count", sample_count, "Number of samples");
  cmd_sample->add_option("--seed", sample_seed, "Stream seed");
  cmd_sample->add_option("--level", sample_level,
                         "Aggregation level (default --n)");
  cmd_sample->add_flag("--aggregate", sample_aggregate,
                       "Aggregate node frequencies instead of raw samples");
  add_common_options(cmd_sample, sample_opts, true);

  try {
    app.parse(argc, argv);
    if (cmd_enum->parsed()) return run_enum(enum_opts, enum_n);
    if (cmd_measure->parsed())
      return run_measure(measure_opts, measure_n, measure_event);
    if (cmd_zeta->parsed()) return run_zeta(zeta_opts, zeta_n_max);
    if (cmd_classify->parsed())
      return run_classify(classify_opts, classify_window, classify_margin,
                          classify_numeric, classify_strict);
    if (cmd_orig->parsed()) return run_orig(orig_opts, orig_n_max, orig_tol);
    if (cmd_sample->parsed())
      return run_sample(sample_opts, sample_n, sample_count, sample_seed,
                        sample_level, sample_aggregate);
    return kConfigError;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const csg::DegenerateDynamics& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const csg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const csg::UnsupportedDynamics& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const csg::LevelCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
