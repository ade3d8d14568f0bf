#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nnvqe/active_learning.hpp"
#include "nnvqe/circuit.hpp"
#include "nnvqe/encoder.hpp"
#include "nnvqe/error.hpp"
#include "nnvqe/exact.hpp"
#include "nnvqe/io.hpp"
#include "nnvqe/metrics.hpp"
#include "nnvqe/train.hpp"
#include "nnvqe/xxz.hpp"

namespace nnvqe {

using json = nlohmann::json;

enum class ExperimentKind {
  sweep1d,
  sweep2d,
  active_learn,
  speedup,
  convergence_table,
  param_dump,
  baseline_compare,
};

inline ExperimentKind experiment_kind_from(const std::string& s) {
  if (s == "sweep1d") return ExperimentKind::sweep1d;
  if (s == "sweep2d") return ExperimentKind::sweep2d;
  if (s == "active_learn") return ExperimentKind::active_learn;
  if (s == "speedup") return ExperimentKind::speedup;
  if (s == "convergence_table") return ExperimentKind::convergence_table;
  if (s == "param_dump") return ExperimentKind::param_dump;
  if (s == "baseline_compare") return ExperimentKind::baseline_compare;
  throw config_error("unknown experiment kind: \"" + s + "\"");
}

// --- defaults ---------------------------------------------------------------
// Every key a config may contain appears here with its default value; the
// defaults are the hyperparameters the bundled presets run with. A user
// config only lists what it overrides.

inline json default_config(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sweep1d:
      return json{
          {"experiment", "sweep1d"},
          {"label", "sweep1d"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 8},
          {"lambda", 0.75},
          {"ansatz", "mera"},
          {"encoder", "mlp"},
          {"variants", json::array({json{{"depth", 1}, {"hidden", 20}, {"dropout", 0.30}},
                                    json{{"depth", 2}, {"hidden", 20}, {"dropout", 0.05}},
                                    json{{"depth", 3}, {"hidden", 30}, {"dropout", 0.20}}})},
          {"train_delta", json{{"min", -3.0}, {"max", 3.0}, {"count", 20}}},
          {"test_delta", json{{"min", -4.0}, {"max", 4.0}, {"count", 201}}},
          {"epochs", 2500},
          {"lr", json{{"initial", 0.009}, {"factor", 0.7}, {"interval", 1000}}},
      };
    case ExperimentKind::sweep2d:
      return json{
          {"experiment", "sweep2d"},
          {"label", "sweep2d"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 12},
          {"ansatz", "hea"},
          {"encoder", "mlp"},
          {"variants", json::array({json{{"depth", 1}, {"hidden", 40}, {"dropout", 0.20}},
                                    json{{"depth", 2}, {"hidden", 40}, {"dropout", 0.20}}})},
          {"train_delta", json{{"min", -1.0}, {"max", 1.0}, {"count", 10}}},
          {"train_lambda", json{{"min", 0.0}, {"max", 1.0}, {"count", 5}}},
          {"test_delta", json{{"min", -1.0}, {"max", 1.0}, {"count", 101}}},
          {"test_lambda", json{{"min", 0.0}, {"max", 1.0}, {"count", 51}}},
          {"epochs", 4000},
          {"lr", json{{"initial", 0.01}, {"factor", 0.7}, {"interval", 800}}},
      };
    case ExperimentKind::active_learn:
      return json{
          {"experiment", "active_learn"},
          {"label", "active_learn"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 8},
          {"lambda", 0.75},
          {"ansatz", "mera"},
          {"encoder", "mlp"},
          {"depth", 2},
          {"hidden", 25},
          {"dropout", 0.20},
          {"mu", 6.0},
          {"pool", json{{"min", -3.0}, {"max", 3.0}, {"count", 61}}},
          {"test_delta", json{{"min", -3.0}, {"max", 3.0}, {"count", 201}}},
          {"threshold", 5e-3},
          {"max_points", 15},
          {"cold_start", false},
          {"epochs", 2500},
          {"lr", json{{"initial", 0.009}, {"factor", 0.85}, {"interval", 200}}},
      };
    case ExperimentKind::speedup:
      return json{
          {"experiment", "speedup"},
          {"label", "speedup"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 12},
          {"lambda", 0.75},
          {"ansatz", "hea"},
          {"encoder", "mlp"},
          {"depth", 3},
          {"hidden", 36},
          {"dropout", 0.20},
          {"deltas", json::array({1.5, 2.0})},
          {"trials", 20},
          {"epochs", 100},
          {"lr", json{{"initial", 0.009}, {"factor", 1.0}, {"interval", 0}}},
      };
    case ExperimentKind::convergence_table:
      return json{
          {"experiment", "convergence_table"},
          {"label", "convergence_table"},
          {"seed", 11},
          {"output_dir", ""},
          {"lambda", 0.75},
          {"ansatz", "hea"},
          {"encoder", "mlp"},
          {"depth", 3},
          {"dropout", 0.20},
          {"rows", json::array({json{{"delta", 1.0}, {"n_qubits", 8}, {"hidden", 25}},
                                json{{"delta", 1.0}, {"n_qubits", 10}, {"hidden", 32}},
                                json{{"delta", 1.0}, {"n_qubits", 12}, {"hidden", 36}},
                                json{{"delta", 1.5}, {"n_qubits", 8}, {"hidden", 25}},
                                json{{"delta", 1.5}, {"n_qubits", 10}, {"hidden", 32}},
                                json{{"delta", 1.5}, {"n_qubits", 12}, {"hidden", 36}},
                                json{{"delta", 2.0}, {"n_qubits", 8}, {"hidden", 25}},
                                json{{"delta", 2.0}, {"n_qubits", 10}, {"hidden", 32}},
                                json{{"delta", 2.0}, {"n_qubits", 12}, {"hidden", 36}}})},
          {"trials", 20},
          {"threshold", 0.1},
          {"epochs", 100},
          {"lr", json{{"initial", 0.009}, {"factor", 1.0}, {"interval", 0}}},
      };
    case ExperimentKind::param_dump:
      return json{
          {"experiment", "param_dump"},
          {"label", "param_dump"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 8},
          {"lambda", 0.75},
          {"ansatz", "mera"},
          {"encoder", "mlp"},
          {"depth", 2},
          {"hidden", 20},
          {"dropout", 0.05},
          {"train_delta", json{{"min", -3.0}, {"max", 3.0}, {"count", 20}}},
          {"dump_delta", json{{"min", -4.0}, {"max", 4.0}, {"count", 201}}},
          {"epochs", 2500},
          {"lr", json{{"initial", 0.009}, {"factor", 0.7}, {"interval", 1000}}},
      };
    default:
      return json{
          {"experiment", "baseline_compare"},
          {"label", "baseline_compare"},
          {"seed", 11},
          {"output_dir", ""},
          {"n_qubits", 8},
          {"lambda", 0.75},
          {"ansatz", "mera"},
          {"depth", 2},
          {"hidden", 20},
          {"dropout", 0.05},
          {"train_delta", json{{"min", -3.0}, {"max", 3.0}, {"count", 20}}},
          {"test_delta", json{{"min", -4.0}, {"max", 4.0}, {"count", 201}}},
          {"epochs", 2500},
          {"lr", json{{"initial", 0.009}, {"factor", 0.7}, {"interval", 1000}}},
      };
  }
}

// --- validation + merge -----------------------------------------------------

namespace detail {

inline bool same_json_shape(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  if (a.is_object() && b.is_object()) return true;
  if (a.is_array() && b.is_array()) return true;
  if (a.is_string() && b.is_string()) return true;
  if (a.is_boolean() && b.is_boolean()) return true;
  return false;
}

/// Overlay `user` onto `base`, rejecting keys base does not know about and
/// values whose shape disagrees with the default. Arrays replace wholesale;
/// their elements are validated against `element_template` when one applies
/// (keyed by path).
inline void merge_into(json& base, const json& user, const std::string& path) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string here = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key()))
      throw config_error("unknown config key: \"" + here + "\"");
    json& slot = base[it.key()];
    if (!same_json_shape(slot, it.value()))
      throw config_error("config key \"" + here + "\" has the wrong type");
    if (slot.is_object()) {
      merge_into(slot, it.value(), here);
    } else {
      slot = it.value();
    }
  }
}

/// Array elements have no "default" to merge onto; validate them against a
/// template object drawn from the default config's first element.
inline void check_array_elements(const json& arr, const json& tmpl,
                                 const std::string& path) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string here = path + "[" + std::to_string(i) + "]";
    const json& el = arr[i];
    if (tmpl.is_object()) {
      if (!el.is_object())
        throw config_error("config key \"" + here + "\" must be an object");
      for (auto it = el.begin(); it != el.end(); ++it) {
        if (!tmpl.contains(it.key()))
          throw config_error("unknown config key: \"" + here + "." + it.key() +
                             "\"");
        if (!same_json_shape(tmpl.at(it.key()), it.value()))
          throw config_error("config key \"" + here + "." + it.key() +
                             "\" has the wrong type");
      }
      for (auto it = tmpl.begin(); it != tmpl.end(); ++it)
        if (!el.contains(it.key()))
          throw config_error("config key \"" + here + "\" is missing \"" +
                             it.key() + "\"");
    } else if (!same_json_shape(el, tmpl)) {
      throw config_error("config key \"" + here + "\" has the wrong type");
    }
  }
}

}  // namespace detail

/// Fill a (possibly partial) user config with the defaults of its kind.
/// The "experiment" key is required; everything else falls back to the
/// preset setup. Unknown or ill-typed keys raise config_error.
inline json resolve_config(const json& user) {
  if (!user.is_object()) throw config_error("config root must be an object");
  if (!user.contains("experiment"))
    throw config_error("config is missing the \"experiment\" key");
  if (!user.at("experiment").is_string())
    throw config_error("config key \"experiment\" must be a string");

  const ExperimentKind kind =
      experiment_kind_from(user.at("experiment").get<std::string>());
  json resolved = default_config(kind);
  detail::merge_into(resolved, user, "");

  const json defaults = default_config(kind);
  for (const char* arr_key : {"variants", "rows", "deltas"}) {
    if (resolved.contains(arr_key)) {
      if (resolved.at(arr_key).empty())
        throw config_error(std::string("config key \"") + arr_key +
                           "\" must not be empty");
      detail::check_array_elements(resolved.at(arr_key),
                                   defaults.at(arr_key).front(), arr_key);
    }
  }
  return resolved;
}

inline json load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path);
  json user;
  try {
    user = json::parse(is);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return resolve_config(user);
}

// --- presets ----------------------------------------------------------------

struct PresetInfo {
  std::string name;
  std::string description;
  json overrides;
};

inline const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> table = {
      {"fig2",
       "8-qubit anisotropy sweep, MERA depth 1-3, trained on 20 points",
       json{{"experiment", "sweep1d"}, {"label", "fig2"}}},
      {"fig3",
       "active-learning run, 8-qubit MERA depth 2, variance+distance scores",
       json{{"experiment", "active_learn"}, {"label", "fig3"}}},
      {"fig4",
       "single-point training speedup vs plain VQE, 12-qubit HEA depth 3",
       json{{"experiment", "speedup"}, {"label", "fig4"}}},
      {"fig5",
       "12-qubit two-parameter sweep, HEA depth 1-2, phase-boundary columns",
       json{{"experiment", "sweep2d"}, {"label", "fig5"}}},
      {"table_s1",
       "convergence rates over 20 trials: NN-encoded vs plain VQE, 9 setups",
       json{{"experiment", "convergence_table"}, {"label", "table_s1"}}},
      {"fig_s5",
       "8-qubit two-parameter sweep, HEA depth 1-2, hidden layer 25",
       json{{"experiment", "sweep2d"},
            {"label", "fig_s5"},
            {"n_qubits", 8},
            {"variants",
             json::array({json{{"depth", 1}, {"hidden", 25}, {"dropout", 0.20}},
                          json{{"depth", 2}, {"hidden", 25}, {"dropout", 0.20}}})}}},
      {"fig_s7",
       "angle trajectories theta(delta) of a trained 8-qubit MERA depth-2 run",
       json{{"experiment", "param_dump"}, {"label", "fig_s7"}}},
  };
  return table;
}

inline json preset_config(const std::string& name) {
  for (const PresetInfo& p : presets())
    if (p.name == name) return resolve_config(p.overrides);
  throw config_error("unknown preset: \"" + name + "\"");
}

// --- helpers ----------------------------------------------------------------

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw config_error("grid count must be >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return out;
}

inline std::vector<double> range_from(const json& j) {
  return linspace(j.at("min").get<double>(), j.at("max").get<double>(),
                  j.at("count").get<int>());
}

inline std::vector<std::vector<double>> grid1d(const std::vector<double>& xs) {
  std::vector<std::vector<double>> g;
  g.reserve(xs.size());
  for (double x : xs) g.push_back({x});
  return g;
}

inline std::vector<std::vector<double>> grid2d(const std::vector<double>& deltas,
                                               const std::vector<double>& lambdas) {
  std::vector<std::vector<double>> g;
  g.reserve(deltas.size() * lambdas.size());
  for (double d : deltas)
    for (double l : lambdas) g.push_back({d, l});
  return g;
}

inline AnsatzKind ansatz_kind_from(const std::string& s) {
  if (s == "hea") return AnsatzKind::HEA;
  if (s == "mera") return AnsatzKind::MERA;
  throw config_error("unknown ansatz: \"" + s + "\" (want \"hea\" or \"mera\")");
}

inline EncoderKind encoder_kind_from(const std::string& s) {
  if (s == "mlp") return EncoderKind::MLP;
  if (s == "affine") return EncoderKind::AFFINE;
  if (s == "direct") return EncoderKind::DIRECT;
  throw config_error("unknown encoder: \"" + s + "\"");
}

inline LrSchedule lr_from(const json& j) {
  LrSchedule s;
  s.initial = j.at("initial").get<double>();
  s.factor = j.at("factor").get<double>();
  s.interval = j.at("interval").get<int>();
  if (s.initial <= 0.0) throw config_error("lr.initial must be > 0");
  if (s.factor <= 0.0 || s.factor > 1.0)
    throw config_error("lr.factor must lie in (0, 1]");
  return s;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Default artifact root: $NNVQE_OUT_DIR if set, else ./nnvqe_runs.
inline std::string default_output_root() {
  const char* env = std::getenv("NNVQE_OUT_DIR");
  return env && *env ? env : "nnvqe_runs";
}

inline std::string resolve_output_dir(const json& cfg) {
  const std::string explicit_dir = cfg.at("output_dir").get<std::string>();
  if (!explicit_dir.empty()) return explicit_dir;
  return default_output_root() + "/" + cfg.at("label").get<std::string>();
}

using LogFn = std::function<void(const std::string&)>;

namespace detail {

inline void log_to(const LogFn& log, const std::string& msg) {
  if (log) log(msg);
}

inline EncoderSpec encoder_spec_from(const json& cfg, int input_dim,
                                     int output_dim, int hidden,
                                     double dropout) {
  EncoderSpec spec;
  spec.kind = encoder_kind_from(cfg.at("encoder").get<std::string>());
  spec.input_dim = input_dim;
  spec.hidden_dim = spec.kind == EncoderKind::MLP ? hidden : 0;
  spec.output_dim = output_dim;
  spec.dropout = spec.kind == EncoderKind::MLP ? dropout : 0.0;
  spec.validate();
  return spec;
}

struct Artifacts {
  std::string dir;
  std::vector<std::string> names;

  std::string path(const std::string& name) {
    names.push_back(name);
    return dir + "/" + name;
  }
};

inline void write_manifest(Artifacts& art, const json& cfg) {
  json manifest;
  manifest["label"] = cfg.at("label");
  manifest["seed"] = cfg.at("seed");
  manifest["timestamp"] = utc_timestamp();
  manifest["config"] = cfg;
  manifest["artifacts"] = art.names;
  write_text_file(art.dir + "/manifest.json", manifest.dump(2) + "\n");
}

inline std::string num_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// ---- per-kind runners ------------------------------------------------------

inline void run_sweep_common(const json& cfg, Artifacts& art, bool two_param,
                             const LogFn& log) {
  const int n = cfg.at("n_qubits").get<int>();
  const AnsatzKind ansatz = ansatz_kind_from(cfg.at("ansatz").get<std::string>());
  const int epochs = cfg.at("epochs").get<int>();
  const LrSchedule lr = lr_from(cfg.at("lr"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

  HamiltonianFamily family =
      two_param ? xxz_family_two_param(n)
                : xxz_family(n, cfg.at("lambda").get<double>());
  std::vector<std::vector<double>> train_grid, test_grid;
  if (two_param) {
    train_grid = grid2d(range_from(cfg.at("train_delta")),
                        range_from(cfg.at("train_lambda")));
    test_grid = grid2d(range_from(cfg.at("test_delta")),
                       range_from(cfg.at("test_lambda")));
  } else {
    train_grid = grid1d(range_from(cfg.at("train_delta")));
    test_grid = grid1d(range_from(cfg.at("test_delta")));
  }

  ExactCache exact(family);
  std::vector<std::string> param_names = family.param_names;

  std::ostringstream summary;
  summary << "depth,n_params,hidden,dropout,train_cost,median_rel_err,max_rel_err\n";

  for (const json& variant : cfg.at("variants")) {
    const int depth = variant.at("depth").get<int>();
    const int hidden = variant.at("hidden").get<int>();
    const double dropout = variant.at("dropout").get<double>();
    const std::string tag = "d" + std::to_string(depth);
    log_to(log, "variant depth=" + std::to_string(depth));

    TrainConfig tc;
    tc.family = family;
    tc.circuit = build_ansatz(ansatz, n, depth);
    tc.encoder = encoder_spec_from(cfg, family.param_dim(),
                                   tc.circuit.n_params, hidden, dropout);
    tc.train_points = train_grid;
    tc.max_epochs = epochs;
    tc.lr = lr;
    tc.seed = seed;
    if (log)
      tc.observer = [&](const EpochRecord& r) {
        if (r.epoch % 500 == 0)
          log_to(log, "  epoch " + std::to_string(r.epoch) + " cost " +
                          format_double(r.cost));
      };

    TrainedModel model = train(tc);
    const auto records = evaluate_on_grid(tc.circuit, model.encoder, exact, test_grid);

    write_sweep_csv(art.path("sweep_" + tag + ".csv"), param_names, records,
                    two_param);
    write_history_csv(art.path("history_" + tag + ".csv"), model.history);
    const std::string ck = art.path("checkpoint_" + tag + ".bin");
    ensure_parent_dir(ck);
    save_encoder(ck, model.encoder);

    summary << depth << ',' << tc.circuit.n_params << ',' << hidden << ','
            << format_double(dropout) << ','
            << format_double(model.history.back().cost) << ','
            << format_double(median_rel_err(records)) << ','
            << format_double(max_rel_err(records)) << '\n';
  }
  write_text_file(art.path("summary.csv"), summary.str());
}

inline void run_active_learn(const json& cfg, Artifacts& art, const LogFn& log) {
  const int n = cfg.at("n_qubits").get<int>();
  HamiltonianFamily family = xxz_family(n, cfg.at("lambda").get<double>());

  ActiveLearnConfig al;
  al.train.family = family;
  al.train.circuit = build_ansatz(
      ansatz_kind_from(cfg.at("ansatz").get<std::string>()), n,
      cfg.at("depth").get<int>());
  al.train.encoder = encoder_spec_from(
      cfg, family.param_dim(), al.train.circuit.n_params,
      cfg.at("hidden").get<int>(), cfg.at("dropout").get<double>());
  al.train.max_epochs = cfg.at("epochs").get<int>();
  al.train.lr = lr_from(cfg.at("lr"));
  al.train.seed = cfg.at("seed").get<std::uint64_t>();
  al.pool = grid1d(range_from(cfg.at("pool")));
  al.test_grid = grid1d(range_from(cfg.at("test_delta")));
  al.mu = cfg.at("mu").get<double>();
  al.stop_threshold = cfg.at("threshold").get<double>();
  al.max_points = cfg.at("max_points").get<int>();
  al.cold_start = cfg.at("cold_start").get<bool>();

  ExactCache exact(family);
  ActiveLearnResult result = active_learn(al, exact);
  for (const RoundRecord& r : result.rounds)
    log_to(log, "round " + std::to_string(r.round) + " added " +
                    format_double(r.added_point.front()) + " max_rel_err " +
                    format_double(r.test_max_rel_err));

  write_rounds_csv(art.path("rounds.csv"), result.rounds);
  const auto records = evaluate_on_grid(al.train.circuit, result.model.encoder,
                                        exact, al.test_grid);
  write_sweep_csv(art.path("sweep.csv"), family.param_names, records, false);
  write_history_csv(art.path("history.csv"), result.model.history);
  const std::string ck = art.path("checkpoint.bin");
  ensure_parent_dir(ck);
  save_encoder(ck, result.model.encoder);
}

inline void run_speedup(const json& cfg, Artifacts& art, const LogFn& log) {
  const int n = cfg.at("n_qubits").get<int>();
  HamiltonianFamily family = xxz_family(n, cfg.at("lambda").get<double>());
  const int trials = cfg.at("trials").get<int>();
  if (trials < 1) throw config_error("trials must be >= 1");

  TrainConfig base;
  base.family = family;
  base.circuit = build_ansatz(
      ansatz_kind_from(cfg.at("ansatz").get<std::string>()), n,
      cfg.at("depth").get<int>());
  base.encoder = encoder_spec_from(
      cfg, family.param_dim(), base.circuit.n_params,
      cfg.at("hidden").get<int>(), cfg.at("dropout").get<double>());
  base.max_epochs = cfg.at("epochs").get<int>();
  base.lr = lr_from(cfg.at("lr"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

  std::ostringstream summary;
  summary << "delta,seed,nn_cost_epoch20,direct_cost_epoch20,"
             "nn_first_update,direct_first_update,"
             "nn_final_rel_err,direct_final_rel_err\n";

  for (const json& dj : cfg.at("deltas")) {
    const double delta = dj.get<double>();
    log_to(log, "delta " + num_tag(delta));
    const double e0 = exact_ground_state(family.at({delta})).first;

    std::ostringstream curves;
    curves << "seed,epoch,nn_cost,nn_rel_err,nn_param_update,"
              "direct_cost,direct_rel_err,direct_param_update\n";

    for (int t = 0; t < trials; ++t) {
      TrainConfig tc = base;
      tc.train_points = {{delta}};
      tc.seed = substream(seed, static_cast<std::uint64_t>(t) + 1, 0);
      PairedRun run = train_with_direct_baseline(tc);

      const auto& nh = run.nn.history;
      const auto& dh = run.direct.history;
      for (std::size_t e = 0; e < nh.size(); ++e) {
        curves << t << ',' << e << ',' << format_double(nh[e].cost) << ','
               << format_double(std::abs(nh[e].cost - e0) / std::abs(e0)) << ','
               << format_double(nh[e].param_update) << ','
               << format_double(dh[e].cost) << ','
               << format_double(std::abs(dh[e].cost - e0) / std::abs(e0)) << ','
               << format_double(dh[e].param_update) << '\n';
      }

      const std::size_t probe = std::min<std::size_t>(20, nh.size() - 1);
      const double nn_final = eval_energy(tc, run.nn.encoder, {delta});
      const double di_final = eval_energy(tc, run.direct.encoder, {delta});
      summary << num_tag(delta) << ',' << t << ','
              << format_double(nh[probe].cost) << ','
              << format_double(dh[probe].cost) << ','
              << format_double(nh.front().param_update) << ','
              << format_double(dh.front().param_update) << ','
              << format_double(std::abs(nn_final - e0) / std::abs(e0)) << ','
              << format_double(std::abs(di_final - e0) / std::abs(e0)) << '\n';
    }
    write_text_file(art.path("speedup_delta" + num_tag(delta) + ".csv"),
                    curves.str());
  }
  write_text_file(art.path("summary.csv"), summary.str());
}

inline void run_convergence_table(const json& cfg, Artifacts& art,
                                  const LogFn& log) {
  const AnsatzKind ansatz = ansatz_kind_from(cfg.at("ansatz").get<std::string>());
  const int depth = cfg.at("depth").get<int>();
  const double dropout = cfg.at("dropout").get<double>();
  const double lambda = cfg.at("lambda").get<double>();
  const int trials = cfg.at("trials").get<int>();
  const double threshold = cfg.at("threshold").get<double>();

  std::vector<ConvergenceRow> rows;
  for (const json& rj : cfg.at("rows")) {
    const double delta = rj.at("delta").get<double>();
    const int n = rj.at("n_qubits").get<int>();
    const int hidden = rj.at("hidden").get<int>();
    log_to(log, "delta " + num_tag(delta) + " n " + std::to_string(n));

    HamiltonianFamily family = xxz_family(n, lambda);
    TrainConfig tc;
    tc.family = family;
    tc.circuit = build_ansatz(ansatz, n, depth);
    tc.encoder = encoder_spec_from(cfg, family.param_dim(),
                                   tc.circuit.n_params, hidden, dropout);
    tc.train_points = {{delta}};
    tc.max_epochs = cfg.at("epochs").get<int>();
    tc.lr = lr_from(cfg.at("lr"));
    tc.seed = cfg.at("seed").get<std::uint64_t>();

    const double e0 = exact_ground_state(family.at({delta})).first;
    const ConvergenceRates rates = convergence_rates(tc, e0, trials, threshold);
    rows.push_back({delta, n, rates.nn_rate, rates.vqe_rate});
    log_to(log, "  rates nn " + format_double(rates.nn_rate) + " vqe " +
                    format_double(rates.vqe_rate));
  }
  write_convergence_csv(art.path("convergence.csv"), rows);
}

inline void run_param_dump(const json& cfg, Artifacts& art, const LogFn& log) {
  const int n = cfg.at("n_qubits").get<int>();
  HamiltonianFamily family = xxz_family(n, cfg.at("lambda").get<double>());

  TrainConfig tc;
  tc.family = family;
  tc.circuit = build_ansatz(
      ansatz_kind_from(cfg.at("ansatz").get<std::string>()), n,
      cfg.at("depth").get<int>());
  tc.encoder = encoder_spec_from(
      cfg, family.param_dim(), tc.circuit.n_params,
      cfg.at("hidden").get<int>(), cfg.at("dropout").get<double>());
  tc.train_points = grid1d(range_from(cfg.at("train_delta")));
  tc.max_epochs = cfg.at("epochs").get<int>();
  tc.lr = lr_from(cfg.at("lr"));
  tc.seed = cfg.at("seed").get<std::uint64_t>();
  if (log)
    tc.observer = [&](const EpochRecord& r) {
      if (r.epoch % 500 == 0)
        log_to(log, "epoch " + std::to_string(r.epoch) + " cost " +
                        format_double(r.cost));
    };

  TrainedModel model = train(tc);
  const ParamDump dump = dump_circuit_parameters(
      tc.circuit, model.encoder, grid1d(range_from(cfg.at("dump_delta"))));
  write_param_dump_csv(art.path("params.csv"), dump);
  write_history_csv(art.path("history.csv"), model.history);
  const std::string ck = art.path("checkpoint.bin");
  ensure_parent_dir(ck);
  save_encoder(ck, model.encoder);
}

inline void run_baseline_compare(const json& cfg, Artifacts& art,
                                 const LogFn& log) {
  const int n = cfg.at("n_qubits").get<int>();
  HamiltonianFamily family = xxz_family(n, cfg.at("lambda").get<double>());
  ExactCache exact(family);

  TrainConfig base;
  base.family = family;
  base.circuit = build_ansatz(
      ansatz_kind_from(cfg.at("ansatz").get<std::string>()), n,
      cfg.at("depth").get<int>());
  base.train_points = grid1d(range_from(cfg.at("train_delta")));
  base.max_epochs = cfg.at("epochs").get<int>();
  base.lr = lr_from(cfg.at("lr"));
  base.seed = cfg.at("seed").get<std::uint64_t>();
  const auto test_grid = grid1d(range_from(cfg.at("test_delta")));

  std::ostringstream summary;
  summary << "encoder,n_weights,train_cost,median_rel_err,max_rel_err\n";

  for (const EncoderKind kind : {EncoderKind::MLP, EncoderKind::AFFINE}) {
    log_to(log, std::string("encoder ") + encoder_kind_name(kind));
    TrainConfig tc = base;
    tc.encoder.kind = kind;
    tc.encoder.input_dim = family.param_dim();
    tc.encoder.output_dim = tc.circuit.n_params;
    tc.encoder.hidden_dim = kind == EncoderKind::MLP ? cfg.at("hidden").get<int>() : 0;
    tc.encoder.dropout = kind == EncoderKind::MLP ? cfg.at("dropout").get<double>() : 0.0;

    TrainedModel model = train(tc);
    const auto records = evaluate_on_grid(tc.circuit, model.encoder, exact, test_grid);
    const std::string tag = encoder_kind_name(kind);
    write_sweep_csv(art.path("sweep_" + tag + ".csv"), family.param_names,
                    records, false);
    write_history_csv(art.path("history_" + tag + ".csv"), model.history);
    summary << tag << ',' << tc.encoder.n_weights() << ','
            << format_double(model.history.back().cost) << ','
            << format_double(median_rel_err(records)) << ','
            << format_double(max_rel_err(records)) << '\n';
  }
  write_text_file(art.path("summary.csv"), summary.str());
}

}  // namespace detail

struct RunResult {
  std::string output_dir;
  std::vector<std::string> artifacts;
};

/// Execute a resolved config, write all artifacts plus manifest.json under
/// the resolved output directory, and return their names.
inline RunResult run_experiment(const json& cfg, const LogFn& log = nullptr) {
  const ExperimentKind kind =
      experiment_kind_from(cfg.at("experiment").get<std::string>());

  detail::Artifacts art;
  art.dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(art.dir);

  switch (kind) {
    case ExperimentKind::sweep1d:
      detail::run_sweep_common(cfg, art, false, log);
      break;
    case ExperimentKind::sweep2d:
      detail::run_sweep_common(cfg, art, true, log);
      break;
    case ExperimentKind::active_learn:
      detail::run_active_learn(cfg, art, log);
      break;
    case ExperimentKind::speedup:
      detail::run_speedup(cfg, art, log);
      break;
    case ExperimentKind::convergence_table:
      detail::run_convergence_table(cfg, art, log);
      break;
    case ExperimentKind::param_dump:
      detail::run_param_dump(cfg, art, log);
      break;
    case ExperimentKind::baseline_compare:
      detail::run_baseline_compare(cfg, art, log);
      break;
  }

  detail::write_manifest(art, cfg);
  RunResult result;
  result.output_dir = art.dir;
  result.artifacts = art.names;
  result.artifacts.push_back("manifest.json");
  return result;
}

}  // namespace nnvqe
