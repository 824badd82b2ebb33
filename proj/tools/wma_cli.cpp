// Command-line front end. Five subcommands cover the analysis surface:
//   amplify   exact and small-signal readout phases for one configuration
//   sweep     the same quantities over a theta/delta/chi grid
//   simulate  seeded Monte Carlo counting experiments with phase estimates
//   noise     radiation-pressure/shot-noise budget over a photon-number range
//   baseline  conventional weak-value readout for comparison
// All output is deterministic: a fixed configuration (including the seed)
// produces byte-identical CSV or JSON on every run.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wma/io.hpp"
#include "wma/monte_carlo.hpp"
#include "wma/optical_elements.hpp"
#include "wma/protocol.hpp"

namespace {

using nlohmann::ordered_json;

constexpr double kInvSqrt2 = 0.7071067811865475244;

// Non-finite numbers have no portable text form; emit them as nulls so CSV
// and JSON stay value-for-value identical.
ordered_json json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

// Input-side splitter amplitudes (alpha, beta). When only one amplitude is
// given the other is completed positively; when neither is given the input
// splitter is balanced.
struct PreOpts {
  double r1 = 0.0;
  double t1 = 0.0;
  CLI::Option* r1_opt = nullptr;
  CLI::Option* t1_opt = nullptr;

  void add_to(CLI::App* cmd) {
    r1_opt = cmd->add_option("--r1", r1,
                             "Input splitter reflection amplitude (default 1/sqrt2)");
    t1_opt = cmd->add_option("--t1", t1,
                             "Input splitter transmission amplitude (default 1/sqrt2)");
  }

  wma::PreSelection resolve() const {
    const bool has_r = r1_opt->count() > 0;
    const bool has_t = t1_opt->count() > 0;
    if (!has_r && !has_t) return wma::PreSelection{kInvSqrt2, kInvSqrt2};
    if (has_r && has_t) return wma::PreSelection{r1, t1};
    const double given = has_r ? r1 : t1;
    if (std::abs(given) > 1.0) {
      throw std::invalid_argument(
          "a single splitter amplitude must lie in [-1, 1] so its partner can "
          "be completed");
    }
    const double other = std::sqrt(1.0 - given * given);
    return has_r ? wma::PreSelection{r1, other} : wma::PreSelection{other, t1};
  }
};

// Post-selection parametrization: exactly one of --delta, --chi, or the
// explicit pair --r2/--t2.
struct PostOpts {
  double delta = 0.0;
  double chi = 0.0;
  double r2 = 0.0;
  double t2 = 0.0;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* chi_opt = nullptr;
  CLI::Option* r2_opt = nullptr;
  CLI::Option* t2_opt = nullptr;

  void add_to(CLI::App* cmd) {
    delta_opt = cmd->add_option(
        "--delta", delta, "Readout offset: the small-signal slope is 1/delta");
    chi_opt = cmd->add_option("--chi", chi,
                              "Output splitter angle: (r2, t2) = (cos chi, sin chi)");
    r2_opt = cmd->add_option("--r2", r2, "Output splitter reflection amplitude");
    t2_opt = cmd->add_option("--t2", t2, "Output splitter transmission amplitude");
  }

  bool any_given() const {
    return delta_opt->count() > 0 || chi_opt->count() > 0 || r2_opt->count() > 0 ||
           t2_opt->count() > 0;
  }

  wma::PostSelection resolve() const {
    const bool has_pair = r2_opt->count() > 0 || t2_opt->count() > 0;
    if (has_pair && (r2_opt->count() == 0 || t2_opt->count() == 0)) {
      throw std::invalid_argument("--r2 and --t2 must be given together");
    }
    const int ways = (delta_opt->count() > 0) + (chi_opt->count() > 0) + has_pair;
    if (ways != 1) {
      throw std::invalid_argument(
          "exactly one of --delta, --chi, or --r2/--t2 must select the "
          "post-selection");
    }
    if (delta_opt->count() > 0) return wma::PostSelection::from_offset(delta);
    if (chi_opt->count() > 0) return wma::PostSelection::from_angle(chi);
    return wma::PostSelection{r2, t2};
  }
};

struct OutputOpts {
  std::string format = "csv";
  std::string path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", path, "Output file (default: stdout)");
  }
};

// ---------------------------------------------------------------------------
// Record assembly
// ---------------------------------------------------------------------------

ordered_json base_meta(const std::string& command) {
  ordered_json meta;
  meta["command"] = command;
  meta["tool"] = wma::kToolName;
  meta["version"] = wma::kToolVersion;
  return meta;
}

void echo_selection(ordered_json& meta, const wma::PreSelection& pre,
                    const wma::PostSelection& post) {
  meta["alpha"] = json_num(pre.alpha);
  meta["beta"] = json_num(pre.beta);
  meta["gamma"] = json_num(post.gamma);
  meta["eta"] = json_num(post.eta);
}

// Effective readout offset of the full configuration: the exact phase obeys
// tan(phi) = sin(theta) / (cos(theta) + delta_eff - 1). Null when the
// transmission product vanishes and the notion loses meaning.
ordered_json delta_eff_diagnostic(const wma::PreSelection& pre,
                                  const wma::PostSelection& post) {
  const double denom = pre.beta * post.eta;
  if (denom == 0.0) return nullptr;
  return json_num(1.0 + (pre.alpha * post.gamma) / denom);
}

// One closed-form evaluation; the compensation phase routes through the full
// optical pipeline, which is the only place it acts.
wma::AmplificationResult evaluate_amplification(const wma::PreSelection& pre,
                                                const wma::PostSelection& post,
                                                double theta, double phi_c) {
  if (phi_c == 0.0) return wma::run_abstract_protocol(pre, post, theta);
  return wma::run_ligo_pipeline(wma::BeamSplitterParams{pre.alpha, pre.beta},
                                wma::BeamSplitterParams{post.gamma, post.eta}, theta,
                                phi_c);
}

ordered_json amplification_record(const wma::AmplificationResult& res, double theta,
                                  const wma::PreSelection& pre,
                                  const wma::PostSelection& post) {
  ordered_json rec;
  rec["theta"] = json_num(theta);
  rec["phi_exact"] = json_num(res.phi_exact);
  rec["phi_first_order"] = json_num(res.phi_first_order);
  rec["h"] = json_num(res.h);
  rec["p_post"] = json_num(res.p_post);
  rec["delta_eff"] = delta_eff_diagnostic(pre, post);
  return rec;
}

const std::vector<std::string> kAmplifyColumns = {
    "theta", "phi_exact", "phi_first_order", "h", "p_post", "delta_eff"};

// Inclusive grid with exact endpoints; optionally log-spaced.
std::vector<double> make_grid(double from, double to, int points, bool log_spaced) {
  if (points < 1) throw std::invalid_argument("--points must be at least 1");
  if (points == 1) {
    if (from != to) {
      throw std::invalid_argument("a single-point sweep needs --from equal to --to");
    }
    return {from};
  }
  if (log_spaced && (!(from > 0.0) || !(to > 0.0))) {
    throw std::invalid_argument("a logarithmic grid needs positive endpoints");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = log_spaced ? std::log(from) : from;
  const double hi = log_spaced ? std::log(to) : to;
  for (int i = 0; i < points; ++i) {
    if (i == 0) {
      grid[0] = from;
    } else if (i == points - 1) {
      grid[static_cast<std::size_t>(points) - 1] = to;
    } else {
      const double v = lo + (hi - lo) * i / (points - 1);
      grid[static_cast<std::size_t>(i)] = log_spaced ? std::exp(v) : v;
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct AmplifyCmd {
  double theta = 0.0;
  double phi_c = 0.0;
  PreOpts pre;
  PostOpts post;
  OutputOpts output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "amplify", "Exact and small-signal readout phases for one configuration");
    cmd->add_option("--theta", theta, "Signal phase (radians)");
    cmd->add_option("--phi-c", phi_c, "Compensation phase on the reflected arm");
    pre.add_to(cmd);
    post.add_to(cmd);
    output.add_to(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const wma::PreSelection p = pre.resolve();
    const wma::PostSelection q = post.resolve();
    const auto res = evaluate_amplification(p, q, theta, phi_c);

    wma::OutputTable table;
    table.meta = base_meta("amplify");
    echo_selection(table.meta, p, q);
    table.meta["phi_c"] = json_num(phi_c);
    table.columns = kAmplifyColumns;
    table.records.push_back(amplification_record(res, theta, p, q));
    wma::write_output(table, output.format, output.path);
  }
};

struct SweepCmd {
  std::string var;
  double from = 0.0;
  double to = 0.0;
  int points = 50;
  bool log_spaced = false;
  double theta = 0.0;
  double phi_c = 0.0;
  PreOpts pre;
  PostOpts post;
  OutputOpts output;
  CLI::Option* theta_opt = nullptr;

  void add_to(CLI::App& app) {
    auto* cmd =
        app.add_subcommand("sweep", "Amplification quantities over a parameter grid");
    cmd->add_option("--var", var, "Grid variable")
        ->required()
        ->check(CLI::IsMember({"theta", "delta", "chi"}));
    cmd->add_option("--from", from, "First grid value")->required();
    cmd->add_option("--to", to, "Last grid value")->required();
    cmd->add_option("--points", points, "Number of grid points (default 50)");
    cmd->add_flag("--log", log_spaced, "Log-spaced grid (positive endpoints)");
    theta_opt = cmd->add_option("--theta", theta, "Signal phase (fixed, radians)");
    cmd->add_option("--phi-c", phi_c, "Compensation phase on the reflected arm");
    pre.add_to(cmd);
    post.add_to(cmd);
    output.add_to(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const wma::PreSelection p = pre.resolve();
    if (var == "theta") {
      if (theta_opt->count() > 0) {
        throw std::invalid_argument("--theta conflicts with --var theta");
      }
    } else if (post.any_given()) {
      throw std::invalid_argument(
          "--var delta/chi sweeps the post-selection; do not also give "
          "--delta/--chi/--r2/--t2");
    }
    const wma::PostSelection fixed_post =
        (var == "theta") ? post.resolve() : wma::PostSelection{};
    const std::vector<double> grid = make_grid(from, to, points, log_spaced);

    wma::OutputTable table;
    table.meta = base_meta("sweep");
    table.meta["var"] = var;
    table.meta["from"] = json_num(from);
    table.meta["to"] = json_num(to);
    table.meta["points"] = points;
    table.meta["log"] = log_spaced;
    table.meta["alpha"] = json_num(p.alpha);
    table.meta["beta"] = json_num(p.beta);
    table.meta["phi_c"] = json_num(phi_c);
    table.columns.reserve(kAmplifyColumns.size() + 1);
    table.columns.push_back("sweep_value");
    for (const auto& c : kAmplifyColumns) table.columns.push_back(c);

    for (const double v : grid) {
      wma::PostSelection q = fixed_post;
      double point_theta = theta;
      if (var == "theta") {
        point_theta = v;
      } else if (var == "delta") {
        q = wma::PostSelection::from_offset(v);
      } else {
        q = wma::PostSelection::from_angle(v);
      }
      const auto res = evaluate_amplification(p, q, point_theta, phi_c);
      ordered_json rec = amplification_record(res, point_theta, p, q);
      ordered_json row;
      row["sweep_value"] = json_num(v);
      for (auto& [key, value] : rec.items()) row[key] = value;
      table.records.push_back(std::move(row));
    }
    wma::write_output(table, output.format, output.path);
  }
};

struct SimulateCmd {
  double theta = 0.0;
  double phi_c = 0.0;
  std::uint64_t n_input = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t reps = 1;
  PreOpts pre;
  PostOpts post;
  OutputOpts output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "simulate", "Seeded Monte Carlo counting experiments with phase estimates");
    cmd->add_option("--theta", theta, "Signal phase (radians)");
    cmd->add_option("--phi-c", phi_c, "Compensation phase on the reflected arm");
    cmd->add_option("--n-input", n_input, "Photons per repetition (default 1e6)");
    cmd->add_option("--seed", seed, "Random seed (default 0)");
    cmd->add_option("--reps", reps, "Number of repetitions (default 1)");
    pre.add_to(cmd);
    post.add_to(cmd);
    output.add_to(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    wma::McConfig cfg;
    cfg.pre = pre.resolve();
    cfg.post = post.resolve();
    cfg.phi_c = phi_c;
    cfg.theta = theta;
    cfg.n_input = n_input;
    cfg.seed = seed;
    cfg.repetitions = reps;
    const auto records = wma::run_repetitions_parallel(cfg);
    const auto summary = wma::summarize(records);
    const auto derived = wma::derive_probabilities(cfg);

    wma::OutputTable table;
    table.meta = base_meta("simulate");
    echo_selection(table.meta, cfg.pre, cfg.post);
    table.meta["theta"] = json_num(theta);
    table.meta["phi_c"] = json_num(phi_c);
    table.meta["n_input"] = n_input;
    table.meta["seed"] = seed;
    table.meta["reps"] = reps;
    table.meta["rng"] = wma::kRngContract;
    table.meta["p_post"] = json_num(derived.p_post);
    table.meta["phi_true"] = json_num(derived.phi_true);
    table.meta["p_r"] = json_num(derived.p_r);
    table.columns = {"record",   "stream_id", "n_input",        "n_post",
                     "n_r",      "n_l",       "valid",          "phi_hat",
                     "theta_hat", "stderr_phi", "stderr_theta", "stddev_phi_hat",
                     "stddev_theta_hat"};

    for (const auto& rec : records) {
      ordered_json row;
      row["record"] = "rep";
      row["stream_id"] = rec.stream_id;
      row["n_input"] = rec.counts.n_input;
      row["n_post"] = rec.counts.n_post;
      row["n_r"] = rec.counts.n_r;
      row["n_l"] = rec.counts.n_l;
      row["valid"] = rec.estimate_valid ? 1 : 0;
      if (rec.estimate_valid) {
        row["phi_hat"] = json_num(rec.estimate.phi_hat);
        row["theta_hat"] = json_num(rec.estimate.theta_hat);
        row["stderr_phi"] = json_num(rec.estimate.stderr_phi);
        row["stderr_theta"] = json_num(rec.estimate.stderr_theta);
      } else {
        row["phi_hat"] = nullptr;
        row["theta_hat"] = nullptr;
        row["stderr_phi"] = nullptr;
        row["stderr_theta"] = nullptr;
      }
      row["stddev_phi_hat"] = nullptr;
      row["stddev_theta_hat"] = nullptr;
      table.records.push_back(std::move(row));
    }

    ordered_json row;
    row["record"] = "summary";
    row["stream_id"] = nullptr;
    row["n_input"] = nullptr;
    row["n_post"] = nullptr;
    row["n_r"] = nullptr;
    row["n_l"] = nullptr;
    row["valid"] = summary.valid_repetitions;
    row["phi_hat"] = json_num(summary.mean_phi_hat);
    row["theta_hat"] = json_num(summary.mean_theta_hat);
    row["stderr_phi"] = nullptr;
    row["stderr_theta"] = json_num(summary.mean_stderr_theta);
    row["stddev_phi_hat"] = json_num(summary.stddev_phi_hat);
    row["stddev_theta_hat"] = json_num(summary.stddev_theta_hat);
    table.records.push_back(std::move(row));

    wma::write_output(table, output.format, output.path);
  }
};

struct NoiseCmd {
  double n_min = 1e2;
  double n_max = 1e10;
  int points = 50;
  double t1 = kInvSqrt2;
  double t2 = kInvSqrt2;
  OutputOpts output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "noise", "Radiation-pressure and shot-noise budget over a photon range");
    cmd->add_option("--n-min", n_min, "Smallest photon number (default 1e2)");
    cmd->add_option("--n-max", n_max, "Largest photon number (default 1e10)");
    cmd->add_option("--points", points, "Number of grid points (default 50)");
    cmd->add_option("--t1", t1, "Input splitter transmission (default 1/sqrt2)");
    cmd->add_option("--t2", t2, "Output splitter transmission (default 1/sqrt2)");
    output.add_to(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto sweep = wma::noise_budget_sweep(n_min, n_max, points, t1, t2);

    wma::OutputTable table;
    table.meta = base_meta("noise");
    table.meta["n_min"] = json_num(n_min);
    table.meta["n_max"] = json_num(n_max);
    table.meta["points"] = points;
    table.meta["t1"] = json_num(t1);
    table.meta["t2"] = json_num(t2);
    table.columns = {"record", "n_photons", "t1",      "t2",
                     "h_rn",   "h_sn",      "h_total", "n_star"};

    for (const auto& r : sweep.rows) {
      ordered_json row;
      row["record"] = "point";
      row["n_photons"] = json_num(r.n_photons);
      row["t1"] = json_num(r.t1);
      row["t2"] = json_num(r.t2);
      row["h_rn"] = json_num(r.h_rn);
      row["h_sn"] = json_num(r.h_sn);
      row["h_total"] = json_num(r.h_total);
      row["n_star"] = nullptr;
      table.records.push_back(std::move(row));
    }

    // The crossover record evaluates both terms at the balance point.
    const double h_rn = wma::radiation_pressure_noise(sweep.n_star, t1);
    const double h_sn = wma::shot_noise(sweep.n_star, t1, t2);
    ordered_json row;
    row["record"] = "crossover";
    row["n_photons"] = json_num(sweep.n_star);
    row["t1"] = json_num(t1);
    row["t2"] = json_num(t2);
    row["h_rn"] = json_num(h_rn);
    row["h_sn"] = json_num(h_sn);
    row["h_total"] = json_num(std::hypot(h_rn, h_sn));
    row["n_star"] = json_num(sweep.n_star);
    table.records.push_back(std::move(row));

    wma::write_output(table, output.format, output.path);
  }
};

struct BaselineCmd {
  double theta = 0.0;
  PreOpts pre;
  PostOpts post;
  OutputOpts output;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "baseline", "Conventional weak-value pointer readout for comparison");
    cmd->add_option("--theta", theta, "Coupling strength (radians)");
    pre.add_to(cmd);
    post.add_to(cmd);
    output.add_to(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const wma::PreSelection p = pre.resolve();
    const wma::PostSelection q = post.resolve();
    const auto out = wma::wva_pointer_expectations(theta, p, q);
    if (!out.weak_value_defined) {
      std::cerr << "warning[divergent-weak-value]: pre/post overlap is zero; "
                   "linear-response fields are omitted\n";
    }

    wma::OutputTable table;
    table.meta = base_meta("baseline");
    echo_selection(table.meta, p, q);
    table.columns = {"theta",
                     "weak_value_re",
                     "weak_value_im",
                     "weak_value_defined",
                     "exact_sigma_plus",
                     "exact_sigma_r",
                     "first_order_sigma_plus",
                     "first_order_sigma_r",
                     "sigma_plus_gap"};

    ordered_json row;
    row["theta"] = json_num(theta);
    if (out.weak_value_defined) {
      row["weak_value_re"] = json_num(out.weak_value_ratio.real());
      row["weak_value_im"] = json_num(out.weak_value_ratio.imag());
    } else {
      row["weak_value_re"] = nullptr;
      row["weak_value_im"] = nullptr;
    }
    row["weak_value_defined"] = out.weak_value_defined;
    row["exact_sigma_plus"] = json_num(out.exact_sigma_plus);
    row["exact_sigma_r"] = json_num(out.exact_sigma_r);
    row["first_order_sigma_plus"] = json_num(out.first_order_sigma_plus);
    row["first_order_sigma_r"] = json_num(out.first_order_sigma_r);
    row["sigma_plus_gap"] =
        json_num(out.first_order_sigma_plus - out.exact_sigma_plus);
    table.records.push_back(std::move(row));

    wma::write_output(table, output.format, output.path);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Phase-amplified interferometry toolkit: exact readout phases, parameter "
      "sweeps, seeded counting experiments, and quantum-noise budgets"};
  app.require_subcommand(1);

  AmplifyCmd amplify;
  SweepCmd sweep;
  SimulateCmd simulate;
  NoiseCmd noise;
  BaselineCmd baseline;
  amplify.add_to(app);
  sweep.add_to(app);
  simulate.add_to(app);
  noise.add_to(app);
  baseline.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[invalid-argument]: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error[degenerate]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
