#include "ppfit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ppfit/ckmin.hpp"
#include "ppfit/datagen.hpp"
#include "ppfit/errors.hpp"
#include "ppfit/loss.hpp"
#include "ppfit/lsqfit.hpp"
#include "ppfit/optim.hpp"
#include "ppfit/profile_io.hpp"

namespace ppfit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Options shared between subcommands.

struct ModelOptions {
  std::string in;
  int segments = 0;  // 0: take from the CSV's sidecar, else 1
  int degree = 7;
  int k = 3;
  std::string basis = "cheb";
  std::string boundary = "open";
  std::string regularization = "factorial";
};

struct TrainOptions {
  double alpha = 0.1;
  std::string optimizer = "amsgrad";
  double lr = 0.0;  // 0: 1.0 for alpha == 0, else 0.1
  int epochs = 2000;
  int patience = 0;
  std::string init = "l2";
  std::uint64_t seed = 0;
  bool ckmin = false;
};

void add_model_options(CLI::App* app, ModelOptions& o, bool with_basis) {
  app->add_option("--in", o.in, "Input CSV (header x,y)")->required();
  app->add_option("--segments", o.segments,
                  "Number of segments (default: sidecar value or 1)");
  app->add_option("--degree", o.degree, "Polynomial degree")
      ->capture_default_str();
  app->add_option("--k", o.k, "Continuity order")->capture_default_str();
  if (with_basis)
    app->add_option("--basis", o.basis, "cheb|power")->capture_default_str();
  app->add_option("--boundary", o.boundary, "open|cyclic|periodic")
      ->capture_default_str();
  app->add_option("--regularization", o.regularization,
                  "factorial|cheb-endpoint|none")
      ->capture_default_str();
}

void add_train_options(CLI::App* app, TrainOptions& o, bool with_alpha,
                       bool with_optimizer) {
  if (with_alpha)
    app->add_option("--alpha", o.alpha, "Continuity weight in [0, 1]")
        ->capture_default_str();
  if (with_optimizer)
    app->add_option("--optimizer", o.optimizer,
                    "sgd|sgd-momentum|sgd-nesterov|adagrad|adadelta|adam|"
                    "adamax|nadam|amsgrad|ftrl")
        ->capture_default_str();
  app->add_option("--lr", o.lr,
                  "Learning rate (default 1.0 if alpha = 0, else 0.1)");
  app->add_option("--epochs", o.epochs, "Maximum epochs")
      ->capture_default_str();
  app->add_option("--patience", o.patience,
                  "Early-stopping patience, 0 disables")
      ->capture_default_str();
  app->add_option("--init", o.init, "l2|zero|random")->capture_default_str();
  app->add_option("--seed", o.seed, "Seed for random initialization")
      ->capture_default_str();
  app->add_flag("--ckmin", o.ckmin,
                "Enforce C^k continuity on the trained result before export");
}

json model_echo(const ModelOptions& o, int segments) {
  return {{"in", o.in},           {"segments", segments},
          {"degree", o.degree},   {"k", o.k},
          {"basis", o.basis},     {"boundary", o.boundary},
          {"regularization", o.regularization}};
}

json train_echo(const TrainOptions& o) {
  return {{"alpha", o.alpha},     {"optimizer", o.optimizer},
          {"lr", o.lr},           {"epochs", o.epochs},
          {"patience", o.patience}, {"init", o.init},
          {"seed", o.seed},       {"ckmin", o.ckmin}};
}

// ---------------------------------------------------------------------------
// Problem setup and single training runs.

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".meta.json");
}

struct Problem {
  PointCloud points;
  SampleSet samples;
  std::vector<double> knots;
  int degree = 7;
  int k = 3;
  BoundaryMode boundary = BoundaryMode::Open;
  Regularization regularization = Regularization::Factorial;
};

Problem load_problem(const ModelOptions& o, int& segments) {
  Problem p;
  p.points = read_csv(o.in);
  segments = o.segments;
  if (segments == 0) {
    segments = 1;
    if (const auto side = sidecar_path(o.in); fs::exists(side)) {
      const auto meta = read_json(side);
      if (meta.contains("segments")) segments = meta.at("segments").get<int>();
    }
  }
  if (segments < 1) throw UsageError("--segments must be at least 1");
  if (o.degree < 0) throw UsageError("--degree must be non-negative");
  if (o.k < 0 || o.k > o.degree)
    throw UsageError(fmt::format("--k must lie in [0, degree = {}]", o.degree));
  p.samples = rescale(p.points, segments);
  p.knots = uniform_knots(segments);
  p.degree = o.degree;
  p.k = o.k;
  p.boundary = parse_boundary(o.boundary);
  p.regularization = parse_regularization(o.regularization);
  return p;
}

// Dashed-line references: the segment-wise least-squares optimum.
struct Reference {
  double l2_star = NAN;
  double l2_star_tilde = NAN;  // after CKMIN; NaN when degree < 2k+1
  double lsq_l2_plus_lck = NAN;
};

Reference reference_for(const Problem& p, const PiecewisePolynomial& lsq,
                        const LossConfig& loss) {
  Reference r;
  r.l2_star = l2_loss(lsq, p.samples);
  r.lsq_l2_plus_lck = r.l2_star + ck_loss(lsq, loss);
  if (p.degree >= 2 * p.k + 1)
    r.l2_star_tilde = l2_loss(ckmin(lsq, p.k), p.samples);
  return r;
}

struct CellOutcome {
  TrainResult result;
  Reference reference;
  std::optional<PiecewisePolynomial> corrected;
  double post_ckmin_l2 = NAN;
  double post_ckmin_lck = NAN;
};

TrainConfig make_train_config(const Problem& p, const TrainOptions& o) {
  TrainConfig cfg;
  cfg.optimizer.kind = parse_optimizer(o.optimizer);
  cfg.optimizer.learning_rate = o.lr > 0.0 ? o.lr : default_learning_rate(o.alpha);
  cfg.epochs = o.epochs;
  cfg.patience = o.patience;
  cfg.init = parse_init(o.init);
  cfg.rng_seed = o.seed;
  cfg.loss = {o.alpha, p.k, p.boundary, p.regularization};
  if (o.epochs < 1) throw UsageError("--epochs must be at least 1");
  if (o.patience < 0 || o.patience > o.epochs)
    throw UsageError("--patience must lie in [0, epochs]");
  if (!(o.alpha >= 0.0 && o.alpha <= 1.0))
    throw UsageError("--alpha must lie in [0, 1]");
  return cfg;
}

CellOutcome run_cell(const Problem& p, BasisKind basis, const TrainConfig& cfg,
                     bool require_ckmin) {
  const bool can_ckmin = p.degree >= 2 * p.k + 1;
  if (require_ckmin && !can_ckmin)
    throw UsageError(fmt::format(
        "--ckmin with k = {} needs degree >= {}", p.k, 2 * p.k + 1));

  const auto lsq = fit_segmentwise(p.samples, p.knots, p.degree, basis);
  auto result = train(p.samples,
                      cfg.init == InitStrategy::L2Optimum
                          ? lsq
                          : initialize(p.samples, p.knots, p.degree, basis,
                                       cfg.init, cfg.rng_seed),
                      cfg);
  CellOutcome out{std::move(result), reference_for(p, lsq, cfg.loss),
                  std::nullopt};
  if (can_ckmin) {
    out.corrected = ckmin(out.result.model, p.k, p.boundary);
    out.post_ckmin_l2 = l2_loss(*out.corrected, p.samples);
    out.post_ckmin_lck = ck_loss(*out.corrected, cfg.loss);
  }
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json cell_metrics(const CellOutcome& c) {
  const auto& best = c.result.trace.best();
  return {{"total", best.total},
          {"l2", best.l2},
          {"lck", best.ck},
          {"best_epoch", c.result.trace.best_epoch},
          {"epochs_run", c.result.trace.records.size()},
          {"stopped_early", c.result.trace.stopped_early},
          {"post_ckmin_l2", number_or_null(c.post_ckmin_l2)},
          {"post_ckmin_lck", number_or_null(c.post_ckmin_lck)},
          {"l2_star", number_or_null(c.reference.l2_star)},
          {"l2_star_tilde", number_or_null(c.reference.l2_star_tilde)},
          {"lsq_l2_plus_lck", number_or_null(c.reference.lsq_l2_plus_lck)}};
}

json data_echo(const Problem& p) {
  return {{"points", p.points.size()},
          {"domain", {p.points.x.front(), p.points.x.back()}},
          {"transform",
           {{"scale", p.samples.transform.scale},
            {"offset", p.samples.transform.offset}}}};
}

// Writes loss curve, profile and manifest for one run into dir.
json write_cell(const fs::path& dir, const std::string& command,
                const json& config, const Problem& p, const CellOutcome& c,
                bool export_corrected, const fs::path& profile_path,
                double seconds) {
  fs::create_directories(dir);
  const auto curve = dir / "loss_curve.csv";
  write_loss_curve(c.result.trace, curve);
  const auto& exported =
      export_corrected && c.corrected ? *c.corrected : c.result.model;
  write_profile(exported, p.samples.transform, profile_path);
  json manifest = {{"tool", "ppfit"},
                   {"version", kVersion},
                   {"command", command},
                   {"config", config},
                   {"data", data_echo(p)},
                   {"artifacts",
                    {{"loss_curve", curve.string()},
                     {"profile", profile_path.string()},
                     {"profile_is_ckmin_corrected",
                      export_corrected && c.corrected.has_value()}}},
                   {"status", "ok"},
                   {"metrics", cell_metrics(c)},
                   {"wall_clock_seconds", seconds}};
  write_json(manifest, dir / "manifest.json");
  return manifest;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Runs jobs[i]() for all i on up to `threads` workers; rethrows the first
// failure (lowest index) after all workers finish.
void run_parallel(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(threads, count));
    for (unsigned t = 0; t < n; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("cannot parse '{}' in list '{}'", item, text));
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<BasisKind> parse_bases(const std::string& text) {
  if (text == "both") return {BasisKind::Chebyshev, BasisKind::Power};
  return {parse_basis(text)};
}

std::string fmt_num(double v) {
  return std::isfinite(v) ? fmt::format("{}", v) : std::string("nan");
}

struct SummaryRow {
  std::string label;
  BasisKind basis;
  double alpha;
  OptimizerKind optimizer;
  Reference reference;
  const CellOutcome* cell;  // null when the run diverged
};

void write_summary(const std::vector<SummaryRow>& rows, const fs::path& path) {
  std::string out =
      "label,basis,alpha,optimizer,l2,lck,total,l2_plus_lck,post_ckmin_l2,"
      "best_epoch,stopped_early,l2_star,l2_star_tilde,lsq_l2_plus_lck,status\n";
  for (const auto& r : rows) {
    const auto head = fmt::format("{},{},{},{}", r.label, to_string(r.basis),
                                  fmt_num(r.alpha), to_string(r.optimizer));
    const auto tail = fmt::format("{},{},{}", fmt_num(r.reference.l2_star),
                                  fmt_num(r.reference.l2_star_tilde),
                                  fmt_num(r.reference.lsq_l2_plus_lck));
    if (!r.cell) {
      out += fmt::format("{},nan,nan,nan,nan,nan,,,{},diverged\n", head, tail);
      continue;
    }
    const auto& best = r.cell->result.trace.best();
    out += fmt::format("{},{},{},{},{},{},{},{},{},ok\n", head, fmt_num(best.l2),
                       fmt_num(best.ck), fmt_num(best.total),
                       fmt_num(best.l2 + best.ck),
                       fmt_num(r.cell->post_ckmin_l2),
                       r.cell->result.trace.best_epoch,
                       r.cell->result.trace.stopped_early, tail);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot write '{}'", path.string()));
  f << out;
}

// ---------------------------------------------------------------------------
// Config files: a JSON object whose keys mirror long flag names, or a run
// manifest (its "config" member is used). Expanded into tokens placed before
// the user's own flags so that explicit flags win.

std::vector<std::string> config_tokens(const fs::path& path) {
  json cfg = read_json(path);
  if (cfg.contains("config") && cfg.at("config").is_object())
    cfg = cfg.at("config");
  if (!cfg.is_object())
    throw UsageError(fmt::format("config '{}' is not a JSON object",
                                 path.string()));
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    if (value.is_null()) continue;
    tokens.push_back("--" + key);
    tokens.push_back(value.is_string() ? value.get<std::string>()
                                       : value.dump());
  }
  return tokens;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  const auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || args.empty()) return args;
  if (std::next(it) == args.end()) throw UsageError("--config needs a path");
  const fs::path path = *std::next(it);
  args.erase(it, std::next(it, 2));
  const auto tokens = config_tokens(path);
  args.insert(args.begin() + 1, tokens.begin(), tokens.end());
  return args;
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const fs::filesystem_error*>(&e))
    return 4;
  if (dynamic_cast<const ConditioningError*>(&e) ||
      dynamic_cast<const DivergenceError*>(&e))
    return 3;
  return 2;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Fit C^k-continuous piecewise polynomials by gradient descent",
               "ppfit"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::string config_path;

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a reference dataset");
  std::string gen_dataset;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--dataset", gen_dataset, "A|B|C")->required();
  gen->add_option("--noise", gen_noise, "Gaussian noise scale")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Noise seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV")->required();

  // baseline
  auto* base = app.add_subcommand(
      "baseline", "Segment-wise least squares and its C^k-corrected variant");
  ModelOptions base_model;
  std::string base_out_dir = ".";
  add_model_options(base, base_model, true);
  base->add_option("--out-dir", base_out_dir, "Output directory")
      ->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Train a single model");
  ModelOptions fit_model;
  TrainOptions fit_train;
  std::string fit_out_dir = ".";
  std::string fit_export;
  add_model_options(fit, fit_model, true);
  add_train_options(fit, fit_train, true, true);
  fit->add_option("--out-dir", fit_out_dir,
                  "Directory for loss curve and manifest")
      ->capture_default_str();
  fit->add_option("--export", fit_export,
                  "Profile JSON path (default <out-dir>/profile.json)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "One run per alpha and basis");
  ModelOptions sweep_model;
  TrainOptions sweep_train;
  std::string sweep_alphas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::string sweep_bases = "both";
  std::string sweep_out_dir = ".";
  unsigned sweep_jobs = std::max(1u, std::thread::hardware_concurrency());
  add_model_options(sweep, sweep_model, false);
  add_train_options(sweep, sweep_train, false, true);
  sweep->add_option("--alphas", sweep_alphas, "Comma-separated alpha values")
      ->capture_default_str();
  sweep->add_option("--bases", sweep_bases, "cheb|power|both")
      ->capture_default_str();
  sweep->add_option("--out-dir", sweep_out_dir, "Output directory")
      ->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "Parallel runs");

  // compare-optimizers
  auto* cmp = app.add_subcommand("compare-optimizers",
                                 "One run per optimizer and basis");
  ModelOptions cmp_model;
  TrainOptions cmp_train;
  bool cmp_all = false;
  std::string cmp_list;
  std::string cmp_bases = "both";
  std::string cmp_out_dir = ".";
  unsigned cmp_jobs = std::max(1u, std::thread::hardware_concurrency());
  add_model_options(cmp, cmp_model, false);
  add_train_options(cmp, cmp_train, true, false);
  cmp->add_flag("--all", cmp_all, "Every supported optimizer");
  cmp->add_option("--optimizers", cmp_list, "Comma-separated optimizer names");
  cmp->add_option("--bases", cmp_bases, "cheb|power|both")
      ->capture_default_str();
  cmp->add_option("--out-dir", cmp_out_dir, "Output directory")
      ->capture_default_str();
  cmp->add_option("--jobs", cmp_jobs, "Parallel runs");

  for (auto* sub : {base, fit, sweep, cmp})
    sub->add_option("--config", config_path,
                    "JSON file (or run manifest) supplying flag values");

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();

    if (gen->parsed()) {
      auto spec = preset(parse_dataset(gen_dataset), gen_noise, gen_seed);
      if (gen_noise < 0.0) throw UsageError("--noise must be >= 0");
      const auto data = generate(spec);
      write_csv(data.points, gen_out);
      const json meta = {
          {"dataset", to_string(spec.id)},
          {"formula", spec.formula},
          {"interval", {spec.a, spec.b}},
          {"n", spec.n},
          {"segments", spec.segments},
          {"noise", spec.noise_scale},
          {"seed", spec.seed},
          {"noise_generator", "mt19937_64 + Box-Muller"},
          {"transform",
           {{"scale", data.samples.transform.scale},
            {"offset", data.samples.transform.offset}}}};
      write_json(meta, sidecar_path(gen_out));
      out << fmt::format("wrote {} samples to {}\n", data.points.size(),
                         gen_out);
      return 0;
    }

    if (base->parsed()) {
      int segments = 0;
      const auto p = load_problem(base_model, segments);
      const auto basis = parse_basis(base_model.basis);
      const auto report = baselines(p.samples, p.knots, p.degree, basis, p.k);
      fs::create_directories(base_out_dir);
      write_profile(report.fitted, p.samples.transform,
                    fs::path(base_out_dir) / "lsq_profile.json");
      write_profile(report.corrected, p.samples.transform,
                    fs::path(base_out_dir) / "lsq_ckmin_profile.json");
      out << fmt::format("l2_star       {:.6e}\n", report.l2_star);
      out << fmt::format("l2_star_tilde {:.6e}\n", report.l2_star_tilde);
      const json manifest = {
          {"tool", "ppfit"},
          {"version", kVersion},
          {"command", "baseline"},
          {"config", model_echo(base_model, segments)},
          {"data", data_echo(p)},
          {"metrics",
           {{"l2_star", report.l2_star},
            {"l2_star_tilde", report.l2_star_tilde}}},
          {"wall_clock_seconds", seconds_since(t0)}};
      write_json(manifest, fs::path(base_out_dir) / "baseline_manifest.json");
      return 0;
    }

    if (fit->parsed()) {
      int segments = 0;
      const auto p = load_problem(fit_model, segments);
      const auto cfg = make_train_config(p, fit_train);
      const auto basis = parse_basis(fit_model.basis);
      const auto cell = run_cell(p, basis, cfg, fit_train.ckmin);
      json config = model_echo(fit_model, segments);
      config.update(train_echo(fit_train));
      config["lr"] = cfg.optimizer.learning_rate;
      const fs::path profile = fit_export.empty()
                                   ? fs::path(fit_out_dir) / "profile.json"
                                   : fs::path(fit_export);
      fs::create_directories(fit_out_dir);
      if (profile.has_parent_path()) fs::create_directories(profile.parent_path());
      const auto manifest = write_cell(fit_out_dir, "fit", config, p, cell,
                                       fit_train.ckmin, profile,
                                       seconds_since(t0));
      const auto& m = manifest.at("metrics");
      out << fmt::format("best epoch    {}\n", m.at("best_epoch").get<int>());
      out << fmt::format("total         {:.6e}\n", m.at("total").get<double>());
      out << fmt::format("l2            {:.6e}\n", m.at("l2").get<double>());
      out << fmt::format("lck           {:.6e}\n", m.at("lck").get<double>());
      out << fmt::format("post-ckmin l2 {}\n", fmt_num(cell.post_ckmin_l2));
      out << fmt::format("l2_star       {}\n", fmt_num(cell.reference.l2_star));
      out << fmt::format("l2_star_tilde {}\n",
                         fmt_num(cell.reference.l2_star_tilde));
      return 0;
    }

    if (sweep->parsed() || cmp->parsed()) {
      const bool is_sweep = sweep->parsed();
      const auto& model = is_sweep ? sweep_model : cmp_model;
      const auto& train_opts = is_sweep ? sweep_train : cmp_train;
      const fs::path out_dir = is_sweep ? sweep_out_dir : cmp_out_dir;
      const unsigned jobs = is_sweep ? sweep_jobs : cmp_jobs;
      int segments = 0;
      const auto p = load_problem(model, segments);
      const auto bases = parse_bases(is_sweep ? sweep_bases : cmp_bases);

      struct Cell {
        std::string label;
        BasisKind basis;
        TrainOptions opts;
      };
      std::vector<Cell> cells;
      if (is_sweep) {
        for (auto b : bases)
          for (double a : parse_list(sweep_alphas)) {
            TrainOptions o = train_opts;
            o.alpha = a;
            cells.push_back(
                {fmt::format("{}_alpha{}", to_string(b), a), b, o});
          }
      } else {
        std::vector<OptimizerKind> kinds;
        if (cmp_all || cmp_list.empty()) {
          kinds.assign(all_optimizers().begin(), all_optimizers().end());
        } else {
          std::stringstream ss(cmp_list);
          std::string name;
          while (std::getline(ss, name, ',')) kinds.push_back(parse_optimizer(name));
        }
        for (auto b : bases)
          for (auto kind : kinds) {
            TrainOptions o = train_opts;
            o.optimizer = std::string(to_string(kind));
            cells.push_back(
                {fmt::format("{}_{}", to_string(b), to_string(kind)), b, o});
          }
      }

      std::vector<std::optional<CellOutcome>> outcomes(cells.size());
      std::vector<TrainConfig> configs;
      for (const auto& c : cells) configs.push_back(make_train_config(p, c.opts));
      fs::create_directories(out_dir);
      // A diverging cell is reported in the summary instead of aborting
      // the whole matrix.
      std::vector<std::string> diverged(cells.size());
      std::vector<Reference> references(cells.size());
      run_parallel(cells.size(), jobs, [&](std::size_t i) {
        const auto c0 = std::chrono::steady_clock::now();
        json config = model_echo(model, segments);
        config["basis"] = std::string(to_string(cells[i].basis));
        config.update(train_echo(cells[i].opts));
        config["lr"] = configs[i].optimizer.learning_rate;
        const auto dir = out_dir / cells[i].label;
        try {
          outcomes[i] =
              run_cell(p, cells[i].basis, configs[i], cells[i].opts.ckmin);
          references[i] = outcomes[i]->reference;
        } catch (const DivergenceError& e) {
          diverged[i] = e.what();
          references[i] = reference_for(
              p, fit_segmentwise(p.samples, p.knots, p.degree, cells[i].basis),
              configs[i].loss);
          fs::create_directories(dir);
          write_json({{"tool", "ppfit"},
                      {"version", kVersion},
                      {"command", "fit"},
                      {"config", config},
                      {"data", data_echo(p)},
                      {"status", "diverged"},
                      {"diverged_epoch", e.epoch()},
                      {"wall_clock_seconds", seconds_since(c0)}},
                     dir / "manifest.json");
          return;
        }
        write_cell(dir, "fit", config, p, *outcomes[i], cells[i].opts.ckmin,
                   dir / "profile.json", seconds_since(c0));
      });
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (!diverged[i].empty())
          err << fmt::format("warning: {}: {}\n", cells[i].label, diverged[i]);

      std::vector<SummaryRow> rows;
      for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back({cells[i].label, cells[i].basis, configs[i].loss.alpha,
                        configs[i].optimizer.kind, references[i],
                        outcomes[i] ? &*outcomes[i] : nullptr});
      const auto summary = out_dir / "summary.csv";
      write_summary(rows, summary);
      out << fmt::format("{} runs, summary written to {}\n", rows.size(),
                         summary.string());
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ppfit::cli
