// Command-line front end: train models, draw samples, score them, and
// inspect units and learned filters.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "exprbm/dataset.hpp"
#include "exprbm/errors.hpp"
#include "exprbm/evaluation.hpp"
#include "exprbm/model.hpp"
#include "exprbm/sampling.hpp"
#include "exprbm/serialize.hpp"
#include "exprbm/training.hpp"

namespace {

using namespace exprbm;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool quiet = false;
};

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_text(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

SamplerMode parse_mode(const std::string& s) {
  if (s == "gaussian") return SamplerMode::GaussianApprox;
  if (s == "exact") return SamplerMode::ExactWhenAvailable;
  throw CLI::ValidationError("mode", "expected 'gaussian' or 'exact'");
}

Normalize parse_normalize(const std::string& s) {
  if (s == "none") return Normalize::None;
  if (s == "binarize") return Normalize::Binarize;
  if (s == "std") return Normalize::NormalizeStd;
  throw CLI::ValidationError("normalize",
                             "expected 'none', 'binarize' or 'std'");
}

void write_pgm(const std::string& path, const std::vector<unsigned char>& pix,
               std::size_t width, std::size_t height) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pix.data()),
            static_cast<std::streamsize>(pix.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_samples_csv(const Matrix& samples, const std::string& path) {
  std::ofstream out = open_text(path);
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    std::span<const double> row = samples.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << g17(row[c]);
    out << "\n";
  }
}

// ---- train ----------------------------------------------------------------

struct TrainOpts {
  std::string data_path;
  std::size_t bas_side = 0;
  std::size_t bas_count = 500;
  std::size_t hidden_units = 16;
  std::string visible_unit = "sigmoid";
  std::string hidden_unit = "sigmoid";
  std::string visible_mode = "exact";
  std::string hidden_mode = "exact";
  std::string normalize = "none";
  double train_frac = 1.0, valid_frac = 0.0, test_frac = 0.0;
  std::size_t epochs = 10;
  double lr = 0.01;
  double momentum = 0.0;
  std::size_t batch = 100;
  std::size_t cd = 1;
  std::string positive = "sample";
  double weight_scale = 0.01;
  std::string out_path;
  std::string metrics_path;
};

void run_train(const GlobalOpts& g, const TrainOpts& o) {
  if (o.data_path.empty() == (o.bas_side == 0))
    throw CLI::ValidationError("train",
                               "give exactly one of --data and --bas");
  Matrix raw = o.bas_side
                   ? generate_bars_and_stripes(o.bas_side, o.bas_count, g.seed)
                   : load_idx(o.data_path);
  Dataset ds = preprocess(raw, o.train_frac, o.valid_frac, o.test_frac,
                          parse_normalize(o.normalize), g.seed);
  Matrix train_x = split_view(ds, SplitTag::Train);

  ExpRbmModel model =
      make_model(unit_by_name(o.visible_unit), unit_by_name(o.hidden_unit),
                 train_x.cols(), o.hidden_units);
  model.visible_mode = parse_mode(o.visible_mode);
  model.hidden_mode = parse_mode(o.hidden_mode);
  RngStream init_rng(g.seed, kInitStream);
  init_weights(model, init_rng, o.weight_scale);

  TrainConfig cfg;
  cfg.cd_steps = o.cd;
  cfg.learning_rate = o.lr;
  cfg.momentum = o.momentum;
  cfg.batch_size = o.batch;
  cfg.epochs = o.epochs;
  cfg.seed = g.seed;
  cfg.positive_phase =
      o.positive == "mean" ? PositivePhase::Mean : PositivePhase::Sample;
  cfg.threads = g.threads;

  TrainResult result = train(model, train_x, cfg);
  if (!g.quiet) {
    for (const EpochMetric& m : result.epochs)
      std::cout << "epoch " << m.epoch << " recon " << g17(m.recon_error)
                << "\n";
  }
  if (!o.metrics_path.empty()) {
    std::ofstream out = open_text(o.metrics_path);
    out << "epoch,recon_error,wall_time_s\n";
    for (const EpochMetric& m : result.epochs)
      out << m.epoch << "," << g17(m.recon_error) << "," << g17(m.wall_time_s)
          << "\n";
  }
  save_model(model, o.out_path);
  if (!g.quiet)
    std::cout << "wrote " << o.out_path << " (" << model.n_visible() << "x"
              << model.n_hidden() << " " << model.visible->name << "/"
              << model.hidden->name << ")\n";
}

// ---- sample ---------------------------------------------------------------

struct SampleOpts {
  std::string model_path;
  std::size_t count = 100;
  std::size_t steps = 10;
  double fast_rate = 0.0;
  double fast_decay = 0.0;
  std::size_t chains = 1;
  std::string out_path;
  std::string csv_path;
};

void run_sample(const GlobalOpts& g, const SampleOpts& o) {
  if (o.out_path.empty() && o.csv_path.empty())
    throw CLI::ValidationError("sample", "need --out and/or --csv");
  ExpRbmModel model = load_model(o.model_path);
  RngStream rng(g.seed, kChainStream);
  Matrix samples = rates_fpcd_generate(model, o.count, o.steps, o.fast_rate,
                                       o.fast_decay, rng, o.chains);
  if (!o.out_path.empty()) save_samples(samples, o.out_path);
  if (!o.csv_path.empty()) write_samples_csv(samples, o.csv_path);
  if (!g.quiet)
    std::cout << "drew " << samples.rows() << " samples of dimension "
              << samples.cols() << "\n";
}

// ---- eval-isl ---------------------------------------------------------------

struct EvalOpts {
  std::string data_path;
  std::string samples_path;
  double beta = 0.0;  // 0 means optimize
  bool binarize = false;
  std::string json_path;
};

void run_eval(const GlobalOpts& g, const EvalOpts& o) {
  Matrix data = load_idx(o.data_path);
  if (o.binarize)
    for (std::size_t i = 0; i < data.size(); ++i)
      data.data()[i] = data.data()[i] > 0.5 ? 1.0 : 0.0;
  Matrix samples = load_samples(o.samples_path);

  BetaSearchResult r;
  if (o.beta > 0.0) {
    r.beta = o.beta;
    r.score = isl_score(data, samples, o.beta);
  } else {
    r = optimize_beta(data, samples);
  }
  if (!g.quiet || o.json_path.empty())
    std::cout << "beta " << g17(r.beta) << "\nisl " << g17(r.score) << "\n";
  if (!o.json_path.empty()) {
    nlohmann::ordered_json j;
    j["beta"] = r.beta;
    j["isl"] = r.score;
    j["n_queries"] = data.rows();
    j["n_samples"] = samples.rows();
    j["n_features"] = data.cols();
    std::ofstream out = open_text(o.json_path);
    out << j.dump(2) << "\n";
  }
}

// ---- verify-unit ------------------------------------------------------------

struct VerifyOpts {
  std::string unit;
  bool all = false;
  std::size_t points = 41;
};

bool verify_one(const ActivationSpec& spec, std::size_t points) {
  double worst_fenchel = 0.0, worst_roundtrip = 0.0, worst_deriv = 0.0,
         worst_self = 0.0;
  const double h = 1e-5;
  for (std::size_t k = 0; k < points; ++k) {
    double eta = spec.eta_lo + (spec.eta_hi - spec.eta_lo) *
                                   static_cast<double>(k) /
                                   static_cast<double>(points - 1);
    if (spec.exclude_zero && std::abs(eta) < 1e-9) continue;
    double mean = spec.f(eta);
    double scale = std::max(1.0, std::abs(eta * mean));

    double fenchel =
        std::abs(spec.F(eta) + spec.F_star(mean) - eta * mean) / scale;
    worst_fenchel = std::max(worst_fenchel, fenchel);

    if (spec.f_inv && !(eta <= 0.0 && mean == 0.0)) {
      double back = spec.f_inv(mean);
      worst_roundtrip =
          std::max(worst_roundtrip,
                   std::abs(back - eta) / std::max(1.0, std::abs(eta)));
    }

    double fd = (spec.f(eta + h) - spec.f(eta - h)) / (2.0 * h);
    double deriv = std::abs(spec.f_prime(eta) - fd) /
                   std::max(1.0, std::abs(spec.f_prime(eta)));
    worst_deriv = std::max(worst_deriv, deriv);

    // D(eta || f(eta)) is zero in exact arithmetic; what survives is the
    // cancellation noise of F + F* - eta*f, so judge it against that scale.
    worst_self =
        std::max(worst_self, bregman_divergence(eta, mean, spec) / scale);
  }
  bool ok = worst_fenchel <= 1e-8 && worst_roundtrip <= 1e-8 &&
            worst_deriv <= 1e-6 && worst_self <= 1e-10;
  std::printf("%-12s fenchel %.3e  roundtrip %.3e  derivative %.3e  "
              "self-divergence %.3e  %s\n",
              std::string(spec.name).c_str(), worst_fenchel, worst_roundtrip,
              worst_deriv, worst_self, ok ? "PASS" : "FAIL");
  return ok;
}

void run_verify(const GlobalOpts&, const VerifyOpts& o) {
  if (o.unit.empty() == !o.all)
    throw CLI::ValidationError("verify-unit",
                               "give exactly one of --unit and --all");
  bool ok = true;
  if (o.all) {
    for (const ActivationSpec& spec : catalog()) ok &= verify_one(spec, o.points);
  } else {
    ok = verify_one(unit_by_name(o.unit), o.points);
  }
  if (!ok) throw DomainError("unit verification failed");
}

// ---- base-measure -----------------------------------------------------------

struct BaseMeasureOpts {
  std::string unit;
  double eta_min = -3.0;
  double eta_max = 3.0;
  std::size_t points = 13;
  std::string out_path;
};

void run_base_measure(const GlobalOpts& g, const BaseMeasureOpts& o) {
  if (o.points < 2 || !(o.eta_min < o.eta_max))
    throw CLI::ValidationError("base-measure", "need an increasing eta range "
                                               "with at least two points");
  const ActivationSpec& spec = unit_by_name(o.unit);
  std::vector<std::pair<double, double>> rows;
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < o.points; ++k) {
    double eta = o.eta_min + (o.eta_max - o.eta_min) * static_cast<double>(k) /
                                 static_cast<double>(o.points - 1);
    if (spec.exclude_zero && std::abs(eta) < 1e-9) continue;
    double integral = base_measure_integral(eta, spec);
    rows.emplace_back(eta, integral);
    if (rows.size() == 1) {
      lo = hi = integral;
    } else {
      lo = std::min(lo, integral);
      hi = std::max(hi, integral);
    }
  }
  std::ostringstream csv;
  csv << "eta,integral\n";
  for (auto& [eta, integral] : rows)
    csv << g17(eta) << "," << g17(integral) << "\n";
  if (o.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out = open_text(o.out_path);
    out << csv.str();
  }
  if (!g.quiet)
    std::cout << "ratio " << g17(hi / lo) << " over [" << g17(o.eta_min)
              << ", " << g17(o.eta_max) << "]\n";
}

// ---- filters ----------------------------------------------------------------

struct FiltersOpts {
  std::string model_path;
  std::string data_path;
  std::string out_path;
  std::string shape;
  std::size_t limit = 0;
};

std::pair<std::size_t, std::size_t> tile_shape(std::size_t n_visible,
                                               const std::string& shape) {
  if (!shape.empty()) {
    std::size_t x = shape.find('x');
    if (x == std::string::npos)
      throw CLI::ValidationError("filters", "--shape expects ROWSxCOLS");
    std::size_t r = std::stoul(shape.substr(0, x));
    std::size_t c = std::stoul(shape.substr(x + 1));
    if (r * c != n_visible)
      throw CLI::ValidationError("filters",
                                 "--shape does not match the visible layer");
    return {r, c};
  }
  auto side = static_cast<std::size_t>(std::lround(std::sqrt(
      static_cast<double>(n_visible))));
  if (side * side != n_visible)
    throw CLI::ValidationError("filters", "visible layer is not square; "
                                          "give --shape ROWSxCOLS");
  return {side, side};
}

void run_filters(const GlobalOpts& g, const FiltersOpts& o) {
  ExpRbmModel model = load_model(o.model_path);
  auto [tile_r, tile_c] = tile_shape(model.n_visible(), o.shape);

  std::vector<std::size_t> order;
  if (o.data_path.empty()) {
    order = filter_variance_ranking(model);
  } else {
    Matrix data = load_idx(o.data_path);
    order = filter_activation_variance_ranking(model, data);
  }
  std::size_t n_show = o.limit ? std::min(o.limit, order.size()) : order.size();
  if (n_show == 0) throw DomainError("no filters to draw");

  auto grid_c = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n_show))));
  std::size_t grid_r = (n_show + grid_c - 1) / grid_c;
  std::size_t width = grid_c * tile_c + (grid_c - 1);
  std::size_t height = grid_r * tile_r + (grid_r - 1);
  std::vector<unsigned char> pix(width * height, 0);

  for (std::size_t t = 0; t < n_show; ++t) {
    std::size_t j = order[t];
    double lo = model.W(0, j), hi = model.W(0, j);
    for (std::size_t i = 1; i < model.n_visible(); ++i) {
      lo = std::min(lo, model.W(i, j));
      hi = std::max(hi, model.W(i, j));
    }
    std::size_t base_r = (t / grid_c) * (tile_r + 1);
    std::size_t base_c = (t % grid_c) * (tile_c + 1);
    for (std::size_t i = 0; i < model.n_visible(); ++i) {
      unsigned char v =
          hi > lo ? static_cast<unsigned char>(std::lround(
                        (model.W(i, j) - lo) / (hi - lo) * 255.0))
                  : static_cast<unsigned char>(128);
      std::size_t r = base_r + i / tile_c;
      std::size_t c = base_c + i % tile_c;
      pix[r * width + c] = v;
    }
  }
  write_pgm(o.out_path, pix, width, height);
  if (!g.quiet)
    std::cout << "wrote " << o.out_path << " (" << n_show << " filters)\n";
}

// ---- hist -------------------------------------------------------------------

struct HistOpts {
  std::string model_path;
  std::string data_path;
  std::size_t bins = 50;
  bool sampled = false;
  std::string range;
  std::string out_path;
};

void run_hist(const GlobalOpts& g, const HistOpts& o) {
  ExpRbmModel model = load_model(o.model_path);
  Matrix data = load_idx(o.data_path);
  std::optional<std::pair<double, double>> range;
  if (!o.range.empty()) {
    std::size_t colon = o.range.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("hist", "--range expects LO:HI");
    range = {std::stod(o.range.substr(0, colon)),
             std::stod(o.range.substr(colon + 1))};
  }
  RngStream rng(g.seed, kChainStream);
  Histogram h =
      activation_histogram(model, data, o.bins, !o.sampled, rng, range);
  std::ostringstream csv;
  csv << "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    csv << g17(h.edges[k]) << "," << g17(h.edges[k + 1]) << "," << h.counts[k]
        << "\n";
  if (o.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out = open_text(o.out_path);
    out << csv.str();
  }
  if (!g.quiet && (h.underflow || h.overflow))
    std::cout << "underflow " << h.underflow << " overflow " << h.overflow
              << "\n";
}

// ---- bas-gen ----------------------------------------------------------------

struct BasGenOpts {
  std::size_t side = 4;
  std::size_t count = 0;  // 0: each distinct pattern once
  std::string out_path;
};

void run_bas_gen(const GlobalOpts& g, const BasGenOpts& o) {
  Matrix X = o.count == 0
                 ? bars_and_stripes_patterns(o.side)
                 : generate_bars_and_stripes(o.side, o.count, g.seed);
  save_idx_u8(X,
              {static_cast<std::uint32_t>(o.side),
               static_cast<std::uint32_t>(o.side)},
              o.out_path);
  if (!g.quiet)
    std::cout << "wrote " << X.rows() << " patterns to " << o.out_path << "\n";
}

// ---- info -------------------------------------------------------------------

void run_info(const std::string& model_path) {
  ExpRbmModel m = load_model(model_path);
  auto mode_name = [](SamplerMode mode) {
    return mode == SamplerMode::GaussianApprox ? "gaussian" : "exact";
  };
  double lo = m.W.data()[0], hi = m.W.data()[0], sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < m.W.size(); ++i) {
    double v = m.W.data()[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / static_cast<double>(m.W.size());
  double var = sum_sq / static_cast<double>(m.W.size()) - mean * mean;
  std::cout << "visible " << m.n_visible() << " " << m.visible->name << " ("
            << mode_name(m.visible_mode) << ")\n"
            << "hidden " << m.n_hidden() << " " << m.hidden->name << " ("
            << mode_name(m.hidden_mode) << ")\n"
            << "weights min " << g17(lo) << " max " << g17(hi) << " mean "
            << g17(mean) << " std " << g17(std::sqrt(std::max(var, 0.0)))
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exponential-family RBM toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed (default 0)");
  app.add_option("--threads", g.threads, "worker threads (default 1)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  TrainOpts train_o;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model with CD");
  train_cmd->add_option("--data", train_o.data_path, "IDX input file");
  train_cmd->add_option("--bas", train_o.bas_side,
                        "generate bars-and-stripes of this side instead");
  train_cmd->add_option("--bas-count", train_o.bas_count,
                        "examples to generate with --bas");
  train_cmd->add_option("--hidden-units", train_o.hidden_units,
                        "hidden layer width");
  train_cmd->add_option("--visible", train_o.visible_unit, "visible unit");
  train_cmd->add_option("--hidden", train_o.hidden_unit, "hidden unit");
  train_cmd->add_option("--visible-mode", train_o.visible_mode,
                        "gaussian|exact");
  train_cmd->add_option("--hidden-mode", train_o.hidden_mode,
                        "gaussian|exact");
  train_cmd->add_option("--normalize", train_o.normalize,
                        "none|binarize|std");
  train_cmd->add_option("--train-frac", train_o.train_frac, "train fraction");
  train_cmd->add_option("--valid-frac", train_o.valid_frac, "valid fraction");
  train_cmd->add_option("--test-frac", train_o.test_frac, "test fraction");
  train_cmd->add_option("--epochs", train_o.epochs, "training epochs");
  train_cmd->add_option("--lr", train_o.lr, "learning rate");
  train_cmd->add_option("--momentum", train_o.momentum, "momentum in [0,1)");
  train_cmd->add_option("--batch", train_o.batch, "minibatch size");
  train_cmd->add_option("--cd", train_o.cd, "CD steps");
  train_cmd->add_option("--positive", train_o.positive, "sample|mean");
  train_cmd->add_option("--weight-scale", train_o.weight_scale,
                        "uniform init half-width");
  train_cmd->add_option("--out", train_o.out_path, "output model file")
      ->required();
  train_cmd->add_option("--metrics", train_o.metrics_path,
                        "per-epoch metrics CSV");

  SampleOpts sample_o;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw samples from a model");
  sample_cmd->add_option("--model", sample_o.model_path, "model file")
      ->required();
  sample_cmd->add_option("--n", sample_o.count, "number of samples");
  sample_cmd->add_option("--steps", sample_o.steps,
                         "alternations per sample");
  sample_cmd->add_option("--fast-rate", sample_o.fast_rate,
                         "fast-parameter rate (0 = plain Gibbs)");
  sample_cmd->add_option("--fast-decay", sample_o.fast_decay,
                         "fast-parameter decay in [0,1]");
  sample_cmd->add_option("--chains", sample_o.chains, "persistent chains");
  sample_cmd->add_option("--out", sample_o.out_path, "binary sample file");
  sample_cmd->add_option("--csv", sample_o.csv_path, "CSV sample file");

  EvalOpts eval_o;
  CLI::App* eval_cmd =
      app.add_subcommand("eval-isl", "score data against a sample set");
  eval_cmd->add_option("--data", eval_o.data_path, "IDX query file")
      ->required();
  eval_cmd->add_option("--samples", eval_o.samples_path, "binary sample file")
      ->required();
  eval_cmd->add_option("--beta", eval_o.beta,
                       "kernel sharpness in (1/2,1); omit to optimize");
  eval_cmd->add_flag("--binarize", eval_o.binarize,
                     "threshold queries at 1/2");
  eval_cmd->add_option("--json", eval_o.json_path, "write a JSON report");

  VerifyOpts verify_o;
  CLI::App* verify_cmd =
      app.add_subcommand("verify-unit", "numerical self-checks for units");
  verify_cmd->add_option("--unit", verify_o.unit, "unit name");
  verify_cmd->add_flag("--all", verify_o.all, "check the whole catalog");
  verify_cmd->add_option("--points", verify_o.points, "grid points");

  BaseMeasureOpts base_o;
  CLI::App* base_cmd = app.add_subcommand(
      "base-measure", "integral of the conditional kernel across eta");
  base_cmd->add_option("--unit", base_o.unit, "unit name")->required();
  base_cmd->add_option("--eta-min", base_o.eta_min, "range start");
  base_cmd->add_option("--eta-max", base_o.eta_max, "range end");
  base_cmd->add_option("--points", base_o.points, "grid points");
  base_cmd->add_option("--out", base_o.out_path, "CSV output (default stdout)");

  FiltersOpts filters_o;
  CLI::App* filters_cmd =
      app.add_subcommand("filters", "render weight columns as an image");
  filters_cmd->add_option("--model", filters_o.model_path, "model file")
      ->required();
  filters_cmd->add_option("--data", filters_o.data_path,
                          "rank by activation variance over this IDX data");
  filters_cmd->add_option("--out", filters_o.out_path, "PGM output")
      ->required();
  filters_cmd->add_option("--shape", filters_o.shape,
                          "visible tile shape ROWSxCOLS");
  filters_cmd->add_option("--limit", filters_o.limit, "show top N only");

  HistOpts hist_o;
  CLI::App* hist_cmd =
      app.add_subcommand("hist", "histogram of hidden activations");
  hist_cmd->add_option("--model", hist_o.model_path, "model file")->required();
  hist_cmd->add_option("--data", hist_o.data_path, "IDX input")->required();
  hist_cmd->add_option("--bins", hist_o.bins, "bin count");
  hist_cmd->add_flag("--sample", hist_o.sampled,
                     "histogram sampled states instead of means");
  hist_cmd->add_option("--range", hist_o.range, "fixed range LO:HI");
  hist_cmd->add_option("--out", hist_o.out_path, "CSV output (default stdout)");

  BasGenOpts bas_o;
  CLI::App* bas_cmd =
      app.add_subcommand("bas-gen", "write a bars-and-stripes IDX file");
  bas_cmd->add_option("--side", bas_o.side, "grid side");
  bas_cmd->add_option("--count", bas_o.count,
                      "rows to draw (0 = all patterns once)");
  bas_cmd->add_option("--out", bas_o.out_path, "IDX output")->required();

  std::string info_model;
  CLI::App* info_cmd = app.add_subcommand("info", "describe a model file");
  info_cmd->add_option("--model", info_model, "model file")->required();

  train_cmd->callback([&] { run_train(g, train_o); });
  sample_cmd->callback([&] { run_sample(g, sample_o); });
  eval_cmd->callback([&] { run_eval(g, eval_o); });
  verify_cmd->callback([&] { run_verify(g, verify_o); });
  base_cmd->callback([&] { run_base_measure(g, base_o); });
  filters_cmd->callback([&] { run_filters(g, filters_o); });
  hist_cmd->callback([&] { run_hist(g, hist_o); });
  bas_cmd->callback([&] { run_bas_gen(g, bas_o); });
  info_cmd->callback([&] { run_info(info_model); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DivergenceDetected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
