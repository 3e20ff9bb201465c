#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ridgepois/error.hpp"
#include "ridgepois/mnist.hpp"
#include "ridgepois/mp_transforms.hpp"
#include "ridgepois/parallel.hpp"
#include "ridgepois/record_io.hpp"
#include "ridgepois/report.hpp"
#include "ridgepois/resolvent_lab.hpp"
#include "ridgepois/sweep.hpp"
#include "ridgepois/theory.hpp"
#include "ridgepois/version.hpp"
#include "tabular.hpp"

namespace ridgepois::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kDefaultOutDir = "ridgepois_out";

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path.string());
  return std::string(bytes.begin(), bytes.end());
}

/// Options shared by every subcommand that writes files.
struct OutputOptions {
  std::string out_dir = kDefaultOutDir;
  unsigned threads = 1;
  std::string format = "csv";
  bool record_timing = false;

  void bind(CLI::App* app, bool timing) {
    threads = default_thread_count();
    app->add_option("--out", out_dir, "Output directory")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (default: RIDGEPOIS_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app->add_option("--format", format, "Primary table format: csv or json-lines")
        ->check(CLI::IsMember({"csv", "jsonl", "json-lines"}))
        ->capture_default_str();
    if (timing) app->add_flag("--record-timing", record_timing, "Fill wall_time_ms (breaks byte-identity)");
  }

  OutputFormat output_format() const { return parse_output_format(format); }
};

/// Everything a run needs to describe itself in its manifest.
struct RunContext {
  std::string command;
  std::vector<std::string> args;  // canonical, without --out / --threads
  std::ostream& out;
  std::ostream& err;
};

struct Artifacts {
  std::vector<std::string> files;
  bool had_error_rows = false;
};

void write_manifest(const RunContext& ctx, const OutputOptions& opt, const json& config,
                    std::uint64_t master_seed, const Artifacts& artifacts) {
  json manifest = {
      {"tool", "ridgepois"},
      {"version", kVersion},
      {"command", ctx.command},
      {"args", ctx.args},
      {"config", config},
      {"master_seed", master_seed},
      {"out", opt.out_dir},
      {"threads", opt.threads},
      {"outputs", artifacts.files},
  };
  const fs::path path = fs::path(opt.out_dir) / (ctx.command + "_manifest.json");
  write_text(path, manifest.dump(2) + "\n");
  ctx.out << "wrote " << path.string() << "\n";
}

std::string table_text(const std::string& csv, OutputFormat format) {
  return format == OutputFormat::Csv ? csv : csv_to_jsonl(csv);
}

/// Writes <stem>.csv|jsonl and <stem>_agg.csv|jsonl.
Artifacts write_records(const RunContext& ctx, const OutputOptions& opt, const std::string& stem,
                        const std::vector<SweepRecord>& records) {
  Artifacts a;
  const OutputFormat format = opt.output_format();
  const std::string ext = extension_for(format);

  std::ostringstream primary;
  write_sweep_csv(primary, records);
  const fs::path primary_path = fs::path(opt.out_dir) / (stem + ext);
  write_text(primary_path, table_text(primary.str(), format));
  a.files.push_back(primary_path.filename().string());

  if (!records.empty()) {
    std::ostringstream agg;
    write_aggregate_csv(agg, aggregate(records));
    const fs::path agg_path = fs::path(opt.out_dir) / (stem + "_agg" + ext);
    write_text(agg_path, table_text(agg.str(), format));
    a.files.push_back(agg_path.filename().string());
  }

  std::size_t errors = 0;
  for (const auto& r : records) errors += r.is_error();
  a.had_error_rows = errors > 0;
  ctx.out << "wrote " << primary_path.string() << " (" << records.size() << " rows";
  if (errors > 0) ctx.out << ", " << errors << " error rows";
  ctx.out << ")\n";
  return a;
}

/// Trial-level knobs shared by simulate and sweep.
struct TrialFlags {
  std::string centering = "population";
  std::string trigger = "axis";
  std::uint64_t m_test = 10000;
  bool include_intercept = false;

  void bind(CLI::App* app) {
    app->add_option("--centering", centering, "population or empirical")
        ->check(CLI::IsMember({"population", "empirical"}))
        ->capture_default_str();
    app->add_option("--trigger", trigger, "Trigger direction: axis (|v| e_1) or random")
        ->check(CLI::IsMember({"axis", "random"}))
        ->capture_default_str();
    app->add_option("--m-test", m_test, "Fresh triggered test points per trial")->capture_default_str();
    app->add_flag("--include-intercept", include_intercept, "Add b0 to the Monte Carlo efficacy score");
  }

  TrialOptions options(bool record_timing) const {
    TrialOptions t;
    t.centering = parse_centering(centering);
    t.trigger = trigger == "axis" ? TriggerDirection::FirstAxis : TriggerDirection::Random;
    t.m_test = m_test;
    t.include_intercept = include_intercept;
    t.record_timing = record_timing;
    return t;
  }

  json to_json() const {
    return {{"centering", centering}, {"trigger", trigger}, {"m_test", m_test},
            {"include_intercept", include_intercept}};
  }
};

// ---------------------------------------------------------------- theory

struct TheoryCmd {
  ModelParams params{};
  bool ridgeless = false;
  std::string format = "text";

  void bind(CLI::App* app) {
    app->add_option("--c", params.c, "Aspect ratio p/n")->capture_default_str();
    app->add_option("--lambda", params.lambda, "Ridge penalty")->capture_default_str();
    app->add_option("--theta", params.theta, "Poisoning rate")->capture_default_str();
    app->add_option("--vnorm", params.v_norm, "Trigger norm |v|")->capture_default_str();
    app->add_flag("--ridgeless", ridgeless, "Evaluate the lambda -> 0 limit (c < 1)");
    app->add_option("--format", format, "text or json-lines")
        ->check(CLI::IsMember({"text", "jsonl", "json-lines"}))
        ->capture_default_str();
  }

  int run(const RunContext& ctx) const {
    std::vector<std::pair<std::string, double>> fields{{"c", params.c}};
    TheoryPrediction t;
    if (ridgeless) {
      ModelParams p = params;
      p.lambda = 0.0;
      t = predict_ridgeless(p);
      fields.emplace_back("lambda", 0.0);
    } else {
      t = predict(params);
      fields.emplace_back("lambda", params.lambda);
    }
    fields.emplace_back("theta", params.theta);
    fields.emplace_back("vnorm", params.v_norm);
    fields.emplace_back("mu", t.mu);
    fields.emplace_back("sigma_sq", t.sigma_sq);
    fields.emplace_back("eta", t.eta);
    fields.emplace_back("C", t.C_align);
    if (!ridgeless) {
      const TransformValues tv = mp_transform_values(AspectRatio{params.c}, -params.lambda);
      fields.emplace_back("z", -params.lambda);
      fields.emplace_back("m", tv.m);
      fields.emplace_back("m_prime", tv.m_prime);
      fields.emplace_back("m_tilde", tv.m_tilde);
      fields.emplace_back("m_tilde_prime", tv.m_tilde_prime);
    }

    if (format == "text") {
      ctx.out << "mode=" << (ridgeless ? "ridgeless" : "ridge") << "\n";
      for (const auto& [k, v] : fields) ctx.out << k << "=" << format_double(v) << "\n";
      if (t.variance_clamped) ctx.out << "warning=variance_clamped\n";
    } else {
      json obj = {{"mode", ridgeless ? "ridgeless" : "ridge"}};
      for (const auto& [k, v] : fields) obj[k] = v;
      obj["variance_clamped"] = t.variance_clamped;
      ctx.out << obj.dump() << "\n";
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  OutputOptions output;
  TrialFlags trial;
  ModelParams params{};
  std::uint64_t p = 500;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;

  void bind(CLI::App* app) {
    output.bind(app, true);
    trial.bind(app);
    app->add_option("--p", p, "Feature dimension")->capture_default_str();
    app->add_option("--c", params.c, "Target aspect ratio; n = round(p / c)")->capture_default_str();
    app->add_option("--lambda", params.lambda, "Ridge penalty")->capture_default_str();
    app->add_option("--theta", params.theta, "Poisoning rate")->capture_default_str();
    app->add_option("--vnorm", params.v_norm, "Trigger norm |v|")->capture_default_str();
    app->add_option("--trials", trials, "Independent trials")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  int run(const RunContext& ctx) const {
    SweepGrid grid;
    grid.c_values = {params.c};
    grid.lambda_values = {params.lambda};
    grid.theta_values = {params.theta};
    grid.vnorm_values = {params.v_norm};
    grid.defaults = params;
    grid.p = p;
    grid.trials = trials;
    grid.master_seed = seed;

    SweepOptions opt;
    opt.trial = trial.options(output.record_timing);
    opt.threads = output.threads;
    const auto records = run_sweep(grid, AxisMode::Full, opt);
    const Artifacts a = write_records(ctx, output, "simulate", records);

    json config = {{"p", p},           {"c", params.c},     {"lambda", params.lambda},
                   {"theta", params.theta}, {"vnorm", params.v_norm}, {"trials", trials},
                   {"format", output.format}, {"record_timing", output.record_timing}};
    config.update(trial.to_json());
    write_manifest(ctx, output, config, seed, a);
    return a.had_error_rows ? kExitErrorRows : kExitOk;
  }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
  OutputOptions output;
  TrialFlags trial;
  std::string builtin = "table1";
  std::string mode = "one-at-a-time";
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  std::vector<double> c_values, lambda_values, theta_values, vnorm_values;

  void bind(CLI::App* app) {
    output.bind(app, true);
    trial.bind(app);
    app->add_option("--builtin", builtin, "Built-in grid")->check(CLI::IsMember({"table1"}))->capture_default_str();
    app->add_option("--mode", mode, "one-at-a-time (oaat) or full")
        ->check(CLI::IsMember({"one-at-a-time", "oaat", "full"}))
        ->capture_default_str();
    app->add_option("--p", p, "Feature dimension (default 500)");
    app->add_option("--trials", trials, "Trials per grid point (default 100)");
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--c-values", c_values, "Override the c axis")->delimiter(',');
    app->add_option("--lambda-values", lambda_values, "Override the lambda axis")->delimiter(',');
    app->add_option("--theta-values", theta_values, "Override the theta axis")->delimiter(',');
    app->add_option("--vnorm-values", vnorm_values, "Override the |v| axis")->delimiter(',');
  }

  SweepGrid grid() const {
    SweepGrid g = SweepGrid::table1();
    if (p) g.p = *p;
    if (trials) g.trials = *trials;
    g.master_seed = seed;
    if (!c_values.empty()) g.c_values = c_values;
    if (!lambda_values.empty()) g.lambda_values = lambda_values;
    if (!theta_values.empty()) g.theta_values = theta_values;
    if (!vnorm_values.empty()) g.vnorm_values = vnorm_values;
    return g;
  }

  int run(const RunContext& ctx) const {
    const SweepGrid g = grid();
    const AxisMode axis_mode = parse_axis_mode(mode);
    SweepOptions opt;
    opt.trial = trial.options(output.record_timing);
    opt.threads = output.threads;
    const auto records = run_sweep(g, axis_mode, opt);
    const Artifacts a = write_records(ctx, output, "sweep", records);

    json config = {{"builtin", builtin},
                   {"mode", to_string(axis_mode)},
                   {"p", g.p},
                   {"trials", g.trials},
                   {"c_values", g.c_values},
                   {"lambda_values", g.lambda_values},
                   {"theta_values", g.theta_values},
                   {"vnorm_values", g.vnorm_values},
                   {"defaults",
                    {{"c", g.defaults.c}, {"lambda", g.defaults.lambda}, {"theta", g.defaults.theta},
                     {"vnorm", g.defaults.v_norm}}},
                   {"grid_points", enumerate_grid(g, axis_mode).size()},
                   {"format", output.format},
                   {"record_timing", output.record_timing}};
    config.update(trial.to_json());
    write_manifest(ctx, output, config, seed, a);
    return a.had_error_rows ? kExitErrorRows : kExitOk;
  }
};

// ---------------------------------------------------------------- resolvent-check

struct ResolventCmd {
  OutputOptions output;
  ResolventCheckConfig config;

  void bind(CLI::App* app) {
    output.bind(app, false);
    app->add_option("--p", config.p_values, "Comma-separated feature dimensions")->delimiter(',');
    app->add_option("--c", config.c, "Aspect ratio p/n")->capture_default_str();
    app->add_option("--tau", config.tau, "Spike strength")->capture_default_str();
    app->add_option("--z", config.z, "Spectral argument (< 0)")->capture_default_str();
    app->add_option("--seeds", config.seeds, "Seeds per dimension")->capture_default_str();
    app->add_option("--seed", config.master_seed, "Master seed")->capture_default_str();
  }

  int run(const RunContext& ctx) {
    config.threads = output.threads;
    const auto rows = run_resolvent_checks(config);

    std::ostringstream csv;
    write_resolvent_csv(csv, rows);
    const OutputFormat format = output.output_format();
    const fs::path path = fs::path(output.out_dir) / ("resolvent" + extension_for(format));
    write_text(path, table_text(csv.str(), format));
    ctx.out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";

    const auto medians = median_errors(rows);
    for (const auto& name : resolvent_check_names()) {
      ctx.out << name << ":";
      for (const auto& pt : medians) {
        if (pt.check_name == name) ctx.out << " p=" << pt.p << " median=" << format_double(pt.median_abs_error);
      }
      ctx.out << (converges(medians, name) ? " converges\n" : " not-converging\n");
    }

    json cfg = {{"p_values", config.p_values}, {"c", config.c},         {"tau", config.tau},
                {"z", config.z},               {"seeds", config.seeds}, {"format", output.format}};
    write_manifest(ctx, output, cfg, config.master_seed, Artifacts{{path.filename().string()}, false});
    return kExitOk;
  }
};

// ---------------------------------------------------------------- mnist

struct MnistCmd {
  OutputOptions output;
  std::string images, labels;
  std::vector<int> digits{0, 1};
  std::string scale = "unit";
  std::uint32_t patch_row = 2, patch_col = 2, patch_size = 3;
  double vnorm = 1.0, theta = 0.1, lambda = 0.1, c = 0.1;
  std::vector<double> c_values, lambda_values, theta_values;
  std::uint64_t trials = 100, seed = 0, m_test = 10000;
  bool swap_classes = false, include_intercept = false;
  std::string centering = "empirical";

  void bind(CLI::App* app) {
    output.bind(app, false);
    app->add_option("--images", images, "IDX image file")->required();
    app->add_option("--labels", labels, "IDX label file")->required();
    app->add_option("--digits", digits, "Negative,positive digit")->delimiter(',')->expected(2);
    app->add_option("--scale", scale, "Pixel scale: unit (/255) or raw")
        ->check(CLI::IsMember({"unit", "raw"}))
        ->capture_default_str();
    app->add_option("--patch-row", patch_row, "Patch top row")->capture_default_str();
    app->add_option("--patch-col", patch_col, "Patch left column")->capture_default_str();
    app->add_option("--patch-size", patch_size, "Patch side length")->capture_default_str();
    app->add_option("--vnorm", vnorm, "Trigger norm |v| after scaling")->capture_default_str();
    app->add_option("--theta", theta, "Default poisoning rate")->capture_default_str();
    app->add_option("--lambda", lambda, "Default ridge penalty")->capture_default_str();
    app->add_option("--c", c, "Default aspect ratio; subsample n = round(p / c)")->capture_default_str();
    app->add_option("--c-values", c_values, "Sweep c (subsample sizes)")->delimiter(',');
    app->add_option("--lambda-values", lambda_values, "Sweep lambda")->delimiter(',');
    app->add_option("--theta-values", theta_values, "Sweep theta")->delimiter(',');
    app->add_option("--trials", trials, "Trials per point")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--m-test", m_test, "Gaussian probes for eta_emp_mc")->capture_default_str();
    app->add_flag("--swap-classes", swap_classes, "Poison the positive digit towards the negative one");
    app->add_flag("--include-intercept", include_intercept, "Add b0 to the Monte Carlo efficacy score");
    app->add_option("--centering", centering, "empirical or population")
        ->check(CLI::IsMember({"population", "empirical"}))
        ->capture_default_str();
  }

  struct Point {
    double c, lambda, theta;
  };

  std::vector<Point> points() const {
    std::vector<Point> pts;
    for (const double x : c_values) pts.push_back({x, lambda, theta});
    for (const double x : lambda_values) pts.push_back({c, x, theta});
    for (const double x : theta_values) pts.push_back({c, lambda, x});
    if (pts.empty()) pts.push_back({c, lambda, theta});
    return pts;
  }

  int run(const RunContext& ctx) const {
    const IdxImages idx = parse_idx_images(read_file_bytes(images));
    const std::vector<std::uint8_t> lab = parse_idx_labels(read_file_bytes(labels));
    const BinaryTask task = build_binary_task(idx, lab, digits[0], digits[1], parse_pixel_scale(scale));
    const PatchTrigger trigger = make_patch_trigger(patch_row, patch_col, patch_size, vnorm, idx.rows, idx.cols);
    const std::uint64_t dim = static_cast<std::uint64_t>(idx.rows) * idx.cols;

    MnistOptions opt;
    opt.swap_classes = swap_classes;
    opt.centering = parse_centering(centering);
    opt.m_test = m_test;
    opt.include_intercept = include_intercept;
    opt.threads = output.threads;

    std::vector<SweepRecord> records;
    const auto pts = points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      opt.grid_index = i;
      const auto rows = run_mnist_experiment(task, trigger, pts[i].theta, pts[i].lambda,
                                             sample_count_for(dim, pts[i].c), trials, seed, opt);
      records.insert(records.end(), rows.begin(), rows.end());
    }
    const Artifacts a = write_records(ctx, output, "mnist", records);

    json config = {{"images", images},
                   {"labels", labels},
                   {"digits", digits},
                   {"scale", scale},
                   {"patch", {{"row", patch_row}, {"col", patch_col}, {"size", patch_size}}},
                   {"vnorm", vnorm},
                   {"defaults", {{"c", c}, {"lambda", lambda}, {"theta", theta}}},
                   {"c_values", c_values},
                   {"lambda_values", lambda_values},
                   {"theta_values", theta_values},
                   {"trials", trials},
                   {"m_test", m_test},
                   {"swap_classes", swap_classes},
                   {"include_intercept", include_intercept},
                   {"centering", centering},
                   {"available_samples", task.n()},
                   {"format", output.format}};
    write_manifest(ctx, output, config, seed, a);
    return a.had_error_rows ? kExitErrorRows : kExitOk;
  }
};

// ---------------------------------------------------------------- report

struct ReportCmd {
  std::string input;
  std::string out_dir;
  std::string kind = "all";
  std::vector<std::string> axes;

  void bind(CLI::App* app) {
    app->add_option("--input", input, "Sweep or MNIST output (.csv or .jsonl)")->required();
    app->add_option("--out", out_dir, "Output directory (default: beside the input)");
    app->add_option("--kind", kind, "mu, sigma, eta or all")
        ->check(CLI::IsMember({"mu", "sigma", "eta", "all"}))
        ->capture_default_str();
    app->add_option("--axis", axes, "Axes to plot (default: every axis that varies)")->delimiter(',');
  }

  int run(const RunContext& ctx) const {
    const fs::path in_path(input);
    const std::string text = read_text(in_path);
    std::vector<SweepRecord> records;
    if (in_path.extension() == ".jsonl") {
      records = read_sweep_jsonl(text);
    } else {
      std::istringstream in(text);
      records = read_sweep_csv(in);
    }
    if (records.empty()) throw Error(ErrorCode::SchemaMismatch, input + " has a header but no records");

    const fs::path dir = out_dir.empty() ? in_path.parent_path() : fs::path(out_dir);
    const std::string stem = in_path.stem().string();
    const std::vector<AggregateRow> agg = aggregate(records);

    Artifacts a;
    std::ostringstream agg_csv;
    write_aggregate_csv(agg_csv, agg);
    const fs::path agg_path = dir / (stem + "_agg.csv");
    write_text(agg_path, agg_csv.str());
    a.files.push_back(agg_path.filename().string());

    std::vector<ReportKind> kinds;
    if (kind == "all") {
      kinds = {ReportKind::Mu, ReportKind::Sigma, ReportKind::Eta};
    } else {
      kinds = {parse_report_kind(kind)};
    }
    const std::vector<std::string>& wanted = axes.empty() ? report_axes() : axes;

    for (const ReportKind k : kinds) {
      std::vector<Panel> combined;
      for (const auto& axis : wanted) {
        Panel panel = build_panel(agg, k, axis);
        if (axes.empty() && panel.points.size() < 2) continue;
        const fs::path svg_path = dir / (stem + "_" + to_string(k) + "_" + axis + ".svg");
        write_text(svg_path, render_svg({panel}, k));
        a.files.push_back(svg_path.filename().string());
        if (axis != "vnorm") combined.push_back(std::move(panel));
      }
      if (!combined.empty()) {
        const fs::path svg_path = dir / (stem + "_" + to_string(k) + ".svg");
        write_text(svg_path, render_svg(combined, k));
        a.files.push_back(svg_path.filename().string());
      }
    }
    for (const auto& f : a.files) ctx.out << "wrote " << (dir / f).string() << "\n";

    OutputOptions opt;
    opt.out_dir = dir.string();
    opt.threads = 1;
    json config = {{"input", input}, {"kind", kind}, {"axes", wanted}, {"groups", agg.size()}};
    write_manifest(ctx, opt, config, 0, a);
    for (const auto& r : records) {
      if (r.is_error()) return kExitErrorRows;
    }
    return kExitOk;
  }
};

/// Drops --out/--threads (and their values) so the manifest stores only
/// what determines the primary outputs.
std::vector<std::string> canonical_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--threads") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int rerun(const std::string& manifest_path, const std::optional<std::string>& out_override,
          const std::optional<unsigned>& threads_override, std::ostream& out, std::ostream& err, int depth) {
  json manifest;
  try {
    manifest = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, manifest_path + ": " + e.what());
  }
  if (!manifest.contains("args") || !manifest["args"].is_array()) {
    throw Error(ErrorCode::SchemaMismatch, manifest_path + " has no args array");
  }
  std::vector<std::string> args = manifest["args"].get<std::vector<std::string>>();
  const std::string command = args.empty() ? "" : args.front();
  if (command != "report") {
    args.push_back("--out");
    args.push_back(out_override.value_or(manifest.value("out", std::string(kDefaultOutDir))));
    args.push_back("--threads");
    args.push_back(std::to_string(threads_override.value_or(manifest.value("threads", 1u))));
  } else if (out_override) {
    args.push_back("--out");
    args.push_back(*out_override);
  }
  return dispatch(args, out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  if (depth > 1) {
    err << "error: a manifest cannot point at another rerun\n";
    return kExitUsage;
  }
  CLI::App app{"ridgepois: random-matrix predictions and simulations for backdoor-poisoned ridge regression",
               "ridgepois"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  TheoryCmd theory;
  SimulateCmd simulate;
  SweepCmd sweep;
  ResolventCmd resolvent;
  MnistCmd mnist;
  ReportCmd report;
  std::string manifest_path;
  std::optional<std::string> rerun_out;
  std::optional<unsigned> rerun_threads;

  auto* theory_app = app.add_subcommand("theory", "Closed-form mu, sigma^2, eta for one parameter set");
  theory.bind(theory_app);
  auto* simulate_app = app.add_subcommand("simulate", "Monte Carlo trials at one parameter set");
  simulate.bind(simulate_app);
  auto* sweep_app = app.add_subcommand("sweep", "Parameter sweep over the built-in grid");
  sweep.bind(sweep_app);
  auto* resolvent_app = app.add_subcommand("resolvent-check", "Deterministic-equivalent convergence checks");
  resolvent.bind(resolvent_app);
  auto* mnist_app = app.add_subcommand("mnist", "Poisoned binary MNIST ridge experiment");
  mnist.bind(mnist_app);
  auto* report_app = app.add_subcommand("report", "SVG figures and aggregate CSV from a results file");
  report.bind(report_app);
  auto* rerun_app = app.add_subcommand("rerun", "Repeat a run from its manifest");
  rerun_app->add_option("--manifest", manifest_path, "Manifest written by an earlier run")->required();
  rerun_app->add_option("--out", rerun_out, "Output directory (default: the manifest's)");
  rerun_app->add_option("--threads", rerun_threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const RunContext ctx{command, canonical_args(args), out, err};
  try {
    if (command == "theory") return theory.run(ctx);
    if (command == "simulate") return simulate.run(ctx);
    if (command == "sweep") return sweep.run(ctx);
    if (command == "resolvent-check") return resolvent.run(ctx);
    if (command == "mnist") return mnist.run(ctx);
    if (command == "report") return report.run(ctx);
    return rerun(manifest_path, rerun_out, rerun_threads, out, err, depth);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitModuleError;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return kExitModuleError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return dispatch(args, out, err, 0);
}

}  // namespace ridgepois::cli
