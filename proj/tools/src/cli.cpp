#include "shapestat_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "shapestat/calibration.hpp"
#include "shapestat/error.hpp"
#include "shapestat/extrinsic.hpp"
#include "shapestat/intrinsic.hpp"
#include "shapestat/landmarks.hpp"
#include "shapestat/simulate.hpp"
#include "shapestat/svg.hpp"

namespace shapestat::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

fs::path resolve_input(const fs::path& path) {
  if (path.is_absolute() || fs::exists(path)) return path;
  if (const char* root = std::getenv("SHAPESTAT_DATA_DIR"); root != nullptr && *root != '\0') {
    fs::path candidate = fs::path(root) / path;
    if (fs::exists(candidate)) return candidate;
  }
  return path;
}

namespace {

struct Options {
  std::string method = "both";
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int replicates = 500;
  std::string json_path;
  std::string format = "auto";
  intrinsic::IntrinsicOptions intrinsic;
  std::vector<std::string> inputs;

  // command specific
  bool bootstrap = false;
  std::string template_path;
  int k = 5;
  double noise_sd = 0.02;
  int n = 50;
  int m = 50;
  unsigned threads = 0;
  std::string out_path;
  std::string title;
};

class Reporter {
 public:
  Reporter(std::ostream& out, const std::string& json_path) : out_(out), json_path_(json_path) {}

  bool json_to_stdout() const { return json_path_ == "-"; }

  // Human-readable lines are suppressed when the JSON goes to stdout.
  std::ostream* text() { return json_to_stdout() ? nullptr : &out_; }

  void emit(const Json& doc) {
    if (json_path_.empty()) return;
    const std::string body = doc.dump(2) + "\n";
    if (json_to_stdout()) {
      out_ << body;
      return;
    }
    write_text_file(json_path_, body);
  }

 private:
  std::ostream& out_;
  std::string json_path_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json preshape_json(const Preshape& p) {
  Json arr = Json::array();
  for (const Complex& z : p.vector()) arr.push_back(Json::array({z.real(), z.imag()}));
  return arr;
}

Json report_json(std::string_view name, const TestReport& r) {
  Json j;
  j["name"] = name;
  j["statistic"] = number(r.statistic);
  j["distribution"] = to_string(r.distribution);
  if (r.distribution == ReferenceDistribution::ChiSquared) j["df"] = r.df;
  j["p_value"] = number(r.p_value);
  j["alpha"] = r.alpha;
  j["reject"] = r.reject;
  return j;
}

void print_report(std::ostream* os, std::string_view name, const TestReport& r) {
  if (os == nullptr) return;
  *os << name << ": statistic " << fmt(r.statistic);
  if (r.distribution == ReferenceDistribution::ChiSquared) *os << ", df " << r.df;
  *os << ", p " << fmt(r.p_value) << (r.reject ? ", reject" : ", do not reject")
      << " at alpha " << fmt(r.alpha) << "\n";
}

void validate(const Options& o) {
  validate_alpha(o.alpha);
  if (!(o.intrinsic.karcher.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (!(o.intrinsic.karcher.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  if (o.intrinsic.karcher.max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "max-iter must be >= 1");
  }
  if (!(o.intrinsic.fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd-step must be > 0");
  if (o.replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
}

Json config_json(const Options& o, const std::string& command) {
  Json c;
  c["method"] = o.method;
  c["alpha"] = o.alpha;
  c["seed"] = o.seed;
  c["replicates"] = o.replicates;
  c["format"] = o.format;
  c["karcher"] = {{"step", o.intrinsic.karcher.step},
                  {"tol", o.intrinsic.karcher.tol},
                  {"max_iter", o.intrinsic.karcher.max_iter}};
  c["fd_step"] = o.intrinsic.fd_step;
  if (command == "variation-test") c["bootstrap"] = o.bootstrap;
  if (command == "calibrate" || command == "simulate") {
    c["template"] = o.template_path.empty() ? Json(nullptr) : Json(o.template_path);
    c["k"] = o.k;
    c["noise_sd"] = o.noise_sd;
    c["n"] = o.n;
    if (command == "calibrate") {
      c["m"] = o.m;
      c["threads"] = o.threads;
    }
  }
  if (command == "plot") c["out"] = o.out_path;
  if (command == "simulate") c["out"] = o.out_path.empty() ? Json(nullptr) : Json(o.out_path);
  c["inputs"] = o.inputs;
  return c;
}

Json new_document(const std::string& command, const Options& o) {
  Json doc;
  doc["command"] = command;
  doc["config"] = config_json(o, command);
  doc["samples"] = Json::array();
  doc["tests"] = Json::array();
  doc["warnings"] = Json::array();
  return doc;
}

LandmarkFormat format_for(const Options& o, const fs::path& path) {
  if (o.format == "auto") {
    return path.extension() == ".csv" ? LandmarkFormat::Csv : LandmarkFormat::Native;
  }
  return parse_landmark_format(o.format);
}

LandmarkFile load(const Options& o, const std::string& input) {
  const fs::path path = resolve_input(input);
  return parse_landmarks(path, format_for(o, path));
}

Method method_of(const Options& o) { return parse_method(o.method); }

// Regular k-gon on the unit circle.
KAd regular_polygon(int k) {
  ComplexVector z(k);
  for (int j = 0; j < k; ++j) z(j) = std::polar(1.0, 2.0 * std::numbers::pi * j / k);
  return KAd(z);
}

KAd template_of(const Options& o) {
  if (o.template_path.empty()) return regular_polygon(o.k);
  const LandmarkFile f = load(o, o.template_path);
  if (f.objects.empty()) throw Error(ErrorCode::ParseError, "template file has no objects");
  return f.objects.front();
}

// Per-sample entry: extrinsic fields unless only the intrinsic metric is
// requested; with method=both the intrinsic fields nest under "intrinsic".
Json sample_json(const LandmarkFile& file, const std::vector<Shape>& shapes, const Options& o,
                 Json& warnings, std::ostream* text) {
  Json s;
  s["label"] = file.label;
  s["n"] = file.n();
  s["k"] = file.k;
  const Method method = method_of(o);

  std::optional<extrinsic::ExtrinsicMean> em;
  if (uses_extrinsic(method)) em = extrinsic::extrinsic_mean(shapes);

  Json intr;
  std::optional<Shape> intrinsic_mean;
  if (uses_intrinsic(method)) {
    const Shape init = em ? em->mean : extrinsic::extrinsic_mean(shapes).mean;
    const intrinsic::KarcherResult kr = intrinsic::karcher_mean(shapes, init, o.intrinsic.karcher);
    if (!kr.support_condition_held) {
      warnings.push_back("sample '" + file.label +
                         "': support radius condition not met; the intrinsic mean may not be "
                         "unique");
    }
    const double v = frechet_function(kr.mean, shapes, MetricKind::Intrinsic);
    const Preshape rep = em ? align_rotation(kr.mean.rep(), em->mean.rep()) : kr.mean.rep();
    intr["variation"] = v;
    intr["mean_preshape"] = preshape_json(rep);
    intr["iterations"] = kr.iterations;
    intr["gradient_norm"] = kr.gradient_norm;
    intrinsic_mean = kr.mean;
    if (text != nullptr) {
      *text << file.label << ": n " << file.n() << ", k " << file.k << ", intrinsic variation "
            << fmt(v) << " (" << kr.iterations << " iterations)\n";
    }
  }

  if (em) {
    const double v = extrinsic::extrinsic_variation(em->eig);
    s["metric"] = "extrinsic";
    s["variation"] = v;
    s["mean_preshape"] = preshape_json(em->mean.rep());
    s["spectral_gap"] = em->eig.spectral_gap;
    if (intrinsic_mean) s["intrinsic"] = intr;
    if (text != nullptr) {
      *text << file.label << ": n " << file.n() << ", k " << file.k << ", extrinsic variation "
            << fmt(v) << "\n";
    }
  } else {
    s["metric"] = "intrinsic";
    for (auto& [key, value] : intr.items()) s[key] = value;
  }
  return s;
}

std::pair<LandmarkFile, LandmarkFile> load_pair(const Options& o) {
  if (o.inputs.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "expected exactly two landmark files");
  }
  LandmarkFile a = load(o, o.inputs[0]);
  LandmarkFile b = load(o, o.inputs[1]);
  if (a.k != b.k) {
    throw Error(ErrorCode::ShapeMismatch, "files have different landmark counts (" +
                                              std::to_string(a.k) + " vs " +
                                              std::to_string(b.k) + ")");
  }
  if (a.label == b.label) {
    a.label += "#1";
    b.label += "#2";
  }
  return {std::move(a), std::move(b)};
}

void cmd_mean_test(const Options& o, Reporter& rep) {
  auto [fa, fb] = load_pair(o);
  const auto a = fa.shapes();
  const auto b = fb.shapes();
  Json doc = new_document("mean-test", o);
  std::ostream* text = rep.text();
  doc["samples"].push_back(sample_json(fa, a, o, doc["warnings"], text));
  doc["samples"].push_back(sample_json(fb, b, o, doc["warnings"], text));
  const Method method = method_of(o);
  if (uses_extrinsic(method)) {
    const TestReport r = extrinsic::extrinsic_mean_test(a, b, o.alpha);
    doc["tests"].push_back(report_json("extrinsic_mean", r));
    print_report(text, "extrinsic_mean", r);
  }
  if (uses_intrinsic(method)) {
    const auto r = intrinsic::intrinsic_mean_test_detailed(a, b, o.alpha, o.intrinsic);
    Json j = report_json("intrinsic_mean", r.report);
    j["pooled_mean_iterations"] = r.pooled.iterations;
    if (!r.pooled.support_condition_held) {
      doc["warnings"].push_back(
          "pooled sample: support radius condition not met; the pooled intrinsic mean may not "
          "be unique");
    }
    doc["tests"].push_back(j);
    print_report(text, "intrinsic_mean", r.report);
  }
  rep.emit(doc);
}

void cmd_variation_test(const Options& o, Reporter& rep) {
  auto [fa, fb] = load_pair(o);
  const auto a = fa.shapes();
  const auto b = fb.shapes();
  Json doc = new_document("variation-test", o);
  std::ostream* text = rep.text();
  doc["samples"].push_back(sample_json(fa, a, o, doc["warnings"], text));
  doc["samples"].push_back(sample_json(fb, b, o, doc["warnings"], text));
  const Method method = method_of(o);

  auto run = [&](MetricKind metric) {
    const std::string name = std::string(to_string(metric)) + "_variation";
    if (!o.bootstrap) {
      const TestReport r = metric == MetricKind::Extrinsic
                               ? extrinsic::extrinsic_variation_test(a, b, o.alpha)
                               : intrinsic::intrinsic_variation_test(a, b, o.alpha,
                                                                     o.intrinsic.karcher);
      doc["tests"].push_back(report_json(name, r));
      print_report(text, name, r);
      return;
    }
    const BootstrapResult br = bootstrap_variation_test(a, b, metric, o.alpha, o.replicates,
                                                        o.seed, o.intrinsic.karcher);
    TestReport r = br.asymptotic;
    r.p_value = br.p_value;
    r.reject = r.p_value < r.alpha;
    Json j = report_json(name, r);
    j["p_value_source"] = "bootstrap";
    j["p_value_asymptotic"] = number(br.asymptotic.p_value);
    j["bootstrap_replicates"] = br.replicates;
    j["bootstrap_failures"] = br.failures;
    if (br.failures > 0) {
      doc["warnings"].push_back(name + ": " + std::to_string(br.failures) +
                                " bootstrap resamples failed numerically and were dropped");
    }
    doc["tests"].push_back(j);
    print_report(text, name + " (bootstrap p)", r);
  };
  if (uses_extrinsic(method)) run(MetricKind::Extrinsic);
  if (uses_intrinsic(method)) run(MetricKind::Intrinsic);
  rep.emit(doc);
}

void cmd_summary(const Options& o, Reporter& rep) {
  if (o.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "expected at least one file");
  Json doc = new_document("summary", o);
  for (const std::string& input : o.inputs) {
    const LandmarkFile f = load(o, input);
    doc["samples"].push_back(sample_json(f, f.shapes(), o, doc["warnings"], rep.text()));
  }
  rep.emit(doc);
}

// "both" draws the extrinsic mean.
Shape mean_for_plot(const std::vector<Shape>& shapes, const Options& o) {
  const Shape em = extrinsic::extrinsic_mean(shapes).mean;
  if (method_of(o) != Method::Intrinsic) return em;
  return intrinsic::karcher_mean(shapes, em, o.intrinsic.karcher).mean;
}

void cmd_plot(const Options& o, Reporter& rep) {
  if (o.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "expected at least one file");
  Json doc = new_document("plot", o);
  std::string svg;
  if (o.inputs.size() == 1) {
    const LandmarkFile f = load(o, o.inputs.front());
    const auto shapes = f.shapes();
    const Shape mean = mean_for_plot(shapes, o);
    svg = render_sample_svg(shapes, mean, o.title.empty() ? f.label : o.title);
    Json s = {{"label", f.label}, {"n", f.n()}, {"k", f.k}};
    s["mean_preshape"] = preshape_json(mean.rep());
    doc["samples"].push_back(s);
  } else {
    std::vector<LabeledShape> means;
    std::vector<Shape> pooled;
    int k = 0;
    for (const std::string& input : o.inputs) {
      const LandmarkFile f = load(o, input);
      if (k != 0 && f.k != k) {
        throw Error(ErrorCode::ShapeMismatch, "files have different landmark counts");
      }
      k = f.k;
      const auto shapes = f.shapes();
      pooled.insert(pooled.end(), shapes.begin(), shapes.end());
      means.push_back({f.label, mean_for_plot(shapes, o)});
      Json s = {{"label", f.label}, {"n", f.n()}, {"k", f.k}};
      s["mean_preshape"] = preshape_json(means.back().shape.rep());
      doc["samples"].push_back(s);
    }
    svg = render_means_svg(means, mean_for_plot(pooled, o),
                           o.title.empty() ? std::string("sample means") : o.title);
  }
  write_text_file(o.out_path, svg);
  if (std::ostream* t = rep.text()) *t << "wrote " << o.out_path << "\n";
  rep.emit(doc);
}

void cmd_calibrate(const Options& o, Reporter& rep) {
  const KAd tpl = template_of(o);
  CalibrationConfig cfg;
  cfg.noise_sd = o.noise_sd;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.replicates = o.replicates;
  cfg.seed = o.seed;
  cfg.alpha = o.alpha;
  cfg.method = method_of(o);
  cfg.intrinsic = o.intrinsic;
  cfg.threads = o.threads;
  const CalibrationReport report = calibrate(tpl, cfg);

  Json doc = new_document("calibrate", o);
  doc["config"]["k"] = tpl.k();
  Json series = Json::array();
  for (const CalibrationSeries& s : report.series) {
    Json j;
    j["test"] = s.test;
    j["df"] = s.df;
    j["replicates"] = o.replicates;
    j["failures"] = s.failures;
    j["rejection_rate"] = s.rejection_rate;
    j["ks_distance"] = s.ks_distance;
    j["statistics"] = s.statistics;
    series.push_back(j);
    if (s.failures > 0) {
      doc["warnings"].push_back(s.test + ": " + std::to_string(s.failures) +
                                " replicates failed numerically and were excluded");
    }
    if (std::ostream* t = rep.text()) {
      *t << s.test << ": " << s.statistics.size() << " replicates, rejection rate "
         << fmt(s.rejection_rate) << " at alpha " << fmt(o.alpha) << ", KS distance to chi2("
         << s.df << ") " << fmt(s.ks_distance) << "\n";
    }
  }
  doc["calibration"] = series;
  rep.emit(doc);
}

void cmd_simulate(const Options& o, Reporter& rep) {
  const KAd tpl = template_of(o);
  Philox4x32 rng(o.seed);
  LandmarkFile file;
  file.label = "simulated";
  file.k = tpl.k();
  file.objects = simulate_kads(SimSpec{tpl, o.noise_sd, o.n}, rng);
  const LandmarkFormat format = o.format == "auto"
                                    ? (fs::path(o.out_path).extension() == ".csv"
                                           ? LandmarkFormat::Csv
                                           : LandmarkFormat::Native)
                                    : parse_landmark_format(o.format);
  Json doc = new_document("simulate", o);
  doc["config"]["k"] = tpl.k();
  if (o.out_path.empty()) {
    if (rep.json_to_stdout()) {
      throw Error(ErrorCode::InvalidArgument, "simulate needs --out when JSON goes to stdout");
    }
    write_landmarks(*rep.text(), file, format);
  } else {
    write_landmarks(fs::path(o.out_path), file, format);
    if (std::ostream* t = rep.text()) *t << "wrote " << o.out_path << "\n";
  }
  rep.emit(doc);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "extrinsic, intrinsic or both")
      ->check(CLI::IsMember({"extrinsic", "intrinsic", "both"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "significance level")->capture_default_str();
  cmd->add_option("--json", o.json_path, "write the JSON report to this path ('-' for stdout)");
  cmd->add_option("--format", o.format, "landmark file format: auto, native or csv")
      ->check(CLI::IsMember({"auto", "native", "csv"}))
      ->capture_default_str();
  cmd->add_option("--step", o.intrinsic.karcher.step, "Karcher step size")->capture_default_str();
  cmd->add_option("--tol", o.intrinsic.karcher.tol, "Karcher tolerance")->capture_default_str();
  cmd->add_option("--max-iter", o.intrinsic.karcher.max_iter, "Karcher iteration cap")
      ->capture_default_str();
  cmd->add_option("--fd-step", o.intrinsic.fd_step, "finite-difference step for the Hessian")
      ->capture_default_str();
}

void add_seeded(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--replicates", o.replicates, "replicate count")->capture_default_str();
}

void add_simulation(CLI::App* cmd, Options& o) {
  cmd->add_option("--template", o.template_path,
                  "landmark file whose first object is the template (default: regular k-gon)");
  cmd->add_option("--k", o.k, "landmarks of the default regular-polygon template")
      ->check(CLI::Range(3, 512))
      ->capture_default_str();
  cmd->add_option("--noise-sd", o.noise_sd, "noise sd relative to centroid size")
      ->capture_default_str();
  cmd->add_option("--n", o.n, "sample size")->capture_default_str();
}

int exit_code_for(ErrorCode code) {
  return is_numerical(code) ? kExitNumerical : kExitUsage;
}

void report_error(std::ostream& err, Reporter* rep, const std::string& command,
                  std::string_view code, const std::string& message, int exit_code) {
  Json doc;
  doc["command"] = command;
  doc["error"] = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
  err << doc.dump() << "\n";
  if (rep != nullptr && !rep->json_to_stdout()) {
    try {
      rep->emit(doc);
    } catch (const std::exception&) {
      // the stderr copy is enough
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Two-sample tests for planar landmark shapes", "shapestat"};
  app.require_subcommand(1);

  CLI::App* mean = app.add_subcommand("mean-test", "two-sample test for equal mean shapes");
  CLI::App* var = app.add_subcommand("variation-test", "two-sample test for equal variations");
  CLI::App* summary = app.add_subcommand("summary", "per-sample means and variations");
  CLI::App* plot = app.add_subcommand("plot", "SVG of aligned preshapes and mean landmarks");
  CLI::App* cal = app.add_subcommand("calibrate", "null calibration of the mean tests");
  CLI::App* sim = app.add_subcommand("simulate", "draw a landmark sample around a template");

  for (CLI::App* cmd : {mean, var, summary, plot, cal, sim}) add_common(cmd, o);
  for (CLI::App* cmd : {mean, var}) {
    cmd->add_option("files", o.inputs, "two landmark files")->required()->expected(2);
  }
  var->add_flag("--bootstrap", o.bootstrap, "replace the p-value with a bootstrap p-value");
  add_seeded(var, o);
  summary->add_option("files", o.inputs, "landmark files")->required();
  plot->add_option("files", o.inputs, "one file (sample figure) or several (means figure)")
      ->required();
  plot->add_option("--out", o.out_path, "output SVG path")->required();
  plot->add_option("--title", o.title, "figure title");
  add_seeded(cal, o);
  add_simulation(cal, o);
  cal->add_option("--m", o.m, "second sample size")->capture_default_str();
  cal->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)")
      ->capture_default_str();
  sim->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  add_simulation(sim, o);
  sim->add_option("--out", o.out_path, "output landmark file (default: stdout)");

  std::string command = "shapestat";
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    for (CLI::App* sub : app.get_subcommands()) command = sub->get_name();
    report_error(err, nullptr, command, "UsageError", e.what(), kExitUsage);
    return kExitUsage;
  }
  command = app.get_subcommands().front()->get_name();

  Reporter rep(out, o.json_path);
  try {
    validate(o);
    if (command == "mean-test") cmd_mean_test(o, rep);
    else if (command == "variation-test") cmd_variation_test(o, rep);
    else if (command == "summary") cmd_summary(o, rep);
    else if (command == "plot") cmd_plot(o, rep);
    else if (command == "calibrate") cmd_calibrate(o, rep);
    else cmd_simulate(o, rep);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(err, &rep, command, to_string(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(err, &rep, command, "InternalError", e.what(), kExitInternal);
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace shapestat::cli
