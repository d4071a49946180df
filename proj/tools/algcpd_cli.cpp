// algcpd: derive detectors, simulate signals, detect change points, run
// benchmark campaigns and plot results. See README.md for examples.

#include "algcpd/io/config.hpp"
#include "algcpd/io/csv.hpp"
#include "algcpd/io/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace algcpd;

namespace {

ModelSpec parse_model(const std::string& text, const std::string& jump)
{
  std::vector<unsigned> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ','))
  {
    try
    {
      std::size_t used = 0;
      const long x = std::stol(cell, &used);
      if (used != cell.size() || x < 0) throw std::invalid_argument(cell);
      v.push_back(static_cast<unsigned>(x));
    }
    catch (const std::exception&)
    {
      throw Error("--model expects n1,n2,order with nonnegative integers, got '" + text + "'");
    }
  }
  if (v.size() != 3) throw Error("--model expects n1,n2,order, got '" + text + "'");
  ModelSpec m;
  m.n1 = v[0];
  m.order = v[2];
  if (jump == "monomial") m.jump = MonomialJump{v[1]};
  else if (jump == "polynomial") m.jump = PolynomialJump{v[1]};
  else throw Error("--jump expects monomial or polynomial, got '" + jump + "'");
  m.validate();
  return m;
}

std::string snr_tag(double snr)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", snr);
  std::string s = buf;
  for (auto& c : s)
    if (c == '-') c = 'm';
    else if (c == '.') c = 'p';
  return s;
}

void ensure_dir(const std::string& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
}

// Options shared by detect and bench that refine detector settings.
struct DetectorFlags
{
  std::optional<std::string> model;
  std::string jump = "monomial";
  std::optional<unsigned> window;
  std::optional<std::string> quadrature;
  std::optional<unsigned> extra_depth;
  std::optional<double> kappa;
  std::optional<double> min_sep;
  std::optional<double> scale;
  std::optional<std::string> mode;

  void add(CLI::App* app)
  {
    app->add_option("--model", model, "Local model n1,n2,order (trend degree, jump degree, jump order)");
    app->add_option("--jump", jump, "Jump kind: monomial or polynomial")->capture_default_str();
    app->add_option("--window", window, "Window length W in samples");
    app->add_option("--quadrature", quadrature, "trapezoid, simpson or product");
    app->add_option("--extra-depth", extra_depth, "Additional integrations on top of the minimal depth");
    app->add_option("--kappa", kappa, "Flank threshold in robust noise units");
    app->add_option("--min-sep", min_sep, "Minimum separation between detections in seconds (default W*h)");
    app->add_option("--scale", scale, "Fixed noise scale of the decision function");
    app->add_option("--mode", mode, "zero_crossing or linear_estimate");
  }

  void apply(DetectorSettings& d) const
  {
    if (model) d.model = parse_model(*model, jump);
    if (window) d.W = *window;
    if (quadrature) d.quadrature = parse_quadrature(*quadrature);
    if (extra_depth) d.extra_depth = *extra_depth;
    if (kappa) d.detect.kappa = *kappa;
    if (min_sep) d.detect.min_separation = *min_sep;
    if (scale) d.detect.scale = *scale;
    if (mode) d.detect.mode = io::parse_detect_mode(*mode);
    d.detect.validate();
  }
};

// ---------------------------------------------------------------- derive

struct DeriveArgs
{
  unsigned n1 = 0, n2 = 0, order = 0, extra_depth = 0;
  std::string jump = "monomial";
  unsigned window = 64;
  double dt = 0.01;
  std::string quadrature = "product";
  std::string emit_weights;
  bool no_weights = false;
};

int run_derive(const DeriveArgs& a)
{
  ModelSpec m = parse_model(std::to_string(a.n1) + "," + std::to_string(a.n2) + "," + std::to_string(a.order), a.jump);
  BuildOptions opts;
  opts.extra_depth = a.extra_depth;
  const DetectorOperator op = build_detector(m, opts);
  const VerifyReport check = verify_detector(op);
  const SymbolicKernel k = kernelize(op);
  const DiscreteDetector det = discretize(k, a.window, a.dt, parse_quadrature(a.quadrature));

  std::cout << "model: " << m.describe() << "\n";
  std::cout << "depth: " << op.depth << "\n";
  std::cout << "verified: " << (check.passed ? "yes" : "NO") << " (" << check.checks << " exact checks)\n";
  std::cout << "operator:\n" << to_text(op.omega);
  std::cout << "kernels:\n" << to_text(k);
  if (!a.emit_weights.empty())
    io::write_file(a.emit_weights, [&](std::ostream& os) { write_weights_csv(os, det); });
  else if (!a.no_weights)
  {
    std::cout << "weights:\n";
    write_weights_csv(std::cout, det);
  }
  return check.passed ? 0 : 1;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs
{
  std::string suite;
  std::string config;
  std::string noise = "none";
  std::optional<double> snr;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  double lattice = 16.0;
  unsigned octaves = 1;
  double persistence = 0.5;
};

int run_simulate(const SimulateArgs& a)
{
  SignalSpec sig;
  NoiseSpec noise;
  noise.kind = NoiseKind::None;
  bool seedFromConfig = false;
  if (!a.config.empty())
  {
    const auto j = io::load_json(a.config);
    io::detail::check_keys(j, "config", {"name", "signal", "noise", "detector", "runs", "base_seed", "threads"});
    if (!j.contains("signal")) throw Error("config: missing signal");
    sig = io::signal_from_json(j["signal"]);
    if (j.contains("noise"))
    {
      noise = io::noise_from_json(j["noise"]);
      seedFromConfig = j["noise"].contains("seed");
    }
  }
  else if (!a.suite.empty())
    sig = builtin_suite(a.suite);
  else
    throw Error("simulate needs --suite or --config");

  if (a.config.empty() || a.noise != "none") noise.kind = parse_noise_kind(a.noise);
  if (a.snr) noise.snr_db = *a.snr;
  if (a.seed) noise.seed = *a.seed;
  if (a.config.empty())
  {
    noise.perlin = PerlinParams{a.lattice, a.octaves, a.persistence};
    if (noise.kind != NoiseKind::None && !a.snr) throw Error("--snr is required with noise");
  }
  if (noise.kind != NoiseKind::None && !a.seed && !seedFromConfig)
    throw Error("noise needs an explicit --seed");

  const RenderedSignal r = render(sig);
  const std::vector<double> noisy = apply_noise(r.clean, noise);
  ensure_dir(a.out);
  const fs::path dir(a.out);
  io::write_file((dir / "signal.csv").string(), [&](std::ostream& os) { io::write_series(os, r.times, noisy); });
  io::write_file((dir / "clean.csv").string(), [&](std::ostream& os) { io::write_series(os, r.times, r.clean); });
  io::write_file((dir / "truth.csv").string(), [&](std::ostream& os) { io::write_truth(os, r.truth); });
  std::cerr << "wrote " << r.clean.size() << " samples and " << r.truth.size() << " change times to " << a.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- detect

struct DetectArgs
{
  std::string in;
  std::string config;
  std::optional<double> dt;
  std::string out;
  std::string trace;
  bool stream = false;
  unsigned threads = 1;
  DetectorFlags det;
};

int run_detect(const DetectArgs& a)
{
  const io::Table t = io::read_table(a.in);
  const auto& time = t.column("time");
  const auto& x = t.column("value");
  if (x.size() < 2) throw Error("input has fewer than two samples");

  DetectorSettings s;
  if (!a.config.empty())
  {
    const auto j = io::load_json(a.config);
    if (j.contains("detector")) io::detector_from_json(j["detector"], s);
  }
  a.det.apply(s);

  const double h = a.dt ? *a.dt : (time.back() - time.front()) / static_cast<double>(time.size() - 1);
  if (!(h > 0.0)) throw Error("sample period must be positive");
  if (!a.dt)
    for (std::size_t i = 1; i < time.size(); ++i)
      if (std::abs(time[i] - time[i - 1] - h) > 1e-6 * h)
        throw Error("input is not uniformly sampled near t=" + io::format_number(time[i]) + "; pass --dt to override");

  const DiscreteDetector det = s.build(h);
  std::vector<Detection> found;
  std::optional<DecisionTrace> tr;
  if (a.stream)
  {
    StreamDetector sd(det, s.detect, time.front());
    for (double v : x)
      if (auto d = sd.push(v)) found.push_back(*d);
    for (const auto& d : sd.finish()) found.push_back(d);
  }
  if (!a.stream || !a.trace.empty())
    tr = eval_windows(det, x, time.front(), s.detect.epsilon, a.threads);
  if (!a.stream) found = detect(*tr, det, s.detect);

  if (a.out.empty() || a.out == "-") io::write_detections(std::cout, found);
  else io::write_file(a.out, [&](std::ostream& os) { io::write_detections(os, found); });
  if (!a.trace.empty()) io::write_file(a.trace, [&](std::ostream& os) { io::write_trace(os, *tr); });
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs
{
  std::string suite;
  std::string config;
  std::optional<std::string> noise;
  std::vector<double> snr;
  std::optional<unsigned> runs;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  bool no_trials = false;
  DetectorFlags det;
};

int run_bench(const BenchArgs& a)
{
  CampaignConfig c;
  bool seedFromConfig = false;
  if (!a.config.empty())
  {
    const auto j = io::load_json(a.config);
    c = io::campaign_from_json(j);
    seedFromConfig = j.contains("base_seed");
  }
  else if (!a.suite.empty())
    c = builtin_campaign(a.suite, NoiseKind::Normal, 0.0);
  else
    throw Error("bench needs --suite or --config");
  if (!a.seed && !seedFromConfig) throw Error("bench needs an explicit --seed");

  if (a.noise) c.noise.kind = parse_noise_kind(*a.noise);
  if (!a.snr.empty()) c.snr_grid = a.snr;
  if (a.runs) c.runs = *a.runs;
  if (a.seed) c.base_seed = *a.seed;
  if (a.threads) c.threads = *a.threads;
  a.det.apply(c.detector);

  const BenchReport rep = run_campaign(c, !a.no_trials);
  const std::string text = format_report_text(rep);
  std::cout << text;
  if (a.out.empty()) return 0;

  ensure_dir(a.out);
  const fs::path dir(a.out);
  io::write_file((dir / "report.txt").string(), [&](std::ostream& os) { os << text; });
  io::write_file((dir / "report.csv").string(), [&](std::ostream& os) { os << format_report_csv(rep); });
  if (a.no_trials) return 0;
  const fs::path trials = dir / "trials";
  ensure_dir(trials.string());
  for (const auto& row : rep.rows)
    for (std::size_t i = 0; i < row.detections.size(); ++i)
    {
      char name[96];
      std::snprintf(name, sizeof name, "%s_snr%s_trial%03zu.csv", row.noise.c_str(), snr_tag(row.snr_db).c_str(), i);
      io::write_file((trials / name).string(), [&](std::ostream& os) { io::write_detections(os, row.detections[i]); });
    }
  return 0;
}

// ---------------------------------------------------------------- plot

struct PlotArgs
{
  std::string signal;
  std::string clean;
  std::string detections;
  std::string truth;
  std::string trace;
  std::string title;
  std::string out;
};

int run_plot(const PlotArgs& a)
{
  io::PlotSpec spec;
  spec.title = a.title;
  io::Panel top;
  top.title = "signal";
  const io::Table sig = io::read_table(a.signal);
  top.series.push_back({sig.column("time"), sig.column("value"), "#1f77b4", false, "signal"});
  if (!a.clean.empty())
  {
    const io::Table cl = io::read_table(a.clean);
    top.series.push_back({cl.column("time"), cl.column("value"), "#000000", true, "noise-free"});
  }
  std::vector<double> marks;
  if (!a.detections.empty())
    for (const auto& d : io::read_detections(a.detections)) marks.push_back(d.time);
  std::vector<double> truth;
  if (!a.truth.empty()) truth = io::read_table(a.truth).column("time");
  top.markers = marks;
  top.reference_markers = truth;
  spec.panels.push_back(std::move(top));
  if (!a.trace.empty())
  {
    const io::Table tr = io::read_table(a.trace);
    io::Panel dec;
    dec.title = "decision function d";
    dec.series.push_back({tr.column("time"), tr.column("d"), "#2ca02c", false, "d"});
    dec.markers = marks;
    dec.reference_markers = truth;
    spec.panels.push_back(std::move(dec));
  }
  io::write_file(a.out, [&](std::ostream& os) { io::write_svg(os, spec); });
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Algebraic change-point detection: derive, simulate, detect, bench, plot"};
  app.require_subcommand(1);

  DeriveArgs da;
  auto* derive = app.add_subcommand("derive", "Build a detector symbolically; print operator, kernels and weights");
  derive->add_option("--n1", da.n1, "Degree of the polynomial trend")->capture_default_str();
  derive->add_option("--n2", da.n2, "Degree of the jump")->capture_default_str();
  derive->add_option("--order", da.order, "Derivative order of the jump")->capture_default_str();
  derive->add_option("--jump", da.jump, "monomial or polynomial")->capture_default_str();
  derive->add_option("--extra-depth", da.extra_depth, "Additional integrations")->capture_default_str();
  derive->add_option("--window", da.window, "Window length W in samples")->capture_default_str();
  derive->add_option("--dt", da.dt, "Sample period h in seconds")->capture_default_str();
  derive->add_option("--quadrature", da.quadrature, "trapezoid, simpson or product")->capture_default_str();
  derive->add_option("--emit-weights", da.emit_weights, "Write the weight CSV to this file instead of stdout");
  derive->add_flag("--no-weights", da.no_weights, "Do not print the weight CSV");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Render a test signal with noise; write signal, clean and truth CSVs");
  simulate->add_option("--suite", sa.suite, "Built-in suite: pc5, poly6 or sine3");
  simulate->add_option("--config", sa.config, "JSON config with signal and noise blocks (docs/config.md)");
  simulate->add_option("--noise", sa.noise, "none, normal, uniform, perlin or mult_uniform")->capture_default_str();
  simulate->add_option("--snr", sa.snr, "Signal-to-noise ratio in dB");
  simulate->add_option("--seed", sa.seed, "Noise seed (required with noise)");
  simulate->add_option("--out", sa.out, "Output directory")->capture_default_str();
  simulate->add_option("--perlin-lattice", sa.lattice, "Perlin lattice period in samples")->capture_default_str();
  simulate->add_option("--perlin-octaves", sa.octaves, "Perlin octaves")->capture_default_str();
  simulate->add_option("--perlin-persistence", sa.persistence, "Perlin persistence")->capture_default_str();

  DetectArgs ta;
  auto* detectCmd = app.add_subcommand("detect", "Detect change points in a time,value CSV");
  detectCmd->add_option("--in", ta.in, "Input CSV with time,value columns")->required();
  detectCmd->add_option("--config", ta.config, "JSON config; only its detector block is used");
  detectCmd->add_option("--dt", ta.dt, "Sample period (default: from the time column)");
  detectCmd->add_option("--out", ta.out, "Detections CSV (default stdout)");
  detectCmd->add_option("--trace", ta.trace, "Write time,v,slope,d per window to this CSV");
  detectCmd->add_flag("--stream", ta.stream, "Use the streaming detector");
  detectCmd->add_option("--threads", ta.threads, "Threads for the batch window pass")->capture_default_str();
  ta.det.add(detectCmd);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a seeded Monte Carlo campaign and tabulate segment counts");
  bench->add_option("--suite", ba.suite, "Built-in suite: pc5, poly6 or sine3");
  bench->add_option("--config", ba.config, "JSON campaign config (docs/config.md)");
  bench->add_option("--noise", ba.noise, "none, normal, uniform, perlin or mult_uniform");
  bench->add_option("--snr", ba.snr, "SNR grid in dB, comma separated")->delimiter(',');
  bench->add_option("--runs", ba.runs, "Trials per SNR (default 100)");
  bench->add_option("--seed", ba.seed, "Base seed; trial i uses seed XOR i");
  bench->add_option("--threads", ba.threads, "Worker threads (default: all cores)");
  bench->add_option("--out", ba.out, "Output directory for report.txt, report.csv and trials/");
  bench->add_flag("--no-trials", ba.no_trials, "Skip the per-trial detection CSVs");
  ba.det.add(bench);

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Write an SVG with the signal panel and an optional decision panel");
  plot->add_option("--signal", pa.signal, "time,value CSV of the measured signal")->required();
  plot->add_option("--clean", pa.clean, "time,value CSV of the noise-free signal (dashed)");
  plot->add_option("--detections", pa.detections, "Detections CSV (markers)");
  plot->add_option("--truth", pa.truth, "True change times CSV (dotted markers)");
  plot->add_option("--trace", pa.trace, "Trace CSV from detect; adds the decision panel");
  plot->add_option("--title", pa.title, "Figure title");
  plot->add_option("--out", pa.out, "Output SVG file")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);
    return 2;
  }

  try
  {
    if (*derive) return run_derive(da);
    if (*simulate) return run_simulate(sa);
    if (*detectCmd) return run_detect(ta);
    if (*bench) return run_bench(ba);
    if (*plot) return run_plot(pa);
  }
  catch (const std::exception& e)
  {
    std::cerr << "algcpd: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
