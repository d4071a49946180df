#pragma once

#include "algcpd/runtime/runtime.hpp"
#include "algcpd/signal/noise.hpp"
#include "algcpd/signal/signal.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <future>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace algcpd {

struct DetectorSettings
{
  ModelSpec model;
  unsigned W = 64;
  Quadrature quadrature = Quadrature::Product;
  unsigned extra_depth = 0;
  DetectConfig detect;

  DiscreteDetector build(double h) const
  {
    BuildOptions opts;
    opts.extra_depth = extra_depth;
    return discretize(kernelize(build_detector(model, opts)), W, h, quadrature);
  }
};

struct CampaignConfig
{
  std::string name = "custom";
  SignalSpec signal;
  NoiseSpec noise;                     ///< seed is replaced per trial
  std::vector<double> snr_grid{0.0};
  DetectorSettings detector;
  unsigned runs = 100;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;                ///< 0 picks the hardware concurrency

  void validate() const
  {
    if (runs < 1) throw Error("a campaign needs at least one run");
    if (snr_grid.empty()) throw Error("the SNR grid is empty");
    signal.validate();
    noise.validate();
    detector.detect.validate();
  }
};

/// Detector settings tuned for each built-in suite.
inline DetectorSettings builtin_detector(const std::string& suite)
{
  DetectorSettings d;
  if (suite == "pc5")
  {
    d.model = ModelSpec{0, MonomialJump{0}, 0};
    d.W = 1024;
  }
  else if (suite == "poly6")
  {
    d.model = ModelSpec{2, MonomialJump{0}, 0};
    d.W = 512;
  }
  else if (suite == "sine3")
  {
    d.model = ModelSpec{2, MonomialJump{0}, 0};
    d.W = 512;
  }
  else
    throw Error("unknown built-in suite '" + suite + "' (expected pc5, poly6 or sine3)");
  return d;
}

inline CampaignConfig builtin_campaign(const std::string& suite, NoiseKind kind, double snr)
{
  CampaignConfig c;
  c.name = suite;
  c.signal = builtin_suite(suite);
  c.noise.kind = kind;
  c.snr_grid = {snr};
  c.detector = builtin_detector(suite);
  return c;
}

/// Everything that is shared by the trials of one campaign.
struct PreparedCampaign
{
  CampaignConfig cfg;
  RenderedSignal signal;
  DiscreteDetector detector;

  explicit PreparedCampaign(CampaignConfig c) : cfg(std::move(c))
  {
    cfg.validate();
    signal = render(cfg.signal);
    detector = cfg.detector.build(cfg.signal.h);
  }
};

struct TrialResult
{
  std::size_t segments = 0;
  std::vector<Detection> detections;
  std::vector<double> noisy;
};

inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) { return base ^ index; }

/// One seeded trial: render, add noise, detect. Deterministic in
/// (config, snr, index).
inline TrialResult run_trial(const PreparedCampaign& p, double snr, std::uint64_t index,
                             bool keepSignal = false)
{
  NoiseSpec ns = p.cfg.noise;
  ns.snr_db = snr;
  ns.seed = trial_seed(p.cfg.base_seed, index);
  std::vector<double> noisy = apply_noise(p.signal.clean, ns);
  const DecisionTrace tr = eval_windows(p.detector, noisy, 0.0, p.cfg.detector.detect.epsilon);
  TrialResult r;
  r.detections = detect(tr, p.detector, p.cfg.detector.detect);
  r.segments = r.detections.size() + 1;
  if (keepSignal) r.noisy = std::move(noisy);
  return r;
}

inline TrialResult run_trial(const CampaignConfig& cfg, double snr, std::uint64_t index)
{
  return run_trial(PreparedCampaign(cfg), snr, index);
}

constexpr std::size_t kHistogramBins = 9;   ///< 1..8 and >= 9

inline std::size_t histogram_bin(std::size_t segments)
{
  return segments >= kHistogramBins ? kHistogramBins - 1 : (segments == 0 ? 0 : segments - 1);
}

inline std::string bin_label(std::size_t bin)
{
  return bin + 1 == kHistogramBins ? ">=9" : std::to_string(bin + 1);
}

struct BenchRow
{
  std::string noise;
  double snr_db = 0.0;
  std::size_t true_count = 0;
  std::array<std::size_t, kHistogramBins> histogram{};
  std::vector<std::vector<Detection>> detections;   ///< per trial, not serialized

  std::size_t runs() const
  {
    std::size_t n = 0;
    for (auto c : histogram) n += c;
    return n;
  }

  std::size_t at(std::size_t segments) const { return histogram[histogram_bin(segments)]; }

  friend bool operator==(const BenchRow& a, const BenchRow& b)
  {
    return a.noise == b.noise && a.snr_db == b.snr_db && a.true_count == b.true_count &&
           a.histogram == b.histogram;
  }
};

struct BenchReport
{
  std::string suite;
  std::vector<BenchRow> rows;

  friend bool operator==(const BenchReport& a, const BenchReport& b)
  {
    return a.suite == b.suite && a.rows == b.rows;
  }
};

/// Runs every SNR of the grid. Trials are spread over threads; each writes
/// only its own slot, so the report does not depend on the schedule.
inline BenchReport run_campaign(const CampaignConfig& cfg, bool keepDetections = false)
{
  const PreparedCampaign p(cfg);
  BenchReport rep;
  rep.suite = cfg.name;
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, cfg.runs);

  for (double snr : cfg.snr_grid)
  {
    std::vector<std::vector<Detection>> perTrial(cfg.runs);
    auto work = [&](unsigned t) {
      for (std::size_t i = t; i < cfg.runs; i += threads)
        perTrial[i] = run_trial(p, snr, i).detections;
    };
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t));
    for (auto& j : jobs) j.get();

    BenchRow row;
    row.noise = to_string(cfg.noise.kind);
    row.snr_db = snr;
    row.true_count = cfg.signal.segments.size();
    for (const auto& d : perTrial) ++row.histogram[histogram_bin(d.size() + 1)];
    if (keepDetections) row.detections = std::move(perTrial);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace detail {

inline std::string format_snr(double snr)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", snr);
  return buf;
}

} // namespace detail

/// Fixed-width table; the column of the true count is starred.
inline std::string format_report_text(const BenchReport& rep)
{
  std::ostringstream os;
  const std::size_t truth = rep.rows.empty() ? 0 : rep.rows.front().true_count;
  os << "suite " << rep.suite << " (true segments: " << truth << ")\n";
  os << std::left << std::setw(14) << "noise" << std::right << std::setw(8) << "snr_db";
  for (std::size_t b = 0; b < kHistogramBins; ++b)
  {
    std::string label = bin_label(b);
    if (b == histogram_bin(truth)) label += "*";
    os << std::setw(6) << label;
  }
  os << "\n";
  for (const auto& r : rep.rows)
  {
    os << std::left << std::setw(14) << r.noise << std::right << std::setw(8) << detail::format_snr(r.snr_db);
    for (auto c : r.histogram) os << std::setw(6) << c;
    os << "\n";
  }
  return os.str();
}

/// Long-form CSV: suite,noise,snr_db,true_count,segments,count.
inline std::string format_report_csv(const BenchReport& rep)
{
  std::ostringstream os;
  os << "suite,noise,snr_db,true_count,segments,count\n";
  for (const auto& r : rep.rows)
    for (std::size_t b = 0; b < kHistogramBins; ++b)
      os << rep.suite << "," << r.noise << "," << detail::format_snr(r.snr_db) << "," << r.true_count
         << "," << bin_label(b) << "," << r.histogram[b] << "\n";
  return os.str();
}

inline BenchReport parse_report_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != "suite,noise,snr_db,true_count,segments,count")
    throw Error("report CSV: unexpected header");
  BenchReport rep;
  std::size_t lineNo = 1;
  while (std::getline(in, line))
  {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw Error("report CSV line " + std::to_string(lineNo) + ": expected 6 fields");
    rep.suite = f[0];
    const double snr = std::stod(f[2]);
    std::size_t bin = kHistogramBins;
    for (std::size_t b = 0; b < kHistogramBins; ++b)
      if (bin_label(b) == f[4]) bin = b;
    if (bin == kHistogramBins)
      throw Error("report CSV line " + std::to_string(lineNo) + ": bad segments label '" + f[4] + "'");
    if (rep.rows.empty() || rep.rows.back().noise != f[1] || rep.rows.back().snr_db != snr || bin == 0)
    {
      BenchRow r;
      r.noise = f[1];
      r.snr_db = snr;
      r.true_count = std::stoul(f[3]);
      rep.rows.push_back(std::move(r));
    }
    rep.rows.back().histogram[bin] = std::stoul(f[5]);
  }
  return rep;
}

} // namespace algcpd
