#pragma once

#include "algcpd/error.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace algcpd {

/// Polynomial piece starting at `start` seconds, coefficients ascending in
/// local time t - start.
struct Segment
{
  double start = 0.0;
  std::vector<double> coeffs;
};

struct Carrier
{
  double amplitude = 0.0;
  double frequency = 0.0;   ///< Hz
  double phase = 0.0;       ///< radians
};

struct SignalSpec
{
  std::vector<Segment> segments;
  std::optional<Carrier> carrier;
  double duration = 0.0;
  double h = 0.01;

  std::size_t samples() const
  {
    // Guard against duration/h landing a hair below an integer.
    return static_cast<std::size_t>(std::floor(duration / h + 1e-9));
  }

  std::size_t change_count() const { return segments.empty() ? 0 : segments.size() - 1; }

  void validate() const
  {
    if (segments.empty()) throw Error("signal needs at least one segment");
    if (segments.front().start != 0.0) throw Error("first segment must start at 0");
    for (std::size_t j = 1; j < segments.size(); ++j)
      if (!(segments[j].start > segments[j - 1].start))
        throw Error("segment start times must be strictly increasing");
    if (!(h > 0.0)) throw Error("sample period must be positive");
    if (!(duration > segments.back().start)) throw Error("duration must exceed the last segment start");
    for (const auto& s : segments)
      if (s.coeffs.empty()) throw Error("segment at t=" + std::to_string(s.start) + " has no coefficients");
  }
};

struct RenderedSignal
{
  std::vector<double> times;
  std::vector<double> clean;
  std::vector<double> truth;   ///< change times
};

inline RenderedSignal render(const SignalSpec& spec)
{
  spec.validate();
  const std::size_t n = spec.samples();
  // Sample i belongs to the last segment whose first sample index is <= i.
  std::vector<std::size_t> first(spec.segments.size());
  for (std::size_t j = 0; j < first.size(); ++j)
    first[j] = static_cast<std::size_t>(std::ceil(spec.segments[j].start / spec.h - 1e-9));

  RenderedSignal out;
  out.times.resize(n);
  out.clean.resize(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i)
  {
    while (seg + 1 < first.size() && first[seg + 1] <= i) ++seg;
    const double t = static_cast<double>(i) * spec.h;
    const double local = t - spec.segments[seg].start;
    const auto& c = spec.segments[seg].coeffs;
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * local + *it;
    if (spec.carrier)
      v += spec.carrier->amplitude *
           std::sin(2.0 * M_PI * spec.carrier->frequency * t + spec.carrier->phase);
    out.times[i] = t;
    out.clean[i] = v;
  }
  for (std::size_t j = 1; j < spec.segments.size(); ++j) out.truth.push_back(spec.segments[j].start);
  return out;
}

/// Built-in test signals with 5, 6 and 3 segments. The shapes are fixed
/// here; changing them changes every benchmark number.
inline SignalSpec builtin_suite(const std::string& name)
{
  SignalSpec s;
  s.h = 0.01;
  if (name == "pc5")
  {
    // Levels alternate around zero so every jump is large relative to the
    // signal power.
    s.duration = 200.0;
    const double levels[] = {1.0, -1.0, 1.0, -1.0, 1.0};
    for (int j = 0; j < 5; ++j) s.segments.push_back({40.0 * j, {levels[j]}});
    return s;
  }
  if (name == "poly6")
  {
    s.duration = 60.0;
    s.segments = {
        {0.0, {0.0, 0.2}},
        {10.0, {-1.0, 0.1, 0.01}},
        {20.0, {1.2, -0.15}},
        {30.0, {-0.5, 0.0, 0.02}},
        {40.0, {2.0, -0.1}},
        {50.0, {0.5, 0.05, -0.01}},
    };
    return s;
  }
  if (name == "sine3")
  {
    s.duration = 30.0;
    s.segments = {{0.0, {0.0}}, {10.0, {1.5}}, {20.0, {-0.5}}};
    s.carrier = Carrier{1.0, 0.05, 0.0};
    return s;
  }
  throw Error("unknown built-in suite '" + name + "' (expected pc5, poly6 or sine3)");
}

} // namespace algcpd
