#pragma once

// JSON configuration shared by the simulate, detect and bench commands.
// The schema is described in docs/config.md. Unknown keys are rejected so
// that a misspelt option never silently falls back to its default.

#include "algcpd/bench/bench.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

namespace algcpd::io {

using Json = nlohmann::json;

namespace detail {

inline void check_keys(const Json& j, const std::string& where, std::set<std::string> allowed)
{
  if (!j.is_object()) throw Error(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw Error(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const Json& j, const std::string& where, const std::string& key)
{
  try
  {
    return j.at(key).get<T>();
  }
  catch (const nlohmann::json::exception&)
  {
    throw Error(where + "." + key + ": missing or of the wrong type");
  }
}

template <class T>
void read(const Json& j, const std::string& where, const std::string& key, T& out)
{
  if (j.contains(key)) out = get<T>(j, where, key);
}

inline Polynomial integer_polynomial(const Json& j, const std::string& where)
{
  if (!j.is_array() || j.empty()) throw Error(where + ": expected a nonempty array of integers");
  std::vector<Rational> c;
  for (const auto& x : j)
  {
    if (!x.is_number_integer()) throw Error(where + ": coefficients must be integers");
    c.emplace_back(x.get<long long>());
  }
  return Polynomial(std::move(c));
}

} // namespace detail

inline SignalSpec signal_from_json(const Json& j)
{
  if (j.is_string()) return builtin_suite(j.get<std::string>());
  detail::check_keys(j, "signal", {"duration", "dt", "segments", "carrier"});
  SignalSpec s;
  s.duration = detail::get<double>(j, "signal", "duration");
  detail::read(j, "signal", "dt", s.h);
  if (!j.contains("segments") || !j["segments"].is_array()) throw Error("signal.segments: expected an array");
  for (const auto& seg : j["segments"])
  {
    detail::check_keys(seg, "signal.segments[]", {"start", "coeffs"});
    Segment g;
    g.start = detail::get<double>(seg, "signal.segments[]", "start");
    g.coeffs = detail::get<std::vector<double>>(seg, "signal.segments[]", "coeffs");
    s.segments.push_back(std::move(g));
  }
  if (j.contains("carrier"))
  {
    const Json& c = j["carrier"];
    detail::check_keys(c, "signal.carrier", {"amplitude", "frequency", "phase"});
    Carrier car;
    car.amplitude = detail::get<double>(c, "signal.carrier", "amplitude");
    car.frequency = detail::get<double>(c, "signal.carrier", "frequency");
    detail::read(c, "signal.carrier", "phase", car.phase);
    s.carrier = car;
  }
  s.validate();
  return s;
}

/// Reads the noise block. `snr_db` may be a number or a grid.
inline NoiseSpec noise_from_json(const Json& j, std::vector<double>* grid = nullptr)
{
  detail::check_keys(j, "noise", {"kind", "snr_db", "seed", "perlin"});
  NoiseSpec n;
  n.kind = parse_noise_kind(detail::get<std::string>(j, "noise", "kind"));
  if (j.contains("snr_db"))
  {
    std::vector<double> g;
    if (j["snr_db"].is_array()) g = detail::get<std::vector<double>>(j, "noise", "snr_db");
    else g = {detail::get<double>(j, "noise", "snr_db")};
    if (g.empty()) throw Error("noise.snr_db: empty grid");
    n.snr_db = g.front();
    if (grid) *grid = g;
    else if (g.size() > 1) throw Error("noise.snr_db: a grid is only accepted by bench");
  }
  else if (n.kind != NoiseKind::None)
    throw Error("noise.snr_db is required");
  detail::read(j, "noise", "seed", n.seed);
  if (j.contains("perlin"))
  {
    const Json& p = j["perlin"];
    detail::check_keys(p, "noise.perlin", {"lattice_period", "octaves", "persistence"});
    detail::read(p, "noise.perlin", "lattice_period", n.perlin.lattice_period);
    detail::read(p, "noise.perlin", "octaves", n.perlin.octaves);
    detail::read(p, "noise.perlin", "persistence", n.perlin.persistence);
  }
  n.validate();
  return n;
}

inline ModelSpec model_from_json(const Json& j)
{
  detail::check_keys(j, "detector.model", {"n1", "n2", "order", "jump", "a", "b"});
  ModelSpec m;
  detail::read(j, "detector.model", "n1", m.n1);
  detail::read(j, "detector.model", "order", m.order);
  unsigned n2 = 0;
  detail::read(j, "detector.model", "n2", n2);
  std::string jump = "monomial";
  detail::read(j, "detector.model", "jump", jump);
  if (jump == "monomial") m.jump = MonomialJump{n2};
  else if (jump == "polynomial") m.jump = PolynomialJump{n2};
  else if (jump == "rational")
  {
    if (!j.contains("a") || !j.contains("b")) throw Error("detector.model: a rational jump needs a and b");
    m.jump = RationalJump{detail::integer_polynomial(j["a"], "detector.model.a"),
                          detail::integer_polynomial(j["b"], "detector.model.b")};
  }
  else
    throw Error("detector.model.jump: expected monomial, polynomial or rational, got '" + jump + "'");
  m.validate();
  return m;
}

inline DetectMode parse_detect_mode(const std::string& s)
{
  if (s == "zero_crossing") return DetectMode::ZeroCrossing;
  if (s == "linear_estimate") return DetectMode::LinearEstimate;
  throw Error("unknown detection mode '" + s + "' (expected zero_crossing or linear_estimate)");
}

inline std::string to_string(DetectMode m)
{
  return m == DetectMode::ZeroCrossing ? "zero_crossing" : "linear_estimate";
}

/// Fields not present keep the values already in `d`.
inline void detector_from_json(const Json& j, DetectorSettings& d)
{
  detail::check_keys(j, "detector", {"model", "window", "quadrature", "extra_depth", "kappa", "min_separation",
                                     "mode", "scale", "epsilon", "warmup"});
  if (j.contains("model")) d.model = model_from_json(j["model"]);
  detail::read(j, "detector", "window", d.W);
  if (j.contains("quadrature"))
    d.quadrature = parse_quadrature(detail::get<std::string>(j, "detector", "quadrature"));
  detail::read(j, "detector", "extra_depth", d.extra_depth);
  detail::read(j, "detector", "kappa", d.detect.kappa);
  if (j.contains("min_separation")) d.detect.min_separation = detail::get<double>(j, "detector", "min_separation");
  if (j.contains("mode")) d.detect.mode = parse_detect_mode(detail::get<std::string>(j, "detector", "mode"));
  if (j.contains("scale")) d.detect.scale = detail::get<double>(j, "detector", "scale");
  detail::read(j, "detector", "epsilon", d.detect.epsilon);
  detail::read(j, "detector", "warmup", d.detect.warmup);
  d.detect.validate();
}

/// A whole campaign. A string signal names a built-in suite and also
/// selects that suite's detector preset, which a detector block refines.
inline CampaignConfig campaign_from_json(const Json& j)
{
  detail::check_keys(j, "config", {"name", "signal", "noise", "detector", "runs", "base_seed", "threads"});
  if (!j.contains("signal")) throw Error("config: missing signal");
  CampaignConfig c;
  c.signal = signal_from_json(j["signal"]);
  if (j["signal"].is_string())
  {
    c.name = j["signal"].get<std::string>();
    c.detector = builtin_detector(c.name);
  }
  if (j.contains("noise")) c.noise = noise_from_json(j["noise"], &c.snr_grid);
  else c.noise.kind = NoiseKind::None;
  if (j.contains("detector")) detector_from_json(j["detector"], c.detector);
  detail::read(j, "config", "name", c.name);
  detail::read(j, "config", "runs", c.runs);
  detail::read(j, "config", "base_seed", c.base_seed);
  detail::read(j, "config", "threads", c.threads);
  c.validate();
  return c;
}

inline Json load_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  try
  {
    return Json::parse(in);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw Error("config file '" + path + "': " + e.what());
  }
}

} // namespace algcpd::io
