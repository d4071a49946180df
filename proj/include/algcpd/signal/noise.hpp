#pragma once

#include "algcpd/error.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace algcpd {

/// SplitMix64 (Steele, Lea and Flood; public domain reference by Vigna).
/// Identical output on every platform for a given seed.
class SplitMix64
{
public:
  explicit SplitMix64(std::uint64_t seed) : mState(seed) {}

  std::uint64_t next()
  {
    std::uint64_t z = (mState += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  static std::uint64_t mix(std::uint64_t z)
  {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller; draws come in pairs.
  double normal()
  {
    if (mHasSpare)
    {
      mHasSpare = false;
      return mSpare;
    }
    const double u1 = 1.0 - uniform();   // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    mSpare = r * std::sin(a);
    mHasSpare = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t mState;
  double mSpare = 0.0;
  bool mHasSpare = false;
};

enum class NoiseKind
{
  None,
  Normal,
  Uniform,
  Perlin,
  MultUniform,
};

inline std::string to_string(NoiseKind k)
{
  switch (k)
  {
  case NoiseKind::None: return "none";
  case NoiseKind::Normal: return "normal";
  case NoiseKind::Uniform: return "uniform";
  case NoiseKind::Perlin: return "perlin";
  case NoiseKind::MultUniform: return "mult_uniform";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(const std::string& s)
{
  for (auto k : {NoiseKind::None, NoiseKind::Normal, NoiseKind::Uniform, NoiseKind::Perlin,
                 NoiseKind::MultUniform})
    if (to_string(k) == s) return k;
  throw Error("unknown noise kind '" + s + "' (expected none, normal, uniform, perlin or mult_uniform)");
}

struct PerlinParams
{
  double lattice_period = 16.0;   ///< samples between lattice points at octave 0
  unsigned octaves = 1;
  double persistence = 0.5;
};

struct NoiseSpec
{
  NoiseKind kind = NoiseKind::Normal;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  PerlinParams perlin;

  void validate() const
  {
    if (perlin.octaves < 1) throw Error("perlin octaves must be at least 1");
    if (!(perlin.lattice_period >= 2.0)) throw Error("perlin lattice period must be at least 2 samples");
    if (std::isnan(snr_db)) throw Error("snr_db is not a number");
  }
};

/// Gradient in [-1, 1] at a lattice point, a pure function of its inputs.
inline double perlin_gradient(std::uint64_t seed, unsigned octave, std::int64_t lattice)
{
  std::uint64_t h = SplitMix64::mix(seed ^ 0x243f6a8885a308d3ULL);
  h = SplitMix64::mix(h ^ (static_cast<std::uint64_t>(octave) * 0x9e3779b97f4a7c15ULL));
  h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(lattice));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

inline double perlin_fade(double u) { return u * u * u * (u * (u * 6.0 - 15.0) + 10.0); }

/// One octave of gradient noise at position p (in lattice units).
inline double perlin_octave(std::uint64_t seed, unsigned octave, double p)
{
  const double cell = std::floor(p);
  const double u = p - cell;
  const auto i0 = static_cast<std::int64_t>(cell);
  const double a = perlin_gradient(seed, octave, i0) * u;
  const double b = perlin_gradient(seed, octave, i0 + 1) * (u - 1.0);
  return a + perlin_fade(u) * (b - a);
}

/// Octave sum at a sample index: octave o has period lattice_period / 2^o
/// and weight persistence^o.
inline double perlin1d(const NoiseSpec& spec, std::size_t index)
{
  double value = 0.0, amp = 1.0, freq = 1.0;
  for (unsigned o = 0; o < spec.perlin.octaves; ++o)
  {
    value += amp * perlin_octave(spec.seed, o, static_cast<double>(index) * freq / spec.perlin.lattice_period);
    amp *= spec.perlin.persistence;
    freq *= 2.0;
  }
  return value;
}

inline double mean_square(const std::vector<double>& x)
{
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

/// Adds (or multiplies in) noise so that the realized noise power is
/// P_signal * 10^(-snr_db/10), with P the mean square of the clean samples.
/// Additive noise is made exactly zero-mean before scaling. An infinite SNR
/// or kind none returns the clean samples.
inline std::vector<double> apply_noise(const std::vector<double>& clean, const NoiseSpec& spec)
{
  spec.validate();
  if (spec.kind == NoiseKind::None || (std::isinf(spec.snr_db) && spec.snr_db > 0)) return clean;
  const double ps = mean_square(clean);
  if (!(ps > 0.0)) throw Error("cannot calibrate noise to an SNR on a zero-power signal");
  const double target = ps * std::pow(10.0, -spec.snr_db / 10.0);
  const std::size_t n = clean.size();

  std::vector<double> raw(n);
  SplitMix64 rng(spec.seed);
  switch (spec.kind)
  {
  case NoiseKind::Normal:
    for (auto& r : raw) r = rng.normal();
    break;
  case NoiseKind::Uniform:
  case NoiseKind::MultUniform:
    for (auto& r : raw) r = 2.0 * rng.uniform() - 1.0;
    break;
  case NoiseKind::Perlin:
    for (std::size_t i = 0; i < n; ++i) raw[i] = perlin1d(spec, i);
    break;
  case NoiseKind::None: break;
  }

  std::vector<double> out(clean);
  if (spec.kind == NoiseKind::MultUniform)
  {
    // out = clean (1 + a u), noise component a clean u
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i) p += clean[i] * clean[i] * raw[i] * raw[i];
    p /= static_cast<double>(n);
    if (!(p > 0.0)) throw Error("multiplicative noise has zero power on this signal");
    const double a = std::sqrt(target / p);
    for (std::size_t i = 0; i < n; ++i) out[i] = clean[i] * (1.0 + a * raw[i]);
    return out;
  }

  double mean = 0.0;
  for (double r : raw) mean += r;
  mean /= static_cast<double>(n);
  for (auto& r : raw) r -= mean;
  const double pr = mean_square(raw);
  if (!(pr > 0.0)) throw Error("raw noise has zero power");
  const double alpha = std::sqrt(target / pr);
  for (std::size_t i = 0; i < n; ++i) out[i] += alpha * raw[i];
  return out;
}

/// 10 log10(P_clean / P_(noisy - clean)).
inline double realized_snr_db(const std::vector<double>& clean, const std::vector<double>& noisy)
{
  std::vector<double> diff(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) diff[i] = noisy[i] - clean[i];
  return 10.0 * std::log10(mean_square(clean) / mean_square(diff));
}

} // namespace algcpd
