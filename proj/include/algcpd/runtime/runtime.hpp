#pragma once

#include "algcpd/kernel/discrete.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace algcpd {

/// Per-position window values.
///
/// v is the detector evaluated at t_r = T/2 and slope its derivative in t_r
/// there. d = sign(slope) v / (|w_mid| sigma sqrt(W) + epsilon), with sigma
/// the detrended window deviation (see WindowEvaluator). Orienting
/// by the slope makes d change sign exactly where the root of v(t_r) passes
/// the window middle, and not where the slope itself vanishes.
struct DecisionTrace
{
  std::vector<double> d;
  std::vector<double> v;
  std::vector<double> slope;
  std::vector<std::vector<double>> v_nu;   ///< [nu][k]
  double t0 = 0.0;                         ///< time of the first sample
  double h = 0.0;
  unsigned W = 0;

  std::size_t size() const { return d.size(); }
  double T() const { return (W - 1) * h; }
  double t_of(std::size_t k) const { return t0 + static_cast<double>(k) * h + T() / 2.0; }
};

/// Orthonormal discrete polynomials of degree 1..degree on W points, each
/// orthogonal to the constants, stored column by column.
inline std::vector<std::vector<double>> discrete_poly_basis(unsigned W, unsigned degree)
{
  std::vector<std::vector<double>> basis;
  const double c = 0.5 * (W - 1.0);
  std::vector<std::vector<double>> all{std::vector<double>(W, 1.0 / std::sqrt(double(W)))};
  for (unsigned k = 1; k <= degree; ++k)
  {
    std::vector<double> p(W);
    for (unsigned i = 0; i < W; ++i) p[i] = std::pow((i - c) / c, k);
    // Modified Gram-Schmidt, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : all)
      {
        double dot = 0.0;
        for (unsigned i = 0; i < W; ++i) dot += q[i] * p[i];
        for (unsigned i = 0; i < W; ++i) p[i] -= dot * q[i];
      }
    double nrm = 0.0;
    for (double v : p) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : p) v /= nrm;
    all.push_back(p);
    basis.push_back(std::move(p));
  }
  return basis;
}

/// Evaluates one window. The accumulation order is fixed (ascending sample
/// index), so every caller gets bit-identical values for the same window.
///
/// sigma is the standard deviation of the window after removing its
/// least-squares polynomial of the model's trend degree n1 (for n1 = 0 the
/// plain sample standard deviation), so modeled trends do not deflate d.
class WindowEvaluator
{
public:
  static constexpr std::size_t kMaxTerms = 16;
  static constexpr std::size_t kMaxColumns = 32;

  struct Values
  {
    std::array<double, kMaxTerms> v_nu{};
    double v = 0.0;
    double slope = 0.0;
    double sigma = 0.0;
    double d = 0.0;
  };

  explicit WindowEvaluator(const DiscreteDetector& det, double epsilon = 1e-12)
      : mW(det.W), mTerms(det.weights.size()), mEpsilon(epsilon)
  {
    if (mTerms == 0 || mTerms > kMaxTerms)
      throw Error("detector must have between 1 and 16 weight vectors");
    const unsigned trend = std::min<unsigned>(det.model.n1, det.W - 2);
    const auto basis = discrete_poly_basis(mW, trend);
    mCols = mTerms + basis.size();
    if (mCols > kMaxColumns) throw Error("trend degree too high for the window evaluator");
    mInterleaved.resize(mW * mCols);
    for (std::size_t nu = 0; nu < mTerms; ++nu)
      for (unsigned i = 0; i < mW; ++i) mInterleaved[i * mCols + nu] = det.weights[nu][i];
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (unsigned i = 0; i < mW; ++i) mInterleaved[i * mCols + mTerms + j] = basis[j][i];
    double p = 1.0;
    for (std::size_t nu = 0; nu < mTerms; ++nu, p *= det.t_mid) mMidPowers[nu] = p;
    double n2 = 0.0;
    for (double w : det.mid_weights()) n2 += w * w;
    mMidNorm = std::sqrt(n2);
  }

  unsigned window() const { return mW; }
  std::size_t terms() const { return mTerms; }

  void eval(const double* x, Values& out) const
  {
    std::array<double, kMaxColumns> acc{};
    double s1 = 0.0, s2 = 0.0;
    switch (mCols)
    {
    case 1: accumulate<1>(x, acc, s1, s2); break;
    case 2: accumulate<2>(x, acc, s1, s2); break;
    case 3: accumulate<3>(x, acc, s1, s2); break;
    case 4: accumulate<4>(x, acc, s1, s2); break;
    case 5: accumulate<5>(x, acc, s1, s2); break;
    case 6: accumulate<6>(x, acc, s1, s2); break;
    default: accumulate<0>(x, acc, s1, s2); break;
    }
    const double x0 = x[0];
    double v = 0.0, slope = 0.0;
    for (std::size_t nu = 0; nu < mTerms; ++nu) v += acc[nu] * mMidPowers[nu];
    for (std::size_t nu = 1; nu < mTerms; ++nu) slope += static_cast<double>(nu) * acc[nu] * mMidPowers[nu - 1];
    const double n = mW;
    const double meanShift = s1 / n;
    const double total = std::max(0.0, s2 - s1 * meanShift);
    double fitted = 0.0;
    for (std::size_t j = mTerms; j < mCols; ++j) fitted += acc[j] * acc[j];
    const double dof = n - 1.0 - static_cast<double>(mCols - mTerms);
    const double sd = std::sqrt(std::max(0.0, total - fitted) / dof);
    const double mean = x0 + meanShift;

    for (std::size_t nu = 0; nu < mTerms; ++nu) out.v_nu[nu] = acc[nu];
    out.v = v;
    out.slope = slope;
    out.sigma = sd;
    // A window that is numerically a modeled trend carries no information.
    const double level = std::abs(mean) + std::sqrt(total / (n - 1.0));
    if (sd == 0.0 || sd <= 1e-9 * level) out.d = 0.0;
    else out.d = (slope < 0.0 ? -v : v) / (mMidNorm * sd * std::sqrt(n) + mEpsilon);
  }

private:
  // N > 0 fixes the column count at compile time; N = 0 reads it at run
  // time. Either way each accumulator sums in ascending sample order.
  template <std::size_t N>
  void accumulate(const double* x, std::array<double, kMaxColumns>& acc, double& s1, double& s2) const
  {
    const std::size_t cols = N > 0 ? N : mCols;
    // Moments are taken about the first sample to keep the variance
    // well-conditioned on large offsets.
    const double x0 = x[0];
    const double* w = mInterleaved.data();
    for (unsigned i = 0; i < mW; ++i, w += cols)
    {
      const double xi = x[i];
      for (std::size_t c = 0; c < cols; ++c) acc[c] += w[c] * xi;
      const double c = xi - x0;
      s1 += c;
      s2 += c * c;
    }
  }

  unsigned mW;
  std::size_t mTerms;
  std::size_t mCols = 0;
  double mEpsilon;
  std::vector<double> mInterleaved;
  std::array<double, kMaxTerms> mMidPowers{};
  double mMidNorm = 0.0;
};

/// Slides the detector over the signal. Window positions are independent, so
/// `threads` > 1 partitions them without changing any value.
inline DecisionTrace eval_windows(const DiscreteDetector& det, const std::vector<double>& signal,
                                  double t0 = 0.0, double epsilon = 1e-12, unsigned threads = 1)
{
  if (signal.size() < det.W)
    throw Error("signal has " + std::to_string(signal.size()) + " samples, fewer than the window (" +
                std::to_string(det.W) + ")");
  const WindowEvaluator ev(det, epsilon);
  const std::size_t n = signal.size() - det.W + 1;
  DecisionTrace tr;
  tr.t0 = t0;
  tr.h = det.h;
  tr.W = det.W;
  tr.d.resize(n);
  tr.v.resize(n);
  tr.slope.resize(n);
  tr.v_nu.assign(ev.terms(), std::vector<double>(n));

  auto work = [&](std::size_t lo, std::size_t hi) {
    WindowEvaluator::Values val;
    for (std::size_t k = lo; k < hi; ++k)
    {
      ev.eval(signal.data() + k, val);
      tr.d[k] = val.d;
      tr.v[k] = val.v;
      tr.slope[k] = val.slope;
      for (std::size_t nu = 0; nu < ev.terms(); ++nu) tr.v_nu[nu][k] = val.v_nu[nu];
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1)
  {
    work(0, n);
    return tr;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t)
  {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return tr;
}

enum class DetectMode
{
  ZeroCrossing,
  LinearEstimate,
};

struct DetectConfig
{
  double kappa = 3.0;
  /// Seconds; defaults to W*h when unset.
  std::optional<double> min_separation;
  double epsilon = 1e-12;
  DetectMode mode = DetectMode::ZeroCrossing;
  /// Fixed noise scale of d. When unset, batch detection uses
  /// 1.4826 * MAD(d) over the trace and streaming estimates it from the
  /// first `warmup` positions.
  std::optional<double> scale;
  /// Lower bound on the scale, so rounding residue on noise-free input is
  /// never mistaken for an excursion.
  double scale_floor = 1e-8;
  std::size_t warmup = 2048;

  void validate() const
  {
    if (!(kappa > 0.0)) throw Error("kappa must be positive");
    if (min_separation && *min_separation < 0.0) throw Error("min_separation must be nonnegative");
    if (scale && !(*scale >= 0.0)) throw Error("scale must be nonnegative");
  }
};

struct Detection
{
  double time = 0.0;
  unsigned kind = 0;
  double score = 0.0;
  std::size_t window_index = 0;
};

inline double median_absolute_deviation(std::vector<double> x)
{
  if (x.empty()) return 0.0;
  auto median = [](std::vector<double>& a) {
    const std::size_t m = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + m, a.end());
    double hi = a[m];
    if (a.size() % 2 == 1) return hi;
    const double lo = *std::max_element(a.begin(), a.begin() + m);
    return 0.5 * (lo + hi);
  };
  const double med = median(x);
  for (double& v : x) v = std::abs(v - med);
  return median(x);
}

inline double robust_scale(const std::vector<double>& d) { return 1.4826 * median_absolute_deviation(d); }

/// t_hat = -v0/v1, relative to the window start.
inline double linear_estimate(double v0, double v1)
{
  if (v1 == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return -v0 / v1;
}

/// Incremental candidate extraction shared by the batch and streaming paths.
///
/// Position c is a candidate when the oriented value crosses zero upward
/// between c and c+1 (or, in linear_estimate mode, when -v0/v1 lands within
/// h of the window middle). Its left flank d[c-W/2 .. c] must dip below
/// -kappa*scale and its right flank d[c+1 .. c+1+W/2] rise above it.
/// Candidates closer than min_separation are merged keeping the larger
/// score.
class DecisionEngine
{
public:
  struct Entry
  {
    double c = 0.0;   ///< v oriented by the sign of its t_r slope
    double d = 0.0, v0 = 0.0, v1 = 0.0;
  };

  static Entry make_entry(double v, double slope, double d, double v0, double v1)
  {
    return Entry{slope < 0.0 ? -v : v, d, v0, v1};
  }

  DecisionEngine(const DiscreteDetector& det, const DetectConfig& cfg, double t0, double scale)
      : mCfg(cfg), mHalf(det.W / 2), mH(det.h), mT(det.T()), mT0(t0), mKind(det.model.order),
        mThreshold(cfg.kappa * std::max(scale, cfg.scale_floor)),
        mMinSep(cfg.min_separation.value_or(det.W * det.h))
  {
    cfg.validate();
    if (cfg.mode == DetectMode::LinearEstimate && det.degree() != 1)
      throw Error("linear_estimate mode needs a detector of degree 1 in t_r, got degree " +
                  std::to_string(det.degree()));
  }

  /// Adds position k = number of entries fed so far; appends any finished
  /// detections to `out`.
  void feed(const Entry& e, std::vector<Detection>& out)
  {
    mBuf.push_back(e);
    ++mCount;
    if (mCount >= mHalf + 2) evaluate(mCount - mHalf - 2, out);
    trim();
  }

  /// Evaluates the trailing candidates with truncated right flanks.
  void finish(std::vector<Detection>& out)
  {
    const std::size_t first = mCount >= mHalf + 2 ? mCount - mHalf - 1 : 0;
    for (std::size_t c = first; c + 1 < mCount; ++c) evaluate(c, out);
    if (mPending) out.push_back(*mPending);
    mPending.reset();
  }

private:
  const Entry& at(std::size_t k) const { return mBuf[k - mBase]; }
  double t_of(std::size_t k) const { return mT0 + static_cast<double>(k) * mH + mT / 2.0; }

  void trim()
  {
    // The next candidate is at least mCount - mHalf - 1; its left flank
    // starts mHalf earlier.
    const std::size_t next = mCount >= mHalf + 1 ? mCount - mHalf - 1 : 0;
    const std::size_t keep = next >= mHalf ? next - mHalf : 0;
    while (mBase < keep)
    {
      mBuf.pop_front();
      ++mBase;
    }
  }

  void evaluate(std::size_t c, std::vector<Detection>& out)
  {
    if (mPending && t_of(c) - mH - mPending->time >= mMinSep)
    {
      out.push_back(*mPending);
      mPending.reset();
    }

    const Entry& a = at(c);
    const Entry& b = at(c + 1);
    double time = 0.0;
    double sign = 0.0;
    if (mCfg.mode == DetectMode::ZeroCrossing)
    {
      // Near a change at local position r, c ~ |dv/dt| (T/2 - r) and r
      // decreases as the window slides, so genuine crossings are upward.
      if (!(a.c < 0.0 && b.c >= 0.0)) return;
      sign = -1.0;
      time = t_of(c) + mH * a.c / (a.c - b.c);
    }
    else
    {
      const double th = linear_estimate(a.v0, a.v1);
      if (!(std::abs(th - mT / 2.0) < mH)) return;
      time = mT0 + static_cast<double>(c) * mH + th;
    }

    const std::size_t lo = c >= mHalf ? c - mHalf : 0;
    const std::size_t hi = std::min(mCount - 1, c + 1 + mHalf);
    double left = 0.0, right = 0.0;
    for (std::size_t j = lo; j <= c; ++j)
      left = std::max(left, sign != 0.0 ? sign * at(j).d : std::abs(at(j).d));
    for (std::size_t j = c + 1; j <= hi; ++j)
      right = std::max(right, sign != 0.0 ? -sign * at(j).d : std::abs(at(j).d));
    if (!(left > mThreshold && right > mThreshold)) return;

    Detection det{time, mKind, left + right, c};
    if (mPending && det.time - mPending->time < mMinSep)
    {
      if (det.score > mPending->score) mPending = det;
      return;
    }
    if (mPending) out.push_back(*mPending);
    mPending = det;
  }

  DetectConfig mCfg;
  std::size_t mHalf;
  double mH, mT, mT0;
  unsigned mKind;
  double mThreshold;
  double mMinSep;
  std::deque<Entry> mBuf;
  std::size_t mBase = 0;
  std::size_t mCount = 0;
  std::optional<Detection> mPending;
};

namespace detail {

inline DecisionEngine::Entry entry_of(const DecisionTrace& tr, std::size_t k)
{
  return DecisionEngine::make_entry(tr.v[k], tr.slope[k], tr.d[k], tr.v_nu[0][k],
                                    tr.v_nu.size() > 1 ? tr.v_nu[1][k] : 0.0);
}

} // namespace detail

/// Batch change-point extraction from a full trace.
inline std::vector<Detection> detect(const DecisionTrace& tr, const DiscreteDetector& det,
                                     const DetectConfig& cfg = {})
{
  const double scale = cfg.scale ? *cfg.scale : robust_scale(tr.d);
  DecisionEngine eng(det, cfg, tr.t0, scale);
  std::vector<Detection> out;
  for (std::size_t k = 0; k < tr.size(); ++k) eng.feed(detail::entry_of(tr, k), out);
  eng.finish(out);
  return out;
}

/// Online detector over a ring buffer of W samples.
class StreamDetector
{
public:
  StreamDetector(const DiscreteDetector& det, const DetectConfig& cfg = {}, double t0 = 0.0)
      : mDet(det), mCfg(cfg), mEval(det, cfg.epsilon), mT0(t0), mRing(2 * std::size_t(det.W), 0.0)
  {
    cfg.validate();
    if (cfg.scale) mEngine.emplace(mDet, mCfg, mT0, *cfg.scale);
  }

  /// Feeds one sample. Returns the oldest detection that became final.
  std::optional<Detection> push(double sample)
  {
    // Each sample is written twice so the current window is contiguous.
    const std::size_t W = mDet.W;
    mRing[mPos] = sample;
    mRing[mPos + W] = sample;
    mPos = (mPos + 1) % W;
    ++mSamples;
    if (mSamples >= W)
    {
      WindowEvaluator::Values val;
      mEval.eval(mRing.data() + mPos, val);
      const DecisionEngine::Entry e = DecisionEngine::make_entry(
          val.v, val.slope, val.d, val.v_nu[0], mEval.terms() > 1 ? val.v_nu[1] : 0.0);
      if (mEngine) mEngine->feed(e, mReady);
      else
      {
        mWarm.push_back(e);
        if (mWarm.size() >= mCfg.warmup) start_engine();
      }
    }
    return pop();
  }

  /// Flushes the trailing candidates; returns everything not yet reported.
  std::vector<Detection> finish()
  {
    if (!mEngine) start_engine();
    mEngine->finish(mReady);
    std::vector<Detection> out(mReady.begin(), mReady.end());
    mReady.clear();
    return out;
  }

  std::size_t samples() const { return mSamples; }

private:
  void start_engine()
  {
    std::vector<double> d;
    d.reserve(mWarm.size());
    for (const auto& e : mWarm) d.push_back(e.d);
    mEngine.emplace(mDet, mCfg, mT0, robust_scale(d));
    for (const auto& e : mWarm) mEngine->feed(e, mReady);
    mWarm.clear();
  }

  std::optional<Detection> pop()
  {
    if (mReady.empty()) return std::nullopt;
    Detection d = mReady.front();
    mReady.erase(mReady.begin());
    return d;
  }

  DiscreteDetector mDet;
  DetectConfig mCfg;
  WindowEvaluator mEval;
  double mT0;
  std::vector<double> mRing;
  std::size_t mPos = 0;
  std::size_t mSamples = 0;
  std::optional<DecisionEngine> mEngine;
  std::vector<DecisionEngine::Entry> mWarm;
  std::vector<Detection> mReady;
};

} // namespace algcpd
