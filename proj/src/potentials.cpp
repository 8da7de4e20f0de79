#include "perbif/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "perbif/arith.hpp"
#include "perbif/parallel.hpp"

namespace perbif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_arg(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  x = std::remainder(x, two_pi);
  if (x <= -std::numbers::pi) x += two_pi;
  return x;
}

double ln_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

LogComplex& LogComplex::operator+=(const LogComplex& o) {
  log_abs += o.log_abs;
  arg = wrap_arg(arg + o.arg);
  return *this;
}

LogComplex p_n_log(std::span<const cplx> values, cplx w) {
  LogComplex out;
  double arg = 0.0;
  for (cplx v : values) {
    const cplx f = w - v;
    if (f == 0.0) {
      out.log_abs = -kInf;
      continue;
    }
    out.log_abs += std::log(std::abs(f));
    arg += std::arg(f);
  }
  out.arg = wrap_arg(arg);
  return out;
}

LogComplex p_n_log(const MultiplierSpectrum& s, cplx w) { return p_n_log(s.lambda_values, w); }

double L_n(const MultiplierSpectrum& s, cplx w, int d, int n) {
  return p_n_log(s, w).log_abs / std::pow(static_cast<double>(d), n);
}

double L_n_plus(const MultiplierSpectrum& s, cplx w, int d, int n) {
  double sum = 0.0;
  for (cplx v : s.lambda_values) sum += ln_plus(std::abs(w - v));
  return sum / std::pow(static_cast<double>(d), n);
}

double L_n_r(const MultiplierSpectrum& s, double r, int d, int n) {
  if (r < 0.0) throw std::invalid_argument("L_n_r: radius must be nonnegative");
  double sum = 0.0;
  for (cplx v : s.lambda_values) {
    const double m = std::max(std::abs(v), r);
    sum += m == 0.0 ? -kInf : std::log(m);
  }
  return sum / std::pow(static_cast<double>(d), n);
}

double log_escape_radius(const PolynomialMap& map, const GreenOptions& opts, double g_hat) {
  return std::log(4.0) + std::max(g_hat, ln_plus(map.param().norm()) + opts.c0);
}

GreenResult green_eval(const PolynomialMap& map, cplx z, const GreenOptions& opts) {
  if (opts.depth < 1) throw std::invalid_argument("green: depth must be >= 1");
  const int d = map.degree();
  const cplx center = delta(map.param());
  const double log_r = log_escape_radius(map, opts);
  const double ln_d = std::log(static_cast<double>(d));
  // stepping from |z| = e^x lands near e^{d x}; stay well inside double range
  const double log_cap = 600.0 / d;

  GreenResult res;
  int k = 0;
  for (;; ++k) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return res;
    if (std::log(std::abs(z - center)) > log_r) break;
    if (k == opts.depth) {
      if (opts.depth * ln_d >= 60.0) {
        res.value = 0.0;
        res.status = GreenStatus::bounded;
      } else {
        res.value = std::numeric_limits<double>::quiet_NaN();
      }
      return res;
    }
    z = map(z);
  }
  res.escape_index = k;
  res.status = GreenStatus::escaped;
  for (int extra = 0;; ++extra) {
    const double lz = std::log(std::abs(z));
    if ((extra >= opts.tail_steps && lz > std::log(1e20)) || lz > log_cap) break;
    z = map(z);
    ++k;
  }
  // Boettcher coordinate: phi(z) = d^{-1/(d-1)} (z - delta) + O(1/z)
  const double tail = std::log(std::abs(z - center)) - ln_d / (d - 1);
  res.value = std::max(0.0, tail * std::exp(-k * ln_d));
  return res;
}

double green(const PolynomialMap& map, cplx z, const GreenOptions& opts) {
  const auto r = green_eval(map, z, opts);
  if (r.status == GreenStatus::undecided)
    throw Undecided("green: orbit neither escaped nor certified bounded");
  return r.value;
}

GreenResult G_cap_eval(const PolynomialMap& map, const GreenOptions& opts) {
  GreenResult best;
  best.status = GreenStatus::bounded;
  for (cplx c : map.critical_points()) {
    const auto r = green_eval(map, c, opts);
    if (r.status == GreenStatus::undecided) return r;
    if (r.status == GreenStatus::escaped && (best.status != GreenStatus::escaped || r.value > best.value))
      best = r;
  }
  return best;
}

double G_cap(const PolynomialMap& map, const GreenOptions& opts) {
  const auto r = G_cap_eval(map, opts);
  if (r.status == GreenStatus::undecided)
    throw Undecided("G_cap: a critical orbit is undecided");
  return r.value;
}

LyapunovEstimate lyapunov_from_cycles(std::span<const CycleRecord> cycles, int d, int n) {
  double sum = 0.0;
  for (const auto& rec : cycles) {
    if (rec.exact_period != n) continue;
    const double m = std::abs(rec.multiplier);
    if (m > 1.0) sum += rec.multiplicity * std::log(m);
  }
  const double scale = std::pow(static_cast<double>(d), -n);
  LyapunovEstimate est;
  est.value = sum * scale;
  est.method = LyapunovMethod::repelling_cycles;
  est.order = n;
  // mass of the lower-period points the estimator leaves out, times ln d
  const double nu = static_cast<double>(dynatomic_count(d, n).nu);
  est.error_hint = (1.0 - nu * scale) * std::log(static_cast<double>(d));
  return est;
}

LyapunovEstimate lyapunov_repelling(const PolynomialMap& map, int n, const SolverOptions& opts) {
  const auto pts = periodic_points(map, n, opts);
  const auto cycles = classify_cycles(pts, map, n, opts);
  return lyapunov_from_cycles(cycles, map.degree(), n);
}

LyapunovEstimate lyapunov_measure(const PolynomialMap& map, int samples, int depth,
                                  std::uint64_t seed) {
  if (samples < 1 || depth < 1)
    throw std::invalid_argument("lyapunov_measure: samples and depth must be >= 1");
  const int d = map.degree();
  const auto& b = map.coeffs();
  const cplx center = delta(map.param());
  const double start_r = 2.0 * std::exp(log_escape_radius(map, GreenOptions{}));
  const int burn = depth / 2;
  const int kept = depth - burn;

  auto pull_back = [&](cplx t, int pick) -> cplx {
    if (d == 2) {
      const cplx r = std::sqrt((t - b[0]) / b[2]);
      return pick == 0 ? r : -r;
    }
    const auto pre = preimages(map, t);
    if (pre.size() != static_cast<std::size_t>(d))
      throw std::runtime_error("lyapunov_measure: preimage solve failed");
    return pre[pick];
  };

  std::vector<double> chain_mean(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t k) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(k + 1)));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> branch(0, d - 1);
    cplx z = center + std::polar(start_r, angle(rng));
    double acc = 0.0;
    for (int step = 0; step < depth; ++step) {
      z = pull_back(z, branch(rng));
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::runtime_error("lyapunov_measure: preimage solve stalled at step " +
                                 std::to_string(step));
      if (step >= burn) acc += std::log(std::abs(map.derivative(z)));
    }
    chain_mean[k] = acc / kept;
  });

  double mean = 0.0;
  for (double v : chain_mean) mean += v;
  mean /= samples;
  double var = 0.0;
  for (double v : chain_mean) var += (v - mean) * (v - mean);
  var = samples > 1 ? var / (samples - 1) : 0.0;

  LyapunovEstimate est;
  est.value = mean;
  est.method = LyapunovMethod::equilibrium_measure;
  est.order = depth;
  est.error_hint = std::sqrt(var / samples);
  return est;
}

LyapunovEstimate lyapunov_critical_green(const PolynomialMap& map, const GreenOptions& opts) {
  double sum = std::log(static_cast<double>(map.degree()));
  for (cplx c : map.critical_points()) sum += green(map, c, opts);
  LyapunovEstimate est;
  est.value = sum;
  est.method = LyapunovMethod::critical_green;
  est.order = opts.depth;
  est.error_hint = 1e-12;
  return est;
}

}  // namespace perbif
