#include "iteration.hpp"

#include <cmath>
#include <numbers>

namespace perbif::detail {

namespace {

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = c.back();
  for (int j = static_cast<int>(c.size()) - 2; j >= 0; --j) v = v * z + c[j];
  return v;
}

double wrap_angle(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x;
}

}  // namespace

IterateEval iterate(const PolynomialMap& map, cplx z0, int n, const IterateRequest& req) {
  IterateEval out;
  const int d = map.degree();
  cplx z = z0;
  cplx D = 1.0;   // (P^k)'
  cplx D2 = 0.0;  // (P^k)''
  cplx T = 0.0;   // d/ds P^k along the parameter direction
  // keep |z|^d below ~1e250 so one more step cannot overflow
  static thread_local int cached_d = 0;
  static thread_local double limit2 = 0.0;
  if (cached_d != d) {
    cached_d = d;
    const double lim = std::min(kLogMagnitudeSwitch, std::pow(1e250, 1.0 / d));
    limit2 = lim * lim;
  }
  int k = 0;
  if (d == 2) {
    // P(z) = b2 z^2 + b1 z + b0 written out on real parts
    const auto& c = map.coeffs();
    const double b0r = c[0].real(), b0i = c[0].imag(), b1r = c[1].real(), b1i = c[1].imag();
    const double b2r = c[2].real(), b2i = c[2].imag();
    const double e0r = req.dcoeffs ? (*req.dcoeffs)[0].real() : 0.0;
    const double e0i = req.dcoeffs ? (*req.dcoeffs)[0].imag() : 0.0;
    const double e1r = req.dcoeffs ? (*req.dcoeffs)[1].real() : 0.0;
    const double e1i = req.dcoeffs ? (*req.dcoeffs)[1].imag() : 0.0;
    const double e2r = req.dcoeffs ? (*req.dcoeffs)[2].real() : 0.0;
    const double e2i = req.dcoeffs ? (*req.dcoeffs)[2].imag() : 0.0;
    const double ddr = 2.0 * b2r, ddi = 2.0 * b2i;
    double zr = z.real(), zi = z.imag();
    double Dr = 1.0, Di = 0.0, D2r = 0.0, D2i = 0.0, Tr = 0.0, Ti = 0.0;
    for (; k < n; ++k) {
      if (zr * zr + zi * zi > limit2) break;
      // dp = 2 b2 z + b1
      const double dpr = ddr * zr - ddi * zi + b1r;
      const double dpi = ddr * zi + ddi * zr + b1i;
      if (req.want_second) {
        const double DDr = Dr * Dr - Di * Di, DDi = 2.0 * Dr * Di;
        const double nr = ddr * DDr - ddi * DDi + dpr * D2r - dpi * D2i;
        const double ni = ddr * DDi + ddi * DDr + dpr * D2i + dpi * D2r;
        D2r = nr;
        D2i = ni;
      }
      if (req.dcoeffs) {
        // e2 z^2 + e1 z + e0
        const double zzr = zr * zr - zi * zi, zzi = 2.0 * zr * zi;
        const double hr = e2r * zzr - e2i * zzi + e1r * zr - e1i * zi + e0r;
        const double hi = e2r * zzi + e2i * zzr + e1r * zi + e1i * zr + e0i;
        const double nr = dpr * Tr - dpi * Ti + hr;
        const double ni = dpr * Ti + dpi * Tr + hi;
        Tr = nr;
        Ti = ni;
      }
      const double nDr = dpr * Dr - dpi * Di, nDi = dpr * Di + dpi * Dr;
      Dr = nDr;
      Di = nDi;
      // p = (b2 z + b1) z + b0
      const double ur = b2r * zr - b2i * zi + b1r, ui = b2r * zi + b2i * zr + b1i;
      const double pr = ur * zr - ui * zi + b0r, pi = ur * zi + ui * zr + b0i;
      zr = pr;
      zi = pi;
    }
    z = cplx(zr, zi);
    D = cplx(Dr, Di);
    D2 = cplx(D2r, D2i);
    T = cplx(Tr, Ti);
  }
  for (; k < n; ++k) {
    if (std::norm(z) > limit2) break;
    cplx p, dp;
    map.eval(z, p, dp);
    if (req.want_second) D2 = map.second_derivative(z) * D * D + dp * D2;
    if (req.dcoeffs) T = dp * T + horner(*req.dcoeffs, z);
    D = dp * D;
    z = p;
  }
  if (k == n && std::norm(z) <= limit2) {
    out.F = z - z0;
    out.dF = D - 1.0;
    out.ddF = D2;
    out.dFs = T;
    out.newton = out.F / out.dF;
    return out;
  }
  // Far field: P(z) = z^d/d up to a relative 1e-100 perturbation, so track
  // complex logarithms of z and of the derivative product.
  out.huge = true;
  cplx lz = std::log(z);
  cplx ld = std::log(D);
  const double lnd = std::log(static_cast<double>(d));
  for (; k < n; ++k) {
    ld += static_cast<double>(d - 1) * lz;
    lz = static_cast<double>(d) * lz - lnd;
    lz.imag(wrap_angle(lz.imag()));
    ld.imag(wrap_angle(ld.imag()));
  }
  out.newton = std::exp(lz - ld);
  return out;
}

cplx iterate_derivative(const PolynomialMap& map, cplx z, int m) {
  cplx D = 1.0;
  for (int k = 0; k < m; ++k) {
    cplx p, dp;
    map.eval(z, p, dp);
    D *= dp;
    z = p;
  }
  return D;
}

int local_multiplicity(const PolynomialMap& map, cplx center, double radius, int n) {
  for (int samples = 32; samples <= 4096; samples *= 2) {
    double total = 0.0;
    double worst = 0.0;
    bool bad = false;
    cplx prev = iterate(map, center + radius, n).F;
    if (prev == 0.0) return -1;
    for (int s = 1; s <= samples; ++s) {
      const double th = 2.0 * std::numbers::pi * s / samples;
      const auto ev = iterate(map, center + std::polar(radius, th), n);
      if (ev.huge || ev.F == 0.0) {
        bad = true;
        break;
      }
      const double step = std::arg(ev.F / prev);
      worst = std::max(worst, std::abs(step));
      total += step;
      prev = ev.F;
    }
    if (bad) return -1;
    if (worst < std::numbers::pi / 3.0) {
      const double w = total / (2.0 * std::numbers::pi);
      const double r = std::round(w);
      if (std::abs(w - r) > 0.1) return -1;
      return static_cast<int>(r);
    }
  }
  return -1;
}

}  // namespace perbif::detail
