// Acceptance suite: one PASS/FAIL line per criterion. Arguments select a
// subset of criteria by number; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/expansion.hpp"
#include "perbif/arith.hpp"
#include "perbif/cli.hpp"
#include "perbif/cycles.hpp"
#include "perbif/io.hpp"
#include "perbif/paramspace.hpp"
#include "perbif/potentials.hpp"

using namespace perbif;
namespace fs = std::filesystem;

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kLn3 = std::log(3.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string list(const std::vector<double>& v, const char* f = "%.4f") {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
  return s + "]";
}

ParamPoint random_param(std::mt19937_64& rng, int d, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<cplx> c;
  for (int k = 0; k < d - 2; ++k) c.emplace_back(u(rng), u(rng));
  return ParamPoint::make(d, c, cplx(u(rng), u(rng)));
}

// Exact-period points of u -> u^d, counted on the roots of unity plus 0.
long long exact_period_points(int d, int n) {
  long long m = 1;
  for (int k = 0; k < n; ++k) m *= d;
  --m;
  long long count = (n == 1) ? 1 : 0;
  for (long long j = 0; j < m; ++j) {
    long long x = j;
    for (int k = 1; k <= n; ++k) {
      x = (x * d) % m;
      if (x == j) {
        if (k == n) ++count;
        break;
      }
    }
  }
  return count;
}

Outcome criterion1() {
  Outcome o;
  const long long nu2[] = {2, 2, 6, 12, 30, 54, 126, 240};
  std::vector<long long> got;
  for (int n = 1; n <= 8; ++n) {
    const auto c = dynatomic_count(2, n);
    got.push_back(static_cast<long long>(c.nu));
    if (c.nu != nu2[n - 1] || static_cast<long long>(c.nu) != exact_period_points(2, n)) o.pass = false;
    count_t sum = 0;
    for (auto k : divisors(n)) sum += dynatomic_count(2, static_cast<int>(k)).nu;
    if (sum != checked_pow(2, n)) o.pass = false;
  }
  std::mt19937_64 rng(101);
  int mismatches = 0, nongeneric = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PolynomialMap m(random_param(rng, 2, 1.5));
    for (int n = 1; n <= 8; ++n) {
      const auto s = multiplier_spectrum(m, n);
      if (!s.generic) ++nongeneric;
      if (static_cast<long long>(s.lambda_values.size()) != dynatomic_count(2, n).n_cycles) ++mismatches;
    }
  }
  if (mismatches) o.pass = false;
  std::string nus;
  for (auto v : got) nus += (nus.empty() ? "" : ",") + std::to_string(v);
  o.detail = "nu_2(1..8) = {" + nus + "}; spectrum size mismatches " + std::to_string(mismatches) +
             "/800 (non-generic flags " + std::to_string(nongeneric) + ")";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(202);
  int params = 0, bad_totals = 0, oracle_checks = 0, oracle_fail = 0;
  auto total = [](const std::vector<PeriodicPoint>& pts) {
    long long s = 0;
    for (const auto& p : pts) s += p.multiplicity;
    return s;
  };
  for (int d : {2, 3}) {
    const int nmax = d == 2 ? 10 : 6;
    for (int trial = 0; trial < 5; ++trial) {
      const PolynomialMap m(random_param(rng, d, 1.2));
      ++params;
      for (int n = 1; n <= nmax; ++n) {
        const auto pts = periodic_points(m, n);
        const auto cyc = classify_cycles(pts, m, n);
        long long s = 0;
        for (const auto& c : cyc) s += static_cast<long long>(c.exact_period) * c.multiplicity;
        const long long want = static_cast<long long>(checked_pow(d, n));
        if (s != want || total(pts) != want) ++bad_totals;
        if (n <= 4) {
          ++oracle_checks;
          std::vector<cplx> flat;
          for (const auto& p : pts)
            for (int k = 0; k < p.multiplicity; ++k) flat.push_back(p.z);
          if (!oracle::multiset_close(flat, oracle::oracle_roots(oracle::iterate_expansion(m, n)), 1e-6))
            ++oracle_fail;
        }
      }
    }
  }
  o.pass = bad_totals == 0 && oracle_fail == 0;
  o.detail = std::to_string(params) + " parameters; level-total failures " + std::to_string(bad_totals) +
             "; expansion-oracle mismatches " + std::to_string(oracle_fail) + "/" +
             std::to_string(oracle_checks);
  return o;
}

Outcome criterion3() {
  Outcome o;
  SolverOptions so;
  so.max_degree = 59049;
  std::mt19937_64 rng(303);
  double worst2 = 0.0, worst3 = 0.0;
  int over2 = 0, over3 = 0;
  for (int d : {2, 3})
    for (int trial = 0; trial < (d == 2 ? 20 : 10); ++trial) {
      const PolynomialMap m(random_param(rng, d, 1.0));
      const double rep = lyapunov_repelling(m, 10, so).value;
      const double mea = lyapunov_measure(m, 10000, 40, 1000 + trial).value;
      const double diff = std::abs(rep - mea);
      (d == 2 ? worst2 : worst3) = std::max(d == 2 ? worst2 : worst3, diff);
      if (diff > 0.02) ++(d == 2 ? over2 : over3);
    }
  const PolynomialMap q(ParamPoint::quadratic(0.0)), c(ParamPoint::make(3, {0.0}, 0.0));
  const double r2 = lyapunov_repelling(q, 10, so).value, m2 = lyapunov_measure(q, 10000, 40, 1).value;
  const double r3 = lyapunov_repelling(c, 10, so).value, m3 = lyapunov_measure(c, 10000, 40, 1).value;
  const bool exact = std::abs(r2 - kLn2) <= 1e-2 && std::abs(m2 - kLn2) <= 1e-2 &&
                     std::abs(r3 - kLn3) <= 1e-2 && std::abs(m3 - kLn3) <= 1e-2;
  o.pass = over2 == 0 && over3 == 0 && exact;
  o.detail = "max |rep-meas| d=2 " + fmt("%.4f", worst2) + " (" + std::to_string(over2) + "/20 > 0.02), d=3 " +
             fmt("%.4f", worst3) + " (" + std::to_string(over3) + "/10 > 0.02); a=0: rep " + fmt("%.4f", r2) +
             " meas " + fmt("%.4f", m2) + " vs ln2; origin d=3: rep " + fmt("%.4f", r3) + " meas " +
             fmt("%.4f", m3) + " vs ln3";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const PolynomialMap q(ParamPoint::quadratic(0.0));
  std::vector<double> vals;
  for (int n : {4, 8}) {
    const double want = static_cast<double>(dynatomic_count(2, n).nu) / std::pow(2.0, n) * kLn2;
    const double got = lyapunov_repelling(q, n).value;
    vals.push_back(got);
    if (std::abs(got - want) > 1e-9) o.pass = false;
  }
  o.detail = "repelling(n=4, 8) = " + list(vals, "%.10f") + ", expected 0.5199, 0.6499";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto slice = SliceSpec::quadratic_a(0.0, 1.6, 512);
  const int periods[] = {4, 6, 8, 10};
  const cplx ws[] = {1.0, std::polar(1.0, std::numbers::pi / 3.0), 0.0};
  const char* names[] = {"w=1", "w=e^(i pi/3)", "w=0"};
  const auto reps = equidist_reports(slice, periods, ws);
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const auto& r = reps[k];
    bool decreasing = true;
    for (std::size_t i = 1; i < r.l1_errors.size(); ++i)
      if (!(r.l1_errors[i] < r.l1_errors[i - 1])) decreasing = false;
    bool masses = true;
    for (std::size_t i = 0; i < r.periods.size(); ++i)
      if (r.periods[i] >= 8 && !(r.normalized_masses[i] >= 0.85 && r.normalized_masses[i] <= 1.1))
        masses = false;
    bool failed = false;
    for (char f : r.failed) failed = failed || f;
    if (!decreasing || !masses || failed) o.pass = false;
    std::vector<double> counts(r.root_counts.begin(), r.root_counts.end());
    o.detail += std::string(k ? "; " : "") + names[k] + ": l1 " + list(r.l1_errors) +
                (decreasing ? " decreasing" : " NOT decreasing") + ", roots " + list(counts, "%.0f") +
                ", mass " + list(r.normalized_masses, "%.3f") + (failed ? " (solver failures)" : "");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto s = SliceSpec::quadratic_a(0.0, 2.0, 64);
  struct Case {
    int n;
    cplx w;
    std::vector<std::pair<cplx, int>> want;
  };
  const double r2 = 1.0 / std::sqrt(2.0);
  const std::vector<Case> cases = {{1, 1.0, {{r2, 1}, {-r2, 1}}},
                                   {1, 0.0, {{0.0, 2}}},
                                   {2, 0.0, {{cplx(0.0, std::sqrt(2.0)), 1}, {cplx(0.0, -std::sqrt(2.0)), 1}}}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto r = pern_roots_in_slice(s, c.n, c.w);
    long long expected = 0;
    for (const auto& [t, m] : c.want) {
      expected += m;
      double best = INFINITY;
      for (const auto& x : r.roots)
        if (x.multiplicity == m) best = std::min(best, std::abs(x.t - t));
      worst = std::max(worst, best);
    }
    if (r.found_total != expected || !r.ok) o.pass = false;
  }
  if (!(worst <= 1e-8)) o.pass = false;
  o.detail = "max landmark error " + fmt("%.2e", worst);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto slice = SliceSpec::quadratic_a(0.0, 2.5, 512);
  const auto m = bif_measure(field_L(slice));
  const double lmass = m.total_mass - m.clamped_mass;
  GridField f;
  f.slice = slice;
  f.values.resize(slice.size());
  for (int iy = 0; iy < slice.resolution; ++iy)
    for (int ix = 0; ix < slice.resolution; ++ix) f.at(ix, iy) = std::log(std::abs(slice.pixel_t(ix, iy)));
  const auto s = bif_measure(f);
  const double smass = s.total_mass - s.clamped_mass;
  o.pass = lmass >= 0.9 && lmass <= 1.1 && std::abs(smass - 1.0) <= 0.02;
  o.detail = "L field Laplacian mass " + fmt("%.4f", lmass) + " (clamped measure " + fmt("%.4f", m.total_mass) +
             "); ln|t| Laplacian mass " + fmt("%.6f", smass) + " (clamped measure " +
             fmt("%.4f", s.total_mass) + ")";
  return o;
}

// Uniform point of the unit sphere in C^2, as (c_1, a).
std::pair<cplx, cplx> sphere_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cplx c(g(rng), g(rng)), a(g(rng), g(rng));
  const double r = std::sqrt(std::norm(c) + std::norm(a));
  return {c / r, a / r};
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(808);
  GreenOptions go;
  long long samples = 0, stuck = 0;
  for (double R : {1e2, 1e3, 1e4}) {
    int taken = 0;
    while (taken < 200) {
      const auto [c, a] = sphere_point(rng);
      const ParamPoint hat = ParamPoint::make(3, {c}, a);
      if (std::abs(alpha(hat, 0)) < 0.1 || std::abs(alpha(hat, 1)) < 0.1) continue;
      ++taken;
      ++samples;
      const PolynomialMap m(hat.scaled(R));
      for (cplx z : m.critical_points())
        if (green_eval(m, z, go).status != GreenStatus::escaped) ++stuck;
    }
  }
  // on alpha_1 = 0 the choice a^3 = c_1 + c_1^3 / 6 makes c_1 a fixed point
  int witnesses = 0;
  std::vector<double> radii;
  for (double R : {1e2, 1e3}) {
    const cplx c1 = std::polar(R, 0.7);
    const cplx a = std::pow(c1 + c1 * c1 * c1 / 6.0, 1.0 / 3.0);
    const ParamPoint p = ParamPoint::make(3, {c1}, a);
    const PolynomialMap m(p);
    const auto hat = p.scaled(1.0 / std::sqrt(std::norm(c1) + std::norm(a)));
    const bool bounded = green_eval(m, c1, go).status == GreenStatus::bounded;
    if (bounded && std::abs(alpha(hat, 1)) < 1e-3) {
      ++witnesses;
      radii.push_back(std::sqrt(std::norm(c1) + std::norm(a)));
    }
  }
  o.pass = stuck == 0 && witnesses == 2;
  o.detail = std::to_string(samples) + " samples, non-escaping critical orbits " + std::to_string(stuck) +
             "; bounded c_1 witnesses near alpha_1 = 0 at |lambda| = " + list(radii, "%.1f");
  return o;
}

Outcome criterion9() {
  Outcome o;
  // |c_1| = cos psi, |a| = sin psi with independent phases: 25 x 20 x 20 points
  double best = INFINITY;
  for (int i = 0; i < 25; ++i) {
    const double psi = (std::numbers::pi / 2.0) * i / 24.0;
    for (int j = 0; j < 20; ++j)
      for (int k = 0; k < 20; ++k) {
        const cplx c = std::polar(std::cos(psi), 2.0 * std::numbers::pi * j / 20.0);
        const cplx a = std::polar(std::sin(psi), 2.0 * std::numbers::pi * k / 20.0);
        const ParamPoint p = ParamPoint::make(3, {c}, a);
        best = std::min(best, std::max(std::abs(alpha(p, 0)), std::abs(alpha(p, 1))));
      }
  }
  o.pass = best >= 0.05;
  o.detail = "min max(|alpha_0|, |alpha_1|) over 10000 sphere points = " + fmt("%.4f", best);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const json cfg = {{"family", {{"d", 2}, {"a", json::array({0.0, 0.0})}}},
                    {"slice", {{"center", json::array({0.0, 0.0})}, {"half_width", 1.6}, {"resolution", 64}}},
                    {"periods", {2, 4, 6}},
                    {"ws", {json::array({1.0, 0.0}), json::array({0.0, 0.0})}},
                    {"seed", 7}};
  std::vector<fs::path> dirs;
  for (int k = 0; k < 2; ++k) {
    const fs::path d = fs::temp_directory_path() / ("perbif_accept_det_" + std::to_string(k));
    fs::remove_all(d);
    cli::Flags f;
    f.out = d;
    f.seed = 7;
    std::ostringstream err;
    const int code = cli::run_command("equidist", cfg, f, err);
    if (code != cli::ok) o.pass = false;
    dirs.push_back(d);
  }
  std::vector<std::string> same;
  for (const char* name : {"equidist.json", "equidist.csv"}) {
    if (read_text(dirs[0] / name) != read_text(dirs[1] / name)) o.pass = false;
    else same.push_back(name);
  }
  o.detail = "byte-identical: ";
  for (const auto& s : same) o.detail += s + " ";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> all = {criterion1, criterion2, criterion3, criterion4,
                                                     criterion5, criterion6, criterion7, criterion8,
                                                     criterion9, criterion10};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  const double budget[] = {300, 0, 600, 0, 3600, 0, 0, 0, 0, 0};
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget[k] > 0 && dt > budget[k]) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", budget[k]) + " s budget";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s  (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
