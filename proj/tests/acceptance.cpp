// Acceptance runner: `bgc_acceptance N` checks criterion N, no argument checks all.
// One line per criterion: "criterion N: PASS|FAIL <detail>". Exit status 1 on any FAIL.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "bgc/bgc.hpp"

using namespace bgc;

namespace {

const std::vector<double> kAlphas{0.0, 0.1, 0.25, 0.4, 0.5};
const std::vector<double> kPs{1.0, 2.0, 3.0};

std::vector<NormedSpace> test_spaces() { return {l1(), linf(), l2(), lq(3.0), regular_hexagon()}; }

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Tracks the worst deviation against a bound.
struct Worst {
  double value = 0.0;
  std::string where;
  void offer(double v, const std::string& at) {
    if (!(v <= value)) {
      value = std::isnan(v) ? INFINITY : v;
      where = at;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string at(const NormedSpace& x, double a, double p) {
  return x.descriptor() + " alpha=" + fmt(a) + " p=" + fmt(p);
}

Outcome closed_form_cube(const NormedSpace& x, bool with_grid) {
  Worst exact;
  Worst grid;
  for (double a : kAlphas) {
    for (double p : kPs) {
      const double expected = 2.0 * std::pow(1.0 - a, p);
      exact.offer(std::abs(cinj_iso(x, a, p, Strategy::exact()).value - expected), at(x, a, p));
      if (with_grid) grid.offer(std::abs(cinj_iso(x, a, p, Strategy::grid2d()).value - expected), at(x, a, p));
    }
  }
  Outcome o;
  o.pass = exact.value <= 1e-9 && grid.value <= 1e-4;
  o.detail = "max exact error " + fmt(exact.value) + " (limit 1e-09)";
  if (with_grid) o.detail += ", max grid error " + fmt(grid.value) + " (limit 0.0001)";
  return o;
}

Outcome criterion1() { return closed_form_cube(l1(), true); }

Outcome criterion2() { return closed_form_cube(linf(), false); }

Outcome criterion3() {
  Worst w;
  for (double p : {2.0, 3.0, 4.0}) {
    const NormedSpace x = lq(p);
    for (double a : kAlphas) {
      const double expected = std::pow(1.0 - a, p) + std::pow(a, p);
      w.offer(std::abs(cinj_iso(x, a, p, Strategy::multistart()).value - expected), at(x, a, p));
    }
  }
  return {w.value <= 1e-3, "max multistart error " + fmt(w.value) + " (limit 0.001) at " + w.where};
}

Outcome criterion4() {
  Worst w;
  for (const auto& x : {l1(), linf()}) {
    for (double p : kPs) w.offer(std::abs(cnj_p(x, p, Strategy::exact()).value - 2.0), at(x, 0, p));
  }
  return {w.value <= 1e-6, "max |cnj_p - 2| " + fmt(w.value) + " (limit 1e-06)"};
}

Outcome criterion5() {
  Worst by_default;
  Worst exact;
  for (const auto& x : test_spaces()) {
    for (double a : kAlphas) {
      for (double p : kPs) {
        by_default.offer(std::abs(cinj_iso(x, a, p).value - cinj_via_gamma(x, a, p).value), at(x, a, p));
        if (x.is_polyhedral()) {
          const Strategy e = Strategy::exact();
          exact.offer(std::abs(cinj_iso(x, a, p, e).value - cinj_via_gamma(x, a, p, e).value), at(x, a, p));
        }
      }
    }
  }
  return {by_default.value <= 2e-3 && exact.value <= 1e-9,
          "default strategies max gap " + fmt(by_default.value) + " (limit 0.002), vertex-exact max gap " +
              fmt(exact.value) + " (limit 1e-09)"};
}

Outcome criterion6() {
  Worst w;
  for (const auto& x : {l1(), linf(), regular_hexagon()}) {
    for (double p : kPs) {
      w.offer(std::abs(cnj_p(x, p, Strategy::exact()).value - cnj_p_via_cinj(x, p, Strategy::exact()).value),
              at(x, 0, p));
    }
  }
  return {w.value <= 1e-6, "max gap " + fmt(w.value) + " (limit 1e-06)"};
}

Outcome criterion7() {
  const verify::SuiteReport r =
      verify::run_suite(test_spaces(), 7, verify::Profile::Fast, {"bounds_pp", "james_sandwich", "pq_ordering", "rho_sandwich"});
  Outcome o;
  o.pass = r.failed == 0;
  o.detail = std::to_string(r.failed) + " violations in " + std::to_string(r.checks.size()) + " checks";
  std::string first;
  for (const auto& c : r.checks) {
    if (c.passed) continue;
    if (first.empty()) {
      first = c.check_id + " on " + c.space;
      for (const auto& [k, v] : c.params) first += " " + k + "=" + fmt(v);
      for (const auto& [k, v] : c.values) first += " " + k + "=" + fmt(v);
    }
  }
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Outcome criterion8() {
  Worst attain;
  for (const auto& x : {l1(), linf()}) {
    for (double a : kAlphas) {
      for (double p : kPs) attain.offer(std::abs(cinj_iso(x, a, p).value - 2.0 * std::pow(1.0 - a, p)), at(x, a, p));
    }
  }
  double min_gap = INFINITY;
  for (double a : {0.0, 0.1, 0.25, 0.4}) {
    min_gap = std::min(min_gap, 2.0 * std::pow(1.0 - a, 2.0) - cinj_iso(l2(), a, 2.0).value);
  }
  return {attain.value <= 1e-9 && min_gap >= 0.1,
          "cube spaces max error " + fmt(attain.value) + " (limit 1e-09), Hilbert min margin " + fmt(min_gap) +
              " (needs >= 0.1)"};
}

Outcome criterion9() {
  const double q1 = smoothness_quotient(l2(), 2.0, 0.45);
  const double q2 = smoothness_quotient(l2(), 2.0, 0.49);
  const double q3 = smoothness_quotient(l2(), 2.0, 0.499);
  Worst flat;
  for (double a : {0.0, 0.1, 0.25, 0.4, 0.45, 0.49, 0.499}) {
    flat.offer(std::abs(smoothness_quotient(l1(), 1.0, a) - 1.0), at(l1(), a, 1.0));
  }
  return {q1 > q2 && q2 > q3 && q3 <= 0.01 && flat.value <= 1e-6,
          "Hilbert quotients " + fmt(q1) + " > " + fmt(q2) + " > " + fmt(q3) + " (final limit 0.01), diamond max |q-1| " +
              fmt(flat.value) + " (limit 1e-06)"};
}

Outcome criterion10() {
  Worst remark;
  Worst yang;
  Worst js;
  Worst omega;
  std::int64_t violations = 0;
  for (const auto& x : test_spaces()) {
    for (double p : kPs) {
      const Estimate g = gamma_p(x, p, 0.0);
      remark.offer(std::abs(g.value - std::pow(2.0, 2.0 - p)) - verify::tolerance(g), at(x, 0, p));
      const Estimate c = cinj_iso(x, 0.5, p);
      remark.offer(std::abs(c.value - std::pow(2.0, 1.0 - p)) - verify::tolerance(c), at(x, 0.5, p));
    }
    for (double t : {0.0, 1.0 / 3.0, 0.5, 1.0}) {
      yang.offer(std::abs(gamma_yang(x, t).value - gamma_p(x, 2.0, t).value), at(x, t, 2));
    }
    js.offer(std::abs(james(x).value * schaffer(x).value - 2.0), x.descriptor());
    const Estimate o = omega_prime(x);
    omega.offer(std::abs(o.value - o.metadata.at("nine_tenths_gamma_third")), x.descriptor());
    const verify::CheckResult lemma = verify::run_check("lemma_ll_bounds", x, {{"samples", 10000.0}});
    violations += static_cast<std::int64_t>(lemma.values.at("violations"));
  }
  const bool pass = remark.value <= 0.0 && yang.value <= 1e-12 && js.value <= 1e-3 && omega.value <= 1e-3 &&
                    violations == 0;
  return {pass, "remarks excess " + fmt(remark.value) + ", gamma/yang gap " + fmt(yang.value) + ", |J*S-2| " +
                    fmt(js.value) + ", omega gap " + fmt(omega.value) + ", sandwich violations " +
                    std::to_string(violations) + " in 5x10000 pairs"};
}

Outcome criterion11() {
  const std::string a = verify::to_json(verify::run_suite(test_spaces(), 7, verify::Profile::Fast)).dump();
  setenv("BG_THREADS", "3", 1);
  const std::string b = verify::to_json(verify::run_suite(test_spaces(), 7, verify::Profile::Fast)).dump();
  unsetenv("BG_THREADS");
  return {a == b, a == b ? "identical JSON (" + std::to_string(a.size()) + " bytes)" : "JSON differs"};
}

const std::vector<std::function<Outcome()>> kCriteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      const int n = std::atoi(argv[i]);
      if (n < 1 || n > static_cast<int>(kCriteria.size())) {
        std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
        return 2;
      }
      which.push_back(n);
    }
  } else {
    for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) which.push_back(n);
  }
  int failed = 0;
  for (int n : which) {
    Outcome o;
    try {
      o = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
