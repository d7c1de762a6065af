// One line per acceptance criterion. Every verdict is re-derived here from the reported
// metrics with the pinned tolerances, and must agree with the suite's own verdict.
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>

#include "landau/platform.hpp"
#include "landau/suite.hpp"

using namespace landau;

namespace {

using M = std::map<std::string, double>;

struct Pinned {
  double budget_s;
  std::function<bool(const M&)> check;
};

bool has(const M& m, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!m.count(k)) return false;
  return true;
}

const std::map<int, Pinned>& pinned() {
  static const std::map<int, Pinned> p = {
      {1, {10.0,
           [](const M& m) {
             return has(m, {"max_rel_az", "max_rel_trace", "max_rel_abar_trace", "max_rel_bbar"}) &&
                    m.at("probes") >= 200 && m.at("max_rel_az") <= 1e-12 && m.at("max_rel_trace") <= 1e-12 &&
                    m.at("max_rel_abar_trace") <= 1e-6 && m.at("max_rel_bbar") <= 1e-6;
           }}},
      {2, {10.0,
           [](const M& m) {
             double bad = 0.0;
             for (const char* k : {"violations_a", "violations_b", "violations_c", "violations_d", "violations_e"})
               bad += m.count(k) ? m.at(k) : 1.0;
             return m.count("samples") && m.at("samples") >= 100 && bad == 0.0;
           }}},
      {3, {600.0,
           [](const M& m) {
             return has(m, {"null_count", "lambda0", "drift"}) && m.at("n") == 16 && m.at("n2") == 20 &&
                    m.at("null_count") == 5 && m.at("lambda0") > 0.0 && m.at("drift") < 0.1;
           }}},
      {4, {300.0,
           [](const M& m) {
             return has(m, {"rel_error", "r_squared"}) && m.at("rel_error") <= 0.1 && m.at("r_squared") >= 0.99;
           }}},
      {5, {300.0, [](const M& m) { return has(m, {"rate_over_lambda0"}) && m.at("rate_over_lambda0") >= 0.8; }}},
      {6, {300.0,
           [](const M& m) {
             return has(m, {"a", "max_norm_over_envelope"}) && m.at("a") < 0.0 && m.at("max_norm_over_envelope") <= 1.02;
           }}},
      {7, {300.0, [](const M& m) { return has(m, {"min_slope_q"}) && m.at("min_slope_q") >= -0.9; }}},
      {8, {300.0,
           [](const M& m) {
             return has(m, {"max_abs_Q_mu_mu", "max_abs_moment_Q_ff", "H_monotone", "ratio"}) &&
                    m.at("max_abs_Q_mu_mu") <= 1e-12 && m.at("max_abs_moment_Q_ff") <= 1e-6 &&
                    m.at("H_monotone") == 1.0 && m.at("ratio") >= 3.5 && m.at("ratio") <= 4.5;
           }}},
      {9, {900.0,
           [](const M& m) {
             return has(m, {"rate_over_lambda0", "r_squared", "ckp_failures"}) && m.at("n") == 32 &&
                    std::abs(m.at("rate_over_lambda0") - 1.0) <= 0.2 && m.at("r_squared") >= 0.98 &&
                    m.at("ckp_failures") == 0.0;
           }}},
      {10, {300.0,
            [](const M& m) {
              return has(m, {"exp_rel_error", "duhamel_order"}) && m.at("exp_rel_error") <= 1e-6 &&
                     std::abs(m.at("duhamel_order") - 2.0) <= 0.3;
            }}},
  };
  return p;
}

}  // namespace

int main(int, char** argv) {
  ensure_working_blas(argv);
  SuiteOptions opt;
  if (const char* d = std::getenv("ACCEPTANCE_TRACE_DIR")) opt.trace_dir = d;
  int failed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult r = run_criterion(id, opt);
    M m(r.metrics.begin(), r.metrics.end());
    const Pinned& p = pinned().at(id);
    const bool ok = r.pass && p.check(m) && r.seconds <= p.budget_s;
    if (!ok) ++failed;
    std::printf("[%s] criterion %2d: %-44s %7.1fs", ok ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds);
    for (const auto& [k, v] : r.metrics) std::printf("  %s=%.4g", k.c_str(), v);
    if (!r.note.empty()) std::printf("  note: %s", r.note.c_str());
    if (r.pass != p.check(m)) std::printf("  (suite verdict disagrees with pinned check)");
    if (r.seconds > p.budget_s) std::printf("  (over the %.0fs budget)", p.budget_s);
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", kCriterionCount - failed, kCriterionCount);
  return failed == 0 ? 0 : 1;
}
