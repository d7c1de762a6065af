#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "landau/platform.hpp"

using namespace landau;
using namespace landau::cli;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

void print_summary(const std::string& name, const Context& ctx, const Report& r) {
  std::printf("%s: %s\n", name.c_str(), r.pass ? "pass" : "fail");
  std::printf("  report  %s\n", (ctx.dir / "report.json").string().c_str());
  for (const auto& f : r.files) std::printf("  output  %s\n", (ctx.dir / f).string().c_str());
  for (const auto& [k, v] : r.metrics.items())
    if (v.is_primitive()) std::printf("  %-32s %s\n", k.c_str(), v.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  ensure_working_blas(argv);
  CLI::App app{"Verification runs for the linearised and nonlinear Landau operator on a velocity grid"};
  app.set_help_all_flag("--help-all", "Expand all help");
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool quick = false, dump = false;
  app.add_option("--config", config_path, "INI config file (see --dump-defaults)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory, overrides [output] dir");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomised checks, overrides [run] seed");
  app.add_flag("--quick", quick, "n = 12 grids (smoke runs)");
  app.add_flag("--dump-defaults", dump, "print the effective config and exit");
  app.require_subcommand(0, 1);
  app.fallthrough();

  const std::map<std::string, std::pair<std::string, std::function<Report(const Context&)>>> commands = {
      {"kernel-check", {"probe tables for J_alpha, l1/l2, the averaged coefficients and phi asymptotics", kernel_check}},
      {"spectrum", {"dense spectrum of the linearised operator, null space and gap", spectrum}},
      {"evolve", {"nonlinear evolution from the configured initial data", evolve_run}},
      {"dissipativity", {"certified split (M, R) and the semigroup envelope e^{at}", dissipativity}},
      {"decay-fit", {"rate fit of ||f_t - mu||_L1 against lambda0, plus the two-phase bootstrap", decay_fit}},
      {"verify-all", {"the full acceptance suite", verify_all}},
  };
  for (const auto& [name, c] : commands) app.add_subcommand(name, c.first);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  Context ctx;
  try {
    if (!config_path.empty()) ctx.cfg = load_config(config_path);
    if (!out_dir.empty()) ctx.cfg.out_dir = out_dir;
    if (*seed_opt) ctx.cfg.seed = seed;
    if (quick) apply_quick(ctx.cfg);
    ctx.quick = quick;
    ctx.cfg.validate();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  }
  if (dump) {
    std::fputs(dump_config(ctx.cfg).c_str(), stdout);
    return kPass;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::fputs(app.help().c_str(), stderr);
    return kUsage;
  }
  const std::string name = subs.front()->get_name();
  ctx.dir = std::filesystem::path(ctx.cfg.out_dir) / name;
  try {
    std::filesystem::create_directories(ctx.dir);
    const Report r = commands.at(name).second(ctx);
    write_report(ctx.dir, name, ctx.cfg, r);
    print_summary(name, ctx, r);
    return r.pass ? kPass : kFail;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const FeasibilityError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s failed: %s\n", name.c_str(), e.what());
    return kFail;
  }
}
