#pragma once

#include <filesystem>

#include "report.hpp"

namespace landau::cli {

struct Context {
  RunConfig cfg;
  std::filesystem::path dir;  // per-subcommand output directory
  bool quick = false;
};

Report kernel_check(const Context& ctx);
Report spectrum(const Context& ctx);
Report evolve_run(const Context& ctx);
Report dissipativity(const Context& ctx);
Report decay_fit(const Context& ctx);
Report verify_all(const Context& ctx);

}  // namespace landau::cli
