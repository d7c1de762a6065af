#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "landau/platform.hpp"

int main(int argc, char** argv) {
  landau::ensure_working_blas(argv);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
