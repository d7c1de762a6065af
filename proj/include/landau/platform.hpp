#pragma once

namespace landau {

// Multiplies two 256x256 matrices with BLAS and compares against a plain loop.
bool blas_dgemm_ok();

// Some OpenBLAS builds pick a miscompiled kernel on virtualised AVX-512 hosts. When the
// check fails and OPENBLAS_CORETYPE is unset, re-executes the program with the Haswell
// kernels (the core type is only read when the library loads). Returns normally otherwise.
void ensure_working_blas(char** argv);

}  // namespace landau
