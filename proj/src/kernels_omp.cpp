#include "emw/kernels.hpp"

namespace emw::omp {

void richtmyer_emw(const EmwKernelArgs& k) {
  const double* lam = k.lam;
  const double* chi = k.chi;
  const double* a = k.a;
  const double* c = k.c;
  const double hr = 0.5 * k.r;
  const long n = static_cast<long>(k.n);
#pragma omp parallel for schedule(static)
  for (long j = 1; j < n - 1; ++j) {
    const auto i = static_cast<std::size_t>(j);
    const double lm = 0.5 * (lam[i - 1] + lam[i]) - hr * (a[i] * chi[i] - a[i - 1] * chi[i - 1]);
    const double cm = 0.5 * (chi[i - 1] + chi[i]) - hr * (c[i] * lam[i] - c[i - 1] * lam[i - 1]);
    const double lp = 0.5 * (lam[i] + lam[i + 1]) - hr * (a[i + 1] * chi[i + 1] - a[i] * chi[i]);
    const double cp = 0.5 * (chi[i] + chi[i + 1]) - hr * (c[i + 1] * lam[i + 1] - c[i] * lam[i]);
    const double am = 0.5 * (a[i - 1] + a[i]), ap = 0.5 * (a[i] + a[i + 1]);
    const double ccm = 0.5 * (c[i - 1] + c[i]), ccp = 0.5 * (c[i] + c[i + 1]);
    k.lam_out[i] = lam[i] - k.r * (ap * cp - am * cm);
    k.chi_out[i] = chi[i] - k.r * (ccp * lp - ccm * lm);
  }
}

}  // namespace emw::omp
