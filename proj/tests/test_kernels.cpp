#include "bglasso/kernels.hpp"

#include "doctest.h"
#include "generators.hpp"

#include <omp.h>

using namespace bglasso;

TEST_SUITE("kernels") {
  TEST_CASE("parallel Cholesky is bitwise identical to the serial reference") {
    RngStream rng(21, 0);
    for (Index p : {1, 2, 7, 33, 96, 150}) {
      const Matrix a = gen::well_conditioned_spd(rng, p).matrix();
      Matrix ls, lp;
      const bool oks = kernels::cholesky_serial(a, ls, kPdTolerance);
      const bool okp = kernels::cholesky_parallel(a, lp, kPdTolerance);
      REQUIRE(oks);
      REQUIRE(okp);
      CHECK(ls == lp);
    }
  }

  TEST_CASE("serial and parallel Cholesky agree on failures") {
    RngStream rng(22, 0);
    for (int t = 0; t < 50; ++t) {
      const Index p = gen::dimension(rng, 2, 120);
      Matrix a = gen::symmetric(rng, p).matrix();
      a.diagonal().array() += gen::uniform(rng, 0.0, 2.0 * std::sqrt(static_cast<double>(p)));
      Matrix ls, lp;
      CHECK(kernels::cholesky_serial(a, ls, kPdTolerance) == kernels::cholesky_parallel(a, lp, kPdTolerance));
    }
  }

  TEST_CASE("parallel Cholesky result does not depend on the thread count") {
    RngStream rng(23, 0);
    const Matrix a = gen::well_conditioned_spd(rng, 128).matrix();
    Matrix l1, l4;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    kernels::cholesky_parallel(a, l1, kPdTolerance);
    omp_set_num_threads(4);
    kernels::cholesky_parallel(a, l4, kPdTolerance);
    omp_set_num_threads(saved);
    CHECK(l1 == l4);
  }

  TEST_CASE("crossprod kernels agree bitwise and match Y^T Y") {
    RngStream rng(24, 0);
    for (auto [n, p] : {std::pair<Index, Index>{1, 1}, {5, 3}, {50, 30}, {200, 120}}) {
      Matrix y(n, p);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) y(i, j) = rng.normal();
      const Matrix s = kernels::crossprod_serial(y);
      CHECK(s == kernels::crossprod_parallel(y));
      CHECK(s == s.transpose());
      CHECK((s - y.transpose() * y).cwiseAbs().maxCoeff() < 1e-10 * static_cast<double>(n));
    }
  }
}
