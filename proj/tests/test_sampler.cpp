#include "bglasso/designs.hpp"
#include "bglasso/sampler.hpp"

#include "doctest.h"
#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace bglasso;

namespace {

// A random GibbsState with PD Ω, positive τ/λ and a scatter matrix from data.
GibbsState random_state(RngStream& rng, Index p, int n) {
  Matrix y(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) y(i, j) = rng.normal();
  GibbsState st = GibbsState::initial(scatter_matrix(y), n, 1e-2, 1e-6);
  st.omega = gen::spd(rng, p);
  for (Index j = 0; j < p; ++j) {
    st.lambda.set(j, j, gen::uniform(rng, 0.1, 3.0));
    for (Index i = j + 1; i < p; ++i) {
      st.tau.set(i, j, gen::uniform(rng, 0.05, 5.0));
      st.lambda.set(i, j, gen::uniform(rng, 0.1, 3.0));
    }
  }
  return st;
}

GibbsState state_with(const Matrix& omega, const Matrix& scatter, int n) {
  GibbsState st = GibbsState::initial(SymMatrix(scatter), n, 1e-2, 1e-6);
  st.omega = SymMatrix(omega);
  return st;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("partition of the 2x2 identity") {
    const GibbsState st = state_with(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 10);
    const ColumnPartition part = make_partition(st, 0);
    CHECK(part.beta.size() == 1);
    CHECK(part.beta[0] == 0.0);
    CHECK(part.gamma == 1.0);
    CHECK(part.omega11_inv(0, 0) == 1.0);
  }

  TEST_CASE("partition gamma equals the scalar Schur complement") {
    Matrix om(2, 2);
    om << 2, 1, 1, 2;
    const ColumnPartition part = make_partition(state_with(om, Matrix::Identity(2, 2), 10), 1);
    CHECK(part.beta[0] == 1.0);
    CHECK(part.gamma == doctest::Approx(2.0 - 1.0 * 0.5 * 1.0));
  }

  TEST_CASE("partition blocks reassemble the permuted matrix and gamma round-trips") {
    RngStream rng(31, 0);
    for (int t = 0; t < 100; ++t) {
      const Index p = gen::dimension(rng, 2, 9);
      const GibbsState st = random_state(rng, p, 20);
      const Index i = gen::dimension(rng, 0, p - 1);
      const ColumnPartition part = make_partition(st, i);
      const SymMatrix perm = permute_to_last(st.omega, i);
      const Index k = p - 1;
      CHECK(part.beta == perm.matrix().col(k).head(k));
      CHECK(part.omega22 == perm(k, k));
      const double omega22 = part.gamma + quad_form(part.beta, part.omega11_inv);
      GibbsState rebuilt = st;
      rebuilt.omega.set(i, i, omega22);
      const ColumnPartition again = make_partition(rebuilt, i);
      CHECK(std::abs(again.gamma - part.gamma) <= 1e-10 * part.gamma);
    }
  }

  TEST_CASE("HRS partition rejects an indefinite leading block, BGS proceeds") {
    Matrix om(3, 3);
    om << 1, 2, 0, 2, 1, 0, 0, 0, 1;
    const GibbsState st = state_with(om, Matrix::Identity(3, 3), 10);
    CHECK_THROWS_WITH_AS(make_partition(st, 2, SamplerKind::hrs), "leading block not positive definite",
                         NotPositiveDefinite);
    const ColumnPartition part = make_partition(st, 2, SamplerKind::bgs);
    CHECK_FALSE(part.omega11_factor.has_value());
  }

  TEST_CASE("C matrix for identity blocks") {
    ColumnPartition part = make_partition(state_with(Matrix::Identity(3, 3), Matrix::Identity(3, 3), 10), 2);
    part.s22 = 1.0;
    part.lambda22 = 0.5;
    part.tau12 = Vector::Ones(2);
    const SymMatrix c = compute_c_matrix(part);
    CHECK((c.matrix() - Matrix::Identity(2, 2) / 3.0).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("C tends to Omega11 / (s22 + 2 lambda22) as tau grows") {
    RngStream rng(32, 0);
    const GibbsState st = random_state(rng, 4, 20);
    ColumnPartition part = make_partition(st, 1);
    part.tau12 = Vector::Constant(3, 1e12);
    const Matrix limit = permute_to_last(st.omega, 1).matrix().topLeftCorner(3, 3) / (part.s22 + 2 * part.lambda22);
    const Matrix c = compute_c_matrix(part).matrix();
    CHECK((c - limit).norm() <= 1e-6 * limit.norm());
  }

  TEST_CASE("C passes pd_check on random partitions") {
    RngStream rng(33, 0);
    for (int t = 0; t < 100; ++t) {
      const Index p = gen::dimension(rng, 2, 10);
      const GibbsState st = random_state(rng, p, 15);
      CHECK(pd_check(compute_c_matrix(make_partition(st, gen::dimension(rng, 0, p - 1)))).has_value());
    }
  }

  TEST_CASE("BGS beta draws are centred at -C s12") {
    RngStream rng(34, 0);
    const GibbsState st = random_state(rng, 4, 20);
    const ColumnPartition part = make_partition(st, 2, SamplerKind::bgs);
    const Matrix c = compute_c_matrix(part).matrix();
    const Vector target = -c * part.s12;
    const int draws = 100000;
    Vector sum = Vector::Zero(3);
    for (int i = 0; i < draws; ++i) sum += bgs_update_beta(part, rng);
    sum /= draws;
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(sum[j] - target[j]) < 4.0 * std::sqrt(c(j, j) / draws));
  }

  TEST_CASE("BGS beta with s12 = 0 and C = sigma^2 I has mean zero") {
    ColumnPartition part = make_partition(state_with(Matrix::Identity(3, 3), Matrix::Identity(3, 3), 10), 0);
    part.s12.setZero();
    part.s22 = 1.0;
    part.lambda22 = 0.5;
    part.tau12 = Vector::Ones(2);  // C = I/3
    RngStream rng(35, 0);
    Vector sum = Vector::Zero(2);
    for (int i = 0; i < 10000; ++i) sum += bgs_update_beta(part, rng);
    sum /= 10000;
    for (Index j = 0; j < 2; ++j) CHECK(std::abs(sum[j]) < 4.0 * std::sqrt(1.0 / 3.0 / 10000));
  }

  TEST_CASE("BGS beta can leave the positive definite region on circle data") {
    const TrueModel model = build_design(GraphDesign{DesignKind::circle, 30});
    RngStream drng(36, 0), rng(36, 1);
    GibbsState st = GibbsState::initial(scatter_matrix(simulate_data(model, 50, drng)), 50, 1e-2, 1e-6);
    ViolationAudit audit;
    SweepOptions opt{SamplerKind::bgs, ColumnOrder::ascending, Clamps{}, true};
    for (int t = 0; t < 50; ++t) {
      sweep(st, opt, audit, rng);
      opt.skip_first_beta = false;
    }
    CHECK(audit.by_column_stage.at("after_beta") > 0);
  }

  TEST_CASE("hit-and-run interval examples") {
    RngStream rng(37, 0);
    for (int t = 0; t < 20; ++t) {
      const Vector alpha = sample_unit_sphere(3, rng);
      const Interval r = hit_and_run_interval(alpha, Vector::Zero(3), SymMatrix::identity(3), 1.0);
      CHECK(r.lo == doctest::Approx(-1.0));
      CHECK(r.hi == doctest::Approx(1.0));
    }
    Vector beta(2), alpha(2);
    beta << 0.5, 0.0;
    alpha << 1.0, 0.0;
    const Interval r = hit_and_run_interval(alpha, beta, SymMatrix::identity(2), 1.0);
    CHECK(r.lo == doctest::Approx(-0.5 - std::sqrt(1.25)).epsilon(1e-12));
    CHECK(r.hi == doctest::Approx(-0.5 + std::sqrt(1.25)).epsilon(1e-12));
    CHECK(r.lo == doctest::Approx(-1.6180).epsilon(1e-4));
    CHECK(r.hi == doctest::Approx(0.6180).epsilon(1e-4));
    CHECK_THROWS_WITH_AS(hit_and_run_interval(alpha, beta, SymMatrix::identity(2), 0.0),
                         "state not positive definite", NotPositiveDefinite);
  }

  TEST_CASE("hit-and-run interval contains zero and its ends are boundary points") {
    RngStream rng(38, 0);
    for (int t = 0; t < 1000; ++t) {
      const Index p = gen::dimension(rng, 2, 8);
      const GibbsState st = random_state(rng, p, 10);
      const ColumnPartition part = make_partition(st, gen::dimension(rng, 0, p - 1));
      const Vector alpha = sample_unit_sphere(p - 1, rng);
      const Interval r = hit_and_run_interval(alpha, part.beta, part.omega11_inv, part.gamma);
      REQUIRE(r.lo < 0.0);
      REQUIRE(r.hi > 0.0);
      for (double kappa : {r.lo, r.hi}) {
        const double q = quad_form(part.beta + kappa * alpha, part.omega11_inv);
        CHECK(std::abs(q - part.omega22) <= 1e-8 * std::max(1.0, part.omega22));
      }
    }
  }

  TEST_CASE("HRS beta always stays inside the positive definite region") {
    RngStream rng(39, 0);
    for (int t = 0; t < 500; ++t) {
      const Index p = gen::dimension(rng, 2, 10);
      const GibbsState st = random_state(rng, p, 10);
      const Index i = gen::dimension(rng, 0, p - 1);
      const ColumnPartition part = make_partition(st, i);
      const Vector beta = hrs_update_beta(part, rng);
      CHECK(quad_form(beta, part.omega11_inv) < part.omega22);
      GibbsState next = st;
      const SymMatrix perm = permute_to_last(st.omega, i);
      Matrix m = perm.matrix();
      m.col(p - 1).head(p - 1) = beta;
      m.row(p - 1).head(p - 1) = beta.transpose();
      CHECK(pd_check(SymMatrix(m)).has_value());
    }
  }

  TEST_CASE("HRS beta for p = 2 matches a rejection-sampling oracle") {
    Matrix om(2, 2), sc(2, 2);
    om << 1.0, 0.2, 0.2, 1.0;
    sc << 3.0, -8.0, -8.0, 5.0;
    GibbsState st = state_with(om, sc, 10);
    st.lambda.set(1, 1, 0.5);
    st.tau.set(0, 1, 1.0);
    ColumnPartition part = make_partition(st, 1);
    const double prec = (part.s22 + 2 * part.lambda22) * part.omega11_inv(0, 0) + 1.0 / part.tau12[0];
    const double mean = -part.s12[0] / prec, sd = 1.0 / std::sqrt(prec);
    const double bound = std::sqrt(part.omega22 / part.omega11_inv(0, 0));

    const int draws = 100000;
    RngStream rng(40, 0), oracle_rng(40, 1);
    std::vector<double> hrs, oracle;
    for (int t = 0; t < draws; ++t) {
      part.beta = hrs_update_beta(part, rng);
      part.gamma = part.omega22 - quad_form(part.beta, part.omega11_inv);
      hrs.push_back(part.beta[0]);
    }
    while (oracle.size() < static_cast<std::size_t>(draws)) {
      const double x = mean + sd * oracle_rng.normal();
      if (std::abs(x) < bound) oracle.push_back(x);
    }
    double mh = 0, mo = 0;
    for (int t = 0; t < draws; ++t) {
      mh += hrs[t];
      mo += oracle[t];
    }
    CHECK(std::abs(mh / draws - mo / draws) < 0.02);
    CHECK(ks_two_sample(hrs, oracle) < 0.02);
  }

  TEST_CASE("without binding truncation, repeated HRS moves and BGS draws agree in distribution") {
    RngStream rng(41, 0);
    GibbsState st = random_state(rng, 4, 20);
    ColumnPartition part = make_partition(st, 3);
    part.omega22 = 1e12;  // moves the boundary far beyond the conditional's mass
    part.gamma = part.omega22 - quad_form(part.beta, part.omega11_inv);
    const Matrix c = compute_c_matrix(part).matrix();

    const int draws = 200000, thin = 10;
    Vector sh = Vector::Zero(3), sb = Vector::Zero(3), qh = Vector::Zero(3), qb = Vector::Zero(3);
    for (int t = 0; t < 2000; ++t) part.beta = hrs_update_beta(part, rng);
    int kept = 0;
    for (int t = 0; t < draws; ++t) {
      part.beta = hrs_update_beta(part, rng);
      if (t % thin) continue;
      ++kept;
      sh += part.beta;
      qh += part.beta.cwiseProduct(part.beta);
      const Vector b = bgs_update_beta(part, rng);
      sb += b;
      qb += b.cwiseProduct(b);
    }
    sh /= kept;
    sb /= kept;
    qh /= kept;
    qb /= kept;
    for (Index j = 0; j < 3; ++j) {
      // Thinned chain: allow a generous effective sample size reduction.
      const double se = std::sqrt(c(j, j) / kept) * 3.0;
      CHECK(std::abs(sh[j] - sb[j]) < 4.0 * se);
      const double var_h = qh[j] - sh[j] * sh[j], var_b = qb[j] - sb[j] * sb[j];
      CHECK(std::abs(var_h - var_b) < 0.1 * c(j, j));
    }
  }

  TEST_CASE("gamma update") {
    ColumnPartition part = make_partition(state_with(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 50), 0);
    part.s22 = 1.0;
    part.lambda22 = 0.5;
    RngStream rng(42, 0);
    double sum = 0.0;
    for (int t = 0; t < 100000; ++t) {
      const double g = update_gamma(part, 50, rng);
      REQUIRE(g > 0.0);
      sum += g;
    }
    CHECK(std::abs(sum / 100000 - 26.0) < 0.2);
    const double g = update_gamma(part, 50, rng);
    CHECK(g + quad_form(Vector::Zero(1), part.omega11_inv) == g);
  }

  TEST_CASE("lambda update means and clamping") {
    ColumnPartition part = make_partition(state_with(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 10), 0);
    RngStream rng(43, 0);
    double sum = 0.0;
    const Clamps clamps;
    for (int t = 0; t < 100000; ++t) {
      const LambdaColumn l = update_lambda_column(part, Vector::Ones(1), 1.0, 1.0, 1.0, clamps, rng);
      REQUIRE(l.lambda12[0] > 0.0);
      REQUIRE(l.lambda22 > 0.0);
      sum += l.lambda12[0];
    }
    CHECK(std::abs(sum / 100000 - 1.0) < 0.02);
    for (int t = 0; t < 1000; ++t) {
      const LambdaColumn l = update_lambda_column(part, Vector::Zero(1), 1.0, 1e-2, 1e-6, clamps, rng);
      REQUIRE(l.lambda12[0] <= clamps.lambda_max);
      REQUIRE(l.lambda12[0] >= clamps.lambda_min);
    }
  }

  TEST_CASE("tau update: IG mean, zero floor and clamp contract") {
    RngStream rng(44, 0);
    const Clamps clamps;
    double sum = 0.0;
    for (int t = 0; t < 100000; ++t) sum += 1.0 / update_tau_column(Vector::Ones(1), Vector::Ones(1), clamps, rng)[0];
    CHECK(std::abs(sum / 100000 - 1.0) < 0.02);
    for (int t = 0; t < 1000; ++t) {
      const Vector tau = update_tau_column(gen::positive(rng, 5, 1e-6, 1e6), Vector::Zero(5), clamps, rng);
      for (Index j = 0; j < 5; ++j) {
        REQUIRE(std::isfinite(tau[j]));
        REQUIRE(tau[j] >= clamps.tau_min);
        REQUIRE(tau[j] <= clamps.tau_max);
      }
    }
  }

  TEST_CASE("HRS keeps Omega positive definite through every sweep") {
    // The sweep itself checks both write-backs of every column visit and
    // counts a violation, so a zero count covers each individual update.
    RngStream rng(45, 0);
    for (DesignKind kind : kAllDesigns) {
      const TrueModel model = build_design(GraphDesign{kind, 8});
      RngStream drng(45, 1);
      GibbsState st = GibbsState::initial(scatter_matrix(simulate_data(model, 12, drng)), 12, 1e-2, 1e-6);
      ViolationAudit audit;
      SweepOptions opt{SamplerKind::hrs, ColumnOrder::ascending, Clamps{}, true};
      for (int t = 0; t < 100; ++t) {
        sweep(st, opt, audit, rng);
        opt.skip_first_beta = false;
        REQUIRE(pd_check(st.omega).has_value());
      }
      CHECK(audit.violations == 0);
      CHECK(audit.updates_total == 800);
    }
  }

  TEST_CASE("one sweep visits p columns and keeps exact symmetry") {
    RngStream rng(46, 0);
    for (SamplerKind kind : {SamplerKind::bgs, SamplerKind::hrs}) {
      GibbsState st = random_state(rng, 6, 20);
      ViolationAudit audit;
      sweep(st, SweepOptions{kind, ColumnOrder::descending, Clamps{}, false}, audit, rng);
      CHECK(audit.updates_total == 6);
      CHECK(st.omega.matrix() == st.omega.matrix().transpose());
      CHECK(st.tau.matrix().diagonal().isZero(0.0));
      CHECK((st.lambda.matrix().array() > 0.0).all());
    }
  }

  TEST_CASE("HRS sweep rejects a non positive definite state") {
    Matrix om(3, 3);
    om << 1, 2, 0, 2, 1, 0, 0, 0, 1;
    GibbsState st = state_with(om, Matrix::Identity(3, 3), 10);
    RngStream rng(47, 0);
    ViolationAudit audit;
    CHECK_THROWS_AS(sweep(st, SweepOptions{}, audit, rng), SamplerError);
  }

  TEST_CASE("minimal chain and determinism") {
    const TrueModel model = build_design(GraphDesign{DesignKind::ar1, 5});
    RngStream drng(48, 0);
    const SymMatrix s = scatter_matrix(simulate_data(model, 20, drng));
    ChainConfig cfg;
    cfg.burn_in = 0;
    cfg.draws = 1;
    RngStream a(48, 1);
    const ChainOutput one = run_chain(s, 20, cfg, a);
    CHECK(one.draws_used == 1);
    CHECK(pd_check(one.posterior_mean).has_value());

    cfg.burn_in = 20;
    cfg.draws = 30;
    cfg.thin = 4;
    cfg.store_draws = true;
    RngStream b(48, 2), c(48, 2);
    const ChainOutput x = run_chain(s, 20, cfg, b);
    const ChainOutput y = run_chain(s, 20, cfg, c);
    CHECK(x.draws_used == 8);
    CHECK(x.draws.size() == 8);
    CHECK(x.posterior_mean == y.posterior_mean);
    for (std::size_t k = 0; k < x.draws.size(); ++k) CHECK(x.draws[k] == y.draws[k]);
    CHECK(x.audit.updates_total == 50 * 5);
  }

  TEST_CASE("chain configuration validation") {
    ChainConfig cfg;
    cfg.draws = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ChainConfig{};
    cfg.burn_in = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ChainConfig{};
    cfg.s = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ChainConfig{};
    cfg.thin = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("sampler names") {
    CHECK(parse_sampler_kind("bgs") == SamplerKind::bgs);
    CHECK(parse_sampler_kind("hrs") == SamplerKind::hrs);
    CHECK(to_string(SamplerKind::hrs) == "hrs");
    CHECK_THROWS_AS(parse_sampler_kind("gibbs"), std::invalid_argument);
  }
}
