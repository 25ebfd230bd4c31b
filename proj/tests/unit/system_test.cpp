#include <doctest.h>

#include <random>

#include "hitchin/error.hpp"
#include "hitchin/solver.hpp"
#include "hitchin/system.hpp"

using namespace hitchin;

namespace {

const auto kOne = HolomorphicDatum::constant(1.0);
HolomorphicDatum z_pow(int d) { return HolomorphicDatum::monomial(1.0, d); }

LogMetricState random_state(const HitchinSystem& sys, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  LogMetricState s = fuchsian_state(sys);
  for (auto& f : s.unknowns) {
    for (auto& v : f.values()) v += u(rng);
  }
  return s;
}

std::vector<CyclicSpec> all_variants() {
  return {general_cyclic({kOne, z_pow(1), z_pow(1)}),
          general_cyclic({kOne, HolomorphicDatum::constant(0.5), kOne, z_pow(2)}),
          hitchin_component(3, z_pow(1)),
          hitchin_component(4, z_pow(2)),
          slnr(4, {z_pow(1), kOne, z_pow(1)}),
          slnr(5, {z_pow(1), kOne, z_pow(1)}),
          sp4_gothen(z_pow(1), kOne)};
}

}  // namespace

TEST_SUITE("system") {
  TEST_CASE("construction and arity") {
    const auto g = build_grid({GridKind::RadialDisc, 64, 0, 0.8});
    const auto sys = make_system(hitchin_component(4, z_pow(2)), g, BoundaryCondition::fuchsian());
    CHECK(sys.unknown_count() == 2);
    CHECK(sys.boundary_values().size() == 2);
    const auto sp = make_system(sp4_gothen(kOne, HolomorphicDatum::zero()), g, BoundaryCondition::fuchsian());
    CHECK(sp.unknown_count() == 2);
    CHECK(sp.arrow_coefficients()[3].max_abs() == 0.0);
    CHECK(make_system(general_cyclic({kOne, kOne, kOne}), g, BoundaryCondition::fuchsian()).unknown_count() == 2);
  }

  TEST_CASE("invalid specs and boundaries") {
    const auto g = build_grid({GridKind::RadialDisc, 32, 0, 0.8});
    const auto t = build_grid({GridKind::Torus, 16, 0, 0.8, {1.0, 1.0}});
    CyclicSpec bad = hitchin_component(3, kOne);
    bad.data.push_back(kOne);
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(general_cyclic({kOne, HolomorphicDatum::zero(), kOne}), InvalidArgument);
    CHECK_THROWS_AS(sp4_gothen(HolomorphicDatum::zero(), kOne), InvalidArgument);
    CHECK_THROWS_AS(make_system(hitchin_component(3, kOne), t, BoundaryCondition::fuchsian()), InvalidArgument);
    CHECK_THROWS_AS(make_system(hitchin_component(3, kOne), g, BoundaryCondition::periodic()), InvalidArgument);
    CHECK_THROWS_AS(variant_from_string("sl3"), InvalidArgument);
  }

  TEST_CASE("Fuchsian state has O(h^2) residual") {
    for (int n = 2; n <= 5; ++n) {
      double prev = 0.0;
      for (int N : {129, 257}) {
        const auto g = build_grid({GridKind::RadialDisc, N, 0, 0.8});
        const auto sys = make_system(hitchin_component(n, HolomorphicDatum::zero()), g, BoundaryCondition::fuchsian());
        double r = 0.0;
        for (const auto& f : residual(sys, fuchsian_state(sys))) r = std::max(r, f.max_abs());
        if (prev > 0.0) CHECK(std::log2(prev / r) == doctest::Approx(2.0).epsilon(0.1));
        prev = r;
      }
    }
  }

  TEST_CASE("zero coefficients at h = 1 give zero residual") {
    const auto t = build_grid({GridKind::Torus, 16, 0, 0.8, {1.0, 1.0}});
    std::vector<ScalarField> zero(2, ScalarField(t));
    const auto sys = make_system(general_cyclic({kOne, kOne}), t, BoundaryCondition::periodic(), zero);
    for (const auto& f : residual(sys, zero_state(sys))) CHECK(f.max_abs() == 0.0);
  }

  TEST_CASE("variant coherence: Hitchin component equals general cyclic (1, 1, q)") {
    const auto g = build_grid({GridKind::RadialDisc, 64, 0, 0.8});
    const auto q = z_pow(2);
    const auto hc = make_system(hitchin_component(3, q), g, BoundaryCondition::fuchsian());
    const auto gc = make_system(general_cyclic({kOne, kOne, q}), g, BoundaryCondition::fuchsian());
    std::mt19937_64 rng(3);
    const auto s = random_state(hc, rng, 0.3);
    LogMetricState sg = zero_state(gc);
    sg.unknowns[0] = s.unknowns[0];  // l = (u, 0, -u)
    const auto rh = residual(hc, s);
    const auto rg = residual(gc, sg);
    for (std::size_t i = 0; i < g->size(); ++i) {
      CHECK(rg[0][i] == rh[0][i]);
      if (!g->is_boundary(i)) CHECK(rg[1][i] == 0.0);
    }
  }

  TEST_CASE("Jacobian matches central finite differences") {
    const auto g = build_grid({GridKind::Disc2D, 17, 0, 0.8});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (const auto& spec : all_variants()) {
      const auto sys = make_system(spec, g, BoundaryCondition::fuchsian());
      const auto s = random_state(sys, rng, 0.2);
      const Eigen::VectorXd u = to_vector(s);
      Eigen::VectorXd d(u.size());
      for (auto& x : d) x = nd(rng);
      const double eps = 1e-5;
      const Eigen::VectorXd fd =
          (sys.residual_vector(u + eps * d) - sys.residual_vector(u - eps * d)) / (2 * eps);
      const Eigen::VectorXd an = jacobian(sys, s) * d;
      CHECK((fd - an).norm() / an.norm() < 1e-6);
    }
  }

  TEST_CASE("zero coefficients leave pure Laplacian blocks") {
    const auto t = build_grid({GridKind::Torus, 12, 0, 0.8, {1.0, 1.0}});
    std::vector<ScalarField> zero(3, ScalarField(t));
    const auto sys = make_system(general_cyclic({kOne, kOne, kOne}), t, BoundaryCondition::periodic(), zero);
    std::mt19937_64 rng(5);
    const auto J = jacobian(sys, random_state(sys, rng, 0.5));
    const int m = sys.unknown_count();
    for (std::size_t i = 0; i < t->size(); ++i) {
      for (int j = 0; j < m; ++j) {
        const auto row = static_cast<Eigen::Index>(i * m + j);
        CHECK(J.coeff(row, row) == doctest::Approx(t->stencil_diagonal(i)));
        for (const auto& e : t->stencil_row(i)) {
          CHECK(J.coeff(row, static_cast<Eigen::Index>(e.column * m + j)) == doctest::Approx(e.weight));
        }
        for (int k = 0; k < m; ++k) {
          if (k != j) CHECK(J.coeff(row, static_cast<Eigen::Index>(i * m + k)) == 0.0);
        }
      }
    }
  }

  TEST_CASE("diagonal Jacobian blocks are negative definite at the Fuchsian solution") {
    const auto g = build_grid({GridKind::Disc2D, 17, 0, 0.8});
    const auto sys = make_system(hitchin_component(4, HolomorphicDatum::zero()), g, BoundaryCondition::fuchsian());
    const auto J = jacobian(sys, fuchsian_state(sys));
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    const int m = sys.unknown_count();
    for (int trial = 0; trial < 20; ++trial) {
      for (int j = 0; j < m; ++j) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.dof()));
        for (std::size_t i = 0; i < g->size(); ++i) {
          if (!g->is_boundary(i)) x[static_cast<Eigen::Index>(i * m + j)] = nd(rng);
        }
        CHECK(x.dot(J * x) < 0.0);
      }
    }
  }

  TEST_CASE("general cyclic sum identity: the eliminated equation holds at a solution") {
    const auto g = build_grid({GridKind::RadialDisc, 128, 0, 0.8});
    const auto sys = make_system(general_cyclic({kOne, z_pow(1), z_pow(1)}), g, BoundaryCondition::fuchsian());
    const auto rep = solve(sys, fuchsian_state(sys), SolverConfig{});
    REQUIRE(rep.converged);
    const auto l = full_log_metric(sys, rep.state);
    const auto U = arrow_terms(sys, rep.state);
    const int n = 3;
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (g->is_boundary(i)) continue;
      const double r = g->laplacian_at(l[n - 1].values(), i) + U[n - 1][i] - U[n - 2][i];
      worst = std::max(worst, std::abs(r));
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("SL(n,R) symmetry is reproduced by the general cyclic solve") {
    const auto g = build_grid({GridKind::RadialDisc, 128, 0, 0.8});
    for (const auto& s : {slnr(4, {z_pow(1), kOne, z_pow(1)}), slnr(5, {z_pow(2), kOne, kOne})}) {
      const auto sys = make_system(general_cyclic(s.arrows()), g, BoundaryCondition::fuchsian());
      const auto rep = solve(sys, fuchsian_state(sys), SolverConfig{});
      REQUIRE(rep.converged);
      const auto l = full_log_metric(sys, rep.state);
      const int n = s.rank;
      for (int k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < g->size(); ++i) {
          CHECK(std::abs(l[k][i] + l[n - 1 - k][i]) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("stability check") {
    CHECK(stability_check({2, 0, -2}, Variant::HitchinComponent, 2));
    CHECK_FALSE(stability_check({0, 0}, Variant::GeneralCyclic, 1));
    CHECK(stability_check({0, 0}, Variant::GeneralCyclic, std::nullopt));
    // Sp(4,R), genus 3: E = N + NK^{-1} + N^{-1}K + N^{-1}, deg K = 4, nu = 0.
    auto sp4 = [](int d) { return std::vector<int>{d, d - 4, 4 - d, -d}; };
    CHECK(stability_check(sp4(4), Variant::Sp4Gothen, 3));
    CHECK(stability_check(sp4(3), Variant::Sp4Gothen, 3));
    CHECK_FALSE(stability_check(sp4(2), Variant::Sp4Gothen, 3));
    CHECK_THROWS_AS(stability_check({1, 0}, Variant::GeneralCyclic, 1), InvalidArgument);
    auto spec = general_cyclic({kOne, HolomorphicDatum::zero()});
    spec.degrees = std::vector<int>{0, 0};
    CHECK(spec_stable(spec) == std::optional<bool>(false));
    spec.degrees.reset();
    CHECK_FALSE(spec_stable(spec).has_value());
  }

  TEST_CASE("scale_last_arrow and gauge_image") {
    const auto spec = general_cyclic({kOne, z_pow(1), z_pow(2)});
    const auto a = scale_last_arrow(spec, 3.0).arrows();
    CHECK(a[0] == kOne);
    CHECK(a[1] == z_pow(1));
    CHECK(a[2] == z_pow(2).scaled(3.0));
    CHECK(scale_last_arrow(spec, 1.0).arrows() == spec.arrows());
    CHECK(gauge_image(spec, 1.0).arrows() == spec.arrows());
    const auto b = gauge_image(spec, 8.0).arrows();
    CHECK(std::abs(b[0].coefficients()[0] - Complex{2.0, 0.0}) < 1e-14);
    CHECK_THROWS_AS(gauge_image(spec, 0.0), InvalidArgument);
    const auto sh = gauge_log_shift(4, 2.0);
    CHECK(sh[0] == doctest::Approx(0.75 * std::log(2.0)));
    CHECK(sh[3] == doctest::Approx(-0.75 * std::log(2.0)));
  }

  TEST_CASE("gauge identity at small resolution") {
    const auto g = build_grid({GridKind::RadialDisc, 96, 0, 0.8});
    const auto base = general_cyclic({kOne, z_pow(1), z_pow(1)});
    const double t = 3.0;
    const auto A = make_system(scale_last_arrow(base, t), g, BoundaryCondition::fuchsian());
    const auto ra = solve(A, fuchsian_state(A), SolverConfig{});
    const auto bv = gauge_transform(A, fuchsian_state(A), t);
    const auto B = make_system(gauge_image(base, t), g, BoundaryCondition::custom(bv));
    LogMetricState init{g, bv};
    const auto rb = solve(B, init, SolverConfig{});
    REQUIRE(ra.converged);
    REQUIRE(rb.converged);
    const auto Ua = arrow_terms(A, ra.state), Ub = arrow_terms(B, rb.state);
    for (std::size_t i = 0; i < g->size(); ++i) {
      double sa = 0.0, sb = 0.0;
      for (int k = 0; k < 3; ++k) {
        sa += Ua[k][i];
        sb += Ub[k][i];
      }
      CHECK(std::abs(sa - sb) <= 1e-9 * sa);
    }
  }

  TEST_CASE("residual rejects mismatched states and blow-up") {
    const auto g = build_grid({GridKind::RadialDisc, 32, 0, 0.8});
    const auto sys = make_system(hitchin_component(3, kOne), g, BoundaryCondition::fuchsian());
    LogMetricState s = fuchsian_state(sys);
    s.unknowns.push_back(s.unknowns[0]);
    CHECK_THROWS_AS(residual(sys, s), InvalidArgument);
    LogMetricState big = fuchsian_state(sys);
    big.unknowns[0][3] = 1e4;
    CHECK_THROWS_AS(residual(sys, big), NumericalError);
  }
}
