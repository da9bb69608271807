#include <doctest.h>

#include <cmath>
#include <random>

#include "dicke.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "support.hpp"

using namespace superlase;
using test::kTwoPi;
using test::rel_err;

namespace {

// Independent evaluation from the raw inputs.
struct Oracle {
  double wr, u, v, disc, lc;
};

Oracle oracle(const RawParams& r) {
  const double k = kTwoPi / r.pump_wavelength;
  Oracle o;
  o.wr = test::kHbar * k * k / (2.0 * r.atom_mass);
  const double dc = r.pump_cavity_detuning;
  const double dp = dc - r.collective_stark_NU0 / 2.0;
  const double gm = r.cavity_loss;
  const double g = r.cavity_coupling;
  o.u = g * g + gm * gm - dc * dp;
  o.v = gm * (dc + dp);
  o.disc = gm * o.v - dc * o.u;
  o.lc = 0.5 * std::sqrt(o.wr * (o.u * o.u + o.v * o.v) / std::abs(o.disc));
  return o;
}

RawParams random_raw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RawParams r = test::literal_raw();
  r.cavity_loss = kTwoPi * (0.2e6 + 3e6 * u(rng));
  r.cavity_coupling = kTwoPi * 20e6 * u(rng);
  r.collective_stark_NU0 = -kTwoPi * 5e6 * u(rng);
  r.pump_cavity_detuning = kTwoPi * (1e6 + 30e6 * u(rng));
  r.n_atoms = std::pow(10.0, 3.0 + 3.0 * u(rng));
  return r;
}

}  // namespace

TEST_CASE("critical coupling for the paper preset") {
  const DerivedParams p = test::paper();
  const Oracle o = oracle(test::literal_raw());
  const double lc = critical_coupling(p);
  CHECK(rel_err(lc, o.lc) < 1e-12);
  // quoted as 0.42 MHz (rad/s units) at Delta_c = omega_m / 2
  CHECK(lc == doctest::Approx(0.42e6).epsilon(0.03));
  CHECK(transition_discriminant(p) == doctest::Approx(o.disc).epsilon(1e-12));
}

TEST_CASE("g = 0 reduces to the single-cavity threshold") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    RawParams r = random_raw(rng);
    r.cavity_coupling = 0.0;
    const double gm = r.cavity_loss;
    const double dp = r.pump_cavity_detuning - r.collective_stark_NU0 / 2.0;
    // (u^2 + v^2) / |gamma v - Delta_c u| = (gamma^2 + Delta'^2) / |Delta'| at g = 0
    const double reduced = 0.5 * std::sqrt(oracle(r).wr * (gm * gm + dp * dp) / std::abs(dp));
    CHECK(rel_err(critical_coupling(derive(r)), reduced) < 1e-12);
  }
}

TEST_CASE("critical coupling scales as sqrt(omega_r)") {
  RawParams r = test::literal_raw();
  const double lc = critical_coupling(derive(r));
  r.atom_mass /= 4.0;
  CHECK(rel_err(critical_coupling(derive(r)), 2.0 * lc) < 1e-14);
}

TEST_CASE("singular locus raises") {
  RawParams r = test::literal_raw();
  r.collective_stark_NU0 = 0.0;
  r.pump_cavity_detuning = 0.0;  // gamma v - Delta_c u vanishes identically here
  CHECK_THROWS_AS(critical_coupling(derive(r)), SingularPointError);
  CHECK_THROWS_AS(steady_state(derive(r), 1e6), SingularPointError);
  CHECK_THROWS_AS(intracavity_photons(derive(r), 1e6), SingularPointError);
  try {
    critical_coupling(derive(r));
  } catch (const SingularPointError& e) {
    CHECK(e.detuning() == 0.0);
  }
}

TEST_CASE("normal and critical phases") {
  const DerivedParams p = test::paper();
  const double lc = critical_coupling(p);
  for (double lambda : {0.0, 0.1 * lc, 0.5 * lc, std::nextafter(lc, 0.0)}) {
    const SteadyState s = steady_state(p, lambda);
    CHECK(s.phase == Phase::Normal);
    CHECK(s.a1 == cplx{});
    CHECK(s.a2 == cplx{});
    CHECK(s.j_minus == cplx{});
    CHECK(s.photons_cavity2 == 0.0);
    CHECK(std::abs(s.j_z) == 0.5 * p.raw.n_atoms);
    CHECK(intracavity_photons(p, lambda) == 0.0);
  }
  const SteadyState c = steady_state(p, lc);
  CHECK(c.phase == Phase::Critical);
  CHECK(c.photons_cavity2 == 0.0);
  CHECK(intracavity_photons(p, lc) == 0.0);
  CHECK_THROWS_AS(steady_state(p, -1.0), DomainError);
}

TEST_CASE("superradiant amplitudes against the closed form") {
  const DerivedParams p = test::paper();
  const RawParams r = test::literal_raw();
  const Oracle o = oracle(r);
  const double n = r.n_atoms;
  const double lambda = 7.6e6;
  const SteadyState s = steady_state(p, lambda);
  REQUIRE(s.phase == Phase::Superradiant);

  const double jz = n * o.wr * (o.u * o.u + o.v * o.v) / (8 * lambda * lambda * o.disc);
  CHECK(rel_err(s.j_z, jz) < 1e-12);
  CHECK(s.j_z > 0.0);
  const double jm = std::sqrt(n * n / 4 - jz * jz);
  CHECK(s.j_minus.imag() == 0.0);
  CHECK(rel_err(s.j_minus.real(), jm) < 1e-10);

  const cplx I{0, 1};
  const double dc = r.pump_cavity_detuning, gm = r.cavity_loss, g = r.cavity_coupling;
  const cplx a2 = -2 * lambda * (dc + I * gm) * jm / (std::sqrt(n) * (o.u - I * o.v));
  const cplx a1 = -I * g * a2 / (gm - I * dc);
  CHECK(rel_err(s.a2, a2) < 1e-10);
  CHECK(rel_err(s.a1, a1) < 1e-10);

  // |a2|^2 from the photon-number formula; the delta_n cross-check uses 2 g Dc / (Dc^2 + gamma^2)
  const double photons =
      n * lambda * lambda * (dc * dc + gm * gm) / (o.u * o.u + o.v * o.v) *
      (1 - std::pow(o.lc / lambda, 4));
  CHECK(rel_err(s.photons_cavity2, photons) < 1e-10);
  const double delta_n = 2 * g * dc / (dc * dc + gm * gm) * photons;
  CHECK(delta_n == doctest::Approx(5.6e4).epsilon(0.01));
}

TEST_CASE("closure and photon identity over random parameter draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> over(1.0001, 30.0);
  int superradiant = 0;
  for (int i = 0; i < 500; ++i) {
    const DerivedParams p = derive(random_raw(rng));
    double lc;
    try {
      lc = critical_coupling(p);
    } catch (const SingularPointError&) {
      continue;
    }
    const double lambda = lc * over(rng);
    const SteadyState s = steady_state(p, lambda);
    const double n = p.raw.n_atoms;
    CHECK(std::abs(std::norm(s.j_minus) + s.j_z * s.j_z - n * n / 4) <= 1e-10 * n * n / 4);
    CHECK(s.photons_cavity2 == std::norm(s.a2));
    CHECK(rel_err(intracavity_photons(p, lambda), std::norm(s.a2)) < 1e-9);
    CHECK(std::signbit(s.j_z) == std::signbit(transition_discriminant(p)));
    ++superradiant;
  }
  CHECK(superradiant > 400);
}

TEST_CASE("photon number is continuous at and increasing above threshold") {
  const DerivedParams p = test::paper();
  const double lc = critical_coupling(p);
  CHECK(intracavity_photons(p, lc * (1 + 1e-12)) < 1e-6);
  CHECK(std::abs(steady_state(p, lc * (1 + 1e-12)).j_z) ==
        doctest::Approx(0.5 * p.raw.n_atoms).epsilon(1e-10));
  double prev = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double lambda = lc * (1.0 + 9.0 * i / 2000.0);
    const double n = intracavity_photons(p, lambda);
    CHECK(n > prev);
    prev = n;
  }
  // asymptote N lambda^2 (Dc^2 + gamma^2) / (u^2 + v^2)
  const double big = 1e4 * lc;
  const double dc = p.raw.pump_cavity_detuning, gm = p.raw.cavity_loss;
  const double asym = p.raw.n_atoms * big * big * (dc * dc + gm * gm) /
                      (p.u_coef * p.u_coef + p.v_coef * p.v_coef);
  CHECK(rel_err(intracavity_photons(p, big), asym) < 1e-15);
}

TEST_CASE("critical-coupling minimum against a dense scan") {
  const DerivedParams p = test::paper();
  const double wm = p.raw.mech_freq;
  RawParams r = test::literal_raw();

  double best = INFINITY, best_x = 0.0;
  const int n = 200001;
  for (int i = 0; i < n; ++i) {
    const double x = wm * (0.05 + 0.95 * i / (n - 1.0));
    r.pump_cavity_detuning = x;
    const Oracle o = oracle(r);
    if (o.disc == 0.0) continue;
    if (o.lc < best) {
      best = o.lc;
      best_x = x;
    }
  }

  const CriticalMinimum m = minimize_critical_coupling(p, {0.05 * wm, 1.0 * wm}, 400);
  CHECK(m.lambda_c <= best * (1 + 1e-9));
  CHECK(std::abs(m.detuning - best_x) < 2 * 0.95 * wm / (n - 1.0));
  CHECK(m.lambda_c <= m.best_grid_lambda_c);
  // deterministic
  const CriticalMinimum again = minimize_critical_coupling(p, {0.05 * wm, 1.0 * wm}, 400);
  CHECK(again.detuning == m.detuning);
  CHECK(again.lambda_c == m.lambda_c);
}

TEST_CASE("critical-coupling minimum error paths") {
  const DerivedParams p = test::paper();
  CHECK_THROWS_AS(minimize_critical_coupling(p, {1.0, 1.0}, 10), SpecError);
  CHECK_THROWS_AS(minimize_critical_coupling(p, {1.0, 2.0}, 2), SpecError);
}

TEST_CASE("grid + golden-section minimizer") {
  const auto parabola = [](double x) { return 3.0 * (x - 0.3) * (x - 0.3) + 1.0; };
  const ScalarMinimum m = grid_golden_minimize(parabola, {-2.0, 5.0}, 8);
  CHECK(m.x == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.value <= m.best_grid_value);

  // minimum on the boundary
  const ScalarMinimum edge = grid_golden_minimize([](double x) { return x; }, {1.0, 2.0}, 5);
  CHECK(edge.x == doctest::Approx(1.0));

  // points where f throws are skipped
  const auto holey = [&](double x) {
    if (std::abs(x - 0.0) < 0.3) throw SingularPointError("hole", x);
    return parabola(x);
  };
  CHECK(grid_golden_minimize(holey, {-2.0, 5.0}, 15).x == doctest::Approx(0.3).epsilon(1e-6));

  const auto nowhere = [](double x) -> double { throw SingularPointError("nope", x); };
  CHECK_THROWS_AS(grid_golden_minimize(nowhere, {0.0, 1.0}, 5), NoMinimumError);
  CHECK_THROWS_AS(grid_golden_minimize(parabola, {1.0, 0.0}, 5), SpecError);
}

TEST_CASE("first-root finder") {
  const auto f = [](double x) { return std::cos(x); };
  const Root r = find_first_root(f, {0.0, 10.0}, 1e-14);
  CHECK(r.x == doctest::Approx(M_PI / 2).epsilon(1e-13));

  // a root exactly at a scan node
  CHECK(find_first_root([](double x) { return x - 1.0; }, {0.0, 2.0}, 1e-12, 2).x == 1.0);

  // flat-then-steep function that defeats plain regula falsi
  const auto stiff = [](double x) { return std::pow(x, 15) - 0.5; };
  const Root s = find_first_root(stiff, {0.0, 1.0}, 1e-12, 4);
  CHECK(s.x == doctest::Approx(std::pow(0.5, 1.0 / 15)).epsilon(1e-11));
  CHECK(s.iterations < 200);

  try {
    find_first_root([](double x) { return x * x + 1.0; }, {-1.0, 2.0}, 1e-10);
    FAIL("expected a bracket error");
  } catch (const BracketError& e) {
    CHECK(e.lo() == -1.0);
    CHECK(e.hi() == 2.0);
    CHECK(e.f_lo() == 2.0);
    CHECK(e.f_hi() == 5.0);
  }
}
