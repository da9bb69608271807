#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dicke.hpp"
#include "dopri5.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace superlase;
using test::rel_err;

namespace {

const cplx I{0.0, 1.0};

// Equations of motion written directly in complex form.
DickeState dicke_oracle(const DickeState& s, const DerivedParams& p, double lambda) {
  const double n = p.raw.n_atoms;
  const cplx j_plus = std::conj(s.j_minus);
  const cplx quad = std::conj(s.a2) + s.a2;
  DickeState d;
  d.a1 = (I * p.raw.pump_cavity_detuning - p.raw.cavity_loss) * s.a1 - I * p.raw.cavity_coupling * s.a2;
  d.a2 = (I * p.detuning_prime - p.raw.cavity_loss) * s.a2 - I * p.raw.cavity_coupling * s.a1 -
         I * lambda / std::sqrt(n) * (j_plus + s.j_minus);
  d.j_minus = -I * p.recoil_freq * s.j_minus + 2.0 * I * lambda / std::sqrt(n) * s.j_z * quad;
  d.j_z = (I * lambda / std::sqrt(n) * (s.j_minus - j_plus) * quad).real();
  return d;
}

SupermodeState supermode_oracle(const SupermodeState& s, const DerivedParams& p, double lambda) {
  const double n = p.raw.n_atoms;
  const double nu0 = p.raw.collective_stark_NU0;
  const double chi = p.raw.com_coupling;
  const cplx j_plus = std::conj(s.j_minus);
  const cplx quad = std::conj(s.a_plus) + s.a_plus - std::conj(s.a_minus) - s.a_minus;
  const double c = lambda / std::sqrt(2.0 * n);
  SupermodeState d;
  d.a_plus = I * (nu0 + 2.0 * chi * s.b) / 4.0 * s.a_minus -
             (I * p.omega_plus + p.raw.cavity_loss) * s.a_plus - I * c * (j_plus + s.j_minus);
  d.a_minus = I * (nu0 + 2.0 * chi * std::conj(s.b)) / 4.0 * s.a_plus -
              (I * p.omega_minus + p.raw.cavity_loss) * s.a_minus + I * c * (j_plus + s.j_minus);
  d.b = (-I * p.raw.mech_freq - p.raw.mech_damping) * s.b +
        I * chi / 2.0 * std::conj(s.a_minus) * s.a_plus;
  d.j_minus = -I * p.recoil_freq * s.j_minus + I * lambda * std::sqrt(2.0 / n) * quad * s.j_z;
  d.j_z = (I * c * quad * (s.j_minus - j_plus)).real();
  return d;
}

cplx random_c(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return scale * cplx(u(rng), u(rng));
}

DickeState random_dicke(std::mt19937_64& rng, double n) {
  DickeState s;
  s.a1 = random_c(rng, 30.0);
  s.a2 = random_c(rng, 30.0);
  s.j_minus = random_c(rng, 0.3 * n);
  s.j_z = std::sqrt(n * n / 4 - std::norm(s.j_minus));
  return s;
}

double max_component_err(const DickeState& a, const DickeState& b, double scale_f, double scale_j) {
  return std::max({std::abs(a.a1 - b.a1) / scale_f, std::abs(a.a2 - b.a2) / scale_f,
                   std::abs(a.j_minus - b.j_minus) / scale_j, std::abs(a.j_z - b.j_z) / scale_j});
}

// exp(M t) v for the 2x2 matrix M = [[m11, m12], [m12, m22]].
std::array<cplx, 2> expm_apply(cplx m11, cplx m12, cplx m22, double t, std::array<cplx, 2> v) {
  const cplx mean = 0.5 * (m11 + m22);
  const cplx half = 0.5 * (m11 - m22);
  const cplx delta = std::sqrt(half * half + m12 * m12);
  const cplx ch = std::cosh(delta * t);
  const cplx sh = std::abs(delta) == 0.0 ? cplx(t) : std::sinh(delta * t) / delta;
  const cplx e = std::exp(mean * t);
  return {e * (ch * v[0] + sh * (half * v[0] + m12 * v[1])),
          e * (ch * v[1] + sh * (m12 * v[0] - half * v[1]))};
}

}  // namespace

TEST_CASE("dicke right-hand side matches the complex equations") {
  const DerivedParams p = test::paper();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const DickeState s = random_dicke(rng, p.raw.n_atoms);
    const double lambda = 1e7 * std::abs(random_c(rng, 1.0));
    const DickeState got = rhs_dicke(s, p, lambda);
    const DickeState want = dicke_oracle(s, p, lambda);
    CHECK(rel_err(got.a1, want.a1) < 1e-12);
    CHECK(rel_err(got.a2, want.a2) < 1e-12);
    CHECK(rel_err(got.j_minus, want.j_minus) < 1e-12);
    CHECK(std::abs(got.j_z - want.j_z) <= 1e-12 * std::abs(want.j_minus));
  }
}

TEST_CASE("supermode right-hand side matches the complex equations") {
  const DerivedParams p = test::paper();
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    SupermodeState s = to_supermode(random_dicke(rng, p.raw.n_atoms), random_c(rng, 1e3));
    const double lambda = 1e7 * std::abs(random_c(rng, 1.0));
    const SupermodeState got = rhs_supermode(s, p, lambda);
    const SupermodeState want = supermode_oracle(s, p, lambda);
    CHECK(rel_err(got.a_plus, want.a_plus) < 1e-12);
    CHECK(rel_err(got.a_minus, want.a_minus) < 1e-12);
    CHECK(rel_err(got.b, want.b) < 1e-12);
    CHECK(rel_err(got.j_minus, want.j_minus) < 1e-12);
    CHECK(std::abs(got.j_z - want.j_z) <= 1e-12 * std::abs(want.j_minus));
  }
}

TEST_CASE("normal poles are fixed points") {
  const DerivedParams p = test::paper();
  for (double jz : {-0.5 * p.raw.n_atoms, 0.5 * p.raw.n_atoms}) {
    const DickeState d = rhs_dicke({{}, {}, {}, jz}, p, 3e6);
    CHECK(d.a1 == cplx{});
    CHECK(d.a2 == cplx{});
    CHECK(d.j_minus == cplx{});
    CHECK(d.j_z == 0.0);
  }
  const SupermodeState s = rhs_supermode({{}, {}, {}, -0.5 * p.raw.n_atoms, {}}, p, 3e6);
  CHECK(s.a_plus == cplx{});
  CHECK(s.a_minus == cplx{});
  CHECK(s.b == cplx{});
}

TEST_CASE("analytic steady state is a fixed point of the dicke equations") {
  const DerivedParams p = test::paper();
  const double lc = critical_coupling(p);
  for (double lambda : {1.01 * lc, 1.5 * lc, 7.6e6, 40 * lc}) {
    const SteadyState ss = steady_state(p, lambda);
    const DickeState s = to_dicke_state(ss);
    const DickeState d = rhs_dicke(s, p, lambda);
    // natural scale of each equation: the sum of its term magnitudes
    const double c = lambda / std::sqrt(p.raw.n_atoms);
    const double gm = p.raw.cavity_loss, g = p.raw.cavity_coupling;
    const double q = 2.0 * std::abs(s.a2.real());
    const double sa1 = std::hypot(p.raw.pump_cavity_detuning, gm) * std::abs(s.a1) + g * std::abs(s.a2);
    const double sa2 = std::hypot(p.detuning_prime, gm) * std::abs(s.a2) + g * std::abs(s.a1) +
                       2.0 * c * std::abs(s.j_minus.real());
    const double sjm = p.recoil_freq * std::abs(s.j_minus) + 2.0 * c * std::abs(s.j_z) * q;
    const double sjz = 2.0 * c * std::abs(s.j_minus) * q + 1.0;
    CHECK(std::abs(d.a1) < 1e-6 * sa1);
    CHECK(std::abs(d.a2) < 1e-6 * sa2);
    CHECK(std::abs(d.j_minus) < 1e-6 * sjm);
    CHECK(std::abs(d.j_z) < 1e-6 * sjz);
  }
}

TEST_CASE("basis change round trip") {
  std::mt19937_64 rng(8);
  const DickeState s = random_dicke(rng, 1e5);
  const SupermodeState m = to_supermode(s, cplx(2.0, 3.0));
  CHECK(m.b == cplx(2.0, 3.0));
  CHECK(rel_err(m.a_plus, (s.a1 + s.a2) / std::sqrt(2.0)) < 1e-15);
  CHECK(rel_err(m.a_minus, (s.a1 - s.a2) / std::sqrt(2.0)) < 1e-15);
  const DickeState back = to_dicke(m);
  CHECK(max_component_err(back, s, 30.0, 1e5) < 1e-15);
}

TEST_CASE("harmonic oscillator calibration over one period") {
  struct Oscillator {
    double w;
    void operator()(double, const std::array<double, 2>& y, std::array<double, 2>& d) const {
      d[0] = y[1];
      d[1] = -w * w * y[0];
    }
  };
  for (double rtol : {1e-6, 1e-8, 1e-10}) {
    StepControl control;
    control.rel_tol = rtol;
    control.abs_tol = rtol * 1e-3;
    const double w = 2.0 * M_PI * 3.0;
    Dopri5<2, Oscillator> solver(Oscillator{w}, 0.0, {1.0, 0.0}, control);
    const auto y = solver.advance_to(1.0 / 3.0);
    const double amplitude = std::hypot(y[0], y[1] / w);
    CHECK(std::abs(amplitude - 1.0) < 10 * rtol);
    CHECK(std::abs(y[0] - 1.0) < 10 * rtol);
  }
}

TEST_CASE("lambda = 0: damped beating against the matrix exponential") {
  const DerivedParams p = test::paper();
  const double gm = p.raw.cavity_loss;
  const double t_end = 5.0 / gm;
  IntegrateOptions opts;
  opts.samples = 50;

  const auto max_error = [&](double rtol) {
    opts.rel_tol = rtol;
    opts.abs_tol = rtol * 1e-3;
    const Trajectory tr = integrate(DickeState{1.0, 0.0, {}, -5e4}, p, 0.0, t_end, opts);
    double err = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto want = expm_apply(I * p.raw.pump_cavity_detuning - gm, -I * p.raw.cavity_coupling,
                                   I * p.detuning_prime - gm, tr.times[i], {1.0, 0.0});
      const auto& s = std::get<DickeState>(tr.states[i]);
      err = std::max({err, std::abs(s.a1 - want[0]), std::abs(s.a2 - want[1])});
    }
    return err;
  };

  CHECK(max_error(1e-9) < 1e-7);

  // halving the tolerance at least halves the error
  for (double rtol : {1e-5, 1e-6, 1e-7}) {
    const double coarse = max_error(rtol);
    const double fine = max_error(rtol / 2);
    CHECK(fine <= coarse / 2);
  }
}

TEST_CASE("lambda = 0: total photon number never grows") {
  const DerivedParams p = test::paper();
  IntegrateOptions opts;
  opts.samples = 400;
  const Trajectory tr = integrate(DickeState{{0.3, 1.0}, {-0.5, 0.2}, {}, 5e4}, p, 0.0,
                                  3.0 / p.raw.cavity_loss, opts);
  double prev = INFINITY;
  for (const auto& st : tr.states) {
    const auto& s = std::get<DickeState>(st);
    const double e = std::norm(s.a1) + std::norm(s.a2);
    CHECK(e <= prev * (1 + 1e-12));
    prev = e;
  }
}

TEST_CASE("spin length is conserved along dicke trajectories") {
  const DerivedParams p = test::paper();
  const double lambda = 1.5 * critical_coupling(p);
  const SteadyState ss = steady_state(p, lambda);
  IntegrateOptions opts;
  opts.samples = 200;
  opts.rel_tol = 1e-9;
  const DickeState s0 = perturb(to_dicke_state(ss), 0.05, p.raw.n_atoms);
  const Trajectory tr = integrate(s0, p, lambda, 100.0 / p.raw.cavity_loss, opts);
  CHECK(conservation_drift(tr) < 1e-6);
  CHECK(tr.times.size() == 200);
  CHECK(tr.stats.accepted > 0);
}

TEST_CASE("chi = 0: the membrane is a free damped oscillator") {
  RawParams r = test::literal_raw();
  r.com_coupling = 0.0;
  const DerivedParams p = derive(r);
  std::mt19937_64 rng(9);
  const SupermodeState s0 = to_supermode(random_dicke(rng, r.n_atoms), {3.0, -1.0});
  IntegrateOptions opts;
  opts.samples = 20;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  const Trajectory tr = integrate(s0, p, 1e6, 2e-6, opts);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const cplx want = s0.b * std::exp((-I * r.mech_freq - r.mech_damping) * tr.times[i]);
    CHECK(std::abs(std::get<SupermodeState>(tr.states[i]).b - want) < 1e-7 * std::abs(s0.b));
  }
}

TEST_CASE("empty cavities with a polarized spin stay empty") {
  const DerivedParams p = test::paper();
  const SupermodeState s0{{}, {}, {}, -5e4, {1.0, 0.0}};
  IntegrateOptions opts;
  opts.samples = 10;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-14;
  const Trajectory tr = integrate(s0, p, 5e6, 3e-4, opts);
  for (const auto& st : tr.states) {
    const auto& s = std::get<SupermodeState>(st);
    CHECK(s.a_plus == cplx{});
    CHECK(s.a_minus == cplx{});
    CHECK(s.j_minus == cplx{});
  }
  const auto& last = std::get<SupermodeState>(tr.states.back());
  CHECK(std::abs(last.b) == doctest::Approx(std::exp(-p.raw.mech_damping * 3e-4)).epsilon(1e-6));
}

TEST_CASE("supermode and dicke trajectories agree when chi = 0") {
  RawParams r = test::literal_raw();
  r.com_coupling = 0.0;
  const DerivedParams p = derive(r);
  std::mt19937_64 rng(10);
  const DickeState d0 = random_dicke(rng, r.n_atoms);
  const double lambda = 1.5 * critical_coupling(p);
  IntegrateOptions opts;
  opts.samples = 25;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-10;
  const double t_end = 20.0 / r.cavity_loss;
  const Trajectory td = integrate(d0, p, lambda, t_end, opts);
  const Trajectory ts = integrate(to_supermode(d0), p, lambda, t_end, opts);
  REQUIRE(td.times == ts.times);
  for (std::size_t i = 0; i < td.times.size(); ++i) {
    const DickeState a = std::get<DickeState>(td.states[i]);
    const DickeState b = to_dicke(std::get<SupermodeState>(ts.states[i]));
    CHECK(max_component_err(a, b, 30.0, r.n_atoms) < 1e-7);
  }
}

TEST_CASE("integrate validates its inputs") {
  const DerivedParams p = test::paper();
  const DickeState s{{1.0, 0.0}, {}, {}, -5e4};
  IntegrateOptions opts;
  CHECK_THROWS_AS(integrate(s, p, 0.0, 0.0, opts), SpecError);
  CHECK_THROWS_AS(integrate(s, p, 0.0, -1.0, opts), SpecError);
  opts.rel_tol = 0.1;
  CHECK_THROWS_AS(integrate(s, p, 0.0, 1e-6, opts), SpecError);
  opts.rel_tol = 1e-9;
  opts.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate(s, p, 0.0, 1e-6, opts), SpecError);
  opts.abs_tol = 1e-12;
  opts.sample_times = {2e-6, 1e-6};
  CHECK_THROWS_AS(integrate(s, p, 0.0, 3e-6, opts), SpecError);
  opts.sample_times = {1e-6, 4e-6};
  CHECK_THROWS_AS(integrate(s, p, 0.0, 3e-6, opts), SpecError);
}

TEST_CASE("integrator failure modes") {
  const DerivedParams p = test::paper();
  IntegrateOptions opts;
  opts.h_min = 1e-3;
  try {
    integrate(DickeState{{1.0, 0.0}, {}, {}, -5e4}, p, 0.0, 1e-6, opts);
    FAIL("expected a stiffness error");
  } catch (const StiffnessError& e) {
    CHECK(e.last_good_time() == 0.0);
  }
  opts.h_min = 1e-18;
  CHECK_THROWS_AS(integrate(DickeState{{NAN, 0.0}, {}, {}, -5e4}, p, 0.0, 1e-6, opts),
                  DivergenceError);

  // finite-time blow-up of y' = y^2 from y(0) = 1 at t = 1
  struct Blowup {
    void operator()(double, const std::array<double, 1>& y, std::array<double, 1>& d) const {
      d[0] = y[0] * y[0];
    }
  };
  StepControl control;
  Dopri5<1, Blowup> solver(Blowup{}, 0.0, {1.0}, control);
  CHECK_THROWS_AS(solver.advance_to(2.0), Error);
}

TEST_CASE("explicit sample times are honoured") {
  const DerivedParams p = test::paper();
  IntegrateOptions opts;
  opts.sample_times = {1e-7, 5e-7, 1e-6};
  const Trajectory tr = integrate(DickeState{{1.0, 0.0}, {}, {}, -5e4}, p, 0.0, 1e-6, opts);
  REQUIRE(tr.times.size() == 4);
  CHECK(tr.times[0] == 0.0);
  CHECK(tr.times[1] == 1e-7);
  CHECK(tr.times[3] == 1e-6);
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
}

TEST_CASE("trajectory csv") {
  const DerivedParams p = test::paper();
  IntegrateOptions opts;
  opts.samples = 3;
  std::ostringstream dicke_csv, super_csv;
  write_trajectory_csv(dicke_csv, integrate(DickeState{{1.0, 0.5}, {}, {}, -5e4}, p, 0.0, 1e-7, opts));
  write_trajectory_csv(super_csv,
                       integrate(SupermodeState{{1.0, 0.5}, {}, {}, -5e4, {0.1, 0}}, p, 0.0, 1e-7, opts));

  std::istringstream in(dicke_csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re_a1,im_a1,re_a2,im_a2,re_Jm,im_Jm,Jz");
  std::getline(in, line);
  CHECK(line == "0,1,0.5,0,0,0,0,-50000");
  int rows = 1;
  while (std::getline(in, line)) {
    ++rows;
    // round-trip formatting: every field parses back
    std::istringstream fields(line);
    std::string f;
    int count = 0;
    while (std::getline(fields, f, ',')) {
      CHECK_NOTHROW(std::stod(f));
      ++count;
    }
    CHECK(count == 8);
  }
  CHECK(rows == 3);
  CHECK(super_csv.str().rfind("t,re_a1,im_a1,re_a2,im_a2,re_Jm,im_Jm,Jz,re_b,im_b\n", 0) == 0);
}

TEST_CASE("perturbation stays on the spin sphere") {
  const DerivedParams p = test::paper();
  const double n = p.raw.n_atoms;
  const DickeState s = to_dicke_state(steady_state(p, 1.5 * critical_coupling(p)));
  const DickeState k = perturb(s, 0.01, n);
  CHECK(rel_err(k.a1, 1.01 * s.a1) < 1e-15);
  CHECK(rel_err(k.j_minus, 1.01 * s.j_minus) < 1e-15);
  CHECK(std::norm(k.j_minus) + k.j_z * k.j_z == doctest::Approx(n * n / 4).epsilon(1e-14));
  CHECK(std::signbit(k.j_z) == std::signbit(s.j_z));
  const DickeState same = perturb(s, 0.0, n);
  CHECK(max_component_err(same, s, 1.0, n) < 1e-15);
}

TEST_CASE("relaxation back to the superradiant fixed point") {
  const DerivedParams p = test::paper();
  const double lambda = 1.5 * critical_coupling(p);
  const RelaxResult r = relax_to_steady(p, lambda, 0.01, 5.0);
  CHECK(r.converged);
  CHECK(r.residual < 1e-3);
  CHECK(rel_err(r.state.photons_cavity2, intracavity_photons(p, lambda)) < 1e-3);
  CHECK(r.conservation_drift < 1e-6);
  CHECK(r.state.phase == Phase::Superradiant);
}

TEST_CASE("relaxation edge cases") {
  const DerivedParams p = test::paper();
  const double lc = critical_coupling(p);

  const RelaxResult still = relax_to_steady(p, 2.0 * lc, 0.0, 1.0);
  CHECK(still.converged);
  CHECK(still.windows == 1);

  const RelaxResult normal = relax_to_steady(p, 0.5 * lc, 0.01, 1.0);
  CHECK(normal.converged);
  CHECK(normal.state.phase == Phase::Normal);
  CHECK(normal.state.photons_cavity2 == 0.0);

  CHECK_THROWS_AS(relax_to_steady(p, lc, 0.01, 1.0), DomainError);
  CHECK_THROWS_AS(relax_to_steady(p, 2.0 * lc, 0.01, 0.0), SpecError);

  // a budget far shorter than the slow spin mode reports, it does not throw
  const RelaxResult cut = relax_to_steady(p, 1.5 * lc, 0.01, 1e-5);
  CHECK_FALSE(cut.converged);
  CHECK(cut.residual > 0.0);
}

TEST_CASE("seeded normal-phase state") {
  const DerivedParams p = test::paper();
  const double n = p.raw.n_atoms;
  const DickeState a = seeded_normal_state(p, 1e-3, 1e-4, 42);
  const DickeState b = seeded_normal_state(p, 1e-3, 1e-4, 42);
  CHECK(max_component_err(a, b, 1.0, 1.0) == 0.0);
  CHECK(std::abs(a.a1.real()) <= 1e-3);
  CHECK(std::abs(a.j_minus.imag()) <= 1e-4 * n / 2);
  CHECK(std::norm(a.j_minus) + a.j_z * a.j_z == doctest::Approx(n * n / 4).epsilon(1e-14));
  CHECK(a.j_z > 0.0);
  const DickeState pole = seeded_normal_state(p, 1e-3, 0.0, 42);
  CHECK(pole.j_minus == cplx{});
  CHECK(pole.j_z == 0.5 * n);
}
