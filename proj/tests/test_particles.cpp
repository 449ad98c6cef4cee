#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "swarmkin/particles.hpp"

using namespace swarmkin;

namespace {

constexpr double kPi = std::numbers::pi;

ParticleState make_state(std::vector<double> x, std::vector<double> y, std::vector<double> th) {
  ParticleState s;
  s.x = std::move(x);
  s.y = std::move(y);
  s.theta = std::move(th);
  return s;
}

// Every pair, minimum image, summed in index order.
std::array<double, 2> brute_flux(const ParticleState& s, std::size_t i, const MicroParams& p) {
  double jx = 0.0, jy = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j == i && !p.include_self) continue;
    double dx = std::fabs(s.x[j] - s.x[i]), dy = std::fabs(s.y[j] - s.y[i]);
    dx = std::min(dx, p.length - dx);
    dy = std::min(dy, p.length - dy);
    if (dx * dx + dy * dy <= p.radius * p.radius) {
      jx += std::cos(s.theta[j]);
      jy += std::sin(s.theta[j]);
    }
  }
  return {jx, jy};
}

}  // namespace

TEST_SUITE("particles") {

TEST_CASE("parameter checks") {
  MicroParams p;
  CHECK_NOTHROW(p.validate());
  p.radius = 3.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MicroParams{};
  p.n_particles = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("periodic offsets") {
  CHECK(periodic_delta(0.1, 3.9, 4.0) == doctest::Approx(-0.2));
  CHECK(periodic_delta(3.9, 0.1, 4.0) == doctest::Approx(0.2));
  CHECK(periodic_delta(1.0, 1.5, 4.0) == 0.5);
}

TEST_CASE("local flux of isolated and aligned particles") {
  MicroParams p;
  auto one = make_state({1.0}, {1.0}, {0.7});
  const auto j1 = neighbor_flux(one, 0, p);
  CHECK(std::hypot(j1[0], j1[1]) == doctest::Approx(1.0));
  auto two = make_state({1.0, 1.01}, {1.0, 1.0}, {0.3, 0.3});
  const auto j2 = neighbor_flux(two, 0, p);
  CHECK(std::hypot(j2[0], j2[1]) == doctest::Approx(2.0));
  // across the periodic seam
  auto seam = make_state({0.005, 3.995}, {2.0, 2.0}, {0.0, 0.0});
  CHECK(neighbor_flux(seam, 0, p)[0] == doctest::Approx(2.0));
  p.include_self = false;
  CHECK(neighbor_flux(one, 0, p)[0] == 0.0);
}

TEST_CASE("cell list agrees with all pairs") {
  for (std::size_t n : {200u, 500u}) {
    MicroParams p;
    p.n_particles = n;
    p.radius = 0.3;
    p.seed = n;
    const auto s = random_state(p);
    const CellList cells(s, p.radius, p.length);
    CHECK(cells.cells_per_side() == 13);
    const auto all = all_neighbor_fluxes(s, p);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ref = brute_flux(s, i, p);
      CHECK(all[i][0] == ref[0]);
      CHECK(all[i][1] == ref[1]);
    }
  }
  // a radius too large for three cells falls back to one bucket
  MicroParams p;
  p.n_particles = 100;
  p.radius = 1.5;
  const auto s = random_state(p);
  CHECK(CellList(s, p.radius, p.length).cells_per_side() == 1);
  const auto all = all_neighbor_fluxes(s, p);
  for (std::size_t i = 0; i < 100; ++i) CHECK(all[i][0] == brute_flux(s, i, p)[0]);
}

TEST_CASE("noise-free aligned swarm keeps its heading") {
  MicroParams p;
  p.n_particles = 500;
  p.sigma = 0.0;
  const double heading = 1.1;
  auto s = random_state(p);
  for (double& t : s.theta) t = heading;
  for (int step = 0; step < 20; ++step) s = step_particles(s, p);
  for (double t : s.theta) CHECK(t == doctest::Approx(heading).epsilon(1e-12));
  CHECK(s.step == 20);
  CHECK(s.time == doctest::Approx(0.2));
}

TEST_CASE("pure angular diffusion") {
  MicroParams p;
  p.n_particles = 20000;
  p.mu = 0.0;
  p.sigma = 0.5;
  p.c = 0.0;
  p.dt = 0.01;
  auto s = random_state(p);
  for (double& t : s.theta) t = kPi;  // far from the wrap point
  const int steps = 100;
  for (int k = 0; k < steps; ++k) s = step_particles(s, p);
  double var = 0.0;
  for (double t : s.theta) var += (t - kPi) * (t - kPi);
  var /= static_cast<double>(s.size());
  const double expected = 2.0 * p.sigma * steps * p.dt;  // 1.0
  CHECK(var == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("positions stay in the box and runs repeat") {
  MicroParams p;
  p.n_particles = 2000;
  auto a = random_state(p), b = random_state(p);
  for (int k = 0; k < 30; ++k) {
    a = step_particles(a, p);
    b = step_particles(b, p);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.x[i] >= 0.0);
    CHECK(a.x[i] < p.length);
    CHECK(a.y[i] >= 0.0);
    CHECK(a.y[i] < p.length);
    CHECK(a.theta[i] >= 0.0);
    CHECK(a.theta[i] < 2 * kPi);
  }
  CHECK(a.x == b.x);
  CHECK(a.theta == b.theta);
}

TEST_CASE("band profile") {
  auto s = make_state({0.05, 0.06, 0.15, 3.99}, {1.0, 2.0, 3.0, 0.5}, {0.0, kPi, 0.0, 0.0});
  const auto prof = band_profile(s, 0.1, 4.0);
  REQUIRE(prof.rho.size() == 40);
  CHECK(prof.x[0] == doctest::Approx(0.05));
  CHECK(prof.rho[0] == doctest::Approx(20.0));
  CHECK(prof.u[0] == doctest::Approx(0.0));
  CHECK(prof.rho[1] == doctest::Approx(10.0));
  CHECK(prof.u[1] == doctest::Approx(1.0));
  CHECK(prof.rho[39] == doctest::Approx(10.0));
  CHECK(prof.empty[5]);
  CHECK(prof.u[5] == 0.0);
  const auto py = band_profile(s, 0.5, 4.0, Axis::Y);
  CHECK(py.rho[1] == doctest::Approx(2.0));
  CHECK_THROWS_AS(band_profile(s, 0.3, 4.0), std::invalid_argument);
}

TEST_CASE("neighbour counts") {
  MicroParams p;  // N = 30000, R = 0.02, L = 4
  const auto s = random_state(p);
  const auto st = avg_neighbors(s, p.radius, p.length);
  CHECK(st.homogeneous_estimate == doctest::Approx(2.356).epsilon(1e-3));
  CHECK(std::abs(st.empirical - st.homogeneous_estimate) <= 0.05 * st.homogeneous_estimate);

  auto far = make_state({0.5, 2.5}, {0.5, 2.5}, {0.0, 1.0});
  CHECK(avg_neighbors(far, 0.02, 4.0).empirical == 0.0);
}

TEST_CASE("polar order and trajectory files") {
  auto s = make_state({1, 2}, {1, 2}, {0.5, 0.5});
  CHECK(polar_order(s) == doctest::Approx(1.0));
  s.theta[1] = 0.5 + kPi;
  CHECK(polar_order(s) == doctest::Approx(0.0).epsilon(1e-12));

  const auto dir = std::filesystem::temp_directory_path() / "swarmkin_particles_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_trajectory(dir / "traj.csv", s);
  std::ifstream in(dir / "traj.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "id,x,y,theta");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);

  const auto prof = band_profile(s, 1.0, 4.0);
  append_band_profile(dir / "band.csv", 0.0, prof);
  append_band_profile(dir / "band.csv", 4.0, prof);
  std::ifstream bin(dir / "band.csv");
  std::getline(bin, line);
  CHECK(line == "t,bin,rho_bar,u_bar");
  rows = 0;
  while (std::getline(bin, line)) ++rows;
  CHECK(rows == 8);
  std::filesystem::remove_all(dir);
}

}
