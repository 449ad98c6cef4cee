#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "swarmkin/collision.hpp"

using namespace swarmkin;

namespace {

constexpr double kPi = std::numbers::pi;

using Matrix = std::vector<std::vector<double>>;

// Circulant tridiagonal matrix of Q_N written entry by entry with weights
// evaluated directly from libm.
Matrix dense_qn(std::size_t n, double a, double theta_bar, double sigma) {
  const double h = 2 * kPi / static_cast<double>(n);
  auto m_node = [&](std::size_t k) { return std::exp(a * std::cos(h * k - theta_bar)); };
  auto m_half = [&](std::size_t k) { return std::exp(a * std::cos(h * k + h / 2 - theta_bar)); };
  Matrix q(n, std::vector<double>(n, 0.0));
  const double s = sigma / (h * h);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = (k + 1) % n, km = (k + n - 1) % n;
    q[k][kp] += s * m_half(k) / m_node(kp);
    q[k][k] -= s * (m_half(k) + m_half(km)) / m_node(k);
    q[k][km] += s * m_half(km) / m_node(km);
  }
  return q;
}

std::vector<double> random_positive(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 2.0);
  std::vector<double> f(n);
  for (auto& v : f) v = u(gen);
  return f;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("collision") {

TEST_CASE("parameters") {
  CHECK(parse_model("Vicsek") == ModelKind::Vicsek);
  CHECK(parse_model("DFL") == ModelKind::DFL);
  CHECK_THROWS_AS(parse_model("other"), std::invalid_argument);
  CHECK_THROWS_AS((CollisionParams{ModelKind::Vicsek, 0.0, 0.2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CollisionParams{ModelKind::Vicsek, 1.0, -1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CollisionParams{ModelKind::Vicsek, 1.0, 0.2, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("effective alignment strength") {
  Moments m{1.0, 0.3, 0.4, 0.5, 0.9};
  CHECK(effective_mu({ModelKind::Vicsek, 1.0, 0.2}, m) == 1.0);
  CHECK(effective_mu({ModelKind::DFL, 1.0, 0.2}, m) == 0.5);
  Moments zero{1.0, 0.0, 0.0, 0.0, std::nullopt};
  CHECK(effective_mu({ModelKind::Vicsek, 1.0, 0.2}, zero) == 0.0);
  CHECK(effective_mu({ModelKind::DFL, 1.0, 0.2}, zero) == 0.0);
  Moments tiny{1.0, 1e-14, 0.0, 1e-14, 0.0};
  CHECK(effective_mu({ModelKind::Vicsek, 1.0, 0.2}, tiny) == 0.0);
}

TEST_CASE("von Mises weights") {
  const AngularGrid g4(4);
  auto w = von_mises_weights(g4, std::nullopt, 0.0, 0.2);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(w.node[k] == 1.0);
    CHECK(w.half[k] == 1.0);
  }
  w = von_mises_weights(g4, 0.0, 1.0, 0.2);
  CHECK(w.node[0] == doctest::Approx(std::exp(5.0)).epsilon(1e-15));
  CHECK(w.node[1] == 1.0);
  CHECK(w.node[2] == doctest::Approx(std::exp(-5.0)).epsilon(1e-15));
  CHECK(w.node[3] == 1.0);
  CHECK_THROWS_AS(von_mises_weights(g4, std::nullopt, 1.0, 0.2), std::invalid_argument);

  const AngularGrid g(30);
  w = von_mises_weights(g, 0.3, 1.0, 0.2);
  for (std::size_t k = 0; k < 30; ++k) {
    const double th = 2 * kPi * k / 30.0;
    const double node = std::exp(5.0 * std::cos(th - 0.3));
    const double half = std::exp(5.0 * std::cos(th + kPi / 30.0 - 0.3));
    // the exponent carries a few ulps of the angle, amplified by a = 5
    CHECK(std::abs(w.node[k] - node) <= 1e-14 * node);
    CHECK(std::abs(w.half[k] - half) <= 1e-14 * half);
  }
}

TEST_CASE("apply_qn equals the dense matrix product") {
  std::mt19937_64 gen(11);
  for (std::size_t n : {3u, 8u, 17u}) {
    const AngularGrid g(n);
    for (double tb : {0.0, 1.1, -2.5}) {
      const double sigma = 0.2, mu_f = 0.4;  // a = 2
      const auto w = von_mises_weights(g, tb, mu_f, sigma);
      const Matrix q = dense_qn(n, mu_f / sigma, tb, sigma);
      const auto f = random_positive(gen, n);
      const auto got = apply_qn(f, w, sigma, g);
      std::vector<double> want(n, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) want[r] += q[r][c] * f[c];
      const double scale = max_abs(want);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("equilibrium is an exact zero and the sum vanishes") {
  const AngularGrid g(32);
  const auto w = von_mises_weights(g, 0.7, 1.0, 0.2);
  const auto q = apply_qn(w.node, w, 0.2, g);
  for (double v : q) CHECK(v == 0.0);

  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_positive(gen, 32);
    const auto r = apply_qn(f, w, 0.2, g);
    double s = 0.0;
    for (double v : r) s += v;
    CHECK(std::abs(s) <= 1e-13 * max_abs(r) * 32);
  }
}

TEST_CASE("weighted symmetry and dissipation") {
  std::mt19937_64 gen(21);
  for (std::size_t n : {8u, 16u, 32u}) {
    const AngularGrid g(n);
    const auto w = von_mises_weights(g, 0.4, 0.6, 0.2);
    for (int trial = 0; trial < 50; ++trial) {
      const auto u = random_positive(gen, n), v = random_positive(gen, n);
      const auto qu = apply_qn(u, w, 0.2, g), qv = apply_qn(v, w, 0.2, g);
      double a = 0, b = 0, nu = 0, nv = 0, l2 = 0;
      for (std::size_t k = 0; k < n; ++k) {
        a += qu[k] * v[k] / w.node[k];
        b += u[k] * qv[k] / w.node[k];
        nu += u[k] * u[k];
        nv += v[k] * v[k];
        l2 += qu[k] * u[k] / w.node[k];
      }
      CHECK(std::abs(a - b) <= 1e-12 * std::sqrt(nu * nv) * std::max(1.0, max_abs(qu)));
      CHECK(l2 <= 0.0);
    }
  }
}

TEST_CASE("collision CFL bound") {
  CHECK(cfl_collision(0.0, 0.2, 0.1) == doctest::Approx(0.01 / 0.4).epsilon(1e-15));
  const AngularGrid g(30);
  const double sigma = 0.2, mu_f = 1.0;
  const double dt = cfl_collision(mu_f, sigma, g.dtheta());
  CHECK(dt == doctest::Approx(g.dtheta() * g.dtheta() / (2 * sigma) *
                              std::exp(-2 * (mu_f / sigma) * std::sin(g.dtheta() / 4))));
  for (int s = 0; s <= 63; ++s) {
    const double tb = 0.1 * s;
    const Matrix q = dense_qn(30, mu_f / sigma, tb, sigma);
    for (std::size_t r = 0; r < 30; ++r) {
      for (std::size_t c = 0; c < 30; ++c) {
        const double entry = (r == c ? 1.0 : 0.0) + dt * q[r][c];
        CHECK(entry >= -1e-14);
      }
    }
  }
}

TEST_CASE("Euler step: fixed points, conservation, positivity") {
  const CollisionParams vic{ModelKind::Vicsek, 1.0, 0.2};
  const AngularGrid g(30);

  std::vector<double> uniform(30, 0.4);
  CHECK(collision_step(uniform, 0.01, vic, g) == uniform);
  CHECK(collision_step(uniform, 0.01, {ModelKind::DFL, 1.0, 0.2}, g) == uniform);

  // von Mises at the Vicsek concentration is stationary up to round-off
  const std::vector<double> f = von_mises_weights(g, 0.3, 1.0, 0.2).node;
  const auto stepped = collision_step(f, 0.01, vic, g);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(stepped[k] - f[k]) <= 1e-13 * f[k]);

  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = random_positive(gen, 30);
    h[trial % 30] = 0.0;
    const Moments m0 = moments(h, g);
    const double limit = cfl_collision(effective_mu(vic, m0), vic.sigma, g.dtheta());
    const auto out = collision_step(h, limit, vic, g);
    CHECK(moments(out, g).rho == doctest::Approx(m0.rho).epsilon(1e-14));
    for (double v : out) CHECK(v >= 0.0);
  }
  CHECK_THROWS_AS(collision_step(uniform, 1.0, vic, g), CflViolation);
}

TEST_CASE("adaptive sub-stepping") {
  const AngularGrid g(30);
  const CollisionParams dfl{ModelKind::DFL, 1.0, 0.2};
  std::vector<double> f(30);
  for (std::size_t k = 0; k < 30; ++k) f[k] = 0.03 * std::exp(4.0 * std::cos(g.theta(k)));
  const double mass = moments(f, g).rho;

  AdaptStats small{};
  const auto one = collision_adapt(f, 1e-4, dfl, g, &small);
  CHECK(small.substeps == 1);
  CHECK(one == collision_step(f, 1e-4, dfl, g));

  AdaptStats st{};
  const auto out = collision_adapt(f, 1.0, dfl, g, &st);
  CHECK(st.substeps > 10);
  CHECK(std::abs(st.elapsed - 1.0) <= 1e-12);
  CHECK(st.min_substep <= cfl_collision(st.max_mu_f, 0.2, g.dtheta()) * (1 + 1e-12));
  CHECK(moments(out, g).rho == doctest::Approx(mass).epsilon(1e-13));
  for (double v : out) CHECK(v >= 0.0);

  // a more concentrated state needs smaller sub-steps
  std::vector<double> sharp(30);
  for (std::size_t k = 0; k < 30; ++k) sharp[k] = 0.003 * std::exp(8.0 * std::cos(g.theta(k)));
  AdaptStats st2{};
  collision_adapt(sharp, 1.0, dfl, g, &st2);
  CHECK(st2.substeps > st.substeps);

  CHECK_THROWS_AS(collision_adapt(f, 1.0, dfl, g, nullptr, 3), SubstepCapExceeded);
}

TEST_CASE("second-order consistency against the analytic operator") {
  // f = e^{sin θ}, M = e^{a cos θ}:
  // Q f = σ e^{sin θ} (cos²θ + a sinθ cosθ − sinθ + a cosθ)
  const double sigma = 0.2, a = 2.0;
  std::vector<double> h, err;
  for (std::size_t n = 8; n <= 256; n *= 2) {
    const AngularGrid g(n);
    const auto w = von_mises_weights(g, 0.0, a * sigma, sigma);
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = std::exp(std::sin(g.theta(k)));
    const auto q = apply_qn(f, w, sigma, g);
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = g.theta(k), s = std::sin(t), c = std::cos(t);
      const double exact = sigma * std::exp(s) * (c * c + a * s * c - s + a * c);
      e = std::max(e, std::abs(q[k] - exact));
    }
    h.push_back(g.dtheta());
    err.push_back(e);
  }
  // least squares slope of log err against log h
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(err[i]);
  }
  mx /= h.size();
  my /= h.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxy += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
    sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(2.0).epsilon(0.1));
}

}
