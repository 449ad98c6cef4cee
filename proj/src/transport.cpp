#include "swarmkin/transport.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace swarmkin {

void SpatialGrid::validate() const {
  if (m_x < 1 || m_y < 1) throw std::invalid_argument("spatial grid needs at least one cell per axis");
  if (!(length > 0.0)) throw std::invalid_argument("domain length must be positive");
  if (pseudo_1d && m_y != 1) throw std::invalid_argument("pseudo-1D mode requires m_y = 1");
}

SpatialGrid make_spatial_grid(double length, std::size_t m_x, std::size_t m_y, bool pseudo_1d) {
  SpatialGrid g{m_x, m_y, length, pseudo_1d};
  g.validate();
  return g;
}

DistributionField::DistributionField(const SpatialGrid& grid, const AngularGrid& agrid, double fill)
    : grid_(grid), agrid_(agrid), values_(grid.cells() * agrid.size(), fill) {
  grid_.validate();
}

double DistributionField::total_mass() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return grid_.dx() * grid_.dy() * agrid_.dtheta() * sum;
}

double DistributionField::min_value() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double cfl_transport(double c, double dx) {
  if (!(c > 0.0) || !(dx > 0.0)) throw std::invalid_argument("cfl_transport needs c > 0 and dx > 0");
  return dx / c;
}

namespace {

// Donor-cell flux c·v·f taken from the upstream side of a face.
inline double upwind(double v, double left, double right) { return v >= 0.0 ? v * left : v * right; }

// x-sweep over every (j, k) line; index = (i*my + j)*n + k. Reads `in` only.
void sweep_x(std::span<const double> in, std::span<double> out, std::size_t mx, std::size_t my,
             std::span<const double> vx, double ratio) {
  const std::size_t n = vx.size(), row = my * n;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < mx; ++i) {
    const std::size_t im = i == 0 ? mx - 1 : i - 1, ip = i + 1 == mx ? 0 : i + 1;
    const double* fm = in.data() + im * row;
    const double* f0 = in.data() + i * row;
    const double* fp = in.data() + ip * row;
    double* o = out.data() + i * row;
    for (std::size_t jk = 0; jk < row; ++jk) {
      const double v = vx[jk % n];
      const double right = upwind(v, f0[jk], fp[jk]);
      const double left = upwind(v, fm[jk], f0[jk]);
      o[jk] = f0[jk] - ratio * (right - left);
    }
  }
}

// y-sweep over every (i, k) line.
void sweep_y(std::span<const double> in, std::span<double> out, std::size_t mx, std::size_t my,
             std::span<const double> vy, double ratio) {
  const std::size_t n = vy.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < mx; ++i) {
    for (std::size_t j = 0; j < my; ++j) {
      const std::size_t jm = j == 0 ? my - 1 : j - 1, jp = j + 1 == my ? 0 : j + 1;
      const double* fm = in.data() + (i * my + jm) * n;
      const double* f0 = in.data() + (i * my + j) * n;
      const double* fp = in.data() + (i * my + jp) * n;
      double* o = out.data() + (i * my + j) * n;
      for (std::size_t k = 0; k < n; ++k) {
        const double right = upwind(vy[k], f0[k], fp[k]);
        const double left = upwind(vy[k], fm[k], f0[k]);
        o[k] = f0[k] - ratio * (right - left);
      }
    }
  }
}

}  // namespace

void transport_step(const DistributionField& in, DistributionField& out, DistributionField& scratch,
                    double dt, double c) {
  const SpatialGrid& g = in.grid();
  const AngularGrid& ag = in.agrid();
  if (!(dt > 0.0)) throw std::invalid_argument("transport dt must be positive");
  const double h = g.pseudo_1d ? g.dx() : std::min(g.dx(), g.dy());
  const double limit = cfl_transport(c, h);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "transport dt=" << dt << " exceeds the CFL bound " << limit;
    throw std::invalid_argument(os.str());
  }
  const std::size_t n = ag.size();
  std::vector<double> vx(n), vy(n);
  for (std::size_t k = 0; k < n; ++k) {
    vx[k] = c * ag.cos_node(k);
    vy[k] = c * ag.sin_node(k);
  }
  const std::size_t mx = g.m_x, my = g.m_y;
  DistributionField& after_x = g.pseudo_1d ? out : scratch;
  sweep_x(in.values(), after_x.values(), mx, my, vx, dt / g.dx());
  if (g.pseudo_1d) return;
  sweep_y(after_x.values(), out.values(), mx, my, vy, dt / g.dy());
}

DistributionField transport_step(const DistributionField& in, double dt, double c) {
  DistributionField out(in.grid(), in.agrid());
  DistributionField scratch(in.grid(), in.agrid());
  transport_step(in, out, scratch, dt, c);
  return out;
}

}  // namespace swarmkin
