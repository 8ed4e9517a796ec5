#include "dfeg/core/packet.hpp"

#include <cmath>
#include <sstream>

namespace dfeg {

double gaussian_leakage(const Grid& grid, double z0, double width) {
  const double s = std::sqrt(2.0) * width;
  return 0.5 * std::erfc((z0 - grid.z_min()) / s) + 0.5 * std::erfc((grid.z_max() - z0) / s);
}

SpinorField make_gaussian_packet(const Grid& grid, double z0, double p0, double width,
                                 double hbar, int component) {
  if (!(width >= grid.dz())) {
    throw ConfigError("packet: width must be at least dz");
  }
  if (component < 0 || component > 3) throw ConfigError("packet: component must be 0..3");
  const double leak = gaussian_leakage(grid, z0, width);
  if (!(leak <= 1e-8)) {
    std::ostringstream msg;
    msg << "packet: " << leak << " of the probability lies outside the grid";
    throw ConfigError(msg.str());
  }
  SpinorField psi(grid);
  auto comp = psi.component(component);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.z(i) - z0;
    comp[i] = std::exp(-x * x / (4.0 * width * width)) * std::polar(1.0, p0 * grid.z(i) / hbar);
  }
  return psi.normalized();
}

}  // namespace dfeg
