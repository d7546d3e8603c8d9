#pragma once

#include <cmath>

namespace qedlab::modes {

namespace detail {
inline constexpr double gl3_x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr double gl3_w[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
}  // namespace detail

template <class F>
void cell_quadrature(const Vec3& lo, const Vec3& hi, double m, double uv, int sub, F&& f) {
  using detail::gl3_w;
  using detail::gl3_x;
  const double hx = (hi[0] - lo[0]) / sub, hy = (hi[1] - lo[1]) / sub;
  for (int sx = 0; sx < sub; ++sx)
    for (int sy = 0; sy < sub; ++sy)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double x = lo[0] + hx * (sx + 0.5 + 0.5 * gl3_x[a]);
          const double y = lo[1] + hy * (sy + 0.5 + 0.5 * gl3_x[b]);
          const double wxy = 0.25 * hx * hy * gl3_w[a] * gl3_w[b];
          const double rho2 = x * x + y * y;
          if (rho2 >= uv * uv) continue;
          const double zo = std::sqrt(uv * uv - rho2);
          const double zi = m * m > rho2 ? std::sqrt(m * m - rho2) : 0.0;
          // allowed |z| in [zi, zo]; two intervals
          const double segs[2][2] = {{-zo, -zi}, {zi, zo}};
          const int nseg = zi > 0 ? 2 : 1;
          for (int s = 0; s < nseg; ++s) {
            double z0 = nseg == 2 ? segs[s][0] : -zo;
            double z1 = nseg == 2 ? segs[s][1] : zo;
            z0 = std::max(z0, lo[2]);
            z1 = std::min(z1, hi[2]);
            if (z1 <= z0) continue;
            const double hz = z1 - z0;
            for (int c = 0; c < 3; ++c) {
              const double z = z0 + hz * 0.5 * (1.0 + gl3_x[c]);
              f(Vec3(x, y, z), wxy * 0.5 * hz * gl3_w[c]);
            }
          }
        }
}

}  // namespace qedlab::modes
