#include "vlpslam/distance_transform.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vlpslam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance lower envelope (two-pass parabola algorithm).
void envelope_1d(const double* f, int n, double* d, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) {
      continue;
    }
    if (f[v[k]] == kInf) {
      v[k] = q;
      continue;
    }
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (k > 0 && s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    if (f[v[0]] == kInf) {
      d[q] = kInf;
      continue;
    }
    while (z[k + 1] < q) {
      ++k;
    }
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<int> squared_distance_transform(int width, int height,
                                            const std::vector<bool>& feature) {
  if (width <= 0 || height <= 0 ||
      feature.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("distance transform: bad dimensions");
  }
  std::vector<double> grid(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) {
    grid[i] = feature[i] ? 0.0 : kInf;
  }

  const int n = std::max(width, height);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  // Columns first, then rows.
  for (int ix = 0; ix < width; ++ix) {
    for (int iy = 0; iy < height; ++iy) {
      f[iy] = grid[static_cast<std::size_t>(iy) * width + ix];
    }
    envelope_1d(f.data(), height, d.data(), v.data(), z.data());
    for (int iy = 0; iy < height; ++iy) {
      grid[static_cast<std::size_t>(iy) * width + ix] = d[iy];
    }
  }
  for (int iy = 0; iy < height; ++iy) {
    envelope_1d(grid.data() + static_cast<std::size_t>(iy) * width, width,
                d.data(), v.data(), z.data());
    std::copy(d.begin(), d.begin() + width,
              grid.begin() + static_cast<std::size_t>(iy) * width);
  }

  const int sentinel = width * width + height * height;
  std::vector<int> out(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) {
    out[i] = grid[i] == kInf ? sentinel : static_cast<int>(grid[i] + 0.5);
  }
  return out;
}

}  // namespace vlpslam
