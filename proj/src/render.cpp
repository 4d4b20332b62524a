#include "vlpslam/render.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace vlpslam {

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  pixels_[static_cast<std::size_t>(y) * width_ + x] = c;
}

Rgb Image::get(int x, int y) const {
  return pixels_[static_cast<std::size_t>(y) * width_ + x];
}

void Image::draw_line(int x0, int y0, int x1, int y1, Rgb c) {
  // Bresenham.
  int dx = std::abs(x1 - x0);
  int dy = -std::abs(y1 - y0);
  int sx = x0 < x1 ? 1 : -1;
  int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Image::draw_disc(int cx, int cy, int radius, Rgb c) {
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      if (x * x + y * y <= radius * radius) set(cx + x, cy + y, c);
    }
  }
}

void Image::save_ppm(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P6\n" << width_ << " " << height_ << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels_.data()),
            static_cast<std::streamsize>(pixels_.size() * 3));
  if (!out) throw std::runtime_error("short write to " + path);
}

MapCanvas::MapCanvas(const GridGeometry& geom, int scale)
    : geom_(geom),
      scale_(scale),
      image_(geom.width() * scale, geom.height() * scale, kGray) {
  if (scale <= 0) throw std::invalid_argument("canvas scale must be positive");
}

void MapCanvas::to_pixel(const Vec2& p, int& px, int& py) const {
  const double fx = (p.x - geom_.origin().x) / geom_.resolution() * scale_;
  const double fy = (p.y - geom_.origin().y) / geom_.resolution() * scale_;
  px = static_cast<int>(std::floor(fx));
  py = image_.height() - 1 - static_cast<int>(std::floor(fy));
}

void MapCanvas::paint_grid(const TrinaryGrid& grid) {
  for (int cy = 0; cy < geom_.height(); ++cy) {
    for (int cx = 0; cx < geom_.width(); ++cx) {
      Rgb c = kGray;
      const CellState s = grid.at({cx, cy});
      if (s == CellState::Free) c = kWhite;
      if (s == CellState::Occupied) c = kBlack;
      for (int sy = 0; sy < scale_; ++sy) {
        for (int sx = 0; sx < scale_; ++sx) {
          image_.set(cx * scale_ + sx,
                     image_.height() - 1 - (cy * scale_ + sy), c);
        }
      }
    }
  }
}

void MapCanvas::polyline(const std::vector<Vec2>& points, Rgb c) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    int x0, y0, x1, y1;
    to_pixel(points[i - 1], x0, y0);
    to_pixel(points[i], x1, y1);
    image_.draw_line(x0, y0, x1, y1, c);
  }
  if (points.size() == 1) {
    int x, y;
    to_pixel(points[0], x, y);
    image_.set(x, y, c);
  }
}

void MapCanvas::disc(const Vec2& center, double radius_m, Rgb c) {
  int px, py;
  to_pixel(center, px, py);
  const int r = std::max(
      1, static_cast<int>(std::lround(radius_m / geom_.resolution() * scale_)));
  image_.draw_disc(px, py, r, c);
}

void MapCanvas::cross(const Vec2& center, double half_m, Rgb c) {
  int px, py;
  to_pixel(center, px, py);
  const int h = std::max(
      1, static_cast<int>(std::lround(half_m / geom_.resolution() * scale_)));
  image_.draw_line(px - h, py - h, px + h, py + h, c);
  image_.draw_line(px - h, py + h, px + h, py - h, c);
}

}  // namespace vlpslam
