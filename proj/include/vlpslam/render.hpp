#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlpslam/grid.hpp"

namespace vlpslam {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kGray{205, 205, 205};
inline constexpr Rgb kRed{220, 50, 47};
inline constexpr Rgb kGreen{40, 160, 70};
inline constexpr Rgb kBlue{38, 100, 210};
inline constexpr Rgb kOrange{235, 140, 20};
inline constexpr Rgb kPurple{140, 80, 200};

class Image {
 public:
  Image(int width, int height, Rgb fill = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }

  void set(int x, int y, Rgb c);  // out-of-bounds pixels are ignored
  Rgb get(int x, int y) const;

  void draw_line(int x0, int y0, int x1, int y1, Rgb c);
  void draw_disc(int cx, int cy, int radius, Rgb c);

  // Binary PPM (P6).
  void save_ppm(const std::string& path) const;

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

// Paints world-frame geometry onto a grid's raster, `scale` pixels per cell,
// with the same vertical flip as the map files (row 0 at max y). Assumes an
// axis-aligned grid origin.
class MapCanvas {
 public:
  MapCanvas(const GridGeometry& geom, int scale = 3);

  Image& image() { return image_; }
  const Image& image() const { return image_; }

  void paint_grid(const TrinaryGrid& grid);
  void polyline(const std::vector<Vec2>& points, Rgb c);
  void disc(const Vec2& center, double radius_m, Rgb c);
  void cross(const Vec2& center, double half_m, Rgb c);

  void save(const std::string& path) const { image_.save_ppm(path); }

 private:
  void to_pixel(const Vec2& p, int& px, int& py) const;

  GridGeometry geom_;
  int scale_;
  Image image_;
};

}  // namespace vlpslam
