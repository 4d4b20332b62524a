#include "vlpslam/grid.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vlpslam {

GridGeometry::GridGeometry(int width, int height, double resolution,
                           const Pose2D& origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0 || resolution <= 0.0) {
    throw std::invalid_argument("grid geometry must have positive size and resolution");
  }
}

GridIndex GridGeometry::world_to_cell(const Vec2& p) const {
  const Vec2 local = rotate({p.x - origin_.x, p.y - origin_.y}, -origin_.theta);
  return {static_cast<int>(std::floor(local.x / resolution_)),
          static_cast<int>(std::floor(local.y / resolution_))};
}

Vec2 GridGeometry::cell_center(const GridIndex& c) const {
  return cell_corner(c) + rotate({0.5 * resolution_, 0.5 * resolution_}, origin_.theta);
}

Vec2 GridGeometry::cell_corner(const GridIndex& c) const {
  const Vec2 local{c.ix * resolution_, c.iy * resolution_};
  const Vec2 r = rotate(local, origin_.theta);
  return {origin_.x + r.x, origin_.y + r.y};
}

TrinaryGrid::TrinaryGrid(const GridGeometry& geom, CellState fill)
    : geom_(geom),
      cells_(static_cast<std::size_t>(geom.width()) * geom.height(), fill) {}

std::size_t TrinaryGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

OccupancyGrid::OccupancyGrid(const GridGeometry& geom, double log_odds_min,
                             double log_odds_max)
    : geom_(geom),
      log_odds_min_(log_odds_min),
      log_odds_max_(log_odds_max),
      cells_(static_cast<std::size_t>(geom.width()) * geom.height(), 0.0f) {
  if (!(log_odds_min < log_odds_max)) {
    throw std::invalid_argument("log-odds bounds must satisfy min < max");
  }
}

void OccupancyGrid::add_log_odds(const GridIndex& c, double delta) {
  float& v = cells_[geom_.flat(c)];
  v = static_cast<float>(
      std::clamp(static_cast<double>(v) + delta, log_odds_min_, log_odds_max_));
}

TrinaryGrid binarize(const OccupancyGrid& grid, double occ_threshold,
                     double free_threshold) {
  if (!(0.0 < free_threshold && free_threshold < occ_threshold &&
        occ_threshold < 1.0)) {
    throw std::invalid_argument("thresholds must satisfy 0 < free < occ < 1");
  }
  TrinaryGrid out(grid.geometry(), CellState::Unknown);
  for (int iy = 0; iy < grid.geometry().height(); ++iy) {
    for (int ix = 0; ix < grid.geometry().width(); ++ix) {
      const double p = grid.probability({ix, iy});
      if (p >= occ_threshold) {
        out.set({ix, iy}, CellState::Occupied);
      } else if (p <= free_threshold) {
        out.set({ix, iy}, CellState::Free);
      }
    }
  }
  return out;
}

namespace {

constexpr std::uint8_t kPgmOccupied = 0;
constexpr std::uint8_t kPgmFree = 254;
constexpr std::uint8_t kPgmUnknown = 205;

}  // namespace

void save_trinary_map(const TrinaryGrid& grid, const std::string& pgm_path,
                      const std::string& metadata_path,
                      const MapMetadata* extra) {
  const GridGeometry& g = grid.geometry();
  std::ofstream pgm(pgm_path, std::ios::binary);
  if (!pgm) {
    throw std::runtime_error("cannot write " + pgm_path);
  }
  pgm << "P5\n" << g.width() << " " << g.height() << "\n255\n";
  for (int row = 0; row < g.height(); ++row) {
    const int iy = g.height() - 1 - row;  // image row 0 is the top of the map
    std::string line(static_cast<std::size_t>(g.width()), '\0');
    for (int ix = 0; ix < g.width(); ++ix) {
      switch (grid.at({ix, iy})) {
        case CellState::Occupied: line[ix] = static_cast<char>(kPgmOccupied); break;
        case CellState::Free: line[ix] = static_cast<char>(kPgmFree); break;
        case CellState::Unknown: line[ix] = static_cast<char>(kPgmUnknown); break;
      }
    }
    pgm.write(line.data(), static_cast<std::streamsize>(line.size()));
  }

  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "image" << YAML::Value
    << std::filesystem::path(pgm_path).filename().string();
  y << YAML::Key << "resolution" << YAML::Value << g.resolution();
  y << YAML::Key << "origin" << YAML::Value << YAML::Flow << YAML::BeginSeq
    << g.origin().x << g.origin().y << g.origin().theta << YAML::EndSeq;
  y << YAML::Key << "negate" << YAML::Value << 0;
  const double occ = extra != nullptr ? extra->occupied_thresh : 0.65;
  const double fre = extra != nullptr ? extra->free_thresh : 0.196;
  y << YAML::Key << "occupied_thresh" << YAML::Value << occ;
  y << YAML::Key << "free_thresh" << YAML::Value << fre;
  if (extra != nullptr && extra->anchored) {
    y << YAML::Key << "anchor" << YAML::Value << YAML::BeginMap;
    y << YAML::Key << "anchored" << YAML::Value << true;
    y << YAML::Key << "transform" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << extra->anchor_transform.tx() << extra->anchor_transform.ty()
      << extra->anchor_transform.rotation() << YAML::EndSeq;
    y << YAML::EndMap;
  }
  y << YAML::EndMap;
  std::ofstream meta(metadata_path);
  if (!meta) {
    throw std::runtime_error("cannot write " + metadata_path);
  }
  meta << y.c_str() << "\n";
}

TrinaryGrid load_trinary_map(const std::string& metadata_path,
                             MapMetadata* meta_out) {
  YAML::Node doc = YAML::LoadFile(metadata_path);
  MapMetadata meta;
  meta.image = doc["image"].as<std::string>();
  meta.resolution = doc["resolution"].as<double>();
  const auto o = doc["origin"];
  meta.origin = Pose2D(o[0].as<double>(), o[1].as<double>(), o[2].as<double>());
  if (doc["occupied_thresh"]) meta.occupied_thresh = doc["occupied_thresh"].as<double>();
  if (doc["free_thresh"]) meta.free_thresh = doc["free_thresh"].as<double>();
  if (doc["anchor"] && doc["anchor"]["anchored"].as<bool>(false)) {
    meta.anchored = true;
    const auto t = doc["anchor"]["transform"];
    meta.anchor_transform =
        Transform2D(t[0].as<double>(), t[1].as<double>(), t[2].as<double>());
  }
  const bool negate = doc["negate"] && doc["negate"].as<int>() != 0;

  const auto pgm_path =
      std::filesystem::path(metadata_path).parent_path() / meta.image;
  std::ifstream pgm(pgm_path, std::ios::binary);
  if (!pgm) {
    throw std::runtime_error("cannot read " + pgm_path.string());
  }
  std::string magic;
  pgm >> magic;
  if (magic != "P5") {
    throw std::runtime_error(pgm_path.string() + ": only binary PGM (P5) supported");
  }
  auto next_int = [&pgm, &pgm_path]() {
    // Skips whitespace and '#' comment lines in the PGM header.
    for (;;) {
      int ch = pgm.peek();
      if (ch == '#') {
        std::string line;
        std::getline(pgm, line);
      } else if (std::isspace(ch)) {
        pgm.get();
      } else {
        break;
      }
    }
    int v = 0;
    if (!(pgm >> v)) {
      throw std::runtime_error(pgm_path.string() + ": truncated PGM header");
    }
    return v;
  };
  const int width = next_int();
  const int height = next_int();
  const int maxval = next_int();
  pgm.get();  // single whitespace after maxval
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
    throw std::runtime_error(pgm_path.string() + ": bad PGM header");
  }

  TrinaryGrid grid(GridGeometry(width, height, meta.resolution, meta.origin),
                   CellState::Unknown);
  std::vector<char> row(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    pgm.read(row.data(), width);
    if (pgm.gcount() != width) {
      throw std::runtime_error(pgm_path.string() + ": truncated PGM data");
    }
    const int iy = height - 1 - r;
    for (int ix = 0; ix < width; ++ix) {
      double shade = static_cast<double>(static_cast<std::uint8_t>(row[ix])) / maxval;
      double p_occ = negate ? shade : 1.0 - shade;
      CellState s = CellState::Unknown;
      if (p_occ > meta.occupied_thresh) {
        s = CellState::Occupied;
      } else if (p_occ < meta.free_thresh) {
        s = CellState::Free;
      }
      grid.set({ix, iy}, s);
    }
  }
  if (meta_out != nullptr) {
    *meta_out = meta;
  }
  return grid;
}

}  // namespace vlpslam
