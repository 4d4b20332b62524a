// Regenerates the bundled lab world files (world YAML + map PGM/YAML pair).

#include <cstdio>
#include <filesystem>
#include <string>

#include "vlpslam/world.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  const vlpslam::WorldModel world = vlpslam::make_lab_world();
  const auto base = std::filesystem::path(dir);
  vlpslam::save_world(world, (base / "lab.world.yaml").string(),
                      (base / "lab.pgm").string(),
                      (base / "lab.map.yaml").string());
  std::printf("wrote %s/lab.world.yaml (+ lab.pgm, lab.map.yaml)\n",
              dir.c_str());
  return 0;
}
