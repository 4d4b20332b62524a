#pragma once

#include <vector>

namespace vlpslam {

// Exact squared Euclidean distance transform (two-pass lower-envelope
// algorithm). `feature[iy * width + ix]` marks source cells (distance 0);
// the result holds, per cell, the exact squared distance in cell units to
// the nearest source cell. All-empty input yields a large sentinel per cell.
std::vector<int> squared_distance_transform(int width, int height,
                                            const std::vector<bool>& feature);

}  // namespace vlpslam
