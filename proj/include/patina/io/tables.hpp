#pragma once

#include <map>
#include <string>

namespace patina {

// Keyed by image_id; std::map keeps emission order deterministic.
using ScoreTable = std::map<std::string, double>;
using LabelTable = std::map<std::string, int>;  // 0 real, 1 fake

}  // namespace patina
