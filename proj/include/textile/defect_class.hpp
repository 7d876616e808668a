#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace textile {

// The six classes, in fixed inventory order. Output unit k of the
// classifier network corresponds to class index k.
enum class DefectClass : int {
  ColorYarn = 0,
  VerticalMissingYarn = 1,
  HorizontalMissingYarn = 2,
  Hole = 3,
  Spot = 4,
  DefectFree = 5,
};

inline constexpr int kClassCount = 6;

inline constexpr std::array<DefectClass, kClassCount> all_classes() {
  return {DefectClass::ColorYarn,  DefectClass::VerticalMissingYarn,
          DefectClass::HorizontalMissingYarn, DefectClass::Hole,
          DefectClass::Spot,       DefectClass::DefectFree};
}

const std::string& class_name(DefectClass c);
DefectClass parse_class(const std::string& name);  // throws std::invalid_argument

// One-hot target row for training: 1 at the class index, 0 elsewhere.
std::array<uint8_t, kClassCount> one_hot(DefectClass c);

}  // namespace textile
