#include "textile/defect_class.hpp"

#include <stdexcept>

namespace textile {

namespace {
const std::array<std::string, kClassCount> kNames = {
    "Color-Yarn",  "Vertical-Missing-Yarn", "Horizontal-Missing-Yarn",
    "Hole",        "Spot",                  "Defect-Free",
};
}

const std::string& class_name(DefectClass c) {
  const int i = static_cast<int>(c);
  if (i < 0 || i >= kClassCount) throw std::invalid_argument("class_name: bad class value");
  return kNames[i];
}

DefectClass parse_class(const std::string& name) {
  for (int i = 0; i < kClassCount; ++i) {
    if (kNames[i] == name) return static_cast<DefectClass>(i);
  }
  throw std::invalid_argument("parse_class: unknown class '" + name + "'");
}

std::array<uint8_t, kClassCount> one_hot(DefectClass c) {
  std::array<uint8_t, kClassCount> t{};
  t[static_cast<int>(c)] = 1;
  return t;
}

}  // namespace textile
