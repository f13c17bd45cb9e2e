#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "lexent/common.hpp"

// Collects warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningCapture() {
    lexent::set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() {
    lexent::set_warning_handler([](std::string_view m) { std::cerr << "warning: " << m << '\n'; });
  }
  bool contains(const std::string& needle) const {
    for (const auto& m : messages) {
      if (m.find(needle) != std::string::npos) return true;
    }
    return false;
  }
};
