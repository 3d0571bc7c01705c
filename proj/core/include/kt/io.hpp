#pragma once

#include <string>

#include "kt/kernel.hpp"
#include "kt/teacher.hpp"

namespace kt {

std::string to_json(const ApproxConfig& c, int indent = 2);
std::string to_json(const KernelSpec& s, int indent = 2);

// Header x1,...,xd,y,tag with 17 significant digits.
std::string format_teaching_csv(const TeachingSet& ts);
TeachingSet parse_teaching_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace kt
