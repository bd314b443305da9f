#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rvsc {

// Matching key for labels: ASCII lowercase, runs of whitespace collapsed to one
// space, leading/trailing punctuation and whitespace stripped. Idempotent.
std::string normalize_label(std::string_view text);

std::string_view trim(std::string_view s);

std::vector<std::string> split_lines(std::string_view text);

// Ordering used wherever ids are sorted: digit runs compare numerically, so
// "n2" < "n10" and "9" < "14".
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

}  // namespace rvsc
