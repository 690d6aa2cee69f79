#pragma once

#include <string_view>

namespace wealthnet {

inline constexpr std::string_view kVersion = "0.1.0";

// Bumped whenever an emitted CSV/JSON schema gains columns or keys.
// Columns are append-only: existing ones never reorder or vanish.
inline constexpr int kFormatVersion = 1;

}  // namespace wealthnet
