#pragma once

namespace geomphase {

inline constexpr const char* kVersion = "1.0.0";

// First line of every CSV emitted by this project.
inline constexpr const char* kCsvTag = "# geomphase v1";

}  // namespace geomphase
