#pragma once

namespace resofact {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a serialized file layout (JSON/CSV/codebook binary) changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace resofact
