#pragma once

namespace haarvol {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr const char* kOutputSchemaVersion = "1";

}  // namespace haarvol
