#pragma once

namespace csrkn {

// Carried as "spec_version" in every JSON document this library writes.
inline constexpr const char* kFormatVersion = "1.0";

}  // namespace csrkn
