#pragma once

namespace gvi::frozen {

// Output of derive_constants(100000, 10000), regenerated by `gvi derive-constants`.
constexpr double kC0 = 0.20922171423467398;
constexpr double kC1 = 0.15697464302459921;
constexpr int kKMax = 100000;
constexpr int kNMax = 10000;
constexpr const char* kTimestamp = "2026-10-16T13:21:56Z";

}  // namespace gvi::frozen
