#pragma once

namespace simfdr {

inline constexpr const char* kVersion = "1.0.0";

} // namespace simfdr
