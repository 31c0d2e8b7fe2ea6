#ifndef SIRW_VERSION_HPP
#define SIRW_VERSION_HPP

namespace sirw {

inline constexpr const char* kVersion = "1.0.0";

} // namespace sirw

#endif
