#ifndef BERGLAB_VERSION_HPP
#define BERGLAB_VERSION_HPP

namespace berglab {

inline constexpr const char* kVersion = "1.0.0";

} // namespace berglab

#endif
