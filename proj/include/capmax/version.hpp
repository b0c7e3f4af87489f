#ifndef CAPMAX_VERSION_HPP
#define CAPMAX_VERSION_HPP

#define CAPMAX_VERSION_MAJOR 0
#define CAPMAX_VERSION_MINOR 1
#define CAPMAX_VERSION_PATCH 0
#define CAPMAX_VERSION_STRING "0.1.0"

namespace capmax {
inline const char* version() { return CAPMAX_VERSION_STRING; }
}

#endif
