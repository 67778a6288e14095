#include "polariton/version.hpp"

namespace polariton {

const char* version() { return POLARITON_VERSION; }

}  // namespace polariton
