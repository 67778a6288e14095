#pragma once

namespace polariton {

const char* version();

}  // namespace polariton
