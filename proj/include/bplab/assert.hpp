#pragma once

#include <stdexcept>
#include <string>

// Contract checks stay enabled in every build type. A violated contract is a
// programming error on the caller's side; it surfaces as std::logic_error so
// tests can observe it.
#define BPLAB_ASSERT(cond, msg)                                        \
  do {                                                                 \
    if (!(cond)) throw std::logic_error(std::string("bplab: ") + msg); \
  } while (0)
