#pragma once

#include <functional>

#include "doctest.h"

#include "fkstar/error.hpp"
#include "random_config.hpp"

// Code of the fkstar::Error thrown by f; fails the test if nothing is thrown.
inline fkstar::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const fkstar::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return fkstar::ErrorCode::kInvalidArgument;
}
