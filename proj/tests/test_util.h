#ifndef CDOXAI_TESTS_TEST_UTIL_H_
#define CDOXAI_TESTS_TEST_UTIL_H_

#include <cstddef>
#include <functional>

#include <gtest/gtest.h>

#include "cdoxai/error.h"

namespace cdoxai {

// Code of the cdoxai::Error thrown by `fn`; records a failure if none is.
inline ErrorCode CodeOf(const std::function<void()>& fn, std::size_t* line = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (line) *line = e.line();
    return e.code();
  }
  ADD_FAILURE() << "no cdoxai::Error thrown";
  return ErrorCode::kIo;
}

}  // namespace cdoxai

#endif  // CDOXAI_TESTS_TEST_UTIL_H_
