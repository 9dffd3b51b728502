#ifndef TACP_TESTS_EXPECT_ERROR_HPP
#define TACP_TESTS_EXPECT_ERROR_HPP

#include <gtest/gtest.h>

#include "tacp/errors.hpp"

// Expression must throw tacp::Error carrying the given code.
#define EXPECT_ERRC(statement, expected_code)                                     \
  EXPECT_THROW(                                                                   \
      {                                                                           \
        try {                                                                     \
          static_cast<void>(statement);                                           \
        } catch (const ::tacp::Error& caught_) {                                  \
          EXPECT_EQ(caught_.code(), expected_code) << caught_.what();             \
          throw;                                                                  \
        }                                                                         \
      },                                                                          \
      ::tacp::Error)

#endif  // TACP_TESTS_EXPECT_ERROR_HPP
