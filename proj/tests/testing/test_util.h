#ifndef RFABE_TESTS_TESTING_TEST_UTIL_H_
#define RFABE_TESTS_TESTING_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rfabe/groups.h"
#include "rfabe/policy.h"

namespace rfabe::testing {

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

// "<prefix>0", "<prefix>1", ...
std::vector<std::string> attribute_pool(std::string_view prefix, int count);

// Random AND/OR tree with exactly `leaves` leaves drawn from `pool`.
PolicyAst random_formula(std::mt19937_64& gen, int leaves,
                         const std::vector<std::string>& pool);
// Random tree of depth at most `max_depth`, at most `max_leaves` leaves.
PolicyAst random_formula_bounded(std::mt19937_64& gen, int max_depth,
                                 int max_leaves,
                                 const std::vector<std::string>& pool);

// A satisfying set built by taking every AND branch and one random OR branch.
AttributeSet random_satisfying_set(std::mt19937_64& gen, const PolicyAst& ast);
// Strips attributes from `pool` in random order until the formula stops
// holding; the result is a non-satisfying set that is one attribute short.
AttributeSet near_miss_set(std::mt19937_64& gen, const PolicyAst& ast,
                           const std::vector<std::string>& pool);

// AND of `count` attributes drawn from attribute_pool(prefix, count).
std::string and_chain(std::string_view prefix, int count);

}  // namespace rfabe::testing

#endif  // RFABE_TESTS_TESTING_TEST_UTIL_H_
