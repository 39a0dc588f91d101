#include "testing/test_util.h"

#include <algorithm>
#include <stdexcept>

namespace rfabe::testing {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace rfabe::testing

namespace rfabe::testing {

std::vector<std::string> attribute_pool(std::string_view prefix, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

PolicyAst random_formula(std::mt19937_64& gen, int leaves,
                         const std::vector<std::string>& pool) {
  if (leaves <= 1) return PolicyAst::leaf(pool[gen() % pool.size()]);
  const int left = 1 + static_cast<int>(gen() % (leaves - 1));
  PolicyAst a = random_formula(gen, left, pool);
  PolicyAst b = random_formula(gen, leaves - left, pool);
  return (gen() & 1) ? PolicyAst::all_of(std::move(a), std::move(b))
                     : PolicyAst::any_of(std::move(a), std::move(b));
}

namespace {

PolicyAst bounded(std::mt19937_64& gen, int depth, int& budget,
                  const std::vector<std::string>& pool) {
  if (depth == 0 || budget <= 1 || gen() % 4 == 0) {
    --budget;
    return PolicyAst::leaf(pool[gen() % pool.size()]);
  }
  --budget;  // reserve one leaf for the right subtree
  PolicyAst a = bounded(gen, depth - 1, budget, pool);
  ++budget;
  PolicyAst b = bounded(gen, depth - 1, budget, pool);
  return (gen() & 1) ? PolicyAst::all_of(std::move(a), std::move(b))
                     : PolicyAst::any_of(std::move(a), std::move(b));
}

}  // namespace

PolicyAst random_formula_bounded(std::mt19937_64& gen, int max_depth,
                                 int max_leaves,
                                 const std::vector<std::string>& pool) {
  int budget = max_leaves;
  return bounded(gen, max_depth, budget, pool);
}

AttributeSet random_satisfying_set(std::mt19937_64& gen, const PolicyAst& ast) {
  switch (ast.kind) {
    case PolicyAst::Kind::kLeaf:
      return {ast.attribute};
    case PolicyAst::Kind::kOr:
      return random_satisfying_set(gen, ast.children[gen() & 1]);
    case PolicyAst::Kind::kAnd: {
      AttributeSet out = random_satisfying_set(gen, ast.children[0]);
      out.merge(random_satisfying_set(gen, ast.children[1]));
      return out;
    }
  }
  return {};
}

AttributeSet near_miss_set(std::mt19937_64& gen, const PolicyAst& ast,
                           const std::vector<std::string>& pool) {
  std::vector<std::string> order = pool;
  std::shuffle(order.begin(), order.end(), gen);
  AttributeSet set(order.begin(), order.end());
  for (const auto& a : order) {
    if (!ast.evaluate(set)) break;
    set.erase(a);
  }
  return set;
}

std::string and_chain(std::string_view prefix, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i > 0) out += " AND ";
    out += std::string(prefix) + std::to_string(i);
  }
  return out;
}

}  // namespace rfabe::testing
