#ifndef RFABE_POLICY_H_
#define RFABE_POLICY_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rfabe/groups.h"

namespace rfabe {

using AttributeSet = std::set<std::string, std::less<>>;

// Monotone boolean formula over attribute strings.
struct PolicyAst {
  enum class Kind { kLeaf, kAnd, kOr };

  Kind kind = Kind::kLeaf;
  std::string attribute;           // kLeaf only
  std::vector<PolicyAst> children;  // two entries for kAnd / kOr

  static PolicyAst leaf(std::string attribute);
  static PolicyAst all_of(PolicyAst left, PolicyAst right);
  static PolicyAst any_of(PolicyAst left, PolicyAst right);

  bool evaluate(const AttributeSet& attrs) const;
  // Fully parenthesized form; parses back to an equal tree.
  std::string to_string() const;
  // Leaf attributes in left-to-right order, duplicates kept.
  std::vector<std::string> leaves() const;
  std::size_t depth() const;

  friend bool operator==(const PolicyAst&, const PolicyAst&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar: attr := [A-Za-z0-9_:.-]+, keywords AND / OR (case-sensitive),
// AND binds tighter than OR, both left-associative, parentheses group.
PolicyAst parse_policy(std::string_view text);

bool is_valid_attribute(std::string_view attr);

// Access structure as a monotone span program: an attribute set satisfies it
// iff the rows labelled by its attributes span (1, 0, ..., 0).
class MspPolicy {
 public:
  // `entries` is row-major, rows * cols long; one label per row.
  MspPolicy(std::size_t rows, std::size_t cols, std::vector<Scalar> entries,
            std::vector<std::string> labels);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Scalar& at(std::size_t row, std::size_t col) const {
    return entries_[row * cols_ + col];
  }
  std::span<const Scalar> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  const std::vector<Scalar>& entries() const { return entries_; }
  // Columns where row i is nonzero, ascending.
  std::span<const std::uint32_t> nonzero_columns(std::size_t i) const {
    return {nonzero_.data() + nonzero_start_[i], nonzero_start_[i + 1] - nonzero_start_[i]};
  }

  // Attribute labelling row i.
  const std::string& attribute(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  // 1-based occurrence index of row i's attribute among rows 0..i.
  std::uint32_t occurrence(std::size_t i) const { return occurrence_[i]; }
  // Largest occurrence index: how many times the most reused attribute
  // appears.
  std::uint32_t max_reuse() const { return max_reuse_; }

  AttributeSet attributes() const;
  // Inner product of row i with `v` (length cols()).
  Scalar row_dot(std::size_t i, std::span<const Scalar> v) const;

  friend bool operator==(const MspPolicy& a, const MspPolicy& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> entries_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> occurrence_;
  std::uint32_t max_reuse_ = 0;
  std::vector<std::uint32_t> nonzero_;
  std::vector<std::size_t> nonzero_start_;
};

// Vector-labelling compilation of a formula into a span program.
MspPolicy compile_msp(const PolicyAst& ast);
MspPolicy compile_policy(std::string_view text);

struct RowCoefficient {
  std::size_t row;
  Scalar value;
  friend bool operator==(const RowCoefficient&, const RowCoefficient&) = default;
};
using CoefficientSolution = std::vector<RowCoefficient>;

// Finds coefficients over the rows labelled by `attrs` that combine to
// (1, 0, ..., 0). Returns nullopt when the set does not satisfy the policy.
// Deterministic: Gauss-Jordan on the transposed system, lowest-index pivot,
// free variables fixed at zero; only nonzero coefficients are reported.
std::optional<CoefficientSolution> solve_coefficients(
    const MspPolicy& policy, const AttributeSet& attrs);

bool satisfies(const MspPolicy& policy, const AttributeSet& attrs);

// Block composition realising `base AND added`:
//   [ M  | -M[:,0]  0 ]
//   [ 0  |      M~    ]
// Attribute sets of the two inputs must be disjoint.
MspPolicy and_compose(const MspPolicy& base, const MspPolicy& added);

// True iff "attrs satisfies both inputs" agrees with "attrs satisfies their
// AND-composition". Intended as a test oracle; always true for valid input.
bool check_and_composition(const MspPolicy& base, const MspPolicy& added,
                           const AttributeSet& attrs);

}  // namespace rfabe

#endif  // RFABE_POLICY_H_
