#include <algorithm>
#include <map>

#include "rfabe/policy.h"

namespace rfabe {
namespace {

// Sparse equation: sorted (unknown, coefficient) pairs plus right-hand side.
struct Equation {
  std::vector<std::pair<std::uint32_t, Scalar>> terms;
  Scalar rhs;

  const Scalar* find(std::uint32_t u) const {
    auto it = std::lower_bound(
        terms.begin(), terms.end(), u,
        [](const auto& t, std::uint32_t key) { return t.first < key; });
    if (it == terms.end() || it->first != u) return nullptr;
    return &it->second;
  }
};

// factor * x, skipping the multiplication for the common factors +1 and -1.
class Multiplier {
 public:
  explicit Multiplier(const Scalar& factor)
      : factor_(factor), one_(factor.is_one()), minus_one_((-factor).is_one()) {}
  Scalar operator()(const Scalar& x) const {
    if (one_) return x;
    if (minus_one_) return -x;
    return factor_ * x;
  }

 private:
  Scalar factor_;
  bool one_;
  bool minus_one_;
};

// target -= factor * source. Appends to `added` every unknown that newly
// appears in target.
void subtract_scaled(Equation& target, const Equation& source,
                     const Scalar& factor, std::vector<std::uint32_t>& added) {
  const Multiplier mul(factor);
  std::vector<std::pair<std::uint32_t, Scalar>> merged;
  merged.reserve(target.terms.size() + source.terms.size());
  auto a = target.terms.begin();
  auto b = source.terms.begin();
  while (a != target.terms.end() || b != source.terms.end()) {
    if (b == source.terms.end() || (a != target.terms.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == target.terms.end() || b->first < a->first) {
      added.push_back(b->first);
      merged.emplace_back(b->first, -mul(b->second));
      ++b;
    } else {
      Scalar v = a->second - mul(b->second);
      if (!v.is_zero()) merged.emplace_back(a->first, v);
      ++a;
      ++b;
    }
  }
  target.terms = std::move(merged);
  if (!source.rhs.is_zero()) target.rhs = target.rhs - mul(source.rhs);
}

void scale(Equation& eq, const Scalar& factor) {
  const Multiplier mul(factor);
  for (auto& t : eq.terms) t.second = mul(t.second);
  eq.rhs = mul(eq.rhs);
}

class Labeller {
 public:
  void visit(const PolicyAst& node, std::vector<int> vec) {
    switch (node.kind) {
      case PolicyAst::Kind::kLeaf:
        rows_.push_back(std::move(vec));
        labels_.push_back(node.attribute);
        return;
      case PolicyAst::Kind::kOr:
        visit(node.children[0], vec);
        visit(node.children[1], std::move(vec));
        return;
      case PolicyAst::Kind::kAnd: {
        std::vector<int> left = vec;
        left.resize(counter_, 0);
        left.push_back(1);
        std::vector<int> right(counter_, 0);
        right.push_back(-1);
        ++counter_;
        visit(node.children[0], std::move(left));
        visit(node.children[1], std::move(right));
        return;
      }
    }
  }

  MspPolicy finish() && {
    std::vector<Scalar> entries;
    entries.reserve(rows_.size() * counter_);
    for (const auto& r : rows_) {
      for (std::size_t j = 0; j < counter_; ++j) {
        entries.push_back(j < r.size() ? Scalar::from_i64(r[j]) : Scalar());
      }
    }
    return MspPolicy(rows_.size(), counter_, std::move(entries),
                     std::move(labels_));
  }

 private:
  std::size_t counter_ = 1;
  std::vector<std::vector<int>> rows_;
  std::vector<std::string> labels_;
};

}  // namespace

MspPolicy::MspPolicy(std::size_t rows, std::size_t cols,
                     std::vector<Scalar> entries,
                     std::vector<std::string> labels)
    : rows_(rows),
      cols_(cols),
      entries_(std::move(entries)),
      labels_(std::move(labels)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("span program must have at least one row and column");
  }
  if (entries_.size() != rows_ * cols_ || labels_.size() != rows_) {
    throw std::invalid_argument("span program dimensions do not match");
  }
  std::map<std::string_view, std::uint32_t> seen;
  occurrence_.reserve(rows_);
  for (const auto& label : labels_) {
    if (!is_valid_attribute(label)) {
      throw std::invalid_argument("invalid attribute '" + label + "'");
    }
    const std::uint32_t k = ++seen[label];
    occurrence_.push_back(k);
    max_reuse_ = std::max(max_reuse_, k);
  }
  nonzero_start_.reserve(rows_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    nonzero_start_.push_back(nonzero_.size());
    for (std::uint32_t j = 0; j < cols_; ++j) {
      if (!at(i, j).is_zero()) nonzero_.push_back(j);
    }
  }
  nonzero_start_.push_back(nonzero_.size());
}

AttributeSet MspPolicy::attributes() const {
  return AttributeSet(labels_.begin(), labels_.end());
}

Scalar MspPolicy::row_dot(std::size_t i, std::span<const Scalar> v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  Scalar acc;
  for (std::uint32_t j : nonzero_columns(i)) acc = acc + at(i, j) * v[j];
  return acc;
}

bool operator==(const MspPolicy& a, const MspPolicy& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_ &&
         a.labels_ == b.labels_;
}

MspPolicy compile_msp(const PolicyAst& ast) {
  Labeller labeller;
  labeller.visit(ast, {1});
  return std::move(labeller).finish();
}

MspPolicy compile_policy(std::string_view text) {
  return compile_msp(parse_policy(text));
}

std::optional<CoefficientSolution> solve_coefficients(
    const MspPolicy& policy, const AttributeSet& attrs) {
  std::vector<std::size_t> unknown_rows;
  for (std::size_t i = 0; i < policy.rows(); ++i) {
    if (attrs.contains(policy.attribute(i))) unknown_rows.push_back(i);
  }
  const std::size_t n_eq = policy.cols();
  const std::size_t n_unk = unknown_rows.size();

  // Column j of the selected rows gives equation j; only column 0 has a
  // nonzero target.
  std::vector<Equation> eqs(n_eq);
  std::vector<std::vector<std::uint32_t>> occurs(n_unk);
  for (std::uint32_t u = 0; u < n_unk; ++u) {
    const std::size_t row = unknown_rows[u];
    for (std::uint32_t j : policy.nonzero_columns(row)) {
      eqs[j].terms.emplace_back(u, policy.at(row, j));
      occurs[u].push_back(j);
    }
  }
  eqs[0].rhs = Scalar::from_u64(1);

  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> pivot_eq(n_unk, kNone);
  std::vector<bool> used(n_eq, false);
  std::vector<std::uint32_t> added;

  for (std::uint32_t u = 0; u < n_unk; ++u) {
    std::uint32_t best = kNone;
    for (std::uint32_t e : occurs[u]) {
      if (!used[e] && e < best && eqs[e].find(u) != nullptr) best = e;
    }
    if (best == kNone) continue;  // free unknown, stays zero
    used[best] = true;
    pivot_eq[u] = best;
    Equation& piv = eqs[best];
    const Scalar lead = *piv.find(u);
    // Labelled matrices only hold 0, 1 and -1; -1 is its own inverse.
    if (!lead.is_one()) scale(piv, (-lead).is_one() ? lead : lead.inverse());

    std::vector<std::uint32_t> targets = occurs[u];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (std::uint32_t f : targets) {
      if (f == best) continue;
      const Scalar* c = eqs[f].find(u);
      if (c == nullptr) continue;
      added.clear();
      const Scalar factor = *c;
      subtract_scaled(eqs[f], piv, factor, added);
      for (std::uint32_t v : added) occurs[v].push_back(f);
    }
  }

  // Rows without a pivot were reduced to 0 = rhs.
  for (std::size_t e = 0; e < n_eq; ++e) {
    if (!used[e] && !eqs[e].rhs.is_zero()) return std::nullopt;
  }

  CoefficientSolution out;
  for (std::uint32_t u = 0; u < n_unk; ++u) {
    if (pivot_eq[u] == kNone) continue;
    const Scalar& v = eqs[pivot_eq[u]].rhs;
    if (!v.is_zero()) out.push_back({unknown_rows[u], v});
  }
  return out;
}

bool satisfies(const MspPolicy& policy, const AttributeSet& attrs) {
  return solve_coefficients(policy, attrs).has_value();
}

MspPolicy and_compose(const MspPolicy& base, const MspPolicy& added) {
  for (const auto& a : added.labels()) {
    if (std::find(base.labels().begin(), base.labels().end(), a) !=
        base.labels().end()) {
      throw std::invalid_argument("attribute '" + a +
                                  "' appears in both policies");
    }
  }
  const std::size_t rows = base.rows() + added.rows();
  const std::size_t cols = base.cols() + added.cols();
  std::vector<Scalar> entries(rows * cols);
  for (std::size_t i = 0; i < base.rows(); ++i) {
    for (std::size_t j = 0; j < base.cols(); ++j) {
      entries[i * cols + j] = base.at(i, j);
    }
    entries[i * cols + base.cols()] = Scalar() - base.at(i, 0);
  }
  for (std::size_t i = 0; i < added.rows(); ++i) {
    for (std::size_t j = 0; j < added.cols(); ++j) {
      entries[(base.rows() + i) * cols + base.cols() + j] = added.at(i, j);
    }
  }
  std::vector<std::string> labels = base.labels();
  labels.insert(labels.end(), added.labels().begin(), added.labels().end());
  return MspPolicy(rows, cols, std::move(entries), std::move(labels));
}

bool check_and_composition(const MspPolicy& base, const MspPolicy& added,
                           const AttributeSet& attrs) {
  const bool both = satisfies(base, attrs) && satisfies(added, attrs);
  return both == satisfies(and_compose(base, added), attrs);
}

}  // namespace rfabe
