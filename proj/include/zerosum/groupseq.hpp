#pragma once

// Elements and sequences over C_n^r and zero-sum subsequence counting.
//
// A "subsequence" is an index subset: repeated values at different positions
// are different subsequences.

#include "zerosum/exactmath.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerosum {

/// Raised when a computation would exceed a configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultGroupOrderBudget = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kBruteForceSubsetBudget = 10'000'000;

/// The group C_n^r. Elements are encoded as mixed-radix integers in [0, n^r)
/// with the first coordinate least significant.
class GroupParams {
 public:
  GroupParams(std::uint32_t n, std::uint32_t r,
              std::uint64_t order_budget = kDefaultGroupOrderBudget);

  std::uint32_t n() const { return n_; }
  std::uint32_t r() const { return r_; }
  std::uint64_t order() const { return order_; }

  friend bool operator==(const GroupParams& a, const GroupParams& b) {
    return a.n_ == b.n_ && a.r_ == b.r_;
  }

 private:
  std::uint32_t n_;
  std::uint32_t r_;
  std::uint64_t order_;
};

class GroupElem {
 public:
  /// Residues are reduced mod n. Throws std::invalid_argument on length != r.
  GroupElem(const GroupParams& group, std::vector<std::uint32_t> residues);
  static GroupElem zero(const GroupParams& group);
  static GroupElem decode(const GroupParams& group, std::uint64_t code);

  const GroupParams& group() const { return group_; }
  std::span<const std::uint32_t> residues() const { return residues_; }
  std::uint64_t encode() const;
  bool is_zero() const;

  friend bool operator==(const GroupElem& a, const GroupElem& b) {
    return a.group_ == b.group_ && a.residues_ == b.residues_;
  }

 private:
  GroupParams group_;
  std::vector<std::uint32_t> residues_;
};

/// Componentwise sum mod n. Throws std::invalid_argument on mismatched groups.
GroupElem elem_add(const GroupElem& a, const GroupElem& b);
GroupElem elem_neg(const GroupElem& a);

class Sequence {
 public:
  explicit Sequence(GroupParams group) : group_(group) {}
  Sequence(GroupParams group, std::vector<GroupElem> elements);

  const GroupParams& group() const { return group_; }
  const std::vector<GroupElem>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  void push_back(GroupElem e);
  std::vector<std::uint64_t> codes() const;

 private:
  GroupParams group_;
  std::vector<GroupElem> elements_;
};

GroupElem seq_sum(const Sequence& s);

/// Exact number of size-L index subsets summing to zero. Dynamic programme
/// over (chosen count, partial sum), O(|s| L n^r).
Integer count_zero_sum_subsequences(const Sequence& s, std::size_t L);

/// Same contract by explicit subset enumeration; throws BudgetExceeded when
/// C(|s|, L) > kBruteForceSubsetBudget.
Integer brute_force_count(const Sequence& s, std::size_t L);

/// True iff some size-L index subset sums to zero (boolean reachability).
bool has_zero_sum_subsequence(const Sequence& s, std::size_t L);

/// table[g] = code of (g + x) for every code g of the group.
std::vector<std::uint64_t> translation_table(const GroupParams& group, std::uint64_t x);

/// Incremental reachability of (count, sum) pairs, used by search code that
/// grows a sequence one element at a time.
class ZeroSumTracker {
 public:
  ZeroSumTracker(const GroupParams& group, std::size_t L);

  /// Adds the element with the given code to the underlying sequence.
  void push(std::uint64_t code);
  /// Same, with the element's precomputed translation_table.
  void push(std::span<const std::uint64_t> shift);
  /// True iff some L-subset of the pushed elements sums to zero.
  bool has_zero_sum() const;
  std::size_t size() const { return pushed_; }

 private:
  bool reachable(std::size_t count, std::uint64_t code) const;

  GroupParams group_;
  std::size_t L_;
  std::size_t words_;
  std::size_t pushed_ = 0;
  std::vector<std::uint64_t> bits_;  // (L+1) rows of n^r bits
};

/// Text format: one element per line, comma-separated residues, '#' starts a
/// comment, blank lines ignored. Throws std::invalid_argument with a line
/// number on malformed input (wrong arity, residue outside [0, n)).
Sequence parse_sequence(std::istream& in, const GroupParams& group);
void write_sequence(std::ostream& out, const Sequence& s);

}  // namespace zerosum
