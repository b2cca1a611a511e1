#pragma once

// Exact generalized Erdos-Ginzburg-Ziv constants s_L(C_n^r) by exhaustive
// search over multisets.

#include "zerosum/groupseq.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace zerosum {

/// Largest group order the multiset search accepts (it tabulates all
/// n^r x n^r translations).
inline constexpr std::uint64_t kSearchGroupOrderBudget = 4096;

struct EgzQuery {
  std::size_t L = 1;
  GroupParams group{1, 1};
  std::size_t m_max = 1;

  // Throws std::invalid_argument unless L >= 1 and m_max >= L.
  void validate() const;
};

/// A sequence of length m with no zero-sum subsequence of length L.
class ExtremalWitness {
 public:
  /// Re-verifies freeness; throws std::invalid_argument if the sequence has a
  /// zero-sum L-subsequence.
  ExtremalWitness(Sequence sequence, std::size_t L);

  std::size_t m() const { return sequence_.size(); }
  std::size_t L() const { return L_; }
  const Sequence& sequence() const { return sequence_; }

 private:
  Sequence sequence_;
  std::size_t L_;
};

struct SearchOptions {
  std::uint64_t node_budget = 2'000'000'000;  // DFS nodes per exists_free_sequence call
  unsigned threads = 1;                      // 0 = hardware concurrency
};

struct FreeSearchResult {
  std::optional<ExtremalWitness> witness;
  std::uint64_t nodes = 0;
};

/// Finds a free multiset of size m (lexicographically first in canonical
/// nondecreasing code order, after normalisation), or reports that none
/// exists. Throws BudgetExceeded when the node budget runs out.
FreeSearchResult search_free_sequence(std::size_t m, std::size_t L, const GroupParams& group,
                                      const SearchOptions& options = {});

inline std::optional<ExtremalWitness> exists_free_sequence(std::size_t m, std::size_t L,
                                                           const GroupParams& group,
                                                           const SearchOptions& options = {}) {
  return search_free_sequence(m, L, group, options).witness;
}

struct EgzResult {
  /// s_L(C_n^r); empty when a free sequence of length m_max still exists.
  std::optional<std::size_t> s;
  /// Free sequence of length s - 1, or of length m_max when s is unknown.
  ExtremalWitness witness;
  /// DFS nodes spent proving that no free sequence of length s exists.
  std::uint64_t exhaustion_nodes = 0;
};

EgzResult compute_s(const EgzQuery& query, const SearchOptions& options = {});

}  // namespace zerosum
