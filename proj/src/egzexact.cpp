#include "zerosum/egzexact.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace zerosum {

void EgzQuery::validate() const {
  if (L < 1) throw std::invalid_argument("target length L must be >= 1");
  if (m_max < L) throw std::invalid_argument("m_max must be >= L");
}

ExtremalWitness::ExtremalWitness(Sequence sequence, std::size_t L)
    : sequence_(std::move(sequence)), L_(L) {
  if (has_zero_sum_subsequence(sequence_, L_)) {
    throw std::invalid_argument("sequence contains a zero-sum subsequence of length " +
                                std::to_string(L_));
  }
}

namespace {

// Depth of the canonical prefixes handed out as independent work items.
constexpr std::size_t kPrefixDepth = 2;

class FreeSearch {
 public:
  FreeSearch(std::size_t m, std::size_t L, const GroupParams& group, const SearchOptions& options)
      : m_(m), L_(L), group_(group), options_(options) {
    if (group.order() > kSearchGroupOrderBudget) {
      throw BudgetExceeded("group order " + std::to_string(group.order()) +
                           " exceeds the search budget " + std::to_string(kSearchGroupOrderBudget));
    }
    tables_.reserve(group.order());
    for (std::uint64_t x = 0; x < group.order(); ++x) tables_.push_back(translation_table(group, x));
    // When n | L, translating every element by g changes an L-sum by L*g = 0,
    // so some free multiset of each size contains 0 iff any free one exists.
    first_max_ = (L % group.n() == 0) ? 0 : group.order() - 1;
  }

  FreeSearchResult run() {
    collect_prefixes();
    std::vector<std::optional<std::vector<std::uint64_t>>> found(prefixes_.size());
    winner_.store(prefixes_.size());

    unsigned threads = options_.threads == 0 ? std::thread::hardware_concurrency() : options_.threads;
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(prefixes_.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      try {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= prefixes_.size() || i > winner_.load()) break;
          found[i] = solve_prefix(prefixes_[i].first, prefixes_[i].second, i);
          if (found[i]) {
            std::size_t cur = winner_.load();
            while (i < cur && !winner_.compare_exchange_weak(cur, i)) {
            }
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        winner_.store(0);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    FreeSearchResult result;
    result.nodes = nodes_.load();
    const std::size_t w = winner_.load();
    if (w < prefixes_.size()) {
      Sequence seq(group_);
      for (const auto code : *found[w]) seq.push_back(GroupElem::decode(group_, code));
      result.witness.emplace(std::move(seq), L_);
    }
    return result;
  }

 private:
  void count_node() {
    if (nodes_.fetch_add(1) + 1 > options_.node_budget) {
      throw BudgetExceeded("free-sequence search exceeded " + std::to_string(options_.node_budget) +
                           " nodes at m = " + std::to_string(m_));
    }
  }

  // All free canonical prefixes of length min(m, kPrefixDepth), in lexicographic order.
  void collect_prefixes() {
    const std::size_t depth = std::min(m_, kPrefixDepth);
    std::vector<std::uint64_t> codes;
    ZeroSumTracker root(group_, L_);
    auto rec = [&](auto&& self, const ZeroSumTracker& state) -> void {
      if (codes.size() == depth) {
        prefixes_.emplace_back(codes, state);
        return;
      }
      const std::uint64_t lo = codes.empty() ? 0 : codes.back();
      const std::uint64_t hi = codes.empty() ? first_max_ : group_.order() - 1;
      for (std::uint64_t x = lo; x <= hi; ++x) {
        count_node();
        ZeroSumTracker child = state;
        child.push(tables_[x]);
        if (child.has_zero_sum()) continue;
        codes.push_back(x);
        self(self, child);
        codes.pop_back();
      }
    };
    rec(rec, root);
  }

  std::optional<std::vector<std::uint64_t>> solve_prefix(std::vector<std::uint64_t> codes,
                                                         const ZeroSumTracker& state,
                                                         std::size_t index) {
    std::vector<ZeroSumTracker> stack(m_ + 1, state);
    auto rec = [&](auto&& self, std::size_t depth) -> bool {
      if (codes.size() == m_) return true;
      if (winner_.load() < index) return false;
      for (std::uint64_t x = codes.back(); x < group_.order(); ++x) {
        count_node();
        stack[depth + 1] = stack[depth];
        stack[depth + 1].push(tables_[x]);
        if (stack[depth + 1].has_zero_sum()) continue;
        codes.push_back(x);
        if (self(self, depth + 1)) return true;
        codes.pop_back();
      }
      return false;
    };
    if (rec(rec, 0)) return codes;
    return std::nullopt;
  }

  std::size_t m_;
  std::size_t L_;
  GroupParams group_;
  SearchOptions options_;
  std::vector<std::vector<std::uint64_t>> tables_;
  std::uint64_t first_max_ = 0;
  std::vector<std::pair<std::vector<std::uint64_t>, ZeroSumTracker>> prefixes_;
  std::atomic<std::size_t> winner_{0};
  std::atomic<std::uint64_t> nodes_{0};
};

Sequence zeros(const GroupParams& group, std::size_t m) {
  return Sequence(group, std::vector<GroupElem>(m, GroupElem::zero(group)));
}

}  // namespace

FreeSearchResult search_free_sequence(std::size_t m, std::size_t L, const GroupParams& group,
                                      const SearchOptions& options) {
  if (L < 1) throw std::invalid_argument("target length L must be >= 1");
  if (m < L) return FreeSearchResult{ExtremalWitness(zeros(group, m), L), 0};
  return FreeSearch(m, L, group, options).run();
}

EgzResult compute_s(const EgzQuery& query, const SearchOptions& options) {
  query.validate();
  ExtremalWitness best(zeros(query.group, query.L - 1), query.L);
  for (std::size_t m = query.L; m <= query.m_max; ++m) {
    auto res = search_free_sequence(m, query.L, query.group, options);
    if (!res.witness) return EgzResult{m, std::move(best), res.nodes};
    best = std::move(*res.witness);
  }
  return EgzResult{std::nullopt, std::move(best), 0};
}

}  // namespace zerosum
