#include "zerosum/groupseq.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <utility>

namespace zerosum {

GroupParams::GroupParams(std::uint32_t n, std::uint32_t r, std::uint64_t order_budget)
    : n_(n), r_(r), order_(1) {
  if (n < 1) throw std::invalid_argument("group modulus n must be >= 1");
  if (r < 1) throw std::invalid_argument("group rank r must be >= 1");
  for (std::uint32_t i = 0; i < r; ++i) {
    if (order_ > order_budget / n) {
      throw BudgetExceeded("group order " + std::to_string(n) + "^" + std::to_string(r) +
                           " exceeds budget " + std::to_string(order_budget));
    }
    order_ *= n;
  }
}

GroupElem::GroupElem(const GroupParams& group, std::vector<std::uint32_t> residues)
    : group_(group), residues_(std::move(residues)) {
  if (residues_.size() != group_.r()) {
    throw std::invalid_argument("element has " + std::to_string(residues_.size()) +
                                " residues, group rank is " + std::to_string(group_.r()));
  }
  for (auto& v : residues_) v %= group_.n();
}

GroupElem GroupElem::zero(const GroupParams& group) {
  return GroupElem(group, std::vector<std::uint32_t>(group.r(), 0));
}

GroupElem GroupElem::decode(const GroupParams& group, std::uint64_t code) {
  if (code >= group.order()) throw std::out_of_range("element code outside [0, n^r)");
  std::vector<std::uint32_t> res(group.r());
  for (auto& v : res) {
    v = static_cast<std::uint32_t>(code % group.n());
    code /= group.n();
  }
  return GroupElem(group, std::move(res));
}

std::uint64_t GroupElem::encode() const {
  std::uint64_t code = 0;
  for (auto it = residues_.rbegin(); it != residues_.rend(); ++it) code = code * group_.n() + *it;
  return code;
}

bool GroupElem::is_zero() const {
  return std::all_of(residues_.begin(), residues_.end(), [](auto v) { return v == 0; });
}

GroupElem elem_add(const GroupElem& a, const GroupElem& b) {
  if (!(a.group() == b.group())) throw std::invalid_argument("adding elements of different groups");
  const auto n = a.group().n();
  std::vector<std::uint32_t> out(a.residues().begin(), a.residues().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] + b.residues()[i]) % n;
  return GroupElem(a.group(), std::move(out));
}

GroupElem elem_neg(const GroupElem& a) {
  const auto n = a.group().n();
  std::vector<std::uint32_t> out(a.residues().begin(), a.residues().end());
  for (auto& v : out) v = (n - v) % n;
  return GroupElem(a.group(), std::move(out));
}

Sequence::Sequence(GroupParams group, std::vector<GroupElem> elements) : group_(group) {
  elements_.reserve(elements.size());
  for (auto& e : elements) push_back(std::move(e));
}

void Sequence::push_back(GroupElem e) {
  if (!(e.group() == group_)) throw std::invalid_argument("sequence element from a different group");
  elements_.push_back(std::move(e));
}

std::vector<std::uint64_t> Sequence::codes() const {
  std::vector<std::uint64_t> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(e.encode());
  return out;
}

GroupElem seq_sum(const Sequence& s) {
  GroupElem acc = GroupElem::zero(s.group());
  for (const auto& e : s.elements()) acc = elem_add(acc, e);
  return acc;
}

std::vector<std::uint64_t> translation_table(const GroupParams& group, std::uint64_t x) {
  const auto n = group.n();
  std::vector<std::uint32_t> xd(group.r());
  for (auto& d : xd) {
    d = static_cast<std::uint32_t>(x % n);
    x /= n;
  }
  std::vector<std::uint64_t> table(group.order());
  std::vector<std::uint32_t> gd(group.r(), 0);
  for (std::uint64_t g = 0; g < group.order(); ++g) {
    std::uint64_t code = 0;
    for (std::size_t i = group.r(); i-- > 0;) code = code * n + (gd[i] + xd[i]) % n;
    table[g] = code;
    // Increment the mixed-radix digits of g.
    for (std::size_t i = 0; i < gd.size(); ++i) {
      if (++gd[i] < n) break;
      gd[i] = 0;
    }
  }
  return table;
}

namespace {

template <class Count>
Integer count_dp(const Sequence& s, std::size_t L) {
  const auto& group = s.group();
  const std::uint64_t order = group.order();
  std::vector<Count> table((L + 1) * order, Count(0));
  table[0] = Count(1);
  std::size_t seen = 0;
  for (const auto code : s.codes()) {
    const auto shift = translation_table(group, code);
    ++seen;
    for (std::size_t c = std::min(L, seen); c >= 1; --c) {
      const Count* from = &table[(c - 1) * order];
      Count* to = &table[c * order];
      for (std::uint64_t g = 0; g < order; ++g) {
        if (from[g] != 0) to[shift[g]] += from[g];
      }
    }
  }
  if constexpr (std::is_same_v<Count, Integer>) {
    return table[L * order];
  } else {
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(Count), 0, 0, &table[L * order]);
    return out;
  }
}

}  // namespace

Integer count_zero_sum_subsequences(const Sequence& s, std::size_t L) {
  if (L > s.size()) return Integer(0);
  if (L == 0) return Integer(1);
  // Every table entry at count c is at most C(m, c).
  Integer widest;
  for (std::size_t c = 0; c <= L; ++c) widest = std::max(widest, binom(s.size(), c));
  if (mpz_sizeinbase(widest.get_mpz_t(), 2) < 64) return count_dp<std::uint64_t>(s, L);
  return count_dp<Integer>(s, L);
}

Integer brute_force_count(const Sequence& s, std::size_t L) {
  const std::size_t m = s.size();
  if (L > m) return Integer(0);
  if (binom(m, L) > kBruteForceSubsetBudget) {
    throw BudgetExceeded("brute-force enumeration of C(" + std::to_string(m) + ", " +
                         std::to_string(L) + ") subsets exceeds budget");
  }
  std::vector<std::size_t> idx(L);
  for (std::size_t i = 0; i < L; ++i) idx[i] = i;
  Integer count;
  const GroupElem zero = GroupElem::zero(s.group());
  while (true) {
    GroupElem acc = zero;
    for (const auto i : idx) acc = elem_add(acc, s.elements()[i]);
    if (acc.is_zero()) ++count;
    // Next combination in lexicographic order.
    std::size_t pos = L;
    while (pos > 0 && idx[pos - 1] == m - L + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < L; ++j) idx[j] = idx[j - 1] + 1;
  }
  return count;
}

ZeroSumTracker::ZeroSumTracker(const GroupParams& group, std::size_t L)
    : group_(group), L_(L), words_((group.order() + 63) / 64), bits_((L + 1) * words_, 0) {
  bits_[0] = 1;  // empty subset, sum 0
}

bool ZeroSumTracker::reachable(std::size_t count, std::uint64_t code) const {
  return (bits_[count * words_ + code / 64] >> (code % 64)) & 1U;
}

void ZeroSumTracker::push(std::uint64_t code) { push(translation_table(group_, code)); }

void ZeroSumTracker::push(std::span<const std::uint64_t> shift) {
  if (shift.size() != group_.order()) throw std::invalid_argument("translation table size mismatch");
  ++pushed_;
  for (std::size_t c = std::min(L_, pushed_); c >= 1; --c) {
    const std::uint64_t* from = &bits_[(c - 1) * words_];
    std::uint64_t* to = &bits_[c * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t word = from[w]; word != 0; word &= word - 1) {
        const std::uint64_t g = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
        const std::uint64_t t = shift[g];
        to[t / 64] |= std::uint64_t{1} << (t % 64);
      }
    }
  }
}

bool ZeroSumTracker::has_zero_sum() const { return reachable(L_, 0); }

bool has_zero_sum_subsequence(const Sequence& s, std::size_t L) {
  if (L > s.size()) return false;
  ZeroSumTracker tracker(s.group(), L);
  for (const auto code : s.codes()) {
    tracker.push(code);
    if (tracker.has_zero_sum()) return true;
  }
  return tracker.has_zero_sum();
}

Sequence parse_sequence(std::istream& in, const GroupParams& group) {
  Sequence seq(group);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::uint32_t> residues;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      const auto e = field.find_last_not_of(" \t\r");
      const std::string tok = b == std::string::npos ? "" : field.substr(b, e - b + 1);
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (tok.empty() || used != tok.size() || tok.front() == '-') {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad residue '" + tok + "'");
      }
      if (v >= group.n()) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": residue " + tok +
                                    " outside [0, " + std::to_string(group.n()) + ")");
      }
      residues.push_back(static_cast<std::uint32_t>(v));
    }
    if (residues.size() != group.r()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(group.r()) + " residues, got " +
                                  std::to_string(residues.size()));
    }
    seq.push_back(GroupElem(group, std::move(residues)));
  }
  return seq;
}

void write_sequence(std::ostream& out, const Sequence& s) {
  for (const auto& e : s.elements()) {
    const auto res = e.residues();
    for (std::size_t i = 0; i < res.size(); ++i) out << (i ? "," : "") << res[i];
    out << '\n';
  }
}

}  // namespace zerosum
