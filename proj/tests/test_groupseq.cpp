#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zerosum/groupseq.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace zerosum;

namespace {

Sequence seq_of(const GroupParams& g, std::initializer_list<std::vector<std::uint32_t>> rows) {
  Sequence s(g);
  for (const auto& r : rows) s.push_back(GroupElem(g, r));
  return s;
}

Sequence random_sequence(std::mt19937_64& rng, const GroupParams& g, std::size_t len) {
  std::uniform_int_distribution<std::uint64_t> pick(0, g.order() - 1);
  Sequence s(g);
  for (std::size_t i = 0; i < len; ++i) s.push_back(GroupElem::decode(g, pick(rng)));
  return s;
}

}  // namespace

TEST_CASE("group construction and budget") {
  const GroupParams g(3, 2);
  CHECK(g.order() == 9);
  CHECK_THROWS_AS(GroupParams(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(GroupParams(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(GroupParams(2, 21), BudgetExceeded);
  CHECK(GroupParams(2, 21, std::uint64_t{1} << 21).order() == (std::uint64_t{1} << 21));
  CHECK_THROWS_AS(GroupElem(g, {1, 2, 0}), std::invalid_argument);
  CHECK(GroupElem(g, {4, 5}) == GroupElem(g, {1, 2}));
  for (std::uint64_t c = 0; c < g.order(); ++c) CHECK(GroupElem::decode(g, c).encode() == c);
}

TEST_CASE("elem_add") {
  const GroupParams g(3, 2);
  CHECK(elem_add(GroupElem(g, {1, 2}), GroupElem(g, {2, 2})) == GroupElem(g, {0, 1}));
  const GroupElem a(g, {2, 1});
  CHECK(elem_add(a, GroupElem::zero(g)) == a);
  CHECK(elem_add(a, elem_neg(a)).is_zero());
  CHECK(elem_add(a, GroupElem(g, {1, 2})).is_zero());
  CHECK_THROWS_AS(elem_add(a, GroupElem(GroupParams(2, 2), {1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(Sequence(g).push_back(GroupElem(GroupParams(3, 1), {1})), std::invalid_argument);
}

TEST_CASE("seq_sum") {
  CHECK(seq_sum(Sequence(GroupParams(3, 2))).is_zero());
  const GroupParams c2(2, 1);
  CHECK(seq_sum(seq_of(c2, {{1}, {1}})).is_zero());
  const GroupParams g(3, 2);
  CHECK(seq_sum(seq_of(g, {{1, 1}, {2, 0}, {0, 2}})).is_zero());
}

TEST_CASE("counting examples") {
  const GroupParams c2(2, 1);
  const auto zeros = seq_of(c2, {{0}, {0}, {0}});
  CHECK(count_zero_sum_subsequences(zeros, 2) == 3);
  CHECK(brute_force_count(zeros, 2) == 3);
  const auto s = seq_of(c2, {{1}, {1}, {0}});
  CHECK(count_zero_sum_subsequences(s, 2) == 1);
  CHECK(brute_force_count(s, 2) == 1);
  CHECK(count_zero_sum_subsequences(s, 4) == 0);
  CHECK(brute_force_count(s, 4) == 0);
  CHECK(count_zero_sum_subsequences(s, 0) == 1);
  CHECK(brute_force_count(seq_of(c2, {{0}, {0}}), 2) == 1);

  std::mt19937_64 rng(3);
  const GroupParams g(3, 2);
  for (int i = 0; i < 20; ++i) {
    const auto r = random_sequence(rng, g, 10);
    CHECK(count_zero_sum_subsequences(r, 3) == brute_force_count(r, 3));
  }
}

TEST_CASE("existence examples") {
  const GroupParams c2(2, 1);
  CHECK(has_zero_sum_subsequence(seq_of(c2, {{0}, {0}, {0}}), 3));
  CHECK_FALSE(has_zero_sum_subsequence(seq_of(c2, {{1}, {0}}), 2));
  CHECK_FALSE(has_zero_sum_subsequence(seq_of(c2, {{0}}), 2));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const GroupParams g(std::uniform_int_distribution<std::uint32_t>(2, 5)(rng),
                        std::uniform_int_distribution<std::uint32_t>(1, 2)(rng));
    const auto s = random_sequence(rng, g, std::uniform_int_distribution<std::size_t>(0, 12)(rng));
    const std::size_t L = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    REQUIRE(has_zero_sum_subsequence(s, L) == (count_zero_sum_subsequences(s, L) > 0));
  }
}

TEST_CASE("DP equals brute force: exhaustive over C_2 up to length 6") {
  const GroupParams c2(2, 1);
  for (std::size_t len = 0; len <= 6; ++len) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
      Sequence s(c2);
      for (std::size_t i = 0; i < len; ++i) s.push_back(GroupElem(c2, {static_cast<std::uint32_t>((mask >> i) & 1)}));
      for (std::size_t L = 0; L <= len + 1; ++L) {
        REQUIRE(count_zero_sum_subsequences(s, L) == brute_force_count(s, L));
      }
    }
  }
}

TEST_CASE("DP equals brute force: random sequences over small groups") {
  std::mt19937_64 rng(5);
  const GroupParams groups[] = {GroupParams(2, 1), GroupParams(3, 1), GroupParams(4, 1),
                                GroupParams(2, 2), GroupParams(2, 3)};
  for (const auto& g : groups) {
    for (int i = 0; i < 200; ++i) {
      const auto s = random_sequence(rng, g, std::uniform_int_distribution<std::size_t>(0, 10)(rng));
      const std::size_t L = std::uniform_int_distribution<std::size_t>(0, s.size())(rng);
      REQUIRE(count_zero_sum_subsequences(s, L) == brute_force_count(s, L));
    }
  }
}

TEST_CASE("count is invariant under permutation and automorphisms") {
  std::mt19937_64 rng(17);
  const GroupParams g(3, 3);
  for (int i = 0; i < 50; ++i) {
    auto s = random_sequence(rng, g, 12);
    const std::size_t L = 3 + i % 4;
    const Integer base = count_zero_sum_subsequences(s, L);

    auto elems = s.elements();
    std::shuffle(elems.begin(), elems.end(), rng);
    CHECK(count_zero_sum_subsequences(Sequence(g, elems), L) == base);

    std::vector<std::size_t> perm(g.r());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Sequence permuted(g);
    Sequence negated(g);
    for (const auto& e : s.elements()) {
      std::vector<std::uint32_t> res(g.r());
      for (std::size_t j = 0; j < g.r(); ++j) res[j] = e.residues()[perm[j]];
      permuted.push_back(GroupElem(g, res));
      negated.push_back(elem_neg(e));
    }
    CHECK(count_zero_sum_subsequences(permuted, L) == base);
    CHECK(count_zero_sum_subsequences(negated, L) == base);
  }
}

TEST_CASE("complement identity at L = length") {
  std::mt19937_64 rng(23);
  const GroupParams g(4, 2);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sequence(rng, g, 1 + i % 9);
    const Integer expected = seq_sum(s).is_zero() ? 1 : 0;
    CHECK(count_zero_sum_subsequences(s, s.size()) == expected);
  }
}

TEST_CASE("counts beyond 64 bits use arbitrary precision") {
  const GroupParams c1(1, 1);
  Sequence s(c1);
  for (int i = 0; i < 100; ++i) s.push_back(GroupElem::zero(c1));
  CHECK(count_zero_sum_subsequences(s, 50) == binom(100, 50));
  CHECK(count_zero_sum_subsequences(s, 3) == binom(100, 3));
}

TEST_CASE("brute force budget") {
  const GroupParams c2(2, 1);
  Sequence s(c2);
  for (int i = 0; i < 40; ++i) s.push_back(GroupElem::zero(c2));
  CHECK_THROWS_AS(brute_force_count(s, 20), BudgetExceeded);
}

TEST_CASE("sequence text format") {
  const GroupParams g(3, 2);
  std::istringstream in("# header\n1,2\n\n  0 , 1  # trailing\n2,2\n");
  const Sequence s = parse_sequence(in, g);
  REQUIRE(s.size() == 3);
  CHECK(s.elements()[1] == GroupElem(g, {0, 1}));
  std::ostringstream out;
  write_sequence(out, s);
  CHECK(out.str() == "1,2\n0,1\n2,2\n");
  std::istringstream again(out.str());
  CHECK(parse_sequence(again, g).elements() == s.elements());

  std::istringstream bad_arity("1,2,0\n");
  CHECK_THROWS_AS(parse_sequence(bad_arity, g), std::invalid_argument);
  std::istringstream bad_range("1,3\n");
  CHECK_THROWS_AS(parse_sequence(bad_range, g), std::invalid_argument);
  std::istringstream bad_token("1,x\n");
  CHECK_THROWS_AS(parse_sequence(bad_token, g), std::invalid_argument);
  std::istringstream negative("1,-1\n");
  CHECK_THROWS_AS(parse_sequence(negative, g), std::invalid_argument);
}

TEST_CASE("incremental tracker matches batch existence") {
  std::mt19937_64 rng(29);
  const GroupParams g(2, 3);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sequence(rng, g, 10);
    ZeroSumTracker t(g, 4);
    Sequence prefix(g);
    for (const auto& e : s.elements()) {
      t.push(e.encode());
      prefix.push_back(e);
      REQUIRE(t.has_zero_sum() == has_zero_sum_subsequence(prefix, 4));
    }
  }
}
