#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "ostat/combinatorics.hpp"
#include "support.hpp"

using namespace ostat;

namespace {

// Brute-force oracle: every tuple in [0, m]^k, filtered by the set's
// defining inequalities, in lexicographic order.
std::vector<std::vector<int>> brute_index_set(const std::vector<int>& n, int m) {
  const int k = static_cast<int>(n.size());
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(k), 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      for (int j = 0; j < k; ++j) {
        if (t[static_cast<std::size_t>(j)] < n[static_cast<std::size_t>(j)]) return;
        if (j > 0 && t[static_cast<std::size_t>(j)] < t[static_cast<std::size_t>(j - 1)]) return;
      }
      std::vector<int> v{0};
      v.insert(v.end(), t.begin(), t.end());
      v.push_back(m);
      out.push_back(v);
      return;
    }
    for (int x = 0; x <= m; ++x) {
      t[static_cast<std::size_t>(pos)] = x;
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

// All integer vectors in the box [0, caps], with the given total, in
// descending lexicographic order.
std::vector<std::vector<int>> brute_compositions(const std::vector<int>& caps, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(caps.size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos == caps.size()) {
      if (left == 0) out.push_back(v);
      return;
    }
    for (int x = caps[pos]; x >= 0; --x) {
      v[pos] = x;
      rec(pos + 1, left - x);
    }
  };
  rec(0, total);
  return out;
}

std::vector<int> first_k(int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = j + 1;
  return out;
}

}  // namespace

TEST(IndexSet, SmallEnumerations) {
  const auto one = enumerate_index_vectors(std::vector<int>{1}, 3);
  ASSERT_EQ(one.size(), 3u);
  EXPECT_EQ(one[0], IndexVector({0, 1, 3}));
  EXPECT_EQ(one[1], IndexVector({0, 2, 3}));
  EXPECT_EQ(one[2], IndexVector({0, 3, 3}));

  EXPECT_EQ(enumerate_index_vectors(std::vector<int>{1, 2}, 4).size(), 9u);

  const auto top = enumerate_index_vectors(std::vector<int>{5}, 5);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0], IndexVector({0, 5, 5}));
}

TEST(IndexSet, StreamMatchesBruteForceInOrder) {
  for (int m = 1; m <= 7; ++m) {
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> n;
      for (int b = 0; b < m; ++b) {
        if (mask & (1 << b)) n.push_back(b + 1);
      }
      if (n.size() > 4) continue;
      const auto expected = brute_index_set(n, m);
      const auto got = enumerate_index_vectors(n, m);
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        ASSERT_EQ(std::vector<int>(got[i].entries().begin(), got[i].entries().end()), expected[i]);
        ASSERT_TRUE(got[i].is_member_of(n, m));
      }
    }
  }
}

TEST(IndexSet, StreamLengthEqualsCountForAllSubsetsUpTo12) {
  for (int m = 1; m <= 12; ++m) {
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> n;
      for (int b = 0; b < m; ++b) {
        if (mask & (1 << b)) n.push_back(b + 1);
      }
      IndexVectorStream s(n, m);
      std::uint64_t len = 0;
      while (s.next()) ++len;
      ASSERT_EQ(CountValue(len), count_nu(n, m)) << "m=" << m << " mask=" << mask;
    }
  }
}

TEST(IndexSet, RejectsBadIndices) {
  EXPECT_THROW(IndexVectorStream(std::vector<int>{2, 1}, 3), DomainError);
  EXPECT_THROW(IndexVectorStream(std::vector<int>{1, 1}, 3), DomainError);
  EXPECT_THROW(IndexVectorStream(std::vector<int>{0}, 3), DomainError);
  EXPECT_THROW(IndexVectorStream(std::vector<int>{4}, 3), DomainError);
  EXPECT_THROW(count_nu(std::vector<int>{}, 3), DomainError);
}

TEST(Counts, NuValues) {
  for (int m = 1; m <= 30; ++m) EXPECT_EQ(count_nu(std::vector<int>{1}, m), m);
  EXPECT_EQ(count_nu(std::vector<int>{1, 2}, 4), 9);
  // binom(6,2) * (1 - 2/5) = 15 * 3/5 = 9.
  EXPECT_EQ(binomial(6, 2) * 3 / 5, 9);
  EXPECT_EQ(count_nu(first_k(3), 3), 5);
  EXPECT_EQ(count_nu(first_k(10), 10), 16796);
}

TEST(Counts, CatalanNumbers) {
  EXPECT_EQ(catalan_number(0), 1);
  EXPECT_EQ(catalan_number(3), 5);
  EXPECT_EQ(catalan_number(10), 16796);
  // binom(48,24) / 25, past 64-bit binomials.
  EXPECT_EQ(catalan_number(24), CountValue("1289904147324"));
  EXPECT_EQ(binomial(48, 24), CountValue("32247603683100"));
  EXPECT_EQ(catalan_number(40), CountValue("2622127042276492108820"));
}

TEST(Counts, CatalanTriangle) {
  EXPECT_EQ(catalan_triangle(1, 5), 5);
  EXPECT_EQ(catalan_triangle(3, 3), 5);
  EXPECT_EQ(catalan_triangle(2, 4), 9);
  EXPECT_THROW(catalan_triangle(4, 3), DomainError);
  EXPECT_THROW(catalan_triangle(0, 3), DomainError);
  for (int m = 1; m <= 30; ++m) {
    for (int k = 1; k <= m; ++k) {
      const auto a = catalan_triangle(k, m);
      // binom(m+k,k) (1 - k/(m+1)) in exact rational form.
      ASSERT_EQ(a * (m + 1), binomial(m + k, k) * (m + 1 - k)) << k << "," << m;
      ASSERT_EQ(a, count_nu(first_k(k), m));
    }
    EXPECT_EQ(catalan_triangle(m, m), catalan_number(m));
  }
}

TEST(Counts, MonotoneBoundChain) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = ostat::testing::uniform_int(rng, 1, 12);
    const int k = ostat::testing::uniform_int(rng, 1, m);
    const auto n = ostat::testing::random_indices(rng, k, m);
    const auto nu = count_nu(n, m);
    ASSERT_LE(nu, count_nu(first_k(k), m));
    ASSERT_LE(count_nu(first_k(k), m), count_nu(first_k(m), m));
    ASSERT_EQ(count_nu(first_k(m), m), catalan_number(m));
  }
}

TEST(AllocationVectors, Examples) {
  const auto a = enumerate_allocation_vectors(IndexVector({0, 2, 3}), 1);
  EXPECT_EQ(a, (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
  for (int n = 0; n <= 6; ++n) {
    EXPECT_EQ(enumerate_allocation_vectors(IndexVector({0, 6, 6}), n), (std::vector<std::vector<int>>{{n, 0}}));
  }
  const auto b = enumerate_allocation_vectors(IndexVector({0, 1, 2, 3}), 2);
  EXPECT_EQ(b, (std::vector<std::vector<int>>{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
  EXPECT_THROW(AllocationVectorStream(IndexVector({0, 1, 3}), 4), DomainError);
  EXPECT_THROW(AllocationVectorStream(IndexVector({0, 1, 3}), -1), DomainError);
}

TEST(AllocationVectors, MatchBruteForceAndBound) {
  for (int m = 1; m <= 8; ++m) {
    for (int k = 1; k <= std::min(m, 3); ++k) {
      for (const auto& iv : enumerate_index_vectors(first_k(k), m)) {
        const auto caps = iv.blocks();
        for (int n = 0; n <= m; ++n) {
          const auto got = enumerate_allocation_vectors(iv, n);
          ASSERT_EQ(got, brute_compositions(caps, n));
          const auto bound = binomial(n + k, k);
          ASSERT_LE(CountValue(got.size()), bound);
          const bool roomy = std::all_of(caps.begin(), caps.end(), [n](int c) { return c >= n; });
          if (roomy) ASSERT_EQ(CountValue(got.size()), bound);
        }
      }
    }
  }
}

TEST(AllocationMatrices, Examples) {
  const IndexVector iv({0, 2, 2, 5});
  const std::vector<int> one{5};
  const auto single = enumerate_allocation_matrices(iv, one);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], (std::vector<int>{2, 0, 3}));

  const std::vector<int> three{1, 1, 1};
  EXPECT_EQ(enumerate_allocation_matrices(IndexVector({0, 1, 2, 3}), three).size(), 6u);

  const std::vector<int> wrong{2, 2};
  EXPECT_THROW(AllocationMatrixStream(iv, wrong), DomainError);
  const std::vector<int> zero{5, 0};
  EXPECT_THROW(AllocationMatrixStream(iv, zero), DomainError);
}

TEST(AllocationMatrices, TwoColumnsBijectWithAllocationVectors) {
  for (int m = 2; m <= 8; ++m) {
    for (int k = 1; k <= std::min(m, 3); ++k) {
      for (const auto& iv : enumerate_index_vectors(first_k(k), m)) {
        for (int n = 1; n < m; ++n) {
          const std::vector<int> sizes{n, m - n};
          const auto mats = enumerate_allocation_matrices(iv, sizes);
          const auto vecs = enumerate_allocation_vectors(iv, n);
          ASSERT_EQ(mats.size(), vecs.size());
          for (std::size_t t = 0; t < mats.size(); ++t) {
            for (int j = 0; j <= k; ++j) {
              ASSERT_EQ(mats[t][static_cast<std::size_t>(2 * j)], vecs[t][static_cast<std::size_t>(j)]);
              ASSERT_EQ(mats[t][static_cast<std::size_t>(2 * j + 1)], iv.block(j + 1) - vecs[t][static_cast<std::size_t>(j)]);
            }
          }
        }
      }
    }
  }
}

TEST(AllocationMatrices, MatchBruteForceMarginals) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = ostat::testing::uniform_int(rng, 3, 7);
    const int pops = ostat::testing::uniform_int(rng, 1, 3);
    const int k = ostat::testing::uniform_int(rng, 1, std::min(m, 2));
    const auto sizes = ostat::testing::random_sizes(rng, m, pops);
    const auto ivs = enumerate_index_vectors(ostat::testing::random_indices(rng, k, m), m);
    const auto& iv = ivs[rng.next_u64() % ivs.size()];
    const auto rows = iv.blocks();

    // Every (k+1) x N matrix with entries <= min(row, column) and the required marginals,
    // in descending row-major lexicographic order.
    const std::size_t cells = rows.size() * sizes.size();
    std::vector<std::vector<int>> expected;
    std::vector<int> cur(cells);
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
      if (c == cells) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
          int s = 0;
          for (std::size_t t = 0; t < sizes.size(); ++t) s += cur[j * sizes.size() + t];
          if (s != rows[j]) return;
        }
        for (std::size_t t = 0; t < sizes.size(); ++t) {
          int s = 0;
          for (std::size_t j = 0; j < rows.size(); ++j) s += cur[j * sizes.size() + t];
          if (s != sizes[t]) return;
        }
        expected.push_back(cur);
        return;
      }
      for (int x = std::min(rows[c / sizes.size()], sizes[c % sizes.size()]); x >= 0; --x) {
        cur[c] = x;
        rec(c + 1);
      }
    };
    rec(0);
    ASSERT_EQ(enumerate_allocation_matrices(iv, sizes), expected);
  }
}
