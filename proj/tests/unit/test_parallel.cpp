#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>
#include <vector>

#include "solab/parallel.hpp"

using namespace solab;

TEST(Parallel, ForCoversEveryIndexOnce) {
  for (std::size_t count : {0u, 1u, 7u, 1000u, 12345u}) {
    std::vector<int> hits(count, 0);
    parallel_for(count, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, SumIsIndependentOfWorkerCount) {
  const std::size_t n = 100000;
  auto body = [](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += 1.0 / (1.0 + static_cast<double>(i) * 0.37);
    return s;
  };
  std::vector<double> sums;
  for (const char* threads : {"1", "2", "3", "8"}) {
    setenv("SOLAB_THREADS", threads, 1);
    EXPECT_EQ(worker_count(), static_cast<unsigned>(std::atoi(threads)));
    sums.push_back(parallel_sum(n, body));
  }
  unsetenv("SOLAB_THREADS");
  for (double s : sums) EXPECT_EQ(s, sums.front());
  EXPECT_NEAR(sums.front(), body(0, n), 1e-9);
}

TEST(Parallel, ExceptionsPropagate) {
  setenv("SOLAB_THREADS", "4", 1);
  EXPECT_THROW(parallel_for(20000, [](std::size_t b, std::size_t) {
                 if (b > 0) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  unsetenv("SOLAB_THREADS");
  EXPECT_GE(worker_count(), 1u);
}
