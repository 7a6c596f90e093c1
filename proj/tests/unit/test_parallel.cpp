#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "nullest/parallel.hpp"

using namespace nullest;

class Workers : public ::testing::TestWithParam<std::size_t> {
protected:
    void SetUp() override { set_worker_count(GetParam()); }
    void TearDown() override { set_worker_count(0); }
};

TEST_P(Workers, EachIndexRunsOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST_P(Workers, LowestFailingIndexIsRethrown) {
    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 60 || i == 99) throw std::runtime_error(std::to_string(i));
        });
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "17");
    }
}

TEST_P(Workers, NestedCallsComplete) {
    std::vector<std::atomic<int>> hits(20 * 30);
    parallel_for(20, [&](std::size_t i) { parallel_for(30, [&](std::size_t j) { hits[i * 30 + j]++; }); });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

INSTANTIATE_TEST_SUITE_P(Counts, Workers, ::testing::Values(1, 3, 8));

TEST(Parallel, OverrideAndRestore) {
    set_worker_count(5);
    EXPECT_EQ(worker_count(), 5u);
    set_worker_count(0);
    EXPECT_GE(worker_count(), 1u);
}

TEST(Parallel, ZeroCountIsNoop) {
    parallel_for(0, [](std::size_t) { FAIL(); });
}
