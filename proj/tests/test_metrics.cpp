#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "psc/errors.hpp"
#include "psc/metrics.hpp"
#include "psc/rng.hpp"

using namespace psc;

namespace {

// Exhaustive maximum over injective matchings of predicted to true clusters.
double brute_accuracy(const std::vector<int>& truth, const std::vector<int>& pred, int k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        int agree = 0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (perm[pred[i]] == truth[i]) ++agree;
        best = std::max(best, static_cast<double>(agree));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(truth.size());
}

}  // namespace

TEST_CASE("accuracy is exact under pure relabeling") {
    CHECK(accuracy({1, 1, 2, 2}, {2, 2, 1, 1}) == 1.0);
    CHECK(accuracy({1, 1, 2, 2}, {1, 2, 1, 2}) == 0.5);
}

TEST_CASE("accuracy equals the exhaustive permutation oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> truth(60), pred(60);
        for (int i = 0; i < 60; ++i) {
            truth[i] = static_cast<int>(rng.integer(3));
            pred[i] = static_cast<int>(rng.integer(3));
        }
        CHECK(accuracy(truth, pred) == doctest::Approx(brute_accuracy(truth, pred, 3))
                                           .epsilon(1e-15));
    }
}

TEST_CASE("accuracy handles differing cluster counts by zero padding") {
    // Two predicted clusters against three true ones: the unmatched true
    // cluster contributes nothing.
    std::vector<int> truth = {1, 1, 2, 2, 3, 3};
    std::vector<int> pred = {1, 1, 2, 2, 2, 2};
    CHECK(accuracy(truth, pred) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    CHECK(accuracy(pred, truth) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("accuracy validates inputs") {
    CHECK_THROWS_AS(accuracy({1, 2}, {1}), ValidationError);
    CHECK_THROWS_AS(accuracy({}, {}), ValidationError);
}

TEST_CASE("ari basics") {
    CHECK(ari({1, 1, 2, 2}, {1, 1, 2, 2}) == 1.0);
    CHECK(ari({1, 1, 2, 2}, {2, 2, 1, 1}) == 1.0);
    CHECK(ari({1, 1, 2, 2}, {1, 2, 1, 2}) == -0.5);
    CHECK_THROWS_AS(ari({1}, {1}), ValidationError);
}

TEST_CASE("ari is symmetric and permutation invariant") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> a(40), b(40);
        for (int i = 0; i < 40; ++i) {
            a[i] = static_cast<int>(rng.integer(4));
            b[i] = static_cast<int>(rng.integer(3));
        }
        CHECK(ari(a, b) == ari(b, a));
        std::vector<int> b_relabelled(40);
        for (int i = 0; i < 40; ++i) b_relabelled[i] = (b[i] + 1) % 3 + 7;
        CHECK(ari(a, b) == ari(a, b_relabelled));
    }
}

TEST_CASE("ari of random labels against structure is near zero on average") {
    Rng rng(31);
    double total = 0.0;
    const int runs = 100;
    for (int run = 0; run < runs; ++run) {
        std::vector<int> truth(200), noise(200);
        for (int i = 0; i < 200; ++i) {
            truth[i] = i < 100 ? 1 : 2;
            noise[i] = static_cast<int>(rng.integer(2));
        }
        total += ari(truth, noise);
    }
    CHECK(std::abs(total / runs) < 0.05);
}

TEST_CASE("both scores are exactly one against themselves") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> labels(30);
        for (auto& l : labels) l = static_cast<int>(rng.integer(4)) + 1;
        CHECK(accuracy(labels, labels) == 1.0);
        bool two_blocks = false;
        for (int l : labels) two_blocks = two_blocks || l != labels[0];
        if (two_blocks) CHECK(ari(labels, labels) == 1.0);
    }
}

TEST_CASE("monte_carlo mean and spread") {
    auto [m1, s1] = monte_carlo({1.0, 1.0, 1.0});
    CHECK(m1 == 1.0);
    CHECK(s1 == 0.0);
    auto [m2, s2] = monte_carlo({0.0, 1.0});
    CHECK(m2 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(monte_carlo({1.0}), ValidationError);
}

TEST_CASE("max_assignment solves small rectangular problems") {
    std::vector<std::vector<double>> scores = {{5, 1, 0}, {1, 4, 2}};
    auto match = max_assignment(scores);
    CHECK(match[0] == 0);
    CHECK(match[1] == 1);
}
