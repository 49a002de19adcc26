#include "dcflow/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dcflow;

namespace {
const NormOrder kOrders[] = {NormOrder::One, NormOrder::Two, NormOrder::Inf};
}

TEST_CASE("induced norm of the identity is 1 for every order") {
    const Mat eye = Mat::Identity(3, 3);
    for (NormOrder q : kOrders) CHECK(induced_norm(eye, q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("induced norm hand values") {
    Mat m(2, 2);
    m << 0.0, 2.0, 0.0, 0.0;
    CHECK(induced_norm(m, NormOrder::One) == doctest::Approx(2.0));
    CHECK(induced_norm(m, NormOrder::Inf) == doctest::Approx(2.0));
    CHECK(induced_norm(m, NormOrder::Two) == doctest::Approx(2.0));

    Mat one(1, 1);
    one << 1.0 / 11.0;
    for (NormOrder q : kOrders) CHECK(induced_norm(one, q) == doctest::Approx(1.0 / 11.0));
}

TEST_CASE("diagonal matrices have norm max|x| for every order") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        Vec x(5);
        for (int i = 0; i < 5; ++i) x(i) = dist(rng);
        const Mat d = x.asDiagonal();
        for (NormOrder q : kOrders)
            CHECK(induced_norm(d, q) ==
                  doctest::Approx(x.cwiseAbs().maxCoeff()).epsilon(1e-10));
    }
}

TEST_CASE("induced norms are sub-multiplicative") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        Mat a(5, 5), b(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                a(i, j) = dist(rng);
                b(i, j) = dist(rng);
            }
        for (NormOrder q : kOrders)
            CHECK(induced_norm(a * b, q) <=
                  induced_norm(a, q) * induced_norm(b, q) * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("min_eigenvalue_sym hand values") {
    CHECK(min_eigenvalue_sym(Vec(Eigen::Vector3d(3, 1, 2)).asDiagonal()) == doctest::Approx(1.0));

    Mat one(1, 1);
    one << 11.0;
    CHECK(min_eigenvalue_sym(one) == doctest::Approx(11.0));

    Mat m(2, 2);
    m << 2.0, -1.0, -1.0, 2.0;
    CHECK(min_eigenvalue_sym(m) == doctest::Approx(1.0));
}

TEST_CASE("min eigenvalue is superadditive on symmetric pairs") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int rep = 0; rep < 25; ++rep) {
        Mat a(4, 4), b(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                a(i, j) = a(j, i) = dist(rng);
                b(i, j) = b(j, i) = dist(rng);
            }
        CHECK(min_eigenvalue_sym(a + b) >=
              min_eigenvalue_sym(a) + min_eigenvalue_sym(b) - 1e-9);
    }
}

TEST_CASE("asymmetric input is rejected") {
    Mat m(2, 2);
    m << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(min_eigenvalue_sym(m), std::invalid_argument);
    CHECK_THROWS_AS(max_eigenvalue_sym(m), std::invalid_argument);
}

TEST_CASE("fd_gradient matches the quadratic norm field") {
    auto f = [](const Vec& x) { return x.squaredNorm(); };
    Vec x(2);
    x << 1.0, 2.0;
    const Vec g = fd_gradient(f, x, 1e-5);
    CHECK(std::abs(g(0) - 2.0) < 1e-8);
    CHECK(std::abs(g(1) - 4.0) < 1e-8);
}

TEST_CASE("fd_gradient of a constant field is zero") {
    auto f = [](const Vec&) { return 42.0; };
    const Vec g = fd_gradient(f, Vec::Ones(3), 1e-6);
    CHECK(g.lpNorm<Eigen::Infinity>() == 0.0);
}
