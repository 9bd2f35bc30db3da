#include <random>

#include "doctest.h"
#include "hnabem/errors.hpp"
#include "hnabem/lsq.hpp"

using namespace hnabem;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 g(99);
    return g;
}

MatrixXcd random_matrix(int m, int n) {
    std::normal_distribution<double> nd;
    MatrixXcd A(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = {nd(rng()), nd(rng())};
    return A;
}

// M x N matrix with prescribed singular values
MatrixXcd with_singular_values(int m, const Eigen::VectorXd& s) {
    const int n = static_cast<int>(s.size());
    const MatrixXcd U = Eigen::HouseholderQR<MatrixXcd>(random_matrix(m, n)).householderQ() * MatrixXcd::Identity(m, n);
    const MatrixXcd V = Eigen::HouseholderQR<MatrixXcd>(random_matrix(n, n)).householderQ();
    return U * s.cast<std::complex<double>>().asDiagonal() * V.adjoint();
}

}  // namespace

TEST_CASE("identity and threshold arithmetic") {
    const VectorXcd b = random_matrix(5, 1);
    const auto s = truncated_svd_solve(MatrixXcd::Identity(5, 5), b, 1e-8);
    CHECK((s.coeffs - b).norm() < 1e-15);
    CHECK(s.rank == 5);

    MatrixXcd D = MatrixXcd::Zero(2, 2);
    D(0, 0) = 1;
    D(1, 1) = 1e-9;
    const auto t = truncated_svd_solve(D, VectorXcd::Ones(2), 1e-8);
    CHECK(t.rank == 1);
    CHECK(std::abs(t.coeffs(0) - 1.0) < 1e-15);
    CHECK(t.coeffs(1) == std::complex<double>(0, 0));

    // ties at the threshold are dropped
    Eigen::VectorXd sv(3);
    sv << 1.0, 0.5, 0.25;
    CHECK(retained_rank(sv, 0.25) == 2);
    CHECK(retained_rank(sv, 0.2499) == 3);
}

TEST_CASE("known spectrum, backward error and the residual bound") {
    Eigen::VectorXd s(20);
    for (int i = 0; i < 20; ++i) s(i) = std::pow(10.0, -0.75 * i);  // down to 1e-14.25
    const MatrixXcd A = with_singular_values(40, s);
    const VectorXcd b = random_matrix(40, 1);
    const auto sol = truncated_svd_solve(A, b, 1e-8);
    CHECK(sol.rank == retained_rank(s, 1e-8));
    CHECK(sol.rank == 11);  // 10^{-0.75 i} > 1e-8 for i <= 10
    for (int i = 0; i < 20; ++i) CHECK(std::abs(sol.singular_values(i) - s(i)) < 1e-14);

    Eigen::BDCSVD<MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const MatrixXcd back = svd.matrixU() * svd.singularValues().cast<std::complex<double>>().asDiagonal() *
                           svd.matrixV().adjoint();
    CHECK((A - back).norm() <= 1e-13 * s(0));

    // coefficients lie in the retained right singular subspace
    const MatrixXcd Vr = svd.matrixV().leftCols(sol.rank);
    CHECK((sol.coeffs - Vr * (Vr.adjoint() * sol.coeffs)).norm() < 1e-10 * sol.coeffs.norm());

    for (int i = 0; i < 100; ++i) {
        const VectorXcd v = random_matrix(20, 1) * std::pow(10.0, i % 7);
        CHECK(residual_bound_slack(A, b, sol, v) >= 0);
    }
    CHECK(std::abs(sol.residual - (A * sol.coeffs - b).norm()) < 1e-14);
}

TEST_CASE("retained rank is nonincreasing in epsilon") {
    const MatrixXcd A = random_matrix(30, 12) * random_matrix(12, 12).triangularView<Eigen::Upper>().toDenseMatrix();
    const auto rep = condition_report(A, {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 0.5});
    for (std::size_t i = 1; i < rep.rank_at.size(); ++i) CHECK(rep.rank_at[i].second <= rep.rank_at[i - 1].second);
    CHECK(format_condition_report(rep).find("# rank") != std::string::npos);
}

TEST_CASE("condition report") {
    const auto id = condition_report(MatrixXcd::Identity(4, 4));
    CHECK(id.sigma_max == doctest::Approx(1.0));
    CHECK(id.sigma_min == doctest::Approx(1.0));
    for (auto [eps, r] : id.rank_at) CHECK(r == 4);
    const MatrixXcd one = random_matrix(6, 1) * random_matrix(1, 4);
    const auto r1 = condition_report(one);
    CHECK(r1.singular_values(1) < 1e-14 * r1.sigma_max);
    CHECK(r1.rank_at.back().second == 1);
}

TEST_CASE("row permutation leaves the solution unchanged") {
    const MatrixXcd A = random_matrix(25, 10);
    const VectorXcd b = random_matrix(25, 1);
    Eigen::PermutationMatrix<Eigen::Dynamic> P(25);
    P.setIdentity();
    std::shuffle(P.indices().data(), P.indices().data() + 25, rng());
    const auto x = truncated_svd_solve(A, b, 1e-8);
    const auto y = truncated_svd_solve(P * A, P * b, 1e-8);
    CHECK((x.coeffs - y.coeffs).norm() <= 1e-12 * x.coeffs.norm());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(truncated_svd_solve(random_matrix(3, 4), random_matrix(3, 1), 1e-8), ValidationError);
    CHECK_THROWS_AS(truncated_svd_solve(random_matrix(4, 3), random_matrix(3, 1), 1e-8), ValidationError);
    MatrixXcd bad = random_matrix(4, 3);
    bad(1, 1) = std::complex<double>(NAN, 0);
    CHECK_THROWS_AS(truncated_svd_solve(bad, random_matrix(4, 1), 1e-8), ValidationError);
    CHECK_THROWS_AS(truncated_svd_solve(random_matrix(4, 3), random_matrix(4, 1), 1.0), ParameterError);
}
