#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hnabem {

struct SvdSolution {
    Eigen::VectorXcd coeffs;
    Eigen::VectorXd singular_values;  // descending
    int rank = 0;                     // #{n : sigma_n / sigma_1 > epsilon}
    double residual = 0.0;            // ||A a - b||_2
    double epsilon = 0.0;
};

/// Number of singular values with sigma_n / sigma_1 > epsilon (strict).
int retained_rank(const Eigen::VectorXd& singular_values, double epsilon);

/// a = V (Sigma^eps)^+ U^* b. Throws ValidationError for M < N, size mismatch or
/// non-finite input and ParameterError for epsilon outside (0, 1).
SvdSolution truncated_svd_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double epsilon);

/// Residual bound of the regularised pseudo-inverse against any competitor v:
/// ||b - A a|| <= ||b - A v|| + eps ||A||_2 ||v||. Returns the right side minus
/// the left side, so a negative value is a violation. ||A||_2 is sigma_1.
double residual_bound_slack(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const SvdSolution& sol,
                            const Eigen::VectorXcd& v);

struct ConditionReport {
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    Eigen::VectorXd singular_values;
    std::vector<std::pair<double, int>> rank_at;  // (epsilon, retained rank)
};

ConditionReport condition_report(const Eigen::MatrixXcd& A,
                                 const std::vector<double>& eps_grid = {1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14});

/// `n sigma_n` table followed by one `# rank` line per epsilon.
std::string format_condition_report(const ConditionReport& r);

}  // namespace hnabem
