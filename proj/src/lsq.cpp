#include "hnabem/lsq.hpp"

#include <sstream>

#include "hnabem/errors.hpp"

namespace hnabem {

int retained_rank(const Eigen::VectorXd& sv, double epsilon) {
    if (sv.size() == 0 || !(sv(0) > 0)) return 0;
    int r = 0;
    for (Eigen::Index n = 0; n < sv.size(); ++n)
        if (sv(n) / sv(0) > epsilon) ++r;
    return r;
}

SvdSolution truncated_svd_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double epsilon) {
    if (A.rows() < A.cols()) throw ValidationError("truncated_svd_solve: system has fewer rows than columns");
    if (b.size() != A.rows()) throw ValidationError("truncated_svd_solve: right-hand side length mismatch");
    if (!A.allFinite() || !b.allFinite()) throw ValidationError("truncated_svd_solve: non-finite input");
    if (!(epsilon > 0 && epsilon < 1)) throw ParameterError("truncated_svd_solve: epsilon must lie in (0, 1)");

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdSolution sol;
    sol.epsilon = epsilon;
    sol.singular_values = svd.singularValues();
    sol.rank = retained_rank(sol.singular_values, epsilon);
    const int r = sol.rank;
    Eigen::VectorXcd utb = svd.matrixU().leftCols(r).adjoint() * b;
    for (int n = 0; n < r; ++n) utb(n) /= sol.singular_values(n);
    sol.coeffs = svd.matrixV().leftCols(r) * utb;
    sol.residual = (A * sol.coeffs - b).norm();
    return sol;
}

double residual_bound_slack(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const SvdSolution& sol,
                            const Eigen::VectorXcd& v) {
    const double lhs = (b - A * sol.coeffs).norm();
    const double rhs = (b - A * v).norm() + sol.epsilon * sol.singular_values(0) * v.norm();
    return rhs - lhs;
}

ConditionReport condition_report(const Eigen::MatrixXcd& A, const std::vector<double>& eps_grid) {
    ConditionReport rep;
    if (A.size() == 0) return rep;
    rep.singular_values = Eigen::BDCSVD<Eigen::MatrixXcd>(A).singularValues();
    rep.sigma_max = rep.singular_values(0);
    rep.sigma_min = rep.singular_values(rep.singular_values.size() - 1);
    for (double eps : eps_grid) rep.rank_at.emplace_back(eps, retained_rank(rep.singular_values, eps));
    return rep;
}

std::string format_condition_report(const ConditionReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "# n sigma_n\n";
    for (Eigen::Index n = 0; n < r.singular_values.size(); ++n) os << n + 1 << ' ' << r.singular_values(n) << '\n';
    for (const auto& [eps, rank] : r.rank_at) os << "# rank " << rank << " of " << r.singular_values.size() << " at epsilon " << eps << '\n';
    return os.str();
}

}  // namespace hnabem
