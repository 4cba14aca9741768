#include "bexcl/spectrum_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bexcl {

std::vector<double> reversible_spectrum(const TransitionMatrix& P) {
    const auto dim = static_cast<Eigen::Index>(P.dim());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint64_t i = 0; i < P.dim(); ++i) {
        S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = P.diag(i);
        P.for_each_offdiag(i, [&](std::uint32_t j, double pij) {
            const double pji = P.at(j, i);
            S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::sqrt(pij * pji);
        });
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("reversible_spectrum: eigensolver failed");
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

double second_eigenvalue_dense(const TransitionMatrix& P) {
    if (P.dim() < 2) throw invalid_input("second_eigenvalue_dense: state space has a single state");
    return reversible_spectrum(P)[1];
}

}  // namespace bexcl
