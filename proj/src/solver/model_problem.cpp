#include "hysfem/model_problem.hpp"

namespace hysfem {

void ModelProblem::validate() const {
    if (A.rows() != A.cols()) throw InvalidArgument("model problem: A must be square");
    if (A.rows() != f.size()) throw InvalidArgument("model problem: A and f differ in size");
    if (phi.size() != size()) throw InvalidArgument("model problem: need one nonlinearity per unknown");
}

fem::Vector ModelProblem::nonlinearity(const fem::Vector& x) const {
    fem::Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = phi[static_cast<std::size_t>(i)].value(x[i]);
    return out;
}

fem::Vector ModelProblem::residual(const fem::Vector& x) const {
    fem::Vector r = A * x - f;
    for (Eigen::Index i = 0; i < x.size(); ++i) r[i] += phi[static_cast<std::size_t>(i)].value(x[i]);
    return r;
}

}  // namespace hysfem
