// Quantities for one operator under a degenerate metric, plus one block check.
#include <iostream>

#include "semihilbert/blockspace.hpp"
#include "semihilbert/semi_operator.hpp"

int main() {
  using namespace semihilbert;
  const MetricPtr a = new_metric(ComplexMatrix::diagonal({1.0, 2.0, 0.0}));
  const ComplexMatrix t{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {0.5, cplx(0.0, 1.0), 3.0}};
  const SemiOperator op(a, t);

  std::cout << "rank(A) = " << a->rank() << "\n";
  std::cout << "||T||_A = " << a_seminorm_op(op) << "\n";
  std::cout << "w_A(T) = " << a_numerical_radius(op) << "\n";
  std::cout << "w_A(T) >= " << a_numerical_radius(op, radius::Sampling{20000, 1}) << " (sampled)\n";

  const ComplexMatrix zero(3, 3);
  const BlockOperator b = make_block(a, zero, t, zero, zero);
  std::cout << "w([[0, T], [0, 0]]) = " << a_numerical_radius(b.bound()) << " = ||T||_A / 2\n";
}
