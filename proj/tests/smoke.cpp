#include <iostream>

#include "bj/bj.hpp"
#include "bj/json_io.hpp"
#include "bj/verify.hpp"

int main() {
  const auto s = bj::l2(2);
  const std::vector<double> x{3.0, 4.0};
  std::cout << "norm " << bj::norm(s, x) << "\n";
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
  const auto v = bj::bj_orthogonal(s, e1, e2, bj::OrthMethod::both);
  std::cout << "orth " << v.orthogonal << "\n";
  auto T = bj::LinearOperator::identity(s, s);
  std::cout << "opnorm " << bj::operator_norm(T).value << "\n";
  return 0;
}
