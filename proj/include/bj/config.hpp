#pragma once

#include <map>
#include <string>

#include "bj/errors.hpp"

namespace bj {

/// Named numeric knobs shared across the library. Every verdict records the
/// tolerance it was decided with, so reports stay reproducible when a caller
/// overrides a default.
struct Tolerances {
  double analytic_orth = 1e-9;    ///< relative margin for derivative-based orthogonality
  double numeric_orth = 1e-7;     ///< relative margin for search-based orthogonality
  double zero_coordinate = 1e-12; ///< |x_i| <= zero_coordinate * ||x|| counts as zero
  double functional_norm = 1e-10; ///< unit-dual-norm slack for norming functionals
  double attainment = 1e-7;       ///< relative slack for membership in the attainment set
  double cluster_distance = 1e-6; ///< attainment points closer than this merge
  double zero_direction = 1e-6;   ///< ||A x|| below this (times ||A||) counts as the zero image
  double rank_one = 1e-9;         ///< 2x2-minor threshold (relative) for rank-one detection
  double line_search_rel = 1e-12; ///< golden-section bracket shrink factor
  double witness_margin_factor = 10.0; ///< refutations must exceed factor * tolerance

  static const Tolerances& defaults() {
    static const Tolerances t{};
    return t;
  }

  /// Override by name; unknown names are rejected.
  void set(const std::string& name, double value) {
    if (name == "analytic_orth") analytic_orth = value;
    else if (name == "numeric_orth") numeric_orth = value;
    else if (name == "zero_coordinate") zero_coordinate = value;
    else if (name == "functional_norm") functional_norm = value;
    else if (name == "attainment") attainment = value;
    else if (name == "cluster_distance") cluster_distance = value;
    else if (name == "zero_direction") zero_direction = value;
    else if (name == "rank_one") rank_one = value;
    else if (name == "line_search_rel") line_search_rel = value;
    else if (name == "witness_margin_factor") witness_margin_factor = value;
    else throw input_error("unknown tolerance name: " + name);
  }

  std::map<std::string, double> as_map() const {
    return {{"analytic_orth", analytic_orth},
            {"numeric_orth", numeric_orth},
            {"zero_coordinate", zero_coordinate},
            {"functional_norm", functional_norm},
            {"attainment", attainment},
            {"cluster_distance", cluster_distance},
            {"zero_direction", zero_direction},
            {"rank_one", rank_one},
            {"line_search_rel", line_search_rel},
            {"witness_margin_factor", witness_margin_factor}};
  }
};

}  // namespace bj
