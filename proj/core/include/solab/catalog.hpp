#pragma once

// Named structure functions and Young functions.
//
// Labels follow `name` or `name:key=value,key=value`:
//   power:p=3                         g = t^{p-1}
//   loglin:alpha=1,beta=1,a=2.718     g = t^alpha log(a+t)^beta
//   osc:a=2,b=0.5                     g = (e+t)^{a + b sin(log log(e+t))} - e^a
//   glued:alpha=1.5,beta=2.5,eps=0.5,k1=1,k2=2
//                                     C^1 chain t^{alpha-eps} | A t^alpha + B | C t^{beta+eps} + D
// Young functions additionally accept square, xlogx, exp and linear.

#include <map>
#include <string>
#include <vector>

#include "solab/orlicz.hpp"

namespace solab {

struct ParsedLabel {
  std::string name;
  std::map<std::string, double> params;
};

/// Throws std::invalid_argument on malformed labels.
ParsedLabel parse_label(const std::string& label);

StructureFunction power_structure(double p);
StructureFunction loglin_structure(double alpha, double beta, double a);
StructureFunction osc_structure(double a, double b);
StructureFunction glued_structure(double alpha, double beta, double eps, double k1, double k2);

/// Unknown names or keys throw std::invalid_argument.
StructureFunction make_structure(const std::string& label);

YoungFunction young_square();  ///< t^2/2
YoungFunction young_xlogx();   ///< (1+t) log(1+t) - t
YoungFunction young_exp();     ///< e^t - t - 1, not doubling
YoungFunction young_linear();  ///< t, not an N-function

/// Young-function names above, else G of the structure function with that label.
YoungFunction make_young(const std::string& label);

/// Representative labels exercised by the check suites.
std::vector<std::string> structure_catalog();
std::vector<std::string> young_catalog();

}  // namespace solab
