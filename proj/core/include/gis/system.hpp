#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gis/geometry.hpp"

namespace gis {

/// One-step map x+ = f(x, u). Writes the successor of x into `next`.
using StepFunction =
    std::function<void(std::span<const double> x, std::span<const double> u, std::span<double> next)>;

/// Continuous vector field dx/dt = g(x, u), same calling convention as StepFunction.
using VectorField = StepFunction;

/// Discrete-time system with box state and input constraints.
/// The step function must be pure: it is evaluated concurrently by builder workers.
struct SystemModel {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;
  Box state_box;
  Box input_box;
  StepFunction step;

  Vec operator()(std::span<const double> x, std::span<const double> u) const {
    Vec next(n);
    step(x, u, next.span());
    return next;
  }
};

/// Finite sample of the input box: the Cartesian product of uniformly spaced
/// points per input dimension, endpoints included. The first input dimension
/// varies slowest.
struct InputGrid {
  std::vector<Vec> points;
  std::vector<std::size_t> counts;
};

InputGrid sample_inputs(const Box& input_box, std::span<const std::size_t> counts);

/// Classical fourth-order Runge-Kutta step with u held constant over [0, h].
Vec rk4_discretize(const VectorField& rhs, std::span<const double> x, std::span<const double> u, double h);

/// Jacketed CSTR with first-order exothermic reaction A -> B.
/// State (c_A [mol/L], T [K]); input coolant temperature T_c [K].
struct CstrParameters {
  double q = 100.0;          // L/min
  double V = 100.0;          // L
  double c_Af = 1.0;         // mol/L
  double T_f = 350.0;        // K
  double E_over_R = 8750.0;  // K
  double k0 = 7.2e10;        // 1/min
  double minus_dH = 5.0e4;   // J/mol
  double UA = 5.0e4;         // J/(min K)
  double c_p = 0.239;        // J/(g K)
  double rho = 1000.0;       // g/L
  double h = 0.1;            // min

  void validate() const;
};

/// Continuous CSTR right-hand side (mass and energy balances).
VectorField cstr_vector_field(const CstrParameters& p);

/// X = [0,1] x [345,355], U = [285,315], step = RK4 with step size p.h.
SystemModel cstr_model(const CstrParameters& p = {});

/// Scalar map x+ = a x + u on X = [x_lo, x_hi], U = [u_lo, u_hi].
SystemModel linear_test_model(double a, double x_lo, double x_hi, double u_lo, double u_hi);

/// x+ = x on [0,1]^dim with a single zero input.
SystemModel identity_model(std::size_t dim = 1);

/// x+ = x + offset on [0,1] with a single zero input.
SystemModel shift_model(double offset = 10.0);

/// Flat string parameters for registry construction ("linear.a", "cstr.q", ...).
using ModelParameters = std::map<std::string, std::string>;

/// Builds a model by registry name: "cstr", "linear", "identity", "shift".
/// Unknown names or malformed parameters throw std::invalid_argument naming the key.
SystemModel make_model(const std::string& name, const ModelParameters& params = {});
std::vector<std::string> model_names();
/// Parameter keys recognised for a model, with their default values rendered as text.
ModelParameters model_defaults(const std::string& name);

}  // namespace gis
