#include "gis/system.hpp"

#include <cmath>
#include <stdexcept>

namespace gis {

InputGrid sample_inputs(const Box& input_box, std::span<const std::size_t> counts) {
  const std::size_t m = input_box.dim();
  if (counts.size() != m) throw ContractViolation("sample_inputs: one count per input dimension required");
  InputGrid grid;
  grid.counts.assign(counts.begin(), counts.end());

  std::vector<std::vector<double>> axes(m);
  for (std::size_t d = 0; d < m; ++d) {
    if (counts[d] < 2) throw ContractViolation("sample_inputs: at least 2 points per dimension");
    const double lo = input_box.lo(d);
    const double hi = input_box.hi(d);
    for (std::size_t i = 0; i < counts[d]; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(counts[d] - 1);
      const double v = i + 1 == counts[d] ? hi : lo + (hi - lo) * t;
      // A degenerate interval collapses to a single point.
      if (axes[d].empty() || axes[d].back() != v) axes[d].push_back(v);
    }
  }

  std::vector<std::size_t> idx(m, 0);
  while (true) {
    Vec p(m);
    for (std::size_t d = 0; d < m; ++d) p[d] = axes[d][idx[d]];
    grid.points.push_back(p);
    std::size_t d = m;
    while (d > 0) {
      --d;
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
      if (d == 0) return grid;
    }
    if (m == 0) return grid;
  }
}

Vec rk4_discretize(const VectorField& rhs, std::span<const double> x, std::span<const double> u, double h) {
  if (!(h > 0.0)) throw ContractViolation("rk4_discretize: step size must be positive");
  const std::size_t n = x.size();
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
  rhs(x, u, k1.span());
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  rhs(tmp.span(), u, k2.span());
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  rhs(tmp.span(), u, k3.span());
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  rhs(tmp.span(), u, k4.span());
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

void CstrParameters::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"q", q},       {"V", V},   {"c_Af", c_Af}, {"T_f", T_f}, {"E_over_R", E_over_R}, {"k0", k0},
      {"minus_dH", minus_dH}, {"UA", UA}, {"c_p", c_p}, {"rho", rho}, {"h", h}};
  for (const auto& [key, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("cstr.") + key + ": must be positive and finite");
    }
  }
}

VectorField cstr_vector_field(const CstrParameters& p) {
  return [p](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    const double c_a = x[0];
    const double t = x[1];
    const double t_c = u[0];
    const double rate = p.k0 * std::exp(-p.E_over_R / t) * c_a;
    dx[0] = p.q / p.V * (p.c_Af - c_a) - rate;
    dx[1] = p.q / p.V * (p.T_f - t) + p.minus_dH / (p.rho * p.c_p) * rate +
            p.UA / (p.V * p.rho * p.c_p) * (t_c - t);
  };
}

SystemModel cstr_model(const CstrParameters& p) {
  p.validate();
  SystemModel model;
  model.name = "cstr";
  model.n = 2;
  model.m = 1;
  model.state_box = Box{{0.0, 1.0}, {345.0, 355.0}};
  model.input_box = Box{{285.0, 315.0}};
  model.step = [p](std::span<const double> x, std::span<const double> u, std::span<double> next) {
    // Inlined RK4: this is the innermost loop of graph construction.
    const double a = p.q / p.V;
    const double b = p.minus_dH / (p.rho * p.c_p);
    const double c = p.UA / (p.V * p.rho * p.c_p);
    const double t_c = u[0];
    auto f = [&](double ca, double t, double& dca, double& dt) {
      const double rate = p.k0 * std::exp(-p.E_over_R / t) * ca;
      dca = a * (p.c_Af - ca) - rate;
      dt = a * (p.T_f - t) + b * rate + c * (t_c - t);
    };
    const double h = p.h;
    double k1a, k1t, k2a, k2t, k3a, k3t, k4a, k4t;
    f(x[0], x[1], k1a, k1t);
    f(x[0] + 0.5 * h * k1a, x[1] + 0.5 * h * k1t, k2a, k2t);
    f(x[0] + 0.5 * h * k2a, x[1] + 0.5 * h * k2t, k3a, k3t);
    f(x[0] + h * k3a, x[1] + h * k3t, k4a, k4t);
    next[0] = x[0] + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    next[1] = x[1] + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
  };
  return model;
}

SystemModel linear_test_model(double a, double x_lo, double x_hi, double u_lo, double u_hi) {
  SystemModel model;
  model.name = "linear";
  model.n = 1;
  model.m = 1;
  model.state_box = Box{{x_lo, x_hi}};
  model.input_box = Box{{u_lo, u_hi}};
  model.step = [a](std::span<const double> x, std::span<const double> u, std::span<double> next) {
    next[0] = a * x[0] + u[0];
  };
  return model;
}

SystemModel identity_model(std::size_t dim) {
  SystemModel model;
  model.name = "identity";
  model.n = dim;
  model.m = 1;
  model.state_box = Box(Vec(dim, 0.0), Vec(dim, 1.0));
  model.input_box = Box{{0.0, 0.0}};
  model.step = [](std::span<const double> x, std::span<const double>, std::span<double> next) {
    std::copy(x.begin(), x.end(), next.begin());
  };
  return model;
}

SystemModel shift_model(double offset) {
  SystemModel model;
  model.name = "shift";
  model.n = 1;
  model.m = 1;
  model.state_box = Box{{0.0, 1.0}};
  model.input_box = Box{{0.0, 0.0}};
  model.step = [offset](std::span<const double> x, std::span<const double>, std::span<double> next) {
    next[0] = x[0] + offset;
  };
  return model;
}

namespace {

double number(const ModelParameters& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key + ": expected a number, got '" + it->second + "'");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + it->second + "'");
  }
}

void reject_unknown(const std::string& model, const ModelParameters& params) {
  const auto known = model_defaults(model);
  for (const auto& [key, value] : params) {
    if (!known.contains(key)) throw std::invalid_argument(key + ": not a parameter of model '" + model + "'");
  }
}

}  // namespace

std::vector<std::string> model_names() { return {"cstr", "identity", "linear", "shift"}; }

ModelParameters model_defaults(const std::string& name) {
  if (name == "cstr") {
    const CstrParameters p;
    return {{"cstr.q", format_real(p.q)},
            {"cstr.V", format_real(p.V)},
            {"cstr.c_Af", format_real(p.c_Af)},
            {"cstr.T_f", format_real(p.T_f)},
            {"cstr.E_over_R", format_real(p.E_over_R)},
            {"cstr.k0", format_real(p.k0)},
            {"cstr.minus_dH", format_real(p.minus_dH)},
            {"cstr.UA", format_real(p.UA)},
            {"cstr.c_p", format_real(p.c_p)},
            {"cstr.rho", format_real(p.rho)},
            {"cstr.h", format_real(p.h)}};
  }
  if (name == "linear") {
    return {{"linear.a", "2"}, {"linear.x_lo", "-1"}, {"linear.x_hi", "1"},
            {"linear.u_lo", "-0.5"}, {"linear.u_hi", "0.5"}};
  }
  if (name == "identity") return {{"identity.dim", "1"}};
  if (name == "shift") return {{"shift.offset", "10"}};
  throw std::invalid_argument("model: unknown model '" + name + "'");
}

SystemModel make_model(const std::string& name, const ModelParameters& params) {
  reject_unknown(name, params);
  if (name == "cstr") {
    CstrParameters p;
    p.q = number(params, "cstr.q", p.q);
    p.V = number(params, "cstr.V", p.V);
    p.c_Af = number(params, "cstr.c_Af", p.c_Af);
    p.T_f = number(params, "cstr.T_f", p.T_f);
    p.E_over_R = number(params, "cstr.E_over_R", p.E_over_R);
    p.k0 = number(params, "cstr.k0", p.k0);
    p.minus_dH = number(params, "cstr.minus_dH", p.minus_dH);
    p.UA = number(params, "cstr.UA", p.UA);
    p.c_p = number(params, "cstr.c_p", p.c_p);
    p.rho = number(params, "cstr.rho", p.rho);
    p.h = number(params, "cstr.h", p.h);
    return cstr_model(p);
  }
  if (name == "linear") {
    const double x_lo = number(params, "linear.x_lo", -1.0);
    const double x_hi = number(params, "linear.x_hi", 1.0);
    const double u_lo = number(params, "linear.u_lo", -0.5);
    const double u_hi = number(params, "linear.u_hi", 0.5);
    if (!(x_lo < x_hi)) throw std::invalid_argument("linear.x_lo: must be below linear.x_hi");
    if (!(u_lo <= u_hi)) throw std::invalid_argument("linear.u_lo: must not exceed linear.u_hi");
    return linear_test_model(number(params, "linear.a", 2.0), x_lo, x_hi, u_lo, u_hi);
  }
  if (name == "identity") {
    const double dim = number(params, "identity.dim", 1.0);
    if (dim < 1 || dim > static_cast<double>(kMaxDim) || dim != std::floor(dim)) {
      throw std::invalid_argument("identity.dim: must be an integer in [1, " + std::to_string(kMaxDim) + "]");
    }
    return identity_model(static_cast<std::size_t>(dim));
  }
  if (name == "shift") return shift_model(number(params, "shift.offset", 10.0));
  throw std::invalid_argument("model: unknown model '" + name + "'");
}

}  // namespace gis
