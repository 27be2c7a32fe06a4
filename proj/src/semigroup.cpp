#include "obslab/semigroup.hpp"

#include <cmath>
#include <string>

#include "obslab/errors.hpp"

namespace obslab {

namespace {

void require_compatible(const SpectralState& state, const SpectralDomain& domain) {
  if (state.size() != domain.n_modes()) {
    throw InvalidArgument("state has " + std::to_string(state.size()) +
                          " modes but the domain truncation has " +
                          std::to_string(domain.n_modes()));
  }
}

}  // namespace

SpectralState::SpectralState(int n_modes) {
  if (n_modes < 1) throw InvalidArgument("a state needs at least one mode");
  coeffs_.assign(n_modes, Pair{0.0, 0.0});
}

SpectralState::SpectralState(std::vector<Pair> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw InvalidArgument("a state needs at least one mode");
}

SpectralState SpectralState::single_mode(int n_modes, int mode, double first, double second) {
  SpectralState s(n_modes);
  if (mode < 0 || mode >= n_modes) throw InvalidArgument("mode index out of range");
  s[mode] = {first, second};
  return s;
}

SpectralState SpectralState::unflatten(const Eigen::VectorXd& values) {
  if (values.size() < 2 || values.size() % 2 != 0) {
    throw InvalidArgument("flattened state must have an even, positive length");
  }
  std::vector<Pair> coeffs(values.size() / 2);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    coeffs[j] = {values[2 * j], values[2 * j + 1]};
  }
  return SpectralState(std::move(coeffs));
}

double SpectralState::squared_norm() const {
  double s = 0.0;
  for (const auto& p : coeffs_) s += p[0] * p[0] + p[1] * p[1];
  return s;
}

double SpectralState::norm() const { return std::sqrt(squared_norm()); }

bool SpectralState::is_zero() const {
  for (const auto& p : coeffs_) {
    if (p[0] != 0.0 || p[1] != 0.0) return false;
  }
  return true;
}

SpectralState SpectralState::scaled(double factor) const {
  SpectralState out = *this;
  for (auto& p : out.coeffs_) {
    p[0] *= factor;
    p[1] *= factor;
  }
  return out;
}

Eigen::VectorXd SpectralState::flatten() const {
  Eigen::VectorXd v(2 * coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    v[2 * j] = coeffs_[j][0];
    v[2 * j + 1] = coeffs_[j][1];
  }
  return v;
}

ObservationSelector ObservationSelector::direction(double mu1, double mu2) {
  if (std::abs(mu1) + std::abs(mu2) == 0.0) {
    throw InvalidArgument("observation direction (mu1, mu2) must be nonzero");
  }
  return ObservationSelector(SelectorKind::Direction, mu1, mu2);
}

ModeTrace::ModeTrace(double eigenvalue, Pair initial, const PhysicalParams& params)
    : eigenvalue_(eigenvalue), initial_(initial), a_(params.a), b_(params.b) {}

double ModeTrace::operator()(double t) const {
  const double phase = eigenvalue_ * b_ * t;
  return std::exp(-a_ * eigenvalue_ * t) *
         (initial_[0] * std::cos(phase) + initial_[1] * std::sin(phase));
}

double ModeTrace::envelope(double t) const {
  return std::exp(-a_ * eigenvalue_ * t) * std::hypot(initial_[0], initial_[1]);
}

Pair evolve_pair(const Pair& pair, double eigenvalue, const PhysicalParams& params, double t) {
  const double decay = std::exp(-params.a * eigenvalue * t);
  const double phase = eigenvalue * params.b * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {decay * (c * pair[0] + s * pair[1]), decay * (-s * pair[0] + c * pair[1])};
}

SpectralState evolve(const SpectralState& state, const SpectralDomain& domain,
                     const PhysicalParams& params, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("evolution time must be nonnegative");
  require_compatible(state, domain);
  if (t == 0.0) return state;
  SpectralState out(state.size());
  for (int j = 0; j < state.size(); ++j) {
    out[j] = evolve_pair(state[j], domain.eigenvalue(j), params, t);
  }
  return out;
}

Eigen::VectorXd observation_coefficients(const SpectralState& state,
                                         const ObservationSelector& selector) {
  if (selector.kind() == SelectorKind::Full) {
    throw InvalidArgument("the full selector has two components");
  }
  Eigen::VectorXd c(state.size());
  for (int j = 0; j < state.size(); ++j) {
    c[j] = selector.mu1() * state[j][0] + selector.mu2() * state[j][1];
  }
  return c;
}

ObservedField observe(const SpectralState& state, const SpectralDomain& domain,
                      const ObservationSelector& selector) {
  require_compatible(state, domain);
  const auto& basis = domain.basis();
  ObservedField field;
  if (selector.kind() == SelectorKind::Full) {
    Eigen::VectorXd c1(state.size());
    Eigen::VectorXd c2(state.size());
    for (int j = 0; j < state.size(); ++j) {
      c1[j] = state[j][0];
      c2[j] = state[j][1];
    }
    const Eigen::VectorXd f1 = basis.transpose() * c1;
    const Eigen::VectorXd f2 = basis.transpose() * c2;
    field.primary.assign(f1.data(), f1.data() + f1.size());
    field.secondary.assign(f2.data(), f2.data() + f2.size());
  } else {
    const Eigen::VectorXd f = basis.transpose() * observation_coefficients(state, selector);
    field.primary.assign(f.data(), f.data() + f.size());
  }
  return field;
}

double l1_norm(const ObservedField& field, const SpatialMask& mask) {
  if (static_cast<int>(field.primary.size()) != mask.size()) {
    throw InvalidArgument("mask does not match the observation grid");
  }
  double total = 0.0;
  const auto& cells = mask.cells();
  if (field.two_components()) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c]) total += std::hypot(field.primary[c], field.secondary[c]);
    }
  } else {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c]) total += std::abs(field.primary[c]);
    }
  }
  return total * mask.grid().cell_volume();
}

double observed_trace_l1(const SpectralState& state, const SpectralDomain& domain,
                         const PhysicalParams& params, const ObservationSelector& selector,
                         double t, const SpatialMask& mask) {
  if (!(mask.grid() == domain.grid())) {
    throw InvalidArgument("mask grid does not match the domain grid");
  }
  return l1_norm(observe(evolve(state, domain, params, t), domain, selector), mask);
}

double grid_l2_norm(const SpectralState& state, const SpectralDomain& domain) {
  const ObservedField f = observe(state, domain, ObservationSelector::full());
  double s = 0.0;
  for (std::size_t c = 0; c < f.primary.size(); ++c) {
    s += f.primary[c] * f.primary[c] + f.secondary[c] * f.secondary[c];
  }
  return std::sqrt(s * domain.cell_volume());
}

SpectralState conjugate(const SpectralState& state) {
  SpectralState out = state;
  for (int j = 0; j < out.size(); ++j) out[j][1] = -out[j][1];
  return out;
}

}  // namespace obslab
