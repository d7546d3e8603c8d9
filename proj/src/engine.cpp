#include "qedlab/engine.hpp"

#include <cmath>

#include "qedlab/linalg.hpp"

namespace qedlab::lab {

modes::ModeSet make_modes(const ExperimentConfig& c) {
  if (c.modes.kind == "reference") {
    modes::ReferenceOptions o;
    o.radial_nodes = c.modes.radial_nodes;
    o.polar_nodes = c.modes.polar_nodes;
    o.azimuthal_nodes = c.modes.azimuthal_nodes;
    if (c.modes.radial_ratio > 1)
      for (double b = c.modes.m * c.modes.radial_ratio; b < c.modes.uv * (1 - 1e-12); b *= c.modes.radial_ratio)
        o.radial_breaks.push_back(b);
    return modes::build_reference_set(c.modes.m, c.modes.uv, c.charge, o);
  }
  auto ms = modes::build_mode_set(c.modes.m, c.modes.uv, c.modes.eps, c.charge);
  if (c.modes.max_modes > 0 && std::size_t(c.modes.max_modes) < ms.size())
    ms = modes::select_subset(ms, std::size_t(c.modes.max_modes));
  return ms;
}

System build_system(const ExperimentConfig& c) {
  const auto errs = validate(c);
  if (!errs.empty()) fail(ErrorCode::invalid_argument, "build_system: " + errs.front());
  System s;
  s.cfg = c;
  s.eb = electron::build_electron_basis(c.d, c.L, c.n);
  s.ms = make_modes(c);
  s.fb = fock::build_fock_basis(int(s.ms.size()), c.n_max);
  s.v = electron::potential_values(s.eb, c.potential);
  s.ops = ham::make_operators(s.eb, s.fb, s.ms, s.v, c.gauge);
  return s;
}

const ham::HalfSplit& half_split(System& s) {
  if (!s.hs) s.hs = std::make_shared<ham::HalfSplit>(ham::split_half(s.ops.x.m));
  return *s.hs;
}

Ground ground(System& s, Model m, ham::Backend b, int count) {
  spectral::EigOptions o;
  o.count = count;
  o.tol = s.cfg.solver.tol;
  o.seed = s.cfg.seed;
  Ground g;
  const Index P = s.eb.points(), F = s.fb.dim();
  if (m == Model::pf) {
    const LinOp op = b == ham::Backend::dense ? ham::assemble_pauli_fierz(s.ops, b, &half_split(s))
                                              : ham::assemble_pauli_fierz(s.ops, b, nullptr, s.cfg.solver.K);
    if (b == ham::Backend::quadrature) o.dense_below = 0;
    g.res = spectral::lowest_eigenpairs(op, o);
    g.states = g.res.eigenvectors;
    g.r = 2;
    return g;
  }
  if (b == ham::Backend::dense) {
    const auto np = ham::assemble_no_pair(s.ops, b, &half_split(s));
    g.res = spectral::lowest_eigenpairs(make_op(np.h_plus), o);
    g.states = np.basis_plus * g.res.eigenvectors;
    for (Index i = 0; i < g.states.cols(); ++i) {
      cvec v = g.states.col(i);
      spectral::fix_phase(v);
      g.states.col(i) = v;
    }
    g.r = 4;
    return g;
  }
  const auto np = ham::assemble_no_pair(s.ops, b, nullptr, s.cfg.solver.K);
  o.dense_below = 0;
  g.res = spectral::lowest_eigenpairs(np.h_hat, o);
  g.shift = np.shift;
  if (g.res.eigenvalues.maxCoeff() >= np.shift)
    fail(ErrorCode::not_converged, "ground: requested eigenvalues reach the P- shift");
  g.states = g.res.eigenvectors;
  g.r = 4;
  (void)P;
  (void)F;
  return g;
}

ham::Backend auto_backend(const System& s, ham::Backend preferred) {
  return 2 * s.eb.points() * s.fb.dim() > 2500 ? ham::Backend::quadrature : preferred;
}

Ground ground(System& s) { return ground(s, s.cfg.model, auto_backend(s, s.cfg.backend), s.cfg.solver.count); }

double ionization_threshold(const ExperimentConfig& c) {
  ExperimentConfig c0 = c;
  c0.potential.kind = electron::PotentialKind::none;
  c0.potential.gamma = 0;
  System s = build_system(c0);
  return ground(s, c0.model, auto_backend(s, c0.backend), 1).res.eigenvalues[0];
}

rvec fiber_norm(const cvec& psi, Index points, int r, Index F) {
  require(psi.size() == points * r * F, "fiber_norm: size mismatch");
  rvec out(points);
  for (Index x = 0; x < points; ++x) out[x] = psi.segment(x * r * F, r * F).norm();
  return out;
}

}  // namespace qedlab::lab
