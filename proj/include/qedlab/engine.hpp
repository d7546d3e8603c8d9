#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qedlab/config.hpp"
#include "qedlab/fock.hpp"
#include "qedlab/hamiltonians.hpp"
#include "qedlab/spectral.hpp"

namespace qedlab::lab {

struct System {
  ExperimentConfig cfg;
  ElectronBasis eb;
  fock::FockBasis fb;
  modes::ModeSet ms;
  rvec v;
  ham::Operators ops;
  std::shared_ptr<const ham::HalfSplit> hs;  // dense split of sigma.pi, built on demand
};

modes::ModeSet make_modes(const ExperimentConfig& c);
System build_system(const ExperimentConfig& c);
const ham::HalfSplit& half_split(System& s);

struct Ground {
  spectral::SpectralResult res;
  cmat states;   // columns on the half space (pf, r = 2) or the full space (np, r = 4)
  int r = 2;
  double shift = 0;  // np matrix-free: eigenvalues above this belong to the P- block
};

// dense splits are swapped for quadrature once the half dimension passes 2500
ham::Backend auto_backend(const System& s, ham::Backend preferred);

// lowest eigenpairs of the configured model on the configured backend
Ground ground(System& s, Model m, ham::Backend b, int count);
Ground ground(System& s);
// same truncation with V removed
double ionization_threshold(const ExperimentConfig& c);

// pointwise norm over spinor (x) Fock
rvec fiber_norm(const cvec& psi, Index points, int r, Index fock_dim);

}  // namespace qedlab::lab
