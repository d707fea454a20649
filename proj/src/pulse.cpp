#include "spincond/pulse.hpp"

#include <cmath>
#include <limits>

namespace spincond {

namespace {

struct SectorTerms {
  VecX log_weight;  // log p(j), occupation probability of the state
  VecX sin_phase;   // sin(G.j)
};

SectorTerms sector_terms(const FockState& state, const CouplingVector& g) {
  if (state.n > kExactSectorCap)
    throw std::invalid_argument(
        "pulse statistics: sector n exceeds the exact-sum cap " +
        std::to_string(kExactSectorCap) + "; use the Monte Carlo engines instead");
  SectorBasis basis(state.n);
  SectorTerms terms;
  terms.log_weight.resize(basis.dim());
  terms.sin_phase.resize(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const Real p = std::norm(state.amplitudes(i));
    terms.log_weight(i) = p > 0.0 ? std::log(p) : -std::numeric_limits<Real>::infinity();
    terms.sin_phase(i) = std::sin(g.dot(basis.at(i)));
  }
  return terms;
}

int auto_cap(Real mean_photons, Real max_abs_sin) {
  const Real port_mean = 0.5 * mean_photons * (1.0 + max_abs_sin);
  return static_cast<int>(std::ceil(port_mean + 8.0 * std::sqrt(port_mean) + 4.0));
}

// One pulse PMF accumulated over a list of (log weight, sin phase) branches.
PhotocountPmf pmf_from_branches(Real mean_photons, const VecX& log_w, const VecX& s,
                                int cap) {
  if (mean_photons < 0.0)
    throw std::invalid_argument("joint_photocount_pmf: |A0|^2 must be >= 0");
  if (cap < 0) cap = auto_cap(mean_photons, s.size() ? s.cwiseAbs().maxCoeff() : 0.0);

  const Real half = 0.5 * mean_photons;
  const Real log_half = half > 0.0 ? std::log(half) : -std::numeric_limits<Real>::infinity();
  VecX log_fact(cap + 1);
  for (int k = 0; k <= cap; ++k) log_fact(k) = std::lgamma(k + 1.0);

  // log(1 +- sin) per branch; -inf marks a closed port
  const auto n_branches = log_w.size();
  VecX log_plus(n_branches), log_minus(n_branches);
  for (Eigen::Index b = 0; b < n_branches; ++b) {
    const Real up = 1.0 + s(b), dn = 1.0 - s(b);
    log_plus(b) = up > 0.0 ? std::log(up) : -std::numeric_limits<Real>::infinity();
    log_minus(b) = dn > 0.0 ? std::log(dn) : -std::numeric_limits<Real>::infinity();
  }

  PhotocountPmf pmf;
  pmf.table = MatX::Zero(cap + 1, cap + 1);
  for (int cp = 0; cp <= cap; ++cp) {
    for (int cm = 0; cm <= cap; ++cm) {
      Real acc = 0.0;
      for (Eigen::Index b = 0; b < n_branches; ++b) {
        if (std::isinf(log_w(b))) continue;
        Real log_term = log_w(b);
        if (cp > 0) {
          if (std::isinf(log_plus(b))) continue;
          log_term += cp * log_plus(b);
        }
        if (cm > 0) {
          if (std::isinf(log_minus(b))) continue;
          log_term += cm * log_minus(b);
        }
        acc += std::exp(log_term);
      }
      if (acc <= 0.0) continue;
      const Real log_poisson =
          -mean_photons + (cp + cm) * log_half - log_fact(cp) - log_fact(cm);
      pmf.table(cp, cm) = std::exp(log_poisson + std::log(acc));
    }
  }
  pmf.total = pmf.table.sum();
  return pmf;
}

}  // namespace

Real PhotocountPmf::mean_difference() const {
  Real m = 0.0;
  for (int cp = 0; cp < table.rows(); ++cp)
    for (int cm = 0; cm < table.cols(); ++cm) m += (cp - cm) * table(cp, cm);
  return m;
}

Real PhotocountPmf::prob_minus_positive() const {
  return total - table.col(0).sum();
}

PhotocountPmf joint_photocount_pmf(const FockState& state, const PulseConfig& cfg) {
  const SectorTerms terms = sector_terms(state, cfg.g);
  return pmf_from_branches(cfg.mean_photons, terms.log_weight, terms.sin_phase,
                           cfg.count_cap);
}

PhotocountPmf joint_photocount_pmf(const PoissonMixture& mix, const PulseConfig& cfg) {
  // flatten the mixture into weighted branches: weight * p(j) per sector state
  std::vector<Real> log_w, s;
  for (size_t k = 0; k < mix.states.size(); ++k) {
    const SectorTerms terms = sector_terms(mix.states[k], cfg.g);
    const Real logwk = std::log(mix.weights[k]);
    for (Eigen::Index i = 0; i < terms.log_weight.size(); ++i) {
      log_w.push_back(logwk + terms.log_weight(i));
      s.push_back(terms.sin_phase(i));
    }
  }
  return pmf_from_branches(cfg.mean_photons,
                           Eigen::Map<const VecX>(log_w.data(), log_w.size()),
                           Eigen::Map<const VecX>(s.data(), s.size()), cfg.count_cap);
}

Real mean_count_difference_exact(const FockState& state, Real mean_photons,
                                 const CouplingVector& g) {
  const SectorTerms terms = sector_terms(state, g);
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < terms.log_weight.size(); ++i)
    if (!std::isinf(terms.log_weight(i)))
      acc += std::exp(terms.log_weight(i)) * terms.sin_phase(i);
  return mean_photons * acc;
}

Real mean_count_difference_exact(const PoissonMixture& mix, Real mean_photons,
                                 const CouplingVector& g) {
  Real acc = 0.0;
  for (size_t k = 0; k < mix.states.size(); ++k)
    acc += mix.weights[k] * mean_count_difference_exact(mix.states[k], mean_photons, g);
  return acc;
}

LinearSignal mean_count_difference_linear(const Spinor& c, Real n_atoms,
                                          Real mean_photons, const CouplingVector& g) {
  const Real pp = c.p_plus(), p0 = c.p_zero(), pm = c.p_minus();
  const AffineCoupling a = affine_decomposition(g);
  LinearSignal out;
  out.fz_single_atom = pp - pm;
  out.fz2_single_atom = pp + pm;
  out.gamma_term = mean_photons * n_atoms * a.gamma;
  out.fz_term = mean_photons * n_atoms * a.alpha * out.fz_single_atom;
  out.fz2_term = mean_photons * n_atoms * a.beta * out.fz2_single_atom;
  out.mean_difference =
      mean_photons * n_atoms * (g.plus * pp + g.zero * p0 + g.minus * pm);
  return out;
}

}  // namespace spincond
