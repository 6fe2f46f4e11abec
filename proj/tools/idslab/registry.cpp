#include "registry.hpp"

#include <array>

namespace idslab::app {

namespace {

constexpr std::array<ExperimentInfo, 10> kRegistry{{
    {"ids", "disorder-averaged finite-volume IDS, or the localized trace for a sub-window", "Eq. (3.1)"},
    {"bc-gap", "Dirichlet/Neumann IDS gap over a volume sweep with common random numbers", "Prop. 4.4"},
    {"truncation", "IDS deviation of the truncated potential V_n across truncation levels", "Lemma 4.2"},
    {"tightness", "low-energy tail of N(E) and its log-log slope against d/2 - 2 theta", "Eq. (3.12)"},
    {"weyl", "free-operator counts against the Weyl law E^{d/2} / ((d/2)! (2 pi)^{d/2})", "Remark (vii)"},
    {"gaussian-tail", "E^-2 log N(E) of the Gaussian ensemble against -1/(2 C(0))", "Remark (vii)"},
    {"landau", "lowest Landau cluster of the constant-field torus against B |Lambda| / 2 pi", "Property (C)"},
    {"support-spectrum", "growth set of the averaged IDS against per-realization spectra", "Cor. 3.3"},
    {"moment-check", "Monte Carlo check of the local moment bound for convolution potentials", "Lemma 3.4"},
    {"measure-demo", "synthetic measure sequences: vague convergence, tightness, squeeze, kernels", "Prop. 4.1"},
}};

}  // namespace

std::span<const ExperimentInfo> experiment_registry() { return kRegistry; }

const ExperimentInfo* find_experiment(std::string_view name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace idslab::app
