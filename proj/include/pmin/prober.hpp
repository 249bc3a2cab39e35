#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmin/core_maps.hpp"
#include "pmin/quadrature.hpp"

namespace pmin {

enum class FamilyKind { rotation, perturbation };

// One-parameter family of boundary-fixing maps through x/|x| at t = 0.
struct FamilySpec {
  FamilyKind kind = FamilyKind::rotation;
  std::pair<int, int> plane{0, 1};
  // perturbation only: "const" (uses axis) or "swirl" (uses plane).
  std::string field = "const";
  int axis = -1;  // -1 selects the last coordinate

  std::string label() const;
  // Symmetric under t -> -t (energies are even in t).
  bool symmetric() const { return kind == FamilyKind::rotation; }
};

FamilySpec family_from_string(const std::string& name);

SphereMap family_member(int n, const FamilySpec& family, double t);

struct GridEnergy {
  double parameter = 0.0;
  Estimate energy;
  // E(u_t) - E(u_0) on common random numbers.
  Estimate difference;
};

struct SecondVariation {
  double h = 0.05;
  double value = 0.0;
  double std_error = 0.0;
  double first_difference = 0.0;
  double first_difference_error = 0.0;
};

struct Refinement {
  double parameter = 0.0;
  Estimate difference;
  int evaluations = 0;
};

struct ProbeResult {
  EnergyParams params;
  std::string family;
  QuadratureSpec spec;
  std::vector<GridEnergy> energies;
  double reference_energy = 0.0;
  // min over the grid of E(u_t) - E(u_0) and the standard error there.
  double min_margin = 0.0;
  double min_margin_sigma = 0.0;
  double argmin = 0.0;
  // Every grid point satisfies E(u_t) - E(u_0) >= -3 sigma_t.
  bool concordant = true;
  std::optional<SecondVariation> second_variation;
  std::optional<Refinement> refinement;
  // Grid scans are evidence only.
  bool empirical_only = true;
};

struct ProbeOptions {
  double sigmas = 3.0;
  double second_variation_step = 0.05;
  bool second_variation = true;
  // Golden-section refinement of the difference around the grid minimum.
  bool refine = false;
  int refine_iterations = 12;
};

// t_min + k (t_max - t_min)/(steps - 1); snaps the point nearest 0 to 0 when
// it is within half a step.
std::vector<double> linear_grid(double t_min, double t_max, int steps);

// Energies of u_t on a shared sample stream, reference closed-form energy,
// margins and (optionally) the second variation. Requires p < n + alpha and
// 0 in the grid.
ProbeResult probe_family(const EnergyParams& params, const FamilySpec& family,
                         const std::vector<double>& grid,
                         const QuadratureSpec& spec,
                         const ProbeOptions& options = {});

// (E(u_h) - 2 E(u_0) + E(u_{-h}))/h^2 with common random numbers.
SecondVariation second_variation(const EnergyParams& params,
                                 const FamilySpec& family,
                                 const QuadratureSpec& spec, double h = 0.05);

}  // namespace pmin
