#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "critmed/materials.hpp"

namespace critmed {

enum class Branch { Heating, Cooling };

std::string_view to_string(Branch b) noexcept;
Branch parse_branch(std::string_view name);

/// Composite parameters of VO2 at one temperature.
struct Vo2Point {
  double temperature;  // K
  double filling_factor;
  double depolarization;
  complex eps_host;       // insulating phase
  complex eps_inclusion;  // metallic clusters
};

/// Temperature-indexed BEMT inputs for the heating and cooling branches of the
/// VO2 metal-insulator transition.
class Vo2Dataset {
 public:
  Vo2Dataset(std::vector<Vo2Point> heating, std::vector<Vo2Point> cooling);

  const std::vector<Vo2Point>& branch(Branch b) const noexcept {
    return b == Branch::Heating ? heating_ : cooling_;
  }
  /// Temperature interval covered by both branches.
  double common_min() const noexcept;
  double common_max() const noexcept;

  static Vo2Dataset parse_csv(std::istream& in);
  static Vo2Dataset load_csv(const std::filesystem::path& path);
  void write_csv(std::ostream& out) const;
  void save_csv(const std::filesystem::path& path) const;

 private:
  std::vector<Vo2Point> heating_;
  std::vector<Vo2Point> cooling_;
};

/// Piecewise-linear interpolation of every field within one branch. Exact at
/// grid nodes. Throws OutOfRange outside the branch's grid.
Vo2Point vo2_lookup(const Vo2Dataset& ds, double temperature, Branch branch);

/// Lookup followed by the Bruggeman solve. The tabulated permittivities are
/// taken as the response at `omega`, which must be positive.
EffectivePermittivity vo2_effective(const Vo2Dataset& ds, double temperature,
                                    Branch branch, double omega);

struct SyntheticVo2Options {
  double lambda0 = 450e-6;  // m, frequency at which eps_i is evaluated
  double t_min = 300.0;
  double t_max = 380.0;
  double step = 0.25;
  double critical_heating = 342.0;
  double critical_cooling = 336.0;
  double width = 0.75;         // K, logistic width
  double max_filling = 0.95;
  double l_low = 1.0 / 3.0;    // depolarization at t_min
  double l_high = 0.25;        // depolarization at t_max
  complex eps_insulator{9.0, 0.5};
  DrudeParams metal{5.0e15, 1.0e15};  // rad/s
};

/// Stand-in for measured VO2 data: logistic filling factor that crosses 1/3 at
/// the branch's critical temperature, depolarization sliding linearly with T,
/// constant insulating permittivity and a Drude metallic permittivity.
Vo2Dataset synthetic_vo2_dataset(const SyntheticVo2Options& opt = {});

}  // namespace critmed
