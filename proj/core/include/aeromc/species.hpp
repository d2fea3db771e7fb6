#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aeromc {

struct SpeciesRecord {
  std::string name;
  double density = 0.0;  // kg m^-3
  double kappa = 0.0;    // hygroscopicity
  bool is_water = false;

  bool operator==(const SpeciesRecord&) const = default;
};

/// Ordered species registry. The order defines the composition-vector axis
/// of every particle built against it and never changes after construction.
class SpeciesDatabase {
 public:
  SpeciesDatabase() = default;
  /// Throws SemanticError on duplicate names, more than one water species,
  /// non-positive density, negative kappa, or a water species with kappa != 0.
  explicit SpeciesDatabase(std::vector<SpeciesRecord> species);

  std::size_t size() const noexcept { return species_.size(); }
  bool empty() const noexcept { return species_.empty(); }
  const SpeciesRecord& operator[](std::size_t i) const { return species_[i]; }
  const std::vector<SpeciesRecord>& records() const noexcept { return species_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws NotFoundError for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::optional<std::size_t> water_index() const noexcept { return water_; }

  double max_density() const noexcept { return max_density_; }
  double min_density() const noexcept { return min_density_; }

  bool operator==(const SpeciesDatabase& other) const { return species_ == other.species_; }

 private:
  std::vector<SpeciesRecord> species_;
  std::optional<std::size_t> water_;
  double max_density_ = 0.0;
  double min_density_ = 0.0;
};

}  // namespace aeromc
