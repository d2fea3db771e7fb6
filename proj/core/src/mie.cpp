#include "aeromc/mie.hpp"

#include <cmath>
#include <vector>

#include "aeromc/constants.hpp"
#include "aeromc/error.hpp"
#include "aeromc/particle.hpp"

namespace aeromc {

MieEfficiencies mie_efficiencies_x(double x, std::complex<double> m) {
  using cd = std::complex<double>;
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("size parameter must be > 0");
  if (x > max_size_parameter) throw RangeError("size parameter " + std::to_string(x) + " exceeds 1e4");
  if (!(m.imag() >= 0.0)) throw DomainError("imaginary part of the refractive index must be >= 0");

  const cd y = m * x;
  const auto n_stop = static_cast<std::size_t>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0));
  const std::size_t n_mx = std::max(n_stop, static_cast<std::size_t>(std::ceil(std::abs(y)))) + 15;

  // Logarithmic derivative D_n(mx) by downward recurrence.
  std::vector<cd> d(n_mx + 1, cd(0.0, 0.0));
  for (std::size_t n = n_mx; n > 0; --n) {
    const cd rn = static_cast<double>(n) / y;
    d[n - 1] = rn - 1.0 / (d[n] + rn);
  }

  // Riccati-Bessel functions of the real argument by upward recurrence.
  double psi0 = std::cos(x);
  double psi1 = std::sin(x);
  double chi0 = -std::sin(x);
  double chi1 = std::cos(x);
  cd xi1(psi1, -chi1);

  double q_ext = 0.0;
  double q_sca = 0.0;
  for (std::size_t n = 1; n <= n_stop; ++n) {
    const double rn = static_cast<double>(n);
    const double psi = (2.0 * rn - 1.0) * psi1 / x - psi0;
    const double chi = (2.0 * rn - 1.0) * chi1 / x - chi0;
    const cd xi(psi, -chi);

    const cd da = d[n] / m + rn / x;
    const cd db = d[n] * m + rn / x;
    const cd an = (da * psi - psi1) / (da * xi - xi1);
    const cd bn = (db * psi - psi1) / (db * xi - xi1);

    q_ext += (2.0 * rn + 1.0) * (an.real() + bn.real());
    q_sca += (2.0 * rn + 1.0) * (std::norm(an) + std::norm(bn));

    psi0 = psi1;
    psi1 = psi;
    chi0 = chi1;
    chi1 = chi;
    xi1 = cd(psi1, -chi1);
  }

  MieEfficiencies q;
  q.ext = 2.0 / (x * x) * q_ext;
  q.sca = 2.0 / (x * x) * q_sca;
  q.abs = std::max(0.0, q.ext - q.sca);
  return q;
}

MieEfficiencies mie_efficiencies(double diameter, std::complex<double> refractive_index,
                                 double wavelength) {
  if (!(diameter > 0.0)) throw DomainError("diameter must be > 0");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  return mie_efficiencies_x(constants::pi * diameter / wavelength, refractive_index);
}

void OpticsSpec::validate() const {
  if (!(wavelength > 0.0)) throw SemanticError("optics.wavelength", "wavelength must be > 0");
  auto check = [](const std::string& path, std::complex<double> m) {
    if (!(m.real() >= 1.0)) throw SemanticError(path, "real refractive index must be >= 1");
    if (!(m.imag() >= 0.0)) throw SemanticError(path, "imaginary refractive index must be >= 0");
  };
  for (const auto& [name, m] : refractive_index) check("optics.refractive_index." + name, m);
  if (water_refractive_index) check("optics.water_refractive_index", *water_refractive_index);
}

std::vector<std::complex<double>> OpticsSpec::index_vector(const SpeciesDatabase& db) const {
  std::vector<std::complex<double>> out(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (auto it = refractive_index.find(db[i].name); it != refractive_index.end()) {
      out[i] = it->second;
    } else if (db[i].is_water && water_refractive_index) {
      out[i] = *water_refractive_index;
    } else {
      throw SchemaError("optics.refractive_index",
                        "no refractive index for species '" + db[i].name + "'");
    }
  }
  return out;
}

BulkOptics bulk_optical_coeffs(const AeroState& state, const SpeciesDatabase& db,
                               const OpticsSpec& optics) {
  optics.validate();
  const auto indices = optics.index_vector(db);
  BulkOptics out;
  out.per_particle.reserve(state.size());
  const double w = state.particle_number_conc();
  for (const auto& p : state.particles()) {
    double volume = 0.0;
    std::complex<double> m(0.0, 0.0);
    for (std::size_t i = 0; i < db.size(); ++i) {
      const double v = p.masses[i] / db[i].density;
      volume += v;
      m += v * indices[i];
    }
    m /= volume;
    const double d = particle_diameters(p, db).wet;
    const auto q = mie_efficiencies(d, m, optics.wavelength);
    const double area = constants::pi * d * d / 4.0;
    out.b_sca += area * q.sca * w;
    out.b_abs += area * q.abs * w;
    out.per_particle.push_back({p.id, d, q.sca, q.abs});
  }
  return out;
}

}  // namespace aeromc
