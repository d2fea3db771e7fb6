#pragma once

namespace aeromc::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double boltzmann = 1.380649e-23;        // J K^-1
inline constexpr double gas_constant = 8.314;            // J mol^-1 K^-1

// Water properties used by the Kelvin term.
inline constexpr double water_surface_tension = 0.072;   // N m^-1
inline constexpr double water_density = 1000.0;          // kg m^-3
inline constexpr double water_molar_mass = 0.018;        // kg mol^-1

// Air mean free path reference state.
inline constexpr double mean_free_path_ref = 6.51e-8;    // m
inline constexpr double temperature_ref = 293.15;        // K
inline constexpr double pressure_ref = 101325.0;         // Pa

// Sutherland's law for the dynamic viscosity of air.
inline constexpr double viscosity_ref = 1.716e-5;        // Pa s
inline constexpr double viscosity_temperature_ref = 273.15;  // K
inline constexpr double sutherland_constant = 110.4;     // K

}  // namespace aeromc::constants
