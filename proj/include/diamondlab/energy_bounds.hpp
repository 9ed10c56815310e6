#pragma once

#include "diamondlab/laplace.hpp"
#include "diamondlab/report.hpp"

namespace diamondlab {

struct RadialAnchorConfig {
    double a = 1.0;       // inner boundary value
    double s = 1.0 / 3;   // inner cube/sphere scale (annulus radii s/2, L/2)
    double side = 1.0;    // L
    std::vector<int> ladder = {32, 64, 128};
    double rel_tol = 0.05;
    double solver_tol = 1e-7;
};

/// Solves the spherical annulus on embedding grids and compares the energy
/// with the closed form of the radial comparison profile A/r + B,
/// E = 4 pi A^2 (2/s - 2/L) = 2 pi a^2 s L / (L - s).
ExperimentReport check_radial_anchor(const RadialAnchorConfig& cfg = {});

/// Closed-form pieces of the radial benchmark.
double radial_profile_coefficient(double a, double s, double L);  // A
double radial_closed_form_energy(double a, double s, double L);

struct EnergyBoundConfig {
    Rational side = Rational(1);
    std::vector<double> eta = {0.25, 0.5, 1.0};
    std::vector<Rational> s_fractions = {Rational(1, 6), Rational(1, 12)};
    std::vector<int> ladder = {24, 48, 96};
    double c_har = 6.0;          // pinned fitted constant, E >= c_har eta^2 s
    double stabilization = 0.2;  // relative change between last two refinements
    double solver_tol = 1e-7;
};

/// Cubical annulus with zero outer data and constant eta on the inner cube
/// boundary; reports E/(eta^2 s) across the refinement ladder.
ExperimentReport check_energy_lower_bound(const EnergyBoundConfig& cfg = {});

struct L2EnergyBoundConfig {
    Rational side = Rational(1);
    std::vector<double> eta = {0.5, 1.0};
    Rational s_fraction = Rational(1, 6);
    std::vector<int> ladder = {24, 48, 96};
    int components = 8;
    double cap_c = 1.0;           // cap angular radius = cap_c * eta
    double c_har = 0.3;           // pinned fitted constant, E >= c_har eta^4 s^3
    double stabilization = 0.25;
    double solver_tol = 1e-7;
    bool scaling_check = true;    // verify E scales like s^3 between s and s/2
};

/// Adversarial vector-valued datum: a Lipschitz cap bump of height eta*s on
/// the inner boundary, zero elsewhere; reports E/(eta^4 s^3).
ExperimentReport check_l2_energy_lower_bound(const L2EnergyBoundConfig& cfg = {});

}  // namespace diamondlab
