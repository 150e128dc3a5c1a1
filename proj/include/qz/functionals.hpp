#pragma once

#include "qz/radial.hpp"

#include <string>

namespace qz {

// Radial fields of the scalar model on one grid; E and n even, v odd (radial velocity).
struct FieldState {
  GridPtr grid;
  CVec E;
  Vec n;
  Vec v;
  double Gamma = 0.0;

  int d() const { return grid->d; }
};

FieldState make_field_state(GridPtr grid, CVec E, Vec n, Vec v, double Gamma);
// E0 = c exp(-r^2), n0 = -|E0|^2, v0 = 0
FieldState gaussian_state(GridPtr grid, double c, double Gamma);

// int |E|^2 xi^(d-1) dxi, angular factor omitted
double plasmon_number(const FieldState& s);
// int (|grad E|^2 + n |E|^2 + n^2/2 + v^2/2 + Gamma |Delta E|^2 + Gamma/2 |grad n|^2) xi^(d-1) dxi
double hamiltonian_scalar(const FieldState& s);
double gradient_norm_sq(const FieldState& s);

// Largest fixed point of x = |H| + (C / Gamma) N^(2 - d/4) x^(d/4).
double gradient_bound(double N, double H, double Gamma, int d, double C = 1.0);

void write_field_csv(const std::string& path, const FieldState& s);
FieldState read_field_csv(const std::string& path, int d, double Gamma);

}  // namespace qz
