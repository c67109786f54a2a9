#pragma once

#include "gspkit/types.hpp"

namespace gspkit {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, largest-magnitude entry positive
  int sweeps = 0;
};

// Cyclic Jacobi eigensolver for dense symmetric matrices.
//
// jacobi_eigen_serial visits pairs in row-cyclic order. jacobi_eigen uses a
// round-robin (tournament) ordering so that the N/2 rotations of one round act
// on disjoint row/column pairs and are applied in parallel; its output does
// not depend on the number of threads.
//
// Throws NumericalError if the matrix is not finite or does not converge
// within max_sweeps.
SymmetricEigen jacobi_eigen_serial(const Matrix& a, int max_sweeps = 100);
SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps = 100);

// Sorts eigenpairs ascending and fixes each eigenvector's sign so that its
// largest-magnitude entry (first one on ties) is positive.
void canonicalize(Vector& values, Matrix& vectors);

}  // namespace gspkit
