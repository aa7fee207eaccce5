#pragma once

#include <iosfwd>
#include <string>

#include "rii/tridiagonal.hpp"

namespace rii {

// TDP1 pencil file:
//   TDP1 N
//   <N diag of A>
//   <N-1 superdiag of A>
//   <N-1 subdiag of A>
//   <same three lines for B>
//
// TDM1 symmetric matrix file:
//   TDM1 N
//   <N diag>
//   <N-1 off-diagonal>
//
// Values are whitespace separated, one logical block per line. Readers reject
// wrong counts and non-finite values with ParseError naming the line.

TridiagonalPencil read_tdp1(std::istream& in);
void write_tdp1(std::ostream& out, const TridiagonalPencil& p);

TridiagonalMatrix read_tdm1(std::istream& in);
/// Writes the superdiagonal; the matrix is expected to be symmetric.
void write_tdm1(std::ostream& out, const TridiagonalMatrix& m);

TridiagonalPencil load_tdp1(const std::string& path);
void save_tdp1(const std::string& path, const TridiagonalPencil& p);
TridiagonalMatrix load_tdm1(const std::string& path);
void save_tdm1(const std::string& path, const TridiagonalMatrix& m);

}  // namespace rii
