#pragma once

#include <vector>

#include <gmpxx.h>

namespace ktinv {

using MpzMatrix = std::vector<std::vector<mpz_class>>;
using MpqVector = std::vector<mpq_class>;

/// Fraction-free (Bareiss) row echelon form. Every intermediate entry is a
/// minor of the input, so all divisions are exact.
struct BareissResult {
    int rank = 0;
    std::vector<int> pivot_columns;
    mpz_class last_pivot{1};  // leading principal minor on the pivot columns
    MpzMatrix echelon;        // first `rank` rows are the echelon rows
};

BareissResult bareiss_echelon(MpzMatrix m, int ncols);

/// Multiplies by the common denominator and divides by the content, giving
/// a primitive integer vector with the same span. Zero input gives zeros.
std::vector<mpz_class> primitive_row(const MpqVector& row);

/// Basis of the right null space over Q: one vector per free column, with a
/// one in that column and the pivot entries from the reduced echelon form.
std::vector<MpqVector> exact_nullspace(const BareissResult& ech, int ncols);

}  // namespace ktinv
