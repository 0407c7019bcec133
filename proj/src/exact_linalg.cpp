#include "ktinv/exact_linalg.hpp"

#include <algorithm>

#include "ktinv/errors.hpp"

namespace ktinv {

BareissResult bareiss_echelon(MpzMatrix m, int ncols) {
    const int nrows = static_cast<int>(m.size());
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != ncols) fail(ErrorKind::LengthMismatch, "ragged matrix");

    BareissResult out;
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int p = r;
        while (p < nrows && m[p][c] == 0) ++p;
        if (p == nrows) continue;
        std::swap(m[r], m[p]);
        const mpz_class& piv = m[r][c];
        for (int i = r + 1; i < nrows; ++i) {
            for (int j = c + 1; j < ncols; ++j) {
                mpz_class t = piv * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = piv;
        out.pivot_columns.push_back(c);
        ++r;
    }
    out.rank = r;
    out.last_pivot = prev;
    m.resize(r);
    out.echelon = std::move(m);
    return out;
}

std::vector<mpz_class> primitive_row(const MpqVector& row) {
    mpz_class den = 1;
    for (const auto& q : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> out;
    out.reserve(row.size());
    mpz_class g = 0;
    for (const auto& q : row) {
        mpz_class v = q.get_num() * (den / q.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        out.push_back(std::move(v));
    }
    if (g > 1)
        for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return out;
}

std::vector<MpqVector> exact_nullspace(const BareissResult& ech, int ncols) {
    const int r = ech.rank;
    std::vector<MpqVector> R(r, MpqVector(ncols));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ncols; ++j) R[i][j] = mpq_class(ech.echelon[i][j]);

    // Gauss-Jordan on the echelon rows
    for (int i = r - 1; i >= 0; --i) {
        const int c = ech.pivot_columns[i];
        const mpq_class piv = R[i][c];
        for (int j = 0; j < ncols; ++j) R[i][j] /= piv;
        for (int k = 0; k < i; ++k) {
            const mpq_class f = R[k][c];
            if (f == 0) continue;
            for (int j = 0; j < ncols; ++j) R[k][j] -= f * R[i][j];
        }
    }

    std::vector<bool> is_pivot(ncols, false);
    for (int c : ech.pivot_columns) is_pivot[c] = true;
    std::vector<MpqVector> basis;
    for (int f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        MpqVector v(ncols);
        v[f] = 1;
        for (int i = 0; i < r; ++i) v[ech.pivot_columns[i]] = -R[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace ktinv
