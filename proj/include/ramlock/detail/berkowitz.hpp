#pragma once

#include <vector>

namespace ramlock::detail {

// Division-free characteristic polynomial (Berkowitz). Returns the monic
// charpoly with coefficients ascending, size d+1. R needs +, -, *.
template <class R>
std::vector<R> berkowitz_charpoly(const std::vector<std::vector<R>>& A,
                                  const R& zero, const R& one) {
    const std::size_t d = A.size();
    // p holds the charpoly of the leading r x r block, coefficients
    // descending (p[0] = leading).
    std::vector<R> p{one, zero - A[0][0]};
    for (std::size_t r = 2; r <= d; ++r) {
        // Row R_ = A[r-1][0..r-2], column C_ = A[0..r-2][r-1],
        // M = leading (r-1)x(r-1) block.
        std::vector<R> c(r + 1, zero);
        c[0] = one;
        c[1] = zero - A[r - 1][r - 1];
        std::vector<R> v(r - 1);  // v = M^k C, iteratively
        for (std::size_t i = 0; i < r - 1; ++i) v[i] = A[i][r - 1];
        for (std::size_t k = 2; k <= r; ++k) {
            R dot = zero;
            for (std::size_t i = 0; i < r - 1; ++i)
                dot = dot + A[r - 1][i] * v[i];
            c[k] = zero - dot;
            if (k < r) {
                std::vector<R> nv(r - 1, zero);
                for (std::size_t i = 0; i < r - 1; ++i) {
                    R acc = zero;
                    for (std::size_t j = 0; j < r - 1; ++j)
                        acc = acc + A[i][j] * v[j];
                    nv[i] = acc;
                }
                v.swap(nv);
            }
        }
        // p_new = T (Toeplitz of c) * p
        std::vector<R> np(r + 1, zero);
        for (std::size_t i = 0; i <= r; ++i) {
            R acc = zero;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (i >= j && i - j < c.size())
                    acc = acc + c[i - j] * p[j];
            }
            np[i] = acc;
        }
        p.swap(np);
    }
    std::vector<R> out(p.rbegin(), p.rend());  // ascending
    return out;
}

}  // namespace ramlock::detail
