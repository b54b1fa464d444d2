#pragma once

#include "daniell/types.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <vector>

namespace daniell {

/// Polynomial coefficients, constant term first.
template <typename Scalar>
using Polynomial = std::vector<Scalar>;

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline Rational magnitude(const Rational& x) { return abs(x); }

}  // namespace detail

/// Determinant by Gaussian elimination with largest-magnitude pivoting (exact for Rational).
template <typename Scalar>
Scalar determinant(MatrixX<Scalar> a)
{
    if (a.rows() != a.cols()) throw DomainError("determinant of a non-square matrix");
    const Eigen::Index n = a.rows();
    Scalar det = 1;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        for (Eigen::Index i = k + 1; i < n; ++i)
            if (detail::magnitude(a(i, k)) > detail::magnitude(a(pivot, k))) pivot = i;
        if (a(pivot, k) == Scalar(0)) return Scalar(0);
        if (pivot != k) {
            a.row(k).swap(a.row(pivot));
            det = -det;
        }
        det *= a(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const Scalar factor = a(i, k) / a(k, k);
            if (factor == Scalar(0)) continue;
            for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return det;
}

/**
 * Coefficients of det(tI - M) by the Faddeev-LeVerrier recursion:
 * M_1 = M, c_{n-k} = -tr(M_k)/k, M_{k+1} = M (M_k + c_{n-k} I).
 */
template <typename Scalar>
Polynomial<Scalar> characteristic_polynomial(const MatrixX<Scalar>& m)
{
    if (m.rows() != m.cols()) throw DomainError("characteristic polynomial of a non-square matrix");
    const Eigen::Index n = m.rows();
    Polynomial<Scalar> c(std::size_t(n) + 1, Scalar(0));
    c[std::size_t(n)] = 1;
    if (n == 0) return c;
    MatrixX<Scalar> mk = m;
    for (Eigen::Index k = 1; k <= n; ++k) {
        Scalar tr = 0;
        for (Eigen::Index i = 0; i < n; ++i) tr += mk(i, i);
        const Scalar ck = -tr / Scalar(k);
        c[std::size_t(n - k)] = ck;
        if (k == n) break;
        MatrixX<Scalar> shifted = mk;
        for (Eigen::Index i = 0; i < n; ++i) shifted(i, i) += ck;
        mk = m * shifted;
    }
    return c;
}

/// Coefficients of det(tI + M).
template <typename Scalar>
Polynomial<Scalar> shifted_determinant_polynomial(const MatrixX<Scalar>& m)
{
    return characteristic_polynomial<Scalar>(-m);
}

/// p(t) * t^k
template <typename Scalar>
Polynomial<Scalar> shift_up(Polynomial<Scalar> p, std::size_t k)
{
    p.insert(p.begin(), k, Scalar(0));
    return p;
}

template <typename Scalar>
MatrixX<Scalar> submatrix(const MatrixX<Scalar>& a, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols)
{
    MatrixX<Scalar> s(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(Eigen::Index(i), Eigen::Index(j)) = a(rows[i], cols[j]);
    return s;
}

/// Calls visit on every k-subset of {0 .. n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(Eigen::Index n, Eigen::Index k, Visit&& visit)
{
    if (k < 0 || k > n) return;
    std::vector<Eigen::Index> s(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) s[std::size_t(i)] = i;
    for (;;) {
        visit(static_cast<const std::vector<Eigen::Index>&>(s));
        Eigen::Index i = k - 1;
        while (i >= 0 && s[std::size_t(i)] == n - k + i) --i;
        if (i < 0) return;
        ++s[std::size_t(i)];
        for (Eigen::Index j = i + 1; j < k; ++j) s[std::size_t(j)] = s[std::size_t(j - 1)] + 1;
    }
}

/// Sum of the principal minors of size k (the k-th elementary symmetric function of the eigenvalues).
template <typename Scalar>
Scalar principal_minor_sum(const MatrixX<Scalar>& a, Eigen::Index k)
{
    Scalar sum = 0;
    for_each_subset(a.rows(), k, [&](const std::vector<Eigen::Index>& s) { sum += determinant<Scalar>(submatrix(a, s, s)); });
    return sum;
}

template <typename Scalar>
struct SylvesterReport {
    Polynomial<Scalar> lhs;  // t^n det(tI_m + AB)
    Polynomial<Scalar> rhs;  // t^m det(tI_n + BA)
    // Both sides divided by the common factor t^min(m, n).
    Polynomial<Scalar> reduced_lhs;
    Polynomial<Scalar> reduced_rhs;
    bool holds = false;
};

template <typename Scalar>
SylvesterReport<Scalar> sylvester_identity_check(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b)
{
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw DomainError("Sylvester check needs A m x n and B n x m");
    const auto m = std::size_t(a.rows()), n = std::size_t(a.cols());
    SylvesterReport<Scalar> r;
    r.lhs = shift_up(shifted_determinant_polynomial<Scalar>(a * b), n);
    r.rhs = shift_up(shifted_determinant_polynomial<Scalar>(b * a), m);
    const std::size_t common = std::min(m, n);
    r.reduced_lhs.assign(r.lhs.begin() + std::ptrdiff_t(common), r.lhs.end());
    r.reduced_rhs.assign(r.rhs.begin() + std::ptrdiff_t(common), r.rhs.end());
    r.holds = r.lhs == r.rhs;
    return r;
}

template <typename Scalar>
struct CauchyBinetReport {
    Scalar det_ab;           // det(AB)
    Scalar column_subsets;   // sum over m-subsets S of det(A[:, S]) det(B[S, :])
    Scalar complementary;    // sum over |J| = n - m of det(BA) with rows/cols in J deleted (size m)
    Scalar literal;          // sum over |J| = m of det(BA) with rows/cols in J deleted (size n - m)
    bool classical_holds = false;
    bool complementary_holds = false;
    bool literal_holds = false;
};

/**
 * Three readings of Cauchy-Binet for m < n. The complementary form keeps
 * m x m principal minors of BA; the literal form deletes m indices and keeps
 * (n - m) x (n - m) minors. They agree when n = 2m.
 */
template <typename Scalar>
CauchyBinetReport<Scalar> cauchy_binet_check(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b)
{
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw DomainError("Cauchy-Binet check needs A m x n and B n x m");
    const Eigen::Index m = a.rows(), n = a.cols();
    if (!(m < n)) throw DomainError("Cauchy-Binet check needs m < n");
    CauchyBinetReport<Scalar> r;
    r.det_ab = determinant<Scalar>(a * b);
    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) all_rows[std::size_t(i)] = i;
    r.column_subsets = 0;
    for_each_subset(n, m, [&](const std::vector<Eigen::Index>& s) {
        r.column_subsets += determinant<Scalar>(submatrix(a, all_rows, s)) * determinant<Scalar>(submatrix(b, s, all_rows));
    });
    const MatrixX<Scalar> ba = b * a;
    r.complementary = principal_minor_sum<Scalar>(ba, m);
    r.literal = principal_minor_sum<Scalar>(ba, n - m);
    r.classical_holds = r.det_ab == r.column_subsets;
    r.complementary_holds = r.det_ab == r.complementary;
    r.literal_holds = r.det_ab == r.literal;
    return r;
}

/// Rational matrix from integers or doubles (exactly).
template <typename T>
MatrixX<Rational> to_rational_matrix(const MatrixX<T>& a)
{
    MatrixX<Rational> r(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = Rational(a(i, j));
    return r;
}

}  // namespace daniell
