#pragma once

#include <span>
#include <vector>

namespace stochuc {

/// Sparse column of the basis matrix, indexed by row.
struct SparseColumn {
    std::span<const int> index;
    std::span<const double> value;
};

/// LU factorization of a square simplex basis with product-form updates.
///
/// Rows are constraint rows, "positions" are basis slots. FTRAN maps a
/// row-indexed right-hand side to position-indexed values; BTRAN maps the
/// other way. Triangular parts are peeled off with singleton passes and the
/// remaining nucleus is factored densely with partial pivoting.
class BasisFactor {
public:
    struct Singularity {
        std::vector<int> positions;  // slots whose column could not be pivoted
        std::vector<int> rows;       // rows left without a pivot, same length
    };

    /// Returns the singular slots (empty on success).
    Singularity factorize(int m, std::span<const SparseColumn> columns);

    /// In place: b (row-indexed) -> B^{-1} b (position-indexed).
    void ftran(std::vector<double>& b) const;
    /// In place: d (position-indexed) -> B^{-T} d (row-indexed).
    void btran(std::vector<double>& d) const;

    /// Replaces slot `position` by a column whose FTRAN image is `alpha`.
    void update(int position, const std::vector<double>& alpha);

    [[nodiscard]] int num_updates() const { return static_cast<int>(eta_pos_.size()); }
    [[nodiscard]] int nucleus_size() const { return nucleus_size_; }
    [[nodiscard]] int dim() const { return m_; }

private:
    int m_ = 0;
    int nucleus_size_ = 0;
    std::vector<int> prow_, pcol_;
    std::vector<double> diag_;
    std::vector<int> l_start_, l_index_;
    std::vector<double> l_value_;
    std::vector<int> u_start_, u_index_;
    std::vector<double> u_value_;
    std::vector<int> eta_pos_, eta_start_, eta_index_;
    std::vector<double> eta_pivot_, eta_value_;
    mutable std::vector<double> work_;
};

}  // namespace stochuc
