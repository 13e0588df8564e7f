#include "stochuc/basis_factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stochuc {

namespace {
constexpr double kDropTol = 1e-14;
constexpr double kSingularTol = 1e-11;
}  // namespace

BasisFactor::Singularity BasisFactor::factorize(int m, std::span<const SparseColumn> columns) {
    if (static_cast<int>(columns.size()) != m) throw std::invalid_argument("basis must be square");
    m_ = m;
    prow_.clear();
    pcol_.clear();
    diag_.clear();
    l_start_.assign(1, 0);
    l_index_.clear();
    l_value_.clear();
    u_start_.assign(1, 0);
    u_index_.clear();
    u_value_.clear();
    eta_pos_.clear();
    eta_start_.assign(1, 0);
    eta_index_.clear();
    eta_pivot_.clear();
    eta_value_.clear();
    work_.assign(static_cast<std::size_t>(m), 0.0);
    nucleus_size_ = 0;

    const auto um = static_cast<std::size_t>(m);
    std::vector<int> row_count(um, 0), col_count(um, 0);
    for (int p = 0; p < m; ++p) {
        const auto& c = columns[static_cast<std::size_t>(p)];
        col_count[static_cast<std::size_t>(p)] = static_cast<int>(c.index.size());
        for (int r : c.index) ++row_count[static_cast<std::size_t>(r)];
    }
    // Row-wise copy: (position, value) per row.
    std::vector<int> rstart(um + 1, 0);
    for (int r = 0; r < m; ++r) rstart[static_cast<std::size_t>(r) + 1] = rstart[static_cast<std::size_t>(r)] + row_count[static_cast<std::size_t>(r)];
    std::vector<int> rpos(static_cast<std::size_t>(rstart[um]));
    std::vector<double> rval(rpos.size());
    {
        std::vector<int> fill(rstart.begin(), rstart.end() - 1);
        for (int p = 0; p < m; ++p) {
            const auto& c = columns[static_cast<std::size_t>(p)];
            for (std::size_t e = 0; e < c.index.size(); ++e) {
                const int slot = fill[static_cast<std::size_t>(c.index[e])]++;
                rpos[static_cast<std::size_t>(slot)] = p;
                rval[static_cast<std::size_t>(slot)] = c.value[e];
            }
        }
    }

    std::vector<char> row_active(um, 1), col_active(um, 1);
    std::vector<int> col_stack, row_stack;
    for (int p = 0; p < m; ++p)
        if (col_count[static_cast<std::size_t>(p)] == 1) col_stack.push_back(p);
    for (int r = 0; r < m; ++r)
        if (row_count[static_cast<std::size_t>(r)] == 1) row_stack.push_back(r);

    auto close_step = [this] {
        l_start_.push_back(static_cast<int>(l_index_.size()));
        u_start_.push_back(static_cast<int>(u_index_.size()));
    };

    bool progress = true;
    while (progress) {
        progress = false;
        while (!col_stack.empty()) {
            const int p = col_stack.back();
            col_stack.pop_back();
            if (!col_active[static_cast<std::size_t>(p)] || col_count[static_cast<std::size_t>(p)] != 1) continue;
            const auto& c = columns[static_cast<std::size_t>(p)];
            int r = -1;
            double a = 0.0;
            for (std::size_t e = 0; e < c.index.size(); ++e) {
                if (row_active[static_cast<std::size_t>(c.index[e])]) {
                    r = c.index[e];
                    a = c.value[e];
                    break;
                }
            }
            if (r < 0 || std::abs(a) < kSingularTol) continue;  // left for the nucleus
            prow_.push_back(r);
            pcol_.push_back(p);
            diag_.push_back(a);
            for (int s = rstart[static_cast<std::size_t>(r)]; s < rstart[static_cast<std::size_t>(r) + 1]; ++s) {
                const int q = rpos[static_cast<std::size_t>(s)];
                if (q == p || !col_active[static_cast<std::size_t>(q)]) continue;
                u_index_.push_back(q);
                u_value_.push_back(rval[static_cast<std::size_t>(s)]);
                if (--col_count[static_cast<std::size_t>(q)] == 1) col_stack.push_back(q);
            }
            close_step();
            row_active[static_cast<std::size_t>(r)] = 0;
            col_active[static_cast<std::size_t>(p)] = 0;
            progress = true;
        }
        while (!row_stack.empty()) {
            const int r = row_stack.back();
            row_stack.pop_back();
            if (!row_active[static_cast<std::size_t>(r)] || row_count[static_cast<std::size_t>(r)] != 1) continue;
            int p = -1;
            double a = 0.0;
            for (int s = rstart[static_cast<std::size_t>(r)]; s < rstart[static_cast<std::size_t>(r) + 1]; ++s) {
                if (col_active[static_cast<std::size_t>(rpos[static_cast<std::size_t>(s)])]) {
                    p = rpos[static_cast<std::size_t>(s)];
                    a = rval[static_cast<std::size_t>(s)];
                    break;
                }
            }
            if (p < 0 || std::abs(a) < kSingularTol) continue;
            prow_.push_back(r);
            pcol_.push_back(p);
            diag_.push_back(a);
            const auto& c = columns[static_cast<std::size_t>(p)];
            for (std::size_t e = 0; e < c.index.size(); ++e) {
                const int i = c.index[e];
                if (i == r || !row_active[static_cast<std::size_t>(i)]) continue;
                l_index_.push_back(i);
                l_value_.push_back(c.value[e] / a);
                if (--row_count[static_cast<std::size_t>(i)] == 1) row_stack.push_back(i);
            }
            close_step();
            row_active[static_cast<std::size_t>(r)] = 0;
            col_active[static_cast<std::size_t>(p)] = 0;
            progress = true;
        }
    }

    // Dense nucleus.
    std::vector<int> nrows, ncols;
    for (int r = 0; r < m; ++r)
        if (row_active[static_cast<std::size_t>(r)]) nrows.push_back(r);
    for (int p = 0; p < m; ++p)
        if (col_active[static_cast<std::size_t>(p)]) ncols.push_back(p);
    Singularity sing;
    const auto s = nrows.size();
    nucleus_size_ = static_cast<int>(s);
    if (s == 0) return sing;
    std::stable_sort(ncols.begin(), ncols.end(), [&](int x, int y) {
        return col_count[static_cast<std::size_t>(x)] < col_count[static_cast<std::size_t>(y)];
    });
    std::vector<int> row_slot(um, -1);
    for (std::size_t i = 0; i < s; ++i) row_slot[static_cast<std::size_t>(nrows[i])] = static_cast<int>(i);
    std::vector<double> dense(s * s, 0.0);
    for (std::size_t k = 0; k < s; ++k) {
        const auto& c = columns[static_cast<std::size_t>(ncols[k])];
        for (std::size_t e = 0; e < c.index.size(); ++e) {
            const int i = row_slot[static_cast<std::size_t>(c.index[e])];
            if (i >= 0) dense[static_cast<std::size_t>(i) * s + k] = c.value[e];
        }
    }
    std::vector<char> row_done(s, 0);
    std::vector<int> singular_cols;
    for (std::size_t k = 0; k < s; ++k) {
        std::size_t best = s;
        double best_abs = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            if (row_done[i]) continue;
            const double v = std::abs(dense[i * s + k]);
            if (v > best_abs) {
                best_abs = v;
                best = i;
            }
        }
        if (best == s || best_abs < kSingularTol) {
            singular_cols.push_back(ncols[k]);
            continue;
        }
        const double piv = dense[best * s + k];
        const double* prow = &dense[best * s];
        for (std::size_t i = 0; i < s; ++i) {
            if (row_done[i] || i == best) continue;
            double* row = &dense[i * s];
            const double v = row[k];
            if (v == 0.0) continue;
            const double l = v / piv;
            row[k] = 0.0;
            for (std::size_t j = k + 1; j < s; ++j) row[j] -= l * prow[j];
            l_index_.push_back(nrows[i]);
            l_value_.push_back(l);
        }
        for (std::size_t j = k + 1; j < s; ++j) {
            if (std::abs(prow[j]) > kDropTol) {
                u_index_.push_back(ncols[j]);
                u_value_.push_back(prow[j]);
            }
        }
        prow_.push_back(nrows[best]);
        pcol_.push_back(ncols[k]);
        diag_.push_back(piv);
        close_step();
        row_done[best] = 1;
    }
    if (!singular_cols.empty()) {
        sing.positions = singular_cols;
        for (std::size_t i = 0; i < s; ++i)
            if (!row_done[i]) sing.rows.push_back(nrows[i]);
    }
    return sing;
}

void BasisFactor::ftran(std::vector<double>& b) const {
    const auto nk = prow_.size();
    for (std::size_t k = 0; k < nk; ++k) {
        const double v = b[static_cast<std::size_t>(prow_[k])];
        if (v == 0.0) continue;
        for (int e = l_start_[k]; e < l_start_[k + 1]; ++e)
            b[static_cast<std::size_t>(l_index_[static_cast<std::size_t>(e)])] -= l_value_[static_cast<std::size_t>(e)] * v;
    }
    auto& x = work_;
    for (std::size_t k = nk; k-- > 0;) {
        double s = b[static_cast<std::size_t>(prow_[k])];
        for (int e = u_start_[k]; e < u_start_[k + 1]; ++e)
            s -= u_value_[static_cast<std::size_t>(e)] * x[static_cast<std::size_t>(u_index_[static_cast<std::size_t>(e)])];
        x[static_cast<std::size_t>(pcol_[k])] = s / diag_[k];
    }
    for (std::size_t t = 0; t < eta_pos_.size(); ++t) {
        const auto p = static_cast<std::size_t>(eta_pos_[t]);
        const double xp = x[p] / eta_pivot_[t];
        x[p] = xp;
        if (xp == 0.0) continue;
        for (int e = eta_start_[t]; e < eta_start_[t + 1]; ++e)
            x[static_cast<std::size_t>(eta_index_[static_cast<std::size_t>(e)])] -= eta_value_[static_cast<std::size_t>(e)] * xp;
    }
    b.swap(x);
    x.resize(static_cast<std::size_t>(m_));
}

void BasisFactor::btran(std::vector<double>& d) const {
    for (std::size_t t = eta_pos_.size(); t-- > 0;) {
        const auto p = static_cast<std::size_t>(eta_pos_[t]);
        double s = d[p];
        for (int e = eta_start_[t]; e < eta_start_[t + 1]; ++e)
            s -= eta_value_[static_cast<std::size_t>(e)] * d[static_cast<std::size_t>(eta_index_[static_cast<std::size_t>(e)])];
        d[p] = s / eta_pivot_[t];
    }
    auto& y = work_;
    const auto nk = prow_.size();
    for (std::size_t k = 0; k < nk; ++k) {
        const double w = d[static_cast<std::size_t>(pcol_[k])] / diag_[k];
        y[static_cast<std::size_t>(prow_[k])] = w;
        if (w == 0.0) continue;
        for (int e = u_start_[k]; e < u_start_[k + 1]; ++e)
            d[static_cast<std::size_t>(u_index_[static_cast<std::size_t>(e)])] -= u_value_[static_cast<std::size_t>(e)] * w;
    }
    for (std::size_t k = nk; k-- > 0;) {
        double s = 0.0;
        for (int e = l_start_[k]; e < l_start_[k + 1]; ++e)
            s += l_value_[static_cast<std::size_t>(e)] * y[static_cast<std::size_t>(l_index_[static_cast<std::size_t>(e)])];
        y[static_cast<std::size_t>(prow_[k])] -= s;
    }
    d.swap(y);
    y.resize(static_cast<std::size_t>(m_));
}

void BasisFactor::update(int position, const std::vector<double>& alpha) {
    const auto p = static_cast<std::size_t>(position);
    eta_pos_.push_back(position);
    eta_pivot_.push_back(alpha[p]);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i == p || std::abs(alpha[i]) <= kDropTol) continue;
        eta_index_.push_back(static_cast<int>(i));
        eta_value_.push_back(alpha[i]);
    }
    eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

}  // namespace stochuc
