#ifndef MUI_SIMPLEX_HPP
#define MUI_SIMPLEX_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mui {

/// Dense two-phase primal simplex for
///     maximize c^T x  s.t.  A x = b,  x >= 0.
/// Bland's rule throughout, so it terminates and is deterministic.
/// Returns a basic feasible optimal solution, or nullopt if infeasible
/// or unbounded. Problem sizes here are tiny; no effort is made to be fast.
class SimplexSolver {
public:
    explicit SimplexSolver(double tol = 1e-9) : tol_(tol) {}

    std::optional<Eigen::VectorXd> maximize(const Eigen::MatrixXd& a,
                                            const Eigen::VectorXd& b,
                                            const Eigen::VectorXd& c) const {
        const int m = static_cast<int>(a.rows());
        const int n = static_cast<int>(a.cols());
        // Tableau over structural + artificial variables, rhs last.
        Eigen::MatrixXd t(m, n + m + 1);
        t.leftCols(n) = a;
        t.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
        t.col(n + m) = b;
        for (int i = 0; i < m; ++i)
            if (t(i, n + m) < 0.0) t.row(i) = -t.row(i);
        std::vector<int> basis(m);
        for (int i = 0; i < m; ++i) basis[i] = n + i;

        // Phase 1: minimize the sum of artificials.
        Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + m);
        cost1.tail(m).setOnes();
        if (!run(t, basis, cost1, n + m)) return std::nullopt;
        double art_sum = 0.0;
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n) art_sum += t(i, n + m);
        if (art_sum > 1e-7) return std::nullopt;  // infeasible
        // Pivot any residual artificials out of the basis when possible.
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            int enter = -1;
            for (int j = 0; j < n; ++j)
                if (std::abs(t(i, j)) > tol_) { enter = j; break; }
            if (enter >= 0) pivot(t, basis, i, enter);
            // Otherwise the row is redundant; its artificial stays at zero.
        }

        // Phase 2: minimize -c over structural variables only.
        Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n + m);
        cost2.head(n) = -c;
        if (!run(t, basis, cost2, n)) return std::nullopt;  // unbounded

        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) x(basis[i]) = t(i, n + m);
        return x;
    }

private:
    double tol_;

    static void pivot(Eigen::MatrixXd& t, std::vector<int>& basis, int row, int col) {
        t.row(row) /= t(row, col);
        for (int i = 0; i < t.rows(); ++i)
            if (i != row && std::abs(t(i, col)) > 0.0)
                t.row(i) -= t(i, col) * t.row(row);
        basis[row] = col;
    }

    /// Minimizes cost^T x over the current tableau; only columns < ncols
    /// may enter. Returns false on unboundedness.
    bool run(Eigen::MatrixXd& t, std::vector<int>& basis, const Eigen::VectorXd& cost,
             int ncols) const {
        const int m = static_cast<int>(t.rows());
        const int rhs = static_cast<int>(t.cols()) - 1;
        for (;;) {
            // Reduced costs: d_j = cost_j - cost_B^T t_col(j).
            int enter = -1;
            for (int j = 0; j < ncols; ++j) {
                double d = cost(j);
                for (int i = 0; i < m; ++i) d -= cost(basis[i]) * t(i, j);
                if (d < -tol_) { enter = j; break; }  // Bland: first improving
            }
            if (enter < 0) return true;  // optimal
            int leave = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m; ++i) {
                if (t(i, enter) > tol_) {
                    const double ratio = t(i, rhs) / t(i, enter);
                    if (leave < 0 || ratio < best_ratio - 1e-15 ||
                        (std::abs(ratio - best_ratio) <= 1e-15 &&
                         basis[i] < basis[leave]))
                    {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(t, basis, leave, enter);
        }
    }
};

}  // namespace mui

#endif  // MUI_SIMPLEX_HPP
