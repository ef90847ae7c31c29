#include "stochinv/lp.hpp"

#include <numeric>
#include <sstream>

namespace stochinv {

namespace {

// Dense tableau with a cost row. Column layout:
//   [structural columns (split free vars)] [slacks] [artificials] [rhs]
class Tableau {
public:
    Tableau(const LpProblem& p) : prob_(p) {
        const int n = p.numVars();
        colOfVar_.resize(static_cast<size_t>(n));
        negColOfVar_.assign(static_cast<size_t>(n), -1);
        int col = 0;
        for (int v = 0; v < n; ++v) {
            colOfVar_[static_cast<size_t>(v)] = col++;
            if (!p.varNonneg[static_cast<size_t>(v)]) negColOfVar_[static_cast<size_t>(v)] = col++;
        }
        structCols_ = col;
        m_ = static_cast<int>(p.rows.size());
        int slacks = 0;
        for (const auto& r : p.rows)
            if (r.rel == Rel::Le) ++slacks;
        slackStart_ = structCols_;
        artStart_ = structCols_ + slacks;
        nCols_ = artStart_ + m_;
        if (static_cast<size_t>(m_) * static_cast<size_t>(nCols_) > p.cellCap)
            throw SizeLimitError("LP tableau size " + std::to_string(m_) + "x" + std::to_string(nCols_) +
                                 " exceeds cap");

        T_.assign(static_cast<size_t>(m_), std::vector<Rat>(static_cast<size_t>(nCols_) + 1, Rat(0)));
        basis_.resize(static_cast<size_t>(m_));

        int slack = slackStart_;
        for (int i = 0; i < m_; ++i) {
            const auto& row = p.rows[static_cast<size_t>(i)];
            auto& t = T_[static_cast<size_t>(i)];
            for (const auto& [v, c] : row.expr.coeffs) {
                t[static_cast<size_t>(colOfVar_[static_cast<size_t>(v)])] += c;
                if (negColOfVar_[static_cast<size_t>(v)] >= 0)
                    t[static_cast<size_t>(negColOfVar_[static_cast<size_t>(v)])] -= c;
            }
            Rat rhs = -row.expr.constant;  // expr has constant on the left
            if (row.rel == Rel::Le) t[static_cast<size_t>(slack++)] = 1;
            t[static_cast<size_t>(nCols_)] = rhs;
            if (rhs < 0)
                for (auto& x : t) x = -x;
            t[static_cast<size_t>(artStart_ + i)] = 1;
            basis_[static_cast<size_t>(i)] = artStart_ + i;
        }
    }

    LpOutcome run() {
        // Phase 1: minimize the sum of artificials.
        std::vector<Rat> phase1Cost(static_cast<size_t>(nCols_), Rat(0));
        for (int j = artStart_; j < nCols_; ++j) phase1Cost[static_cast<size_t>(j)] = 1;
        setCostRow(phase1Cost);
        bool bounded = iterate(/*allowedEnd=*/nCols_);
        (void)bounded;  // phase 1 objective is bounded below by 0
        if (costValue_ > 0) return LpOutcome{LpOutcome::Status::Infeasible, Rat(0), {}};
        dropArtificials();

        // Phase 2: original objective over structural columns.
        std::vector<Rat> cost(static_cast<size_t>(nCols_), Rat(0));
        for (const auto& [v, c] : prob_.objective.coeffs) {
            cost[static_cast<size_t>(colOfVar_[static_cast<size_t>(v)])] += c;
            if (negColOfVar_[static_cast<size_t>(v)] >= 0)
                cost[static_cast<size_t>(negColOfVar_[static_cast<size_t>(v)])] -= c;
        }
        setCostRow(cost);
        if (!iterate(/*allowedEnd=*/artStart_))
            return LpOutcome{LpOutcome::Status::Unbounded, Rat(0), {}};

        LpOutcome out;
        out.status = LpOutcome::Status::Optimal;
        std::vector<Rat> colVal(static_cast<size_t>(nCols_), Rat(0));
        for (int i = 0; i < m_; ++i)
            colVal[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = T_[static_cast<size_t>(i)][static_cast<size_t>(nCols_)];
        out.assignment.resize(static_cast<size_t>(prob_.numVars()));
        for (int v = 0; v < prob_.numVars(); ++v) {
            Rat x = colVal[static_cast<size_t>(colOfVar_[static_cast<size_t>(v)])];
            if (negColOfVar_[static_cast<size_t>(v)] >= 0)
                x -= colVal[static_cast<size_t>(negColOfVar_[static_cast<size_t>(v)])];
            out.assignment[static_cast<size_t>(v)] = x;
        }
        out.value = prob_.objective.eval(out.assignment);
        verify(out);
        return out;
    }

private:
    void setCostRow(const std::vector<Rat>& cost) {
        // reduced costs: c - c_B B^-1 A, computed by pricing out basic columns
        cost_ = cost;
        costValue_ = 0;
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<size_t>(i)];
            Rat cb = cost_[static_cast<size_t>(b)];
            if (cb == 0) continue;
            const auto& t = T_[static_cast<size_t>(i)];
            for (int j = 0; j < nCols_; ++j)
                if (!t[static_cast<size_t>(j)].is_zero()) cost_[static_cast<size_t>(j)] -= cb * t[static_cast<size_t>(j)];
            costValue_ += cb * t[static_cast<size_t>(nCols_)];
        }
    }

    // Returns false when unbounded. Columns >= allowedEnd are never entered.
    bool iterate(int allowedEnd) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < allowedEnd; ++j) {
                if (cost_[static_cast<size_t>(j)] < 0) { enter = j; break; }  // Bland: lowest index
            }
            if (enter < 0) return true;
            int leave = -1;
            Rat bestRatio(0);
            for (int i = 0; i < m_; ++i) {
                const Rat& a = T_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (a <= 0) continue;
                Rat ratio = T_[static_cast<size_t>(i)][static_cast<size_t>(nCols_)] / a;
                if (leave < 0 || ratio < bestRatio ||
                    (ratio == bestRatio && basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)]))
                {
                    leave = i;
                    bestRatio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void pivot(int r, int j) {
        auto& row = T_[static_cast<size_t>(r)];
        Rat piv = row[static_cast<size_t>(j)];
        std::vector<int> nz;
        nz.reserve(row.size());
        for (int c = 0; c <= nCols_; ++c) {
            Rat& x = row[static_cast<size_t>(c)];
            if (x.is_zero()) continue;
            x /= piv;
            nz.push_back(c);
        }
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            auto& ti = T_[static_cast<size_t>(i)];
            Rat f = ti[static_cast<size_t>(j)];
            if (f.is_zero()) continue;
            for (int c : nz) ti[static_cast<size_t>(c)] -= f * row[static_cast<size_t>(c)];
        }
        {
            // reduced costs update like a row; the objective value moves by
            // the entering column's reduced cost times the new basic value
            Rat f = cost_[static_cast<size_t>(j)];
            if (!f.is_zero()) {
                for (int c : nz) {
                    if (c == nCols_) costValue_ += f * row[static_cast<size_t>(c)];
                    else cost_[static_cast<size_t>(c)] -= f * row[static_cast<size_t>(c)];
                }
            }
        }
        basis_[static_cast<size_t>(r)] = j;
    }

    void dropArtificials() {
        // Pivot basic artificials out, or mark their rows redundant.
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<size_t>(i)] < artStart_) continue;
            int enter = -1;
            for (int j = 0; j < artStart_; ++j)
                if (!T_[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero()) { enter = j; break; }
            if (enter >= 0) {
                pivot(i, enter);
            }
            // else: redundant row; keeping it is harmless since its rhs is 0
            // and the artificial stays basic at value 0 (it can never re-enter
            // because phase 2 never enters columns >= artStart_ and a basic
            // column never enters).
        }
    }

    void verify(const LpOutcome& out) const {
        for (int v = 0; v < prob_.numVars(); ++v)
            if (prob_.varNonneg[static_cast<size_t>(v)] && out.assignment[static_cast<size_t>(v)] < 0)
                throw Error("internal: simplex produced negative value for nonnegative variable", 4);
        for (const auto& row : prob_.rows) {
            Rat r = row.expr.eval(out.assignment);
            if (row.rel == Rel::Eq ? (r != 0) : (r > 0))
                throw Error("internal: simplex solution violates a row exactly", 4);
        }
    }

    const LpProblem& prob_;
    int m_ = 0, nCols_ = 0, structCols_ = 0, slackStart_ = 0, artStart_ = 0;
    std::vector<std::vector<Rat>> T_;
    std::vector<int> basis_;
    std::vector<int> colOfVar_;
    std::vector<int> negColOfVar_;
    std::vector<Rat> cost_;
    Rat costValue_{0};
};

} // namespace

LpOutcome lpSolve(const LpProblem& problem) {
    Tableau t(problem);
    return t.run();
}

std::string lpDump(const LpProblem& p) {
    std::ostringstream os;
    auto lin = [&](const SymLin& e) {
        bool first = true;
        for (const auto& [v, c] : e.coeffs) {
            if (!first) os << " + ";
            os << ratStr(c) << "*" << p.varNames[static_cast<size_t>(v)];
            first = false;
        }
        if (first || e.constant != 0) {
            if (!first) os << " + ";
            os << ratStr(e.constant);
        }
    };
    os << "min ";
    lin(p.objective);
    os << "\ns.t.\n";
    for (const auto& r : p.rows) {
        os << "  ";
        lin(r.expr);
        os << (r.rel == Rel::Le ? " <= 0" : " == 0") << "\n";
    }
    for (int v = 0; v < p.numVars(); ++v)
        if (p.varNonneg[static_cast<size_t>(v)]) os << "  " << p.varNames[static_cast<size_t>(v)] << " >= 0\n";
    return os.str();
}

} // namespace stochinv
