#pragma once

#include "stochinv/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace stochinv {

/// Sparse linear expression `constant + sum coeffs[k] * k` over integer keys.
/// Used both for affine expressions over program variables and for linear
/// combinations of template unknowns; zero coefficients are always elided.
struct LinExpr {
    Rat constant{0};
    std::map<int, Rat> coeffs;

    LinExpr() = default;
    explicit LinExpr(Rat c) : constant(std::move(c)) {}
    static LinExpr var(int k, Rat coeff = Rat(1)) {
        LinExpr e;
        if (coeff != 0) e.coeffs[k] = std::move(coeff);
        return e;
    }

    bool isConstant() const { return coeffs.empty(); }
    bool isZero() const { return coeffs.empty() && constant == 0; }
    Rat coeff(int k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? Rat(0) : it->second;
    }
    void setCoeff(int k, Rat v) {
        if (v == 0) coeffs.erase(k);
        else coeffs[k] = std::move(v);
    }

    LinExpr& operator+=(const LinExpr& o) {
        constant += o.constant;
        for (const auto& [k, v] : o.coeffs) {
            Rat& c = coeffs[k];
            c += v;
            if (c == 0) coeffs.erase(k);
        }
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        constant -= o.constant;
        for (const auto& [k, v] : o.coeffs) {
            Rat& c = coeffs[k];
            c -= v;
            if (c == 0) coeffs.erase(k);
        }
        return *this;
    }
    LinExpr& operator*=(const Rat& s) {
        if (s == 0) { coeffs.clear(); constant = 0; return *this; }
        constant *= s;
        for (auto& [k, v] : coeffs) v *= s;
        return *this;
    }
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { a += b; return a; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { a -= b; return a; }
    friend LinExpr operator*(LinExpr a, const Rat& s) { a *= s; return a; }
    friend LinExpr operator*(const Rat& s, LinExpr a) { a *= s; return a; }
    friend LinExpr operator-(LinExpr a) { a *= Rat(-1); return a; }
    bool operator==(const LinExpr& o) const { return constant == o.constant && coeffs == o.coeffs; }

    /// Value at a point; keys beyond the point's size evaluate as 0.
    Rat eval(const std::vector<Rat>& point) const {
        Rat v = constant;
        for (const auto& [k, c] : coeffs)
            if (k >= 0 && static_cast<size_t>(k) < point.size()) v += c * point[k];
        return v;
    }

    /// Substitutes key k by the given expression.
    LinExpr substituted(int k, const LinExpr& repl) const {
        LinExpr out = *this;
        auto it = out.coeffs.find(k);
        if (it == out.coeffs.end()) return out;
        Rat c = it->second;
        out.coeffs.erase(it);
        out += repl * c;
        return out;
    }
};

using AffineExpr = LinExpr;  // over program/extended variable indices
using SymLin = LinExpr;      // over template-unknown symbol ids

/// Affine expression in program variables whose coefficients are linear in a
/// set of unknown symbols. Concrete expressions are the special case where
/// every SymLin is a constant.
struct TemplateExpr {
    SymLin constant;
    std::map<int, SymLin> coeffs;  // var index -> coefficient

    TemplateExpr() = default;
    explicit TemplateExpr(const AffineExpr& concrete) {
        constant = SymLin(concrete.constant);
        for (const auto& [v, c] : concrete.coeffs) coeffs[v] = SymLin(c);
    }

    static TemplateExpr symbolic(const SymLin& c) {
        TemplateExpr t;
        t.constant = c;
        return t;
    }

    SymLin coeff(int v) const {
        auto it = coeffs.find(v);
        return it == coeffs.end() ? SymLin() : it->second;
    }
    void setCoeff(int v, SymLin s) {
        if (s.isZero()) coeffs.erase(v);
        else coeffs[v] = std::move(s);
    }

    bool isConcrete() const {
        if (!constant.isConstant()) return false;
        for (const auto& [v, s] : coeffs)
            if (!s.isConstant()) return false;
        return true;
    }
    AffineExpr toAffine() const {
        AffineExpr e;
        e.constant = constant.constant;
        for (const auto& [v, s] : coeffs) e.setCoeff(v, s.constant);
        return e;
    }

    TemplateExpr& operator+=(const TemplateExpr& o) {
        constant += o.constant;
        for (const auto& [v, s] : o.coeffs) {
            SymLin& c = coeffs[v];
            c += s;
            if (c.isZero()) coeffs.erase(v);
        }
        return *this;
    }
    TemplateExpr& operator-=(const TemplateExpr& o) {
        constant -= o.constant;
        for (const auto& [v, s] : o.coeffs) {
            SymLin& c = coeffs[v];
            c -= s;
            if (c.isZero()) coeffs.erase(v);
        }
        return *this;
    }
    TemplateExpr& operator*=(const Rat& r) {
        constant *= r;
        if (r == 0) { coeffs.clear(); return *this; }
        for (auto& [v, s] : coeffs) s *= r;
        return *this;
    }
    friend TemplateExpr operator+(TemplateExpr a, const TemplateExpr& b) { a += b; return a; }
    friend TemplateExpr operator-(TemplateExpr a, const TemplateExpr& b) { a -= b; return a; }
    friend TemplateExpr operator*(TemplateExpr a, const Rat& r) { a *= r; return a; }
    friend TemplateExpr operator*(const Rat& r, TemplateExpr a) { a *= r; return a; }
    friend TemplateExpr operator-(TemplateExpr a) { a *= Rat(-1); return a; }

    /// Substitutes program variable v by a concrete affine expression.
    TemplateExpr substituted(int v, const AffineExpr& repl) const {
        TemplateExpr out = *this;
        auto it = out.coeffs.find(v);
        if (it == out.coeffs.end()) return out;
        SymLin c = it->second;
        out.coeffs.erase(it);
        out.constant += c * repl.constant;
        for (const auto& [w, r] : repl.coeffs) {
            SymLin& cw = out.coeffs[w];
            cw += c * r;
            if (cw.isZero()) out.coeffs.erase(w);
        }
        return out;
    }
};

/// Interned symbol names for template unknowns and LP columns.
class SymbolTable {
public:
    int intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }
    const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }
    int size() const { return static_cast<int>(names_.size()); }
    bool contains(const std::string& n) const { return index_.count(n) > 0; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

} // namespace stochinv
