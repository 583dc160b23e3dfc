#include "opalg/poly.hpp"

#include <algorithm>

namespace opalg {

Poly Poly::constant(int nvars, Scalar c) {
    Poly p(nvars);
    if (!c.isZero()) p.terms_.emplace(Expo(nvars, 0), std::move(c));
    return p;
}

Poly Poly::variable(int nvars, int var) {
    Poly p(nvars);
    Expo e(nvars, 0);
    e[var] = 1;
    p.terms_.emplace(std::move(e), Scalar(1));
    return p;
}

bool Poly::isConstant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 &&
           std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                       [](std::uint32_t e) { return e == 0; });
}

int Poly::degreeIn(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

int Poly::totalDegree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (auto x : e) t += static_cast<int>(x);
        d = std::max(d, t);
    }
    return d;
}

void Poly::addTerm(const Expo& e, const Scalar& c) {
    if (c.isZero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.isZero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.addTerm(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.addTerm(e, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Expo e(nvars_);
            for (int v = 0; v < nvars_; ++v) e[v] = e1[v] + e2[v];
            r.addTerm(e, c1 * c2);
        }
    return r;
}

Poly Poly::divExact(const Poly& d) const {
    if (d.isZero()) throw InternalError("Poly::divExact: division by zero polynomial");
    Poly rem = *this;
    Poly quo(nvars_);
    const auto& dLead = *d.terms_.rbegin(); // largest exponent in lex order
    while (!rem.isZero()) {
        const auto& rLead = *rem.terms_.rbegin();
        Expo qe(nvars_);
        for (int v = 0; v < nvars_; ++v) {
            if (rLead.first[v] < dLead.first[v])
                throw InternalError("Poly::divExact: inexact division");
            qe[v] = rLead.first[v] - dLead.first[v];
        }
        Scalar qc = rLead.second / dLead.second;
        Poly mono(nvars_);
        mono.terms_.emplace(qe, qc);
        quo.addTerm(qe, qc);
        rem = rem - mono * d;
    }
    return quo;
}

Scalar Poly::eval(const std::vector<Scalar>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw InputError("Poly::eval: wrong point length");
    Scalar acc;
    for (const auto& [e, c] : terms_) {
        Scalar t = c;
        for (int v = 0; v < nvars_; ++v)
            for (std::uint32_t k = 0; k < e[v]; ++k) t *= point[v];
        acc += t;
    }
    return acc;
}

Poly Poly::substituteCleared(int var, const Poly& num, const Poly& den) const {
    const int deg = degreeIn(var);
    // p = sum_k a_k(x') var^k  ->  sum_k a_k num^k den^(deg-k)
    std::vector<Poly> numPow{Poly::constant(nvars_, Scalar(1))};
    std::vector<Poly> denPow{Poly::constant(nvars_, Scalar(1))};
    for (int k = 1; k <= deg; ++k) {
        numPow.push_back(numPow.back() * num);
        denPow.push_back(denPow.back() * den);
    }
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        Expo base = e;
        const int k = static_cast<int>(base[var]);
        base[var] = 0;
        Poly mono(nvars_);
        mono.terms_.emplace(base, c);
        r = r + mono * numPow[k] * denPow[deg - k];
    }
    return r;
}

std::vector<Scalar> Poly::univariateCoeffs(int var) const {
    if (!dependsOnlyOn(var)) throw InternalError("Poly::univariateCoeffs: not univariate");
    std::vector<Scalar> cs(degreeIn(var) + 1);
    for (const auto& [e, c] : terms_) cs[e[var]] = c;
    return cs;
}

bool Poly::dependsOnlyOn(int var) const {
    for (const auto& [e, c] : terms_)
        for (int v = 0; v < nvars_; ++v)
            if (v != var && e[v] != 0) return false;
    return true;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + c.str() + ")";
        for (int v = 0; v < nvars_; ++v)
            if (e[v] > 0) s += "*x" + std::to_string(v) + "^" + std::to_string(e[v]);
    }
    return s;
}

BareissResult bareissRank(std::vector<std::vector<Poly>> m) {
    BareissResult res;
    if (m.empty()) return res;
    const int nr = static_cast<int>(m.size());
    const int nc = static_cast<int>(m[0].size());
    const int nv = m[0][0].nvars();
    Poly prev = Poly::constant(nv, Scalar(1));
    int r = 0;
    for (int c = 0; c < nc && r < nr; ++c) {
        // choose the nonzero candidate of smallest total degree (deterministic)
        int best = -1, bestDeg = -1;
        for (int i = r; i < nr; ++i) {
            if (m[i][c].isZero()) continue;
            int d = m[i][c].totalDegree();
            if (best < 0 || d < bestDeg) { best = i; bestDeg = d; }
        }
        if (best < 0) continue;
        std::swap(m[r], m[best]);
        const Poly pivot = m[r][c];
        for (int i = r + 1; i < nr; ++i) {
            for (int j = c + 1; j < nc; ++j)
                m[i][j] = (m[i][j] * pivot - m[i][c] * m[r][j]).divExact(prev);
            m[i][c] = Poly(nv);
        }
        res.pivots.push_back(pivot);
        prev = pivot;
        ++r;
    }
    res.rank = r;
    return res;
}

} // namespace opalg
