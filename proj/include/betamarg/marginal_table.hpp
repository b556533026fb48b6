#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "betamarg/ensemble.hpp"
#include "betamarg/recurrence.hpp"

namespace betamarg {

enum class TableOrdering { RowMajor, Antidiagonal };

struct LaguerreFamily {
    using Expansion = LaguerreExpansion;
    static constexpr Family family = Family::Laguerre;
    static Expansion weight(const EnsembleSpec& s) {
        return Expansion::term(s.lambda1, rat(s.beta, 2), ExactScalar(1));
    }
    static Expansion sweep(const Expansion& seed, const EnsembleSpec& s, long N) {
        return laguerre_full_sweep(seed, s, N);
    }
    static ExactScalar endpoint_limit(const Expansion& F) { return F.limit_at_infinity(); }
    static Rational grid_end(const EnsembleSpec& s, long N) { return rat(4 * N, s.beta); }
};

struct JacobiFamily {
    using Expansion = JacobiExpansion;
    static constexpr Family family = Family::Jacobi;
    static Expansion weight(const EnsembleSpec& s) {
        return Expansion::term(s.lambda1, s.lambda2, ExactScalar(1));
    }
    static Expansion sweep(const Expansion& seed, const EnsembleSpec& s, long N) {
        return jacobi_full_sweep(seed, s, N);
    }
    static ExactScalar endpoint_limit(const Expansion& F) { return F.limit_at_one(); }
    static Rational grid_end(const EnsembleSpec&, long) { return 1; }
};

// raw / integral(raw): integrates to exactly 1 and is positive-normalised.
template <class Traits>
typename Traits::Expansion normalize(const typename Traits::Expansion& raw) {
    auto F = raw.integrate_from_zero();
    ExactScalar c = Traits::endpoint_limit(F);
    if (c.is_zero()) throw ZeroIntegral("normalisation integral vanishes");
    return raw.scaled(c.invert());
}

inline LaguerreExpansion normalize_laguerre(const LaguerreExpansion& raw) {
    return normalize<LaguerreFamily>(raw);
}
inline JacobiExpansion normalize_jacobi(const JacobiExpansion& raw) {
    return normalize<JacobiFamily>(raw);
}

// Triangular store of {f_N(n;.), F_N(n;.)} for 1 <= n <= N <= nmax, built by
// the double recursion: cell (N,n) lifts the gap probability
// E_{N-1}(n-1;(x,b)) = F_{N-1}(n;x) - F_{N-1}(n-1;x) through a full sweep.
template <class Traits>
class TriangularTable {
  public:
    using Expansion = typename Traits::Expansion;
    struct Cell {
        Expansion f, F;
    };
    using CellMap = std::map<std::pair<long, long>, Cell>;

    static TriangularTable compute(const EnsembleSpec& spec, long nmax,
                                   TableOrdering ordering = TableOrdering::RowMajor,
                                   CellMap preload = {}) {
        if (nmax < 1) throw BadParameter("nmax must be >= 1");
        TriangularTable t;
        t.spec_ = spec;
        t.nmax_ = nmax;
        t.cells_ = std::move(preload);
        if (ordering == TableOrdering::RowMajor) {
            for (long n = 1; n <= nmax; ++n)
                for (long N = n; N <= nmax; ++N) t.fill_cell(N, n);
        } else {
            for (long k = 0; k < nmax; ++k)
                for (long N = k + 1; N <= nmax; ++N) t.fill_cell(N, N - k);
        }
        return t;
    }

    const EnsembleSpec& spec() const { return spec_; }
    long nmax() const { return nmax_; }

    const Cell& at(long N, long n) const {
        auto it = cells_.find({N, n});
        if (it == cells_.end())
            throw BadParameter("table cell (" + std::to_string(N) + "," + std::to_string(n) +
                               ") not computed");
        return it->second;
    }

    const CellMap& cells() const { return cells_; }

    // E_N(n;(x,b)) = F_N(n+1;x) - F_N(n;x), F_N(0):=0, F_N(N+1):=1
    Expansion gap_probability(long N, long n) const {
        if (n < 0 || n > N) throw BadParameter("gap probability index out of range");
        Expansion hi = n + 1 <= N ? at(N, n + 1).F : Expansion::one();
        if (n == 0) return hi;
        return hi - at(N, n).F;
    }

    // sum rule: density = sum_n f_N(n;x); for beta even the sum collapses to
    // a single transcendental factor, which is asserted.
    Expansion density(long N) const {
        Expansion d;
        for (long n = 1; n <= N; ++n) d += at(N, n).f;
        if (spec_.beta % 2 == 0) assert_density_structure(d, N);
        return d;
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

    friend bool operator==(const TriangularTable& a, const TriangularTable& b) {
        if (a.nmax_ != b.nmax_) return false;
        for (const auto& [key, cell] : a.cells_) {
            auto it = b.cells_.find(key);
            if (it == b.cells_.end()) return false;
            if (!(cell.f == it->second.f) || !(cell.F == it->second.F)) return false;
        }
        return true;
    }

  private:
    void fill_cell(long N, long n) {
        if (cells_.count({N, n})) {
            check_cell(cells_[{N, n}], N, n);
            return;
        }
        Expansion raw;
        if (N == 1) {
            raw = Traits::weight(spec_);
        } else {
            Expansion seed;
            if (n == 1) {
                seed = at(N - 1, 1).F;
            } else if (n == N) {
                seed = Expansion::one() - at(N - 1, N - 1).F;
            } else {
                seed = at(N - 1, n).F - at(N - 1, n - 1).F;
            }
            try {
                raw = Traits::sweep(seed, spec_, N - 1);
            } catch (const Error& e) {
                throw Error("cell (" + std::to_string(N) + "," + std::to_string(n) +
                            "): " + e.what());
            }
        }
        if (raw.is_zero())
            throw Error("sweep produced the zero expansion at cell (" + std::to_string(N) +
                        "," + std::to_string(n) + ")");
        Cell cell;
        try {
            cell.f = normalize<Traits>(raw);
            cell.F = cell.f.integrate_from_zero();
        } catch (const Error& e) {
            throw Error("cell (" + std::to_string(N) + "," + std::to_string(n) +
                        "): " + e.what());
        }
        check_cell(cell, N, n);
        cells_.emplace(std::make_pair(N, n), std::move(cell));
    }

    void check_cell(const Cell& cell, long N, long n) {
        if (!cell.F.value_at_zero().is_zero())
            throw Error("F(0) != 0 at cell " + key(N, n));
        if (Traits::endpoint_limit(cell.F) != ExactScalar(1))
            throw Error("F(endpoint) != 1 at cell " + key(N, n));
        regime_checks(cell, N, n);
    }

    std::string key(long N, long n) const {
        return "(" + std::to_string(N) + "," + std::to_string(n) + ")";
    }

    void regime_checks(const Cell& cell, long N, long n);

    void assert_density_structure(const Expansion& d, long N) const;

    EnsembleSpec spec_;
    long nmax_ = 0;
    CellMap cells_;
    std::vector<std::string> warnings_;
};

// Laguerre structure checks: in the integer regime f_N(n;x) must be a pure
// polynomial-times-exponential sum over rates (beta/2) j, n <= j <= N, with
// the degree bound deg q_j <= j (lambda1 + (N-j) beta).
template <>
inline void TriangularTable<LaguerreFamily>::regime_checks(const Cell& cell, long N, long n) {
    if (spec_.regime == Regime::LaguerreInteger) {
        for (const auto& [k, c] : cell.f.terms()) {
            if (k.erf || k.u != 0)
                throw Error("erf term in integer regime at cell " + key(N, n));
            if (!is_nonneg_integer(k.a))
                throw Error("non-integer power x^" + k.a.get_str() + " at cell " + key(N, n));
            Rational j = k.s / rat(spec_.beta, 2);
            if (!is_integer(j) || j < n || j > N)
                throw Error("rate " + k.s.get_str() + " outside the expected ladder at cell " +
                            key(N, n));
            Rational bound = j * (spec_.lambda1 + Rational(N - to_long(j)) * spec_.beta);
            if (k.a > bound)
                throw Error("degree " + k.a.get_str() + " above bound " + bound.get_str() +
                            " at rate index " + j.get_str() + ", cell " + key(N, n));
        }
    } else {
        // half-integer regime: only erf(sqrt((beta/2) x)) is expected to
        // survive in final distributions; anything else is reported, not fatal
        for (const Rational& u : cell.F.erf_arguments()) {
            if (u != rat(spec_.beta, 2))
                warnings_.push_back("cell " + key(N, n) + ": erf argument rate " + u.get_str() +
                                    " survived normalisation");
        }
    }
}

template <>
inline void TriangularTable<JacobiFamily>::regime_checks(const Cell& cell, long N, long n) {
    // the sweep operators never push the (1-x) exponent below the weight's
    for (const auto& [k, c] : cell.f.terms()) {
        if (k.b < spec_.lambda2)
            throw Error("(1-x) exponent " + k.b.get_str() + " fell below lambda2 at cell " +
                        key(N, n));
        if (k.a < spec_.lambda1)
            throw Error("x exponent " + k.a.get_str() + " fell below lambda1 at cell " +
                        key(N, n));
    }
}

template <>
inline void TriangularTable<LaguerreFamily>::assert_density_structure(const Expansion& d,
                                                                      long N) const {
    for (const auto& [k, c] : d.terms()) {
        if (k.erf || k.s != rat(spec_.beta, 2))
            throw Error("beta-even density did not collapse to a single exponential at N=" +
                        std::to_string(N));
    }
}

template <>
inline void TriangularTable<JacobiFamily>::assert_density_structure(const Expansion& d,
                                                                    long N) const {
    // (D2b): density = x^{lambda1}(1-x)^{lambda2} * polynomial of degree beta(N-1)
    Expansion q = d.mul_xpow(-spec_.lambda1).mul_omx_pow(-spec_.lambda2).canonicalized();
    for (const auto& [k, c] : q.terms()) {
        if (k.b != 0 || !is_nonneg_integer(k.a) || k.a > Rational(spec_.beta) * (N - 1))
            throw Error("beta-even Jacobi density is not weight * bounded polynomial at N=" +
                        std::to_string(N));
    }
}

using LaguerreTable = TriangularTable<LaguerreFamily>;
using JacobiTable = TriangularTable<JacobiFamily>;

// Route B: compute under swapped parameters, then reflect
// f'_N(n;x) = f_N(N+1-n;1-x) and rebuild the CDFs by integration.
inline JacobiTable reflect_jacobi(const JacobiTable& swapped, const EnsembleSpec& target) {
    JacobiTable::CellMap cells;
    for (const auto& [key, cell] : swapped.cells()) {
        long N = key.first, n = key.second;
        JacobiTable::Cell out;
        out.f = swapped.at(N, N + 1 - n).f.reflected();
        out.F = out.f.integrate_from_zero();
        if (!out.F.value_at_zero().is_zero() || out.F.limit_at_one() != ExactScalar(1))
            throw Error("reflected CDF failed endpoint checks");
        cells.emplace(key, std::move(out));
    }
    // reuse compute()'s validation by preloading every cell
    return JacobiTable::compute(target, swapped.nmax(), TableOrdering::RowMajor,
                                std::move(cells));
}

// Regime dispatcher used by the CLI and the verification suites.
inline JacobiTable compute_jacobi_table(const EnsembleSpec& spec, long nmax,
                                        TableOrdering ordering = TableOrdering::RowMajor) {
    if (spec.regime == Regime::JacobiRouteA)
        return JacobiTable::compute(spec, nmax, ordering);
    EnsembleSpec swapped = EnsembleSpec::jacobi(spec.beta, spec.lambda2, spec.lambda1);
    return reflect_jacobi(JacobiTable::compute(swapped, nmax, ordering), spec);
}

inline LaguerreTable compute_laguerre_table(const EnsembleSpec& spec, long nmax,
                                            TableOrdering ordering = TableOrdering::RowMajor) {
    return LaguerreTable::compute(spec, nmax, ordering);
}

}  // namespace betamarg
