/**
 * Normalized integer chains of truncated simplicial sets and their homology.
 *
 * Homology groups are returned as presentations Z^r + Z/d_1 + ... + Z/d_t
 * together with cycle representatives of the generators and a coordinate
 * map that expresses any cycle in terms of those generators. Induced maps
 * are integer matrices between these generator sets.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "smith.hpp"
#include "sset.hpp"

namespace hfib {

/// Thrown when the requested degree equals the top stored degree.
class UnreliableAtTruncation : public IncompleteAtTruncation
{
public:
    using IncompleteAtTruncation::IncompleteAtTruncation;
};

struct ChainComplex
{
    std::size_t top_degree = 0;
    /// boundary[n]: C_n -> C_{n-1}; rows index C_{n-1}, columns C_n. boundary[0] has 0 rows.
    std::vector<IntMatrix> boundary;
    /// basis[n][k] is the simplex at level n used as the k-th basis element.
    std::vector<std::vector<Index>> basis;

    std::size_t rank(std::size_t n) const { return boundary[n].cols(); }

    /// Throws CorruptInput unless every composite of consecutive boundaries vanishes.
    void check_dd() const
    {
        for (std::size_t n = 1; n < boundary.size(); ++n)
            if (!(boundary[n - 1] * boundary[n]).is_zero())
                throw CorruptInput("chain complex: boundary squared is nonzero in degree " + std::to_string(n));
    }
};

/// Chains built from a simplicial set remember where each simplex lands.
struct SimplicialChains
{
    ChainComplex complex;
    /// position[n][x]: basis index of simplex x at level n, or kNone if degenerate.
    std::vector<std::vector<Index>> position;
};

/**
 * Normalized chains: degree-n basis = nondegenerate n-simplices, boundary the
 * alternating sum of faces with degenerate faces dropped. Built up to
 * max_degree (default: the truncation level).
 */
inline SimplicialChains normalized_chains(const TruncatedSSet& X, std::optional<std::size_t> max_degree = {})
{
    std::size_t top = std::min(X.trunc(), max_degree.value_or(X.trunc()));
    SimplicialChains S;
    S.complex.top_degree = top;
    S.complex.basis.resize(top + 1);
    S.position.resize(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
    {
        S.position[n].assign(X.size(n), kNone);
        for (Index x = 0; x < X.size(n); ++x)
            if (!is_degenerate(X, n, x))
            {
                S.position[n][x] = static_cast<Index>(S.complex.basis[n].size());
                S.complex.basis[n].push_back(x);
            }
    }
    S.complex.boundary.resize(top + 1);
    S.complex.boundary[0] = IntMatrix(0, S.complex.basis[0].size());
    for (std::size_t n = 1; n <= top; ++n)
    {
        IntMatrix d(S.complex.basis[n - 1].size(), S.complex.basis[n].size());
        for (std::size_t c = 0; c < S.complex.basis[n].size(); ++c)
        {
            Index x = S.complex.basis[n][c];
            for (std::size_t i = 0; i <= n; ++i)
            {
                Index r = S.position[n - 1][X.face(n, i, x)];
                if (r != kNone)
                    d(r, c) += (i % 2 == 0) ? 1 : -1;
            }
        }
        S.complex.boundary[n] = std::move(d);
    }
    S.complex.check_dd();
    return S;
}

/// Z^rank + Z/t_1 + ... with generator cycles (torsion generators first).
struct HomologyGroup
{
    std::size_t degree = 0;
    std::size_t rank = 0;
    std::vector<Integer> torsion;                  ///< invariant factors >= 2, t_1 | t_2 | ...
    std::vector<std::vector<Integer>> generators;  ///< cycles in C_degree
    IntMatrix coordinates;                         ///< rows: generators; maps a cycle to coefficients

    std::size_t generator_count() const { return torsion.size() + rank; }

    bool is_zero() const { return rank == 0 && torsion.empty(); }

    bool same_group(const HomologyGroup& o) const { return rank == o.rank && torsion == o.torsion; }

    /// Order of generator g (0 for free generators).
    Integer order(std::size_t g) const { return g < torsion.size() ? torsion[g] : Integer(0); }

    /// Coefficients of a cycle in the generator basis, reduced modulo generator orders.
    std::vector<Integer> express(const std::vector<Integer>& cycle) const
    {
        auto c = coordinates.apply(cycle);
        for (std::size_t g = 0; g < torsion.size(); ++g)
        {
            c[g] %= torsion[g];
            if (c[g] < 0)
                c[g] += torsion[g];
        }
        return c;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        auto sep = [&]() {
            if (!first)
                os << " + ";
            first = false;
        };
        if (rank == 1)
        {
            sep();
            os << "Z";
        }
        else if (rank > 1)
        {
            sep();
            os << "Z^" << rank;
        }
        for (const auto& t : torsion)
        {
            sep();
            os << "Z/" << t;
        }
        if (first)
            os << "0";
        return os.str();
    }
};

/// Parse "0", "Z", "Z^2 + Z/2 + Z/4" into (rank, torsion). Torsion is normalized to invariant factors.
struct GroupShape
{
    std::size_t rank = 0;
    std::vector<Integer> torsion;
    bool operator==(const GroupShape&) const = default;
};

inline GroupShape parse_group(const std::string& text)
{
    GroupShape g;
    std::vector<Integer> cyclic;
    std::string s;
    for (char c : text)
        if (c != ' ')
            s += c;
    if (s == "0" || s.empty())
        return g;
    std::size_t pos = 0;
    while (pos <= s.size())
    {
        std::size_t next = s.find('+', pos);
        std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (term == "Z")
            g.rank += 1;
        else if (term.rfind("Z^", 0) == 0)
            g.rank += std::stoul(term.substr(2));
        else if (term.rfind("Z/", 0) == 0)
        {
            Integer d(term.substr(2));
            if (d < 2)
                throw InvalidArgument("group '" + text + "': cyclic orders must be >= 2");
            cyclic.push_back(d);
        }
        else
            throw InvalidArgument("cannot parse group '" + text + "'");
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    if (!cyclic.empty())
    {
        IntMatrix diag(cyclic.size(), cyclic.size());
        for (std::size_t i = 0; i < cyclic.size(); ++i)
            diag(i, i) = cyclic[i];
        for (auto& d : invariant_factors(diag))
            if (d != 1)
                g.torsion.push_back(d);
    }
    return g;
}

inline GroupShape shape_of(const HomologyGroup& h) { return GroupShape{h.rank, h.torsion}; }

/**
 * H_k = ker d_k / im d_{k+1}. Refuses k = top_degree: the boundary into that
 * degree from above is not stored, so the answer would be unreliable.
 */
inline HomologyGroup homology(const ChainComplex& C, std::size_t k)
{
    if (k > C.top_degree)
        throw InvalidArgument("homology: degree above the complex");
    if (k == C.top_degree)
        throw UnreliableAtTruncation("homology: degree " + std::to_string(k) +
                                     " is the top stored degree and is unreliable under truncation");
    const IntMatrix& dk = C.boundary[k];
    const IntMatrix& dk1 = C.boundary[k + 1];
    const std::size_t nk = dk.cols();

    SmithForm outgoing = smith_normal_form(dk, track_V | track_V_inv);
    const std::size_t r = outgoing.rank;
    IntMatrix kernel_basis = outgoing.V.col_block(r, nk);       // nk x (nk - r)
    IntMatrix kernel_coords = outgoing.V_inv.row_block(r, nk);  // (nk - r) x nk
    // Only the lattice of boundaries matters; reduce to a basis before going dense.
    IntMatrix incoming = kernel_coords * column_lattice_basis(dk1);  // boundaries in kernel coordinates
    SmithForm in = smith_normal_form(incoming, track_U | track_U_inv);

    HomologyGroup H;
    H.degree = k;
    const std::size_t z = nk - r;
    std::vector<std::size_t> torsion_rows, free_rows;
    for (std::size_t i = 0; i < z; ++i)
    {
        if (i < in.rank)
        {
            if (in.diagonal[i] != 1)
            {
                torsion_rows.push_back(i);
                H.torsion.push_back(in.diagonal[i]);
            }
        }
        else
            free_rows.push_back(i);
    }
    H.rank = free_rows.size();
    std::vector<std::size_t> rows = torsion_rows;
    rows.insert(rows.end(), free_rows.begin(), free_rows.end());
    IntMatrix generators_in_kernel = in.U_inv;  // columns: new kernel basis in old kernel coordinates
    IntMatrix new_coords = in.U * kernel_coords;
    H.coordinates = IntMatrix(rows.size(), nk);
    for (std::size_t g = 0; g < rows.size(); ++g)
    {
        std::vector<Integer> cyc(nk);
        for (std::size_t a = 0; a < z; ++a)
        {
            const Integer& coef = generators_in_kernel(a, rows[g]);
            if (coef == 0)
                continue;
            for (std::size_t b = 0; b < nk; ++b)
                if (kernel_basis(b, a) != 0)
                    cyc[b] += coef * kernel_basis(b, a);
        }
        H.generators.push_back(std::move(cyc));
        for (std::size_t b = 0; b < nk; ++b)
            H.coordinates(g, b) = new_coords(rows[g], b);
    }
    return H;
}

/// All groups H_0 .. H_{top-1}; degrees are independent and computed in parallel.
inline std::vector<HomologyGroup> homology_through(const ChainComplex& C, std::size_t max_degree)
{
    if (max_degree >= C.top_degree)
        throw UnreliableAtTruncation("homology_through: degree " + std::to_string(max_degree) +
                                     " is not below the top stored degree");
    std::vector<HomologyGroup> out(max_degree + 1);
    parallel_for(max_degree + 1, [&](std::size_t k) { out[k] = homology(C, k); });
    return out;
}

/// Homology of a simplicial set through the given degree (chains built to max_degree+1).
inline std::vector<HomologyGroup> homology_of(const TruncatedSSet& X, std::size_t max_degree)
{
    if (max_degree >= X.trunc())
        throw UnreliableAtTruncation("homology_of: degree " + std::to_string(max_degree) +
                                     " needs truncation above " + std::to_string(max_degree));
    auto chains = normalized_chains(X, max_degree + 1);
    return homology_through(chains.complex, max_degree);
}

/// Chain map in degree k induced by a simplicial map (degenerate images vanish).
inline IntMatrix chain_map(const SMap& f, const SimplicialChains& source, const SimplicialChains& target,
                           std::size_t k)
{
    IntMatrix m(target.complex.basis[k].size(), source.complex.basis[k].size());
    for (std::size_t c = 0; c < source.complex.basis[k].size(); ++c)
    {
        Index y = target.position[k][f(k, source.complex.basis[k][c])];
        if (y != kNone)
            m(y, c) += 1;
    }
    return m;
}

/// A homomorphism between two computed homology groups, as a matrix on generators.
struct GroupHom
{
    const HomologyGroup* source = nullptr;
    const HomologyGroup* target = nullptr;
    IntMatrix matrix;  ///< rows: target generators; columns: source generators

    bool is_surjective() const
    {
        const std::size_t g = target->generator_count();
        const std::size_t a = source->generator_count();
        const std::size_t t = target->torsion.size();
        IntMatrix aug(g, a + t);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < a; ++j)
                aug(i, j) = matrix(i, j);
        for (std::size_t i = 0; i < t; ++i)
            aug(i, a + i) = target->torsion[i];
        auto d = invariant_factors(aug);
        if (d.size() != g)
            return false;
        for (const auto& v : d)
            if (v != 1)
                return false;
        return true;
    }

    /// Finitely generated abelian groups are Hopfian: iso iff same invariants and onto.
    bool is_isomorphism() const { return source->same_group(*target) && is_surjective(); }
};

/// f_* : H_k(X) -> H_k(Y) on the chosen generators.
inline GroupHom induced_map(const SMap& f, const SimplicialChains& cx, const HomologyGroup& hx,
                            const SimplicialChains& cy, const HomologyGroup& hy)
{
    const std::size_t k = hx.degree;
    IntMatrix fk = chain_map(f, cx, cy, k);
    GroupHom h{&hx, &hy, IntMatrix(hy.generator_count(), hx.generator_count())};
    for (std::size_t g = 0; g < hx.generators.size(); ++g)
    {
        auto image = fk.apply(hx.generators[g]);
        auto coords = hy.express(image);
        for (std::size_t r = 0; r < coords.size(); ++r)
            h.matrix(r, g) = coords[r];
    }
    return h;
}

/// Bundles chains and homology of a simplicial set for repeated use.
struct HomologyData
{
    SimplicialChains chains;
    std::vector<HomologyGroup> groups;

    static HomologyData of(const TruncatedSSet& X, std::size_t max_degree)
    {
        if (max_degree >= X.trunc())
            throw UnreliableAtTruncation("homology: degree " + std::to_string(max_degree) +
                                         " needs truncation above it");
        HomologyData d{normalized_chains(X, max_degree + 1), {}};
        d.groups = homology_through(d.chains.complex, max_degree);
        return d;
    }
};

inline GroupHom induced_map(const SMap& f, const HomologyData& x, const HomologyData& y, std::size_t k)
{
    return induced_map(f, x.chains, x.groups.at(k), y.chains, y.groups.at(k));
}

/// Composition of homomorphisms, with torsion rows reduced.
inline IntMatrix compose_hom(const GroupHom& g, const GroupHom& f)
{
    IntMatrix m = g.matrix * f.matrix;
    for (std::size_t r = 0; r < g.target->torsion.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
        {
            m(r, c) %= g.target->torsion[r];
            if (m(r, c) < 0)
                m(r, c) += g.target->torsion[r];
        }
    return m;
}

/// "H_0 = Z, H_1 = Z + Z/2" style summary.
inline std::string format_homology(const std::vector<HomologyGroup>& groups)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < groups.size(); ++k)
        os << (k ? ", " : "") << "H_" << k << " = " << groups[k].str();
    return os.str();
}

}  // namespace hfib
