/**
 * Horn-lifting (Kan) and boundary-lifting (trivial fibration) checks for a
 * map f: Y -> X of truncated simplicial sets.
 *
 * A lifting problem at level n is a compatible family of faces in Y (all
 * faces but the k-th for a horn, all faces for a boundary) together with an
 * n-simplex of X whose faces are their images. It is solvable when some
 * n-simplex of Y has exactly those faces and maps to the given simplex.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equivalence.hpp"
#include "parallel.hpp"
#include "sset.hpp"

namespace hfib {

enum class FibrationKind
{
    kan,
    trivial
};

inline std::string to_string(FibrationKind k) { return k == FibrationKind::kan ? "kan" : "trivial"; }

/// One unsolvable lifting problem. faces[k] is kNone for a horn.
struct LiftingWitness
{
    std::size_t n = 0;
    std::optional<std::size_t> k;  ///< horn index; empty for a boundary
    std::vector<Index> faces;      ///< simplices of Y at level n-1
    Index base = kNone;            ///< simplex of X at level n

    bool operator==(const LiftingWitness&) const = default;
};

struct LiftingRow
{
    std::size_t n = 0;
    std::optional<std::size_t> k;
    std::size_t problems = 0;
    bool surjective = true;
};

struct FibrationVerdict
{
    FibrationKind kind = FibrationKind::kan;
    std::size_t n_max = 0;
    Verdict result = Verdict::yes;
    std::vector<LiftingRow> table;
    std::optional<LiftingWitness> witness;
    std::string detail;
};

namespace detail {

/// Key for looking up simplices by a tuple of faces (with one slot ignored).
inline std::vector<Index> face_key(const TruncatedSSet& Z, std::size_t n, Index z, std::optional<std::size_t> skip)
{
    std::vector<Index> key;
    key.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        key.push_back(skip && *skip == i ? kNone : Z.face(n, i, z));
    return key;
}

/// Enumerate compatible families (y_i)_{i != skip} of (n-1)-simplices of Y.
template <class Visit>
void compatible_families(const TruncatedSSet& Y, std::size_t n, std::optional<std::size_t> skip, Visit&& visit)
{
    std::vector<Index> faces(n + 1, kNone);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i > n)
            return visit(faces);
        if (skip && *skip == i)
            return go(i + 1);
        for (Index y = 0; y < Y.size(n - 1); ++y)
        {
            bool ok = true;
            // d_j y_i == d_{i-1} y_j for j < i (simplicial identity d_j d_i = d_{i-1} d_j)
            for (std::size_t j = 0; ok && j < i; ++j)
                if (faces[j] != kNone && n >= 2)
                    ok = Y.face(n - 1, j, y) == Y.face(n - 1, i - 1, faces[j]);
            if (!ok)
                continue;
            faces[i] = y;
            if (!go(i + 1))
                return false;
            faces[i] = kNone;
        }
        return true;
    };
    go(0);
}

struct LevelIndex
{
    std::map<std::vector<Index>, std::vector<Index>> by_faces;
};

inline LevelIndex index_level(const TruncatedSSet& Z, std::size_t n, std::optional<std::size_t> skip)
{
    LevelIndex L;
    for (Index z = 0; z < Z.size(n); ++z)
        L.by_faces[face_key(Z, n, z, skip)].push_back(z);
    return L;
}

/// Check one (n, k) row; returns the first unsolvable problem in enumeration order.
inline std::optional<LiftingWitness> check_row(const SMap& f, std::size_t n, std::optional<std::size_t> k,
                                               std::size_t& problems)
{
    const TruncatedSSet& Y = *f.source;
    const TruncatedSSet& X = *f.target;
    problems = 0;
    if (n == 0)
    {
        // Boundary of Delta[0] is empty: lifting means surjectivity on vertices.
        std::vector<char> hit(X.size(0), 0);
        for (Index y = 0; y < Y.size(0); ++y)
            hit[f(0, y)] = 1;
        for (Index x = 0; x < X.size(0); ++x)
        {
            ++problems;
            if (!hit[x])
                return LiftingWitness{0, {}, {}, x};
        }
        return std::nullopt;
    }
    auto yi = index_level(Y, n, k);
    auto xi = index_level(X, n, k);
    std::optional<LiftingWitness> bad;
    compatible_families(Y, n, k, [&](const std::vector<Index>& faces) {
        std::vector<Index> image(n + 1, kNone);
        for (std::size_t i = 0; i <= n; ++i)
            if (faces[i] != kNone)
                image[i] = f(n - 1, faces[i]);
        auto xs = xi.by_faces.find(image);
        if (xs == xi.by_faces.end())
            return true;
        auto ys = yi.by_faces.find(faces);
        for (Index x : xs->second)
        {
            ++problems;
            bool lifted = false;
            if (ys != yi.by_faces.end())
                for (Index y : ys->second)
                    if (f(n, y) == x)
                    {
                        lifted = true;
                        break;
                    }
            if (!lifted)
            {
                bad = LiftingWitness{n, k, faces, x};
                return false;
            }
        }
        return true;
    });
    return bad;
}

}  // namespace detail

/**
 * Check liftings for n <= n_max (horns for kan, boundaries for trivial).
 * Requires n_max below the truncation level.
 */
inline FibrationVerdict check_fibration(const SMap& f, FibrationKind kind, std::size_t n_max)
{
    FibrationVerdict v;
    v.kind = kind;
    v.n_max = n_max;
    const std::size_t N = f.source->trunc();
    if (f.target->trunc() != N)
        throw InvalidArgument("check_fibration: mismatched truncation levels");
    if (n_max >= N)
    {
        v.result = Verdict::incomplete_at_truncation;
        v.detail = "n_max " + std::to_string(n_max) + " is not below truncation " + std::to_string(N);
        return v;
    }
    for (std::size_t n = (kind == FibrationKind::kan ? 1 : 0); n <= n_max; ++n)
    {
        if (kind == FibrationKind::kan)
            for (std::size_t k = 0; k <= n; ++k)
                v.table.push_back({n, k, 0, true});
        else
            v.table.push_back({n, {}, 0, true});
    }
    std::vector<std::optional<LiftingWitness>> found(v.table.size());
    parallel_for(v.table.size(), [&](std::size_t r) {
        auto& row = v.table[r];
        found[r] = detail::check_row(f, row.n, row.k, row.problems);
        row.surjective = !found[r].has_value();
    });
    for (std::size_t r = 0; r < found.size(); ++r)
        if (found[r])
        {
            v.result = Verdict::no;
            v.witness = found[r];
            break;
        }
    return v;
}

/// Map to the point.
inline FibrationVerdict check_kan_complex(const SSetPtr& Y, std::size_t n_max)
{
    auto pt = share(point(Y->trunc()));
    return check_fibration(map_to_point(Y, pt), FibrationKind::kan, n_max);
}

/**
 * Re-run the single lifting problem of a witness. Returns true when the
 * witness is a well-formed problem that still has no solution.
 */
inline bool replay(const SMap& f, const LiftingWitness& w)
{
    const TruncatedSSet& Y = *f.source;
    const TruncatedSSet& X = *f.target;
    const std::size_t n = w.n;
    if (n > Y.trunc() || w.base >= X.size(n))
        return false;
    if (n == 0)
    {
        for (Index y = 0; y < Y.size(0); ++y)
            if (f(0, y) == w.base)
                return false;
        return true;
    }
    if (w.faces.size() != n + 1)
        return false;
    for (std::size_t i = 0; i <= n; ++i)
    {
        bool skipped = w.k && *w.k == i;
        if (skipped != (w.faces[i] == kNone))
            return false;
        if (!skipped && (w.faces[i] >= Y.size(n - 1) || f(n - 1, w.faces[i]) != X.face(n, i, w.base)))
            return false;
    }
    for (std::size_t i = 0; n >= 2 && i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            if (w.faces[i] != kNone && w.faces[j] != kNone &&
                Y.face(n - 1, i, w.faces[j]) != Y.face(n - 1, j - 1, w.faces[i]))
                return false;
    for (Index y = 0; y < Y.size(n); ++y)
    {
        if (f(n, y) != w.base)
            continue;
        bool match = true;
        for (std::size_t i = 0; match && i <= n; ++i)
            if (w.faces[i] != kNone)
                match = Y.face(n, i, y) == w.faces[i];
        if (match)
            return false;
    }
    return true;
}

inline std::string describe(const SMap& f, const LiftingWitness& w)
{
    std::string s = w.k ? "horn L^" + std::to_string(*w.k) + "[" + std::to_string(w.n) + "]"
                        : "boundary of D[" + std::to_string(w.n) + "]";
    s += " faces (";
    bool first = true;
    for (std::size_t i = 0; i < w.faces.size(); ++i)
    {
        if (w.faces[i] == kNone)
            continue;
        s += (first ? "" : ", ") + std::string("d") + std::to_string(i) + "=" + f.source->name(w.n - 1, w.faces[i]);
        first = false;
    }
    s += ") over " + f.target->name(w.n, w.base) + " has no lift";
    return s;
}

}  // namespace hfib
