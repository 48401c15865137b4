#pragma once

#include <string>

#include <json.hpp>

#include "sset.hpp"

namespace hfib {

using Json = nlohmann::json;

/**
 * {"kind":"sset","trunc":N,"levels":[[names...],...],
 *  "faces":[[],[[d0...],[d1...]],...],"degeneracies":[[[s0...]],...,[]]}
 */
inline Json to_json(const TruncatedSSet& X)
{
    Json faces = Json::array(), degens = Json::array();
    for (std::size_t n = 0; n <= X.trunc(); ++n)
    {
        Json fl = Json::array(), dl = Json::array();
        std::size_t sz = X.size(n);
        if (n > 0)
            for (std::size_t i = 0; i <= n; ++i)
                fl.push_back(std::vector<Index>(X.face_tables()[n].begin() + i * sz,
                                                X.face_tables()[n].begin() + (i + 1) * sz));
        if (n < X.trunc())
            for (std::size_t i = 0; i <= n; ++i)
                dl.push_back(std::vector<Index>(X.degen_tables()[n].begin() + i * sz,
                                                X.degen_tables()[n].begin() + (i + 1) * sz));
        faces.push_back(std::move(fl));
        degens.push_back(std::move(dl));
    }
    return Json{{"kind", "sset"},
                {"trunc", X.trunc()},
                {"levels", X.names()},
                {"faces", std::move(faces)},
                {"degeneracies", std::move(degens)}};
}

inline TruncatedSSet sset_from_json(const Json& j)
{
    std::size_t N = j.at("trunc").get<std::size_t>();
    auto names = j.at("levels").get<std::vector<std::vector<std::string>>>();
    if (names.size() != N + 1)
        throw InvalidArgument("sset: 'levels' must have trunc+1 entries");
    const Json& jf = j.at("faces");
    const Json& jd = j.at("degeneracies");
    if (jf.size() != N + 1 || jd.size() != N + 1)
        throw InvalidArgument("sset: operator arrays must have trunc+1 entries");
    std::vector<std::vector<Index>> faces(N + 1), degens(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
    {
        std::size_t sz = names[n].size();
        auto flatten = [&](const Json& ops, std::size_t want, std::vector<Index>& out, const char* what) {
            if (ops.size() != want)
                throw InvalidArgument(std::string("sset: wrong number of ") + what + " at level " + std::to_string(n));
            for (const auto& op : ops)
            {
                auto v = op.get<std::vector<Index>>();
                if (v.size() != sz)
                    throw InvalidArgument(std::string("sset: ") + what + " array of wrong length at level " +
                                          std::to_string(n));
                out.insert(out.end(), v.begin(), v.end());
            }
        };
        flatten(jf[n], n == 0 ? 0 : n + 1, faces[n], "faces");
        flatten(jd[n], n == N ? 0 : n + 1, degens[n], "degeneracies");
    }
    return TruncatedSSet(N, std::move(names), std::move(faces), std::move(degens));
}

/// Canonical text form; parse(serialize(X)) == X and serialize(parse(s)) == s for canonical s.
inline std::string serialize(const TruncatedSSet& X) { return to_json(X).dump(); }
inline TruncatedSSet parse_sset(const std::string& text) { return sset_from_json(Json::parse(text)); }

inline Json to_json(const SMap& f)
{
    return Json{{"kind", "smap"}, {"component", f.component}};
}

inline SMap smap_from_json(const Json& j, const SSetPtr& source, const SSetPtr& target)
{
    SMap f{source, target, j.at("component").get<std::vector<std::vector<Index>>>()};
    f.validate();
    return f;
}

}  // namespace hfib
