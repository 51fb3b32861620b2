#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kronecker/catalog.hpp"
#include "kronecker/kronecker_limits.hpp"
#include "kronecker/modular_forms.hpp"

namespace kronecker {

/// Groups, forms and zero sets as one JSON document (the data/catalog.json layout).
inline nlohmann::ordered_json catalog_json() {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    auto& groups = j["groups"] = nlohmann::ordered_json::array();
    for (const auto& tag : {GroupTag::psl2z(), GroupTag::gamma0_plus(2), GroupTag::gamma0_plus(3), GroupTag::gamma0_plus(5),
                            GroupTag::gamma0_plus(6), GroupTag::gamma0(2), GroupTag::gamma0(3), GroupTag::gamma0(5)}) {
        const auto g = group_descriptor(tag);
        nlohmann::ordered_json e;
        e["tag"] = tag.name();
        e["volume_over_pi"] = rational_str(g.volume_over_pi);
        e["cusps"] = g.cusp_count;
        e["generators"] = g.generators.size();
        auto& ell = e["elliptic_points"] = nlohmann::ordered_json::array();
        for (const auto& w : g.elliptic_points)
            ell.push_back({{"name", w.name}, {"x", w.point.x}, {"y", w.point.y}, {"order", w.order},
                           {"C_w", rational_str(c_w_rational(w, g))}});
        groups.push_back(std::move(e));
    }
    auto& forms = j["forms"] = nlohmann::ordered_json::array();
    for (const auto& e : zero_catalog()) {
        const auto f = form_handle(e.form);
        nlohmann::ordered_json x;
        x["name"] = e.form;
        x["group"] = e.tag.name();
        x["weight"] = e.weight;
        x["constant_term"] = f.constant_term;
        auto& z = x["zeros"] = nlohmann::ordered_json::array();
        for (const auto& p : e.zeros) z.push_back({{"point", p.point}, {"multiplicity", p.multiplicity}});
        x["valence"] = rational_str(valence_sum(e));
        forms.push_back(std::move(x));
    }
    return j;
}

}  // namespace kronecker
