#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "mvp/errors.hpp"

namespace mvp {

/// Strict-schema guard: any key outside `allowed` is a SchemaError.
inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return item.key() == k; }) == allowed.end()) {
            throw SchemaError("unknown field '" + item.key() + "' in " + where);
        }
    }
}

}  // namespace mvp
