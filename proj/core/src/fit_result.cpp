#include "linetherm/fit_result.hpp"

#include "linetherm/error.hpp"

#include <algorithm>

namespace linetherm {

std::size_t FitResult::index(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw Error(Errc::InvalidArgument, "FitResult: no parameter named '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
}

bool FitResult::contains(std::string_view name) const noexcept {
    return std::find(names.begin(), names.end(), name) != names.end();
}

void FitResult::add_derived(std::string name, double value, double sigma) {
    derived_names.push_back(std::move(name));
    derived_values.push_back(value);
    derived_sigmas.push_back(sigma);
}

double FitResult::derived(std::string_view name) const {
    const auto it = std::find(derived_names.begin(), derived_names.end(), name);
    if (it == derived_names.end()) {
        throw Error(Errc::InvalidArgument, "FitResult: no derived quantity '" + std::string(name) + "'");
    }
    return derived_values[static_cast<std::size_t>(it - derived_names.begin())];
}

}  // namespace linetherm
