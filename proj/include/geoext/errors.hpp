#pragma once

#include <stdexcept>
#include <string>

namespace geoext {

enum class Errc {
    numeric_domain,
    degenerate_frame,
    degenerate_metric,
    not_chaplygin,
    non_integrable,
    unsupported,
    completion_failed,
    positivity,
    integration_failed,
    syntax,
    expr_domain,
    unknown_symbol,
    config_malformed,
    config_dependent_constraints,
    config_non_pd_metric,
    unknown_builtin,
    unknown_parameter,
    empty_grid,
    zero_length,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace geoext
