#pragma once

#include <stdexcept>

namespace cbfsim
{

/// Invalid scenario or component configuration; the message names the field.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace cbfsim
