#pragma once

#include <string_view>

namespace graphdc {

// Raw text of a compiled-in template asset ("connectivity", ..., "master").
// Defined in a source file generated from assets/templates at configure time.
std::string_view builtin_template_source(std::string_view name);

}  // namespace graphdc
