#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gkat/registry.hpp"
#include "gkat/syntax.hpp"

namespace gkat {

enum class Lang { Gkat, Cfgkat };

Lang parse_lang(std::string_view s);

/// Parses surface syntax. Identifiers are declared in `reg`, which may be
/// shared between programs. In CF-GKAT mode a trailing `return;` is appended
/// when absent and the result is checked with well_formed. Errors are
/// InputError with a `name:line:col:` prefix.
Program parse_program(std::string_view src, std::shared_ptr<Registry> reg, Lang lang = Lang::Cfgkat,
                      std::string_view name = "<input>");

Program parse_file(const std::string& path, std::shared_ptr<Registry> reg, Lang lang = Lang::Cfgkat);

}  // namespace gkat
