#ifndef UML2TS_CLI_HPP
#define UML2TS_CLI_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uml2ts/property.hpp"

namespace uml2ts::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolated = 1;
inline constexpr int kError = 2;

class PropsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One property per non-blank line; `#` starts a comment line. A line is
// either a CTL formula or
//   pattern <kind> <scope> p: <formula>; q: <formula>; ...
// Errors mention the 1-based line number.
std::vector<Formula> parse_props(std::string_view text);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uml2ts::cli

#endif
