#ifndef UML2TS_DIAGRAM_IO_HPP
#define UML2TS_DIAGRAM_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uml2ts/diagram_model.hpp"

namespace uml2ts {

struct SourceLocation {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based

    std::string str() const;
};

// Raised for malformed UBD text. what() is "file:line:col: message".
class ParseError : public std::runtime_error {
public:
    ParseError(SourceLocation where, std::string message, std::vector<std::string> expected = {});

    const SourceLocation& location() const { return where_; }
    const std::string& message() const { return message_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourceLocation where_;
    std::string message_;
    std::vector<std::string> expected_;
};

// Raised when a set of files does not form a bundle.
class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses one UBD document. The header keyword (`sequence`, `statemachine`
/// or `activity`) selects the diagram kind. CRLF line endings are accepted.
Diagram parse_diagram(std::string_view text, std::string_view file = "<input>");

// Canonical text: declarations in first-occurrence order, two-space indent
// inside blocks, LF line endings.
std::string serialize_diagram(const Diagram& diagram);
std::string serialize_diagram(const SequenceDiagram& sd);
std::string serialize_diagram(const StateMachineDiagram& smd);
std::string serialize_diagram(const ActivityDiagram& ad);

std::string read_text_file(const std::filesystem::path& path);

// Parses 2 or 3 files and classifies them by header keyword.
DiagramBundle load_bundle(const std::vector<std::filesystem::path>& paths);

}  // namespace uml2ts

#endif
