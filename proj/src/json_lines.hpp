#pragma once

// Maps JSON pointers to the source line where their value starts, so config
// validation errors can name a line. Only meant for text nlohmann already
// accepted.

#include <cstddef>
#include <map>
#include <string>

namespace fuzzystab::harness::detail {

class JsonLineIndex {
public:
    explicit JsonLineIndex(const std::string& text);

    /// Line (1-based) of the value at `pointer`, falling back to the
    /// closest indexed ancestor, then to line 1.
    int line_of(std::string pointer) const;

    /// 1-based line containing byte offset `byte` (nlohmann reports 1-based bytes).
    static int line_at_byte(const std::string& text, std::size_t byte);

private:
    std::map<std::string, int> lines_;
};

}  // namespace fuzzystab::harness::detail
