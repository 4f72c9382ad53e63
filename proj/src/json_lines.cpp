#include "json_lines.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace fuzzystab::harness::detail {

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

struct Frame {
    bool is_array;
    std::string path;
    std::size_t next_index = 0;
    std::string pending_key;
    bool have_key = false;
};

}  // namespace

JsonLineIndex::JsonLineIndex(const std::string& text) {
    std::vector<Frame> stack;
    int line = 1;
    lines_[""] = 1;

    // path of the value about to start at the current position
    auto value_path = [&]() -> std::string {
        if (stack.empty()) return "";
        Frame& f = stack.back();
        if (f.is_array) return f.path + "/" + std::to_string(f.next_index);
        return f.path + "/" + escape_token(f.pending_key);
    };
    auto value_started = [&](const std::string& path) {
        lines_.emplace(path, line);
        if (!stack.empty()) {
            Frame& f = stack.back();
            if (f.is_array) {
                ++f.next_index;
            } else {
                f.have_key = false;
            }
        }
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ':') continue;
        if (c == '"') {
            std::string s;
            ++i;
            for (; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    ++i;
                    s += text[i];
                } else {
                    s += text[i];
                }
            }
            if (!stack.empty() && !stack.back().is_array && !stack.back().have_key) {
                stack.back().pending_key = s;
                stack.back().have_key = true;
            } else {
                value_started(value_path());
            }
            continue;
        }
        if (c == '{' || c == '[') {
            const std::string path = value_path();
            value_started(path);
            stack.push_back(Frame{c == '[', path, 0, {}, false});
            continue;
        }
        if (c == '}' || c == ']') {
            if (!stack.empty()) stack.pop_back();
            continue;
        }
        // number, true, false, null
        value_started(value_path());
        while (i + 1 < text.size()) {
            const char n = text[i + 1];
            if (n == ',' || n == '}' || n == ']' || n == '\n' ||
                std::isspace(static_cast<unsigned char>(n))) {
                break;
            }
            ++i;
        }
    }
}

int JsonLineIndex::line_of(std::string pointer) const {
    for (;;) {
        auto it = lines_.find(pointer);
        if (it != lines_.end()) return it->second;
        const auto slash = pointer.rfind('/');
        if (slash == std::string::npos) return 1;
        pointer.resize(slash);
    }
}

int JsonLineIndex::line_at_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    const std::size_t end = byte == 0 ? 0 : std::min(byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace fuzzystab::harness::detail
