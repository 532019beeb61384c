#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace wnlpb {

// Minimal streaming JSON writer. Key order is the emission order and floats
// are printed with 17 significant digits, so a report serializes
// byte-identically for identical inputs.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        prefix();
        out_ += '{';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        stack_.pop_back();
        newline_indent();
        out_ += '}';
        return *this;
    }
    JsonWriter& begin_array() {
        prefix();
        out_ += '[';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        stack_.pop_back();
        newline_indent();
        out_ += ']';
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        prefix();
        append_string(k);
        out_ += ": ";
        pending_value_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        prefix();
        char buf[64];
        if (v != v) {
            out_ += "null";
        } else if (v > 1.7976931348623157e308) {
            out_ += "1e999";
        } else if (v < -1.7976931348623157e308) {
            out_ += "-1e999";
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out_ += buf;
        }
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(long long v) {
        prefix();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        prefix();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        prefix();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        prefix();
        append_string(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& null_value() {
        prefix();
        out_ += "null";
        return *this;
    }

    const std::string& str() const { return out_; }

private:
    void prefix() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (stack_.empty()) return;
        if (stack_.back()) {
            stack_.back() = false;
        } else {
            out_ += ',';
        }
        newline_indent_body();
    }
    void newline_indent() {
        out_ += '\n';
        out_.append(2 * stack_.size(), ' ');
    }
    void newline_indent_body() {
        out_ += '\n';
        out_.append(2 * stack_.size(), ' ');
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_;
    bool pending_value_ = false;
};

}  // namespace wnlpb
