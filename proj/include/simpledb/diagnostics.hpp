#pragma once

#include <exception>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sdb {

struct SourcePos {
    int line = 1;
    int col = 1;
    bool operator==(const SourcePos&) const = default;
};

struct Diagnostic {
    SourcePos pos;
    std::string message;
    int stmt_id = -1;  // -1 when the diagnostic is not tied to a statement
};

/// Renders a diagnostic in the conventional "file:line:col: message" form.
inline std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
    std::ostringstream os;
    os << file << ':' << d.pos.line << ':' << d.pos.col << ": " << d.message;
    return os.str();
}

/// Thrown by tokenize/parse/check when the source is rejected.
class CompileError : public std::exception {
public:
    explicit CompileError(Diagnostic d) { diags_.push_back(std::move(d)); rebuild(); }
    explicit CompileError(std::vector<Diagnostic> ds) : diags_(std::move(ds)) { rebuild(); }

    const std::vector<Diagnostic>& diagnostics() const { return diags_; }
    const char* what() const noexcept override { return what_.c_str(); }

private:
    void rebuild() {
        std::ostringstream os;
        for (std::size_t i = 0; i < diags_.size(); ++i) {
            if (i) os << '\n';
            os << diags_[i].pos.line << ':' << diags_[i].pos.col << ": " << diags_[i].message;
        }
        what_ = os.str();
    }
    std::vector<Diagnostic> diags_;
    std::string what_;
};

}  // namespace sdb
