#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "jeedep/location.hpp"

namespace jeedep {

enum class Severity { Info, Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string code;  // short machine-readable tag, e.g. "unsupported-statement"
    std::string message;
    SourceLocation location;
};

// Collects diagnostics from every analyzer. Reporting is thread-safe; reads
// are expected after the producers are done.
class Diagnostics {
public:
    Diagnostics() = default;
    Diagnostics(const Diagnostics& other);
    Diagnostics& operator=(const Diagnostics& other);

    void report(Severity severity, std::string code, std::string message, SourceLocation location = {});
    void warn(std::string code, std::string message, SourceLocation location = {}) {
        report(Severity::Warning, std::move(code), std::move(message), std::move(location));
    }
    void info(std::string code, std::string message, SourceLocation location = {}) {
        report(Severity::Info, std::move(code), std::move(message), std::move(location));
    }
    void append(const Diagnostics& other);

    const std::vector<Diagnostic>& all() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::size_t count(std::string_view code) const;
    bool has(std::string_view code) const { return count(code) > 0; }

    // Stable order for reports: by location, then code, then message.
    std::vector<Diagnostic> sorted() const;

private:
    mutable std::mutex mutex_;
    std::vector<Diagnostic> items_;
};

std::string_view to_string(Severity severity);

} // namespace jeedep
