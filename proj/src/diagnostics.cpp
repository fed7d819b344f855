#include "jeedep/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace jeedep {

Diagnostics::Diagnostics(const Diagnostics& other)
{
    std::lock_guard lock(other.mutex_);
    items_ = other.items_;
}

Diagnostics& Diagnostics::operator=(const Diagnostics& other)
{
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        items_ = other.items_;
    }
    return *this;
}

void Diagnostics::report(Severity severity, std::string code, std::string message, SourceLocation location)
{
    std::lock_guard lock(mutex_);
    items_.push_back(Diagnostic{severity, std::move(code), std::move(message), std::move(location)});
}

void Diagnostics::append(const Diagnostics& other)
{
    if (this == &other) return;
    std::scoped_lock lock(mutex_, other.mutex_);
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::size_t Diagnostics::count(std::string_view code) const
{
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

std::vector<Diagnostic> Diagnostics::sorted() const
{
    auto out = items_;
    std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.location, a.code, a.message) < std::tie(b.location, b.code, b.message);
    });
    return out;
}

std::string_view to_string(Severity severity)
{
    switch (severity) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    }
    return "warning";
}

} // namespace jeedep
