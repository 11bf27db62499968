#ifndef WEALTHFIT_KVDOC_HPP
#define WEALTHFIT_KVDOC_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace wealthfit {

// Command-line misuse beyond what flag parsing can see (conflicting flags,
// unwritable output locations). Mapped to exit code 1.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A report or params file handed to a command cannot be read or does not hold
// what the command needs. Mapped to exit code 2, like other input problems.
class report_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips a double exactly.
std::string format_number(double value);

// Order-preserving `key = value` document, the machine-readable half of every
// report. Keys are dotted paths without whitespace; values are single lines.
// '#' at the start of a line opens a comment.
class KvDoc {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value);
    void set(const std::string& key, double value);
    void set(const std::string& key, bool value);
    template <typename T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
    void set(const std::string& key, T value) {
        set(key, std::to_string(value));
    }

    bool contains(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void write(std::ostream& os) const;
    void write_file(const std::string& path) const;
    static KvDoc read(std::istream& is, const std::string& source = "");
    static KvDoc read_file(const std::string& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string source_;

    std::size_t find(const std::string& key) const;
    [[noreturn]] void fail(const std::string& message) const;
};

}  // namespace wealthfit

#endif
