#include "kvdoc.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wealthfit {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (const char c : key)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '=') return false;
    return true;
}

}  // namespace

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void KvDoc::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw std::logic_error("kvdoc: malformed key '" + key + "'");
    if (value.find('\n') != std::string::npos || value.find('\r') != std::string::npos)
        throw std::logic_error("kvdoc: value for '" + key + "' spans multiple lines");
    const std::size_t at = find(key);
    if (at == entries_.size())
        entries_.emplace_back(key, value);
    else
        entries_[at].second = value;
}

void KvDoc::set(const std::string& key, const char* value) { set(key, std::string(value)); }

void KvDoc::set(const std::string& key, double value) { set(key, format_number(value)); }

void KvDoc::set(const std::string& key, bool value) { set(key, value ? "true" : "false"); }

bool KvDoc::contains(const std::string& key) const { return find(key) != entries_.size(); }

const std::string& KvDoc::get(const std::string& key) const {
    const std::size_t at = find(key);
    if (at == entries_.size()) fail("missing report key '" + key + "'");
    return entries_[at].second;
}

double KvDoc::number(const std::string& key) const {
    const std::string& text = get(key);
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        fail("key '" + key + "': expected a number, found '" + text + "'");
    }
}

long long KvDoc::integer(const std::string& key) const {
    const std::string& text = get(key);
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        fail("key '" + key + "': expected an integer, found '" + text + "'");
    }
}

bool KvDoc::flag(const std::string& key) const {
    const std::string& text = get(key);
    if (text == "true") return true;
    if (text == "false") return false;
    fail("key '" + key + "': expected true or false, found '" + text + "'");
}

void KvDoc::write(std::ostream& os) const {
    for (const auto& [key, value] : entries_) os << key << " = " << value << "\n";
}

void KvDoc::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write " + path);
    write(out);
    out.flush();
    if (!out) throw usage_error("failed writing " + path);
}

KvDoc KvDoc::read(std::istream& is, const std::string& source) {
    KvDoc doc;
    doc.source_ = source;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            doc.fail("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (!valid_key(key))
            doc.fail("line " + std::to_string(line_no) + ": malformed key '" + key + "'");
        if (doc.contains(key))
            doc.fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        doc.entries_.emplace_back(key, value);
    }
    return doc;
}

KvDoc KvDoc::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw report_error("cannot open report file: " + path);
    return read(in, path);
}

std::size_t KvDoc::find(const std::string& key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == key) return i;
    return entries_.size();
}

void KvDoc::fail(const std::string& message) const {
    throw report_error(source_.empty() ? message : source_ + ": " + message);
}

}  // namespace wealthfit
