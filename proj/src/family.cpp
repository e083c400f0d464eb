#include "qdl/family.hpp"

#include "qdl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <sstream>

namespace qdl {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view text)
{
    std::vector<std::string_view> out;
    text = trim(text);
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool parse_real(std::string_view token, double& out)
{
    if (token.empty()) {
        return false;
    }
    const std::string buf(token);
    char* end = nullptr;
    errno = 0;
    out = std::strtod(buf.c_str(), &end);
    return errno == 0 && end == buf.c_str() + buf.size();
}

bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

MapFamily::Slot parse_slot(std::string_view token)
{
    double v = 0.0;
    if (parse_real(token, v)) {
        return v;
    }
    if (is_identifier(token)) {
        return std::string(token);
    }
    throw SpecError("bad chain-template token '" + std::string(token) + "'");
}

double resolve(const MapFamily::Slot& slot, const Bindings& values)
{
    if (const double* v = std::get_if<double>(&slot)) {
        return *v;
    }
    const auto& name = std::get<std::string>(slot);
    const auto it = values.find(name);
    if (it == values.end()) {
        throw SpecError("no value bound for parameter '" + name + "'");
    }
    return it->second;
}

void print_slot(std::ostream& os, const MapFamily::Slot& slot)
{
    if (const double* v = std::get_if<double>(&slot)) {
        os << *v;
    } else {
        os << std::get<std::string>(slot);
    }
}

} // namespace

MapFamily::MapFamily(std::vector<Slot> chain, Slot r)
    : chain_(std::move(chain))
    , r_(std::move(r))
{
}

MapFamily MapFamily::parse(std::string_view chain_template, std::string_view r_token)
{
    std::vector<Slot> chain;
    for (auto tok : split_commas(chain_template)) {
        chain.push_back(parse_slot(tok));
    }
    return MapFamily(std::move(chain), parse_slot(trim(r_token)));
}

std::vector<std::string> MapFamily::parameters() const
{
    std::vector<std::string> names;
    auto note = [&names](const Slot& s) {
        if (const auto* n = std::get_if<std::string>(&s)) {
            if (std::find(names.begin(), names.end(), *n) == names.end()) {
                names.push_back(*n);
            }
        }
    };
    for (const auto& s : chain_) {
        note(s);
    }
    note(r_);
    return names;
}

DeformedMap MapFamily::bind(const Bindings& values) const
{
    std::vector<double> chain;
    chain.reserve(chain_.size());
    for (const auto& s : chain_) {
        chain.push_back(resolve(s, values));
    }
    return DeformedMap(resolve(r_, values), std::move(chain));
}

std::string MapFamily::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "r=";
    print_slot(os, r_);
    os << " chain=(";
    for (std::size_t i = 0; i < chain_.size(); ++i) {
        if (i) {
            os << ',';
        }
        print_slot(os, chain_[i]);
    }
    os << ')';
    return os.str();
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    for (auto tok : split_commas(text)) {
        double v = 0.0;
        if (!parse_real(tok, v)) {
            throw SpecError("expected a comma-separated list of reals, got '" + std::string(text) + "'");
        }
        out.push_back(v);
    }
    return out;
}

} // namespace qdl
