#include "zacr/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zacr/errors.hpp"

namespace zacr {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_time(const std::string& field, const std::string& origin, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DataError(origin + ":" + std::to_string(line) + ": cannot parse time '" +
                        field + "'");
    }
    return value;
}

}  // namespace

SurvivalDataset parse_dataset_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "time,status") {
        throw DataError(origin + ": expected header 'time,status'");
    }
    std::vector<Observation> obs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t comma = t.find(',');
        if (comma == std::string::npos) {
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected 'time,status'");
        }
        std::string time_field = trim(t.substr(0, comma));
        std::string status_field = trim(t.substr(comma + 1));
        double time = parse_time(time_field, origin, lineno);
        if (!std::isfinite(time) || time < 0.0) {
            throw DataError(origin + ":" + std::to_string(lineno) +
                            ": time must be finite and nonnegative");
        }
        bool event;
        if (status_field == "1") {
            event = true;
        } else if (status_field == "0") {
            event = false;
        } else {
            throw DataError(origin + ":" + std::to_string(lineno) + ": status must be 0 or 1, got '" +
                            status_field + "'");
        }
        if (time == 0.0 && !event) {
            throw DataError(origin + ":" + std::to_string(lineno) +
                            ": zero-time observations must be events (status 1)");
        }
        obs.push_back({time, event});
    }
    if (obs.empty()) {
        throw DataError(origin + ": no observations");
    }
    return SurvivalDataset(std::move(obs));
}

SurvivalDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(path + ": cannot open file");
    }
    return parse_dataset_csv(in, path);
}

void write_dataset_csv(const SurvivalDataset& data, std::ostream& out) {
    out << "time,status\n";
    for (const Observation& o : data.observations()) {
        out << JsonValue::format_number(o.time) << ',' << (o.event ? 1 : 0) << '\n';
    }
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
}

JsonValue JsonValue::array_of(const std::vector<double>& values) {
    JsonValue v = array();
    for (double d : values) v.push(JsonValue(d));
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::Object) throw std::logic_error("JsonValue::set on a non-object");
    for (auto& [k, existing] : fields_) {
        if (k == key) {
            existing = std::move(v);
            return *this;
        }
    }
    fields_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::Array) throw std::logic_error("JsonValue::push on a non-array");
    items_.push_back(std::move(v));
    return *this;
}

std::string JsonValue::format_number(double d) {
    if (!std::isfinite(d)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

namespace {

void dump_string_escaped(std::ostream& out, const std::string& s) {
    out << '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            case '\r': out << "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out << buf;
                } else {
                    out << ch;
                }
        }
    }
    out << '"';
}

void pad(std::ostream& out, int indent, int depth) {
    if (indent > 0) {
        out << '\n';
        for (int i = 0; i < indent * depth; ++i) out << ' ';
    }
}

}  // namespace

void JsonValue::dump_impl(std::ostream& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::Null: out << "null"; break;
        case Kind::Bool: out << (bool_ ? "true" : "false"); break;
        case Kind::Number: out << format_number(num_); break;
        case Kind::String: dump_string_escaped(out, str_); break;
        case Kind::Array: {
            out << '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i) out << ',';
                pad(out, indent, depth + 1);
                items_[i].dump_impl(out, indent, depth + 1);
            }
            if (!items_.empty()) pad(out, indent, depth);
            out << ']';
            break;
        }
        case Kind::Object: {
            out << '{';
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                if (i) out << ',';
                pad(out, indent, depth + 1);
                dump_string_escaped(out, fields_[i].first);
                out << (indent > 0 ? ": " : ":");
                fields_[i].second.dump_impl(out, indent, depth + 1);
            }
            if (!fields_.empty()) pad(out, indent, depth);
            out << '}';
            break;
        }
    }
}

void JsonValue::dump(std::ostream& out, int indent) const {
    dump_impl(out, indent, 0);
    if (indent > 0) out << '\n';
}

std::string JsonValue::dump_string(int indent) const {
    std::ostringstream os;
    dump(os, indent);
    return os.str();
}

}  // namespace zacr
