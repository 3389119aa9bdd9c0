#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zacr/dataset.hpp"

namespace zacr {

// CSV exchange format: header "time,status", one observation per row,
// status 1 = event, 0 = right-censored.
SurvivalDataset load_dataset_csv(const std::string& path);
SurvivalDataset parse_dataset_csv(std::istream& in, const std::string& origin);
void write_dataset_csv(const SurvivalDataset& data, std::ostream& out);

// Minimal JSON document builder. Numbers are printed with 17 significant
// digits so round-tripping through text preserves doubles bit for bit;
// non-finite values become null. Object fields keep insertion order, which
// keeps emitted reports byte-stable run to run.
class JsonValue {
public:
    JsonValue() : kind_(Kind::Null) {}
    JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
    JsonValue(double d) : kind_(Kind::Number), num_(d) {}
    JsonValue(int i) : kind_(Kind::Number), num_(i) {}
    JsonValue(long long i) : kind_(Kind::Number), num_(static_cast<double>(i)) {}
    JsonValue(unsigned long long i) : kind_(Kind::Number), num_(static_cast<double>(i)) {}
    JsonValue(const char* s) : kind_(Kind::String), str_(s) {}
    JsonValue(std::string s) : kind_(Kind::String), str_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();
    static JsonValue array_of(const std::vector<double>& values);

    JsonValue& set(const std::string& key, JsonValue v);  // object field
    JsonValue& push(JsonValue v);                         // array element

    void dump(std::ostream& out, int indent = 0) const;
    std::string dump_string(int indent = 0) const;

    static std::string format_number(double d);

private:
    enum class Kind { Null, Bool, Number, String, Array, Object };
    void dump_impl(std::ostream& out, int indent, int depth) const;

    Kind kind_;
    bool bool_ = false;
    double num_ = 0.0;
    std::string str_;
    std::vector<JsonValue> items_;
    std::vector<std::pair<std::string, JsonValue>> fields_;
};

}  // namespace zacr
