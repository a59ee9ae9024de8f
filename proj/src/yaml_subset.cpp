#include "obench/yaml_subset.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <yaml-cpp/eventhandler.h>
#include <yaml-cpp/exceptions.h>
#include <yaml-cpp/mark.h>
#include <yaml-cpp/parser.h>

#include "obench/error.hpp"

namespace obench {

using json = nlohmann::json;

namespace {

std::string where(const YAML::Mark& m) { return fmt::format("line {}, column {}", m.line + 1, m.column + 1); }

json plain_scalar(const std::string& v) {
    if (v.empty() || v == "~" || v == "null" || v == "Null" || v == "NULL") return nullptr;
    if (v == "true" || v == "True" || v == "TRUE") return true;
    if (v == "false" || v == "False" || v == "FALSE") return false;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (*first == '+') ++first;
    long long i = 0;
    auto [pi, ei] = std::from_chars(first, last, i);
    if (ei == std::errc() && pi == last) return i;
    double d = 0.0;
    auto [pd, ed] = std::from_chars(first, last, d);
    if (ed == std::errc() && pd == last) return d;
    return v;
}

class Builder : public YAML::EventHandler {
public:
    json result;

    void OnDocumentStart(const YAML::Mark&) override {}
    void OnDocumentEnd() override {}

    void OnNull(const YAML::Mark& m, YAML::anchor_t anchor) override {
        no_anchor(m, anchor);
        add(m, nullptr);
    }
    void OnAlias(const YAML::Mark& m, YAML::anchor_t) override {
        fail_parse("config", "aliases are not supported (" + where(m) + ")");
    }
    void OnAnchor(const YAML::Mark& m, const std::string&) override {
        fail_parse("config", "anchors are not supported (" + where(m) + ")");
    }
    void OnScalar(const YAML::Mark& m, const std::string& tag, YAML::anchor_t anchor,
                  const std::string& value) override {
        no_anchor(m, anchor);
        if (tag == "!") add(m, value);
        else if (tag == "?" || tag.empty()) add(m, plain_scalar(value));
        else fail_parse("config", fmt::format("tag '{}' is not supported ({})", tag, where(m)));
    }
    void OnSequenceStart(const YAML::Mark& m, const std::string& tag, YAML::anchor_t anchor,
                         YAML::EmitterStyle::value) override {
        open(m, tag, anchor, json::array());
    }
    void OnSequenceEnd() override { close(); }
    void OnMapStart(const YAML::Mark& m, const std::string& tag, YAML::anchor_t anchor,
                    YAML::EmitterStyle::value) override {
        open(m, tag, anchor, json::object());
    }
    void OnMapEnd() override { close(); }

private:
    struct Frame {
        json value;
        std::optional<std::string> key;  // pending key inside a mapping
        YAML::Mark mark;
    };
    std::vector<Frame> stack_;

    static void no_anchor(const YAML::Mark& m, YAML::anchor_t anchor) {
        if (anchor != YAML::NullAnchor) fail_parse("config", "anchors are not supported (" + where(m) + ")");
    }

    void open(const YAML::Mark& m, const std::string& tag, YAML::anchor_t anchor, json empty) {
        no_anchor(m, anchor);
        if (!tag.empty() && tag != "?" && tag != "tag:yaml.org,2002:map" && tag != "tag:yaml.org,2002:seq")
            fail_parse("config", fmt::format("tag '{}' is not supported ({})", tag, where(m)));
        if (!stack_.empty() && stack_.back().value.is_object() && !stack_.back().key)
            fail_parse("config", "mapping keys must be scalars (" + where(m) + ")");
        stack_.push_back({std::move(empty), std::nullopt, m});
    }

    void close() {
        Frame f = std::move(stack_.back());
        stack_.pop_back();
        add(f.mark, std::move(f.value));
    }

    void add(const YAML::Mark& m, json v) {
        if (stack_.empty()) {
            result = std::move(v);
            return;
        }
        auto& top = stack_.back();
        if (top.value.is_array()) {
            top.value.push_back(std::move(v));
            return;
        }
        if (!top.key) {
            if (v.is_structured()) fail_parse("config", "mapping keys must be scalars (" + where(m) + ")");
            std::string key = v.is_string() ? v.get<std::string>() : v.dump();
            if (top.value.contains(key)) fail_parse(key, "duplicate key (" + where(m) + ")");
            top.key = std::move(key);
            return;
        }
        top.value[*top.key] = std::move(v);
        top.key.reset();
    }
};

}  // namespace

json parse_yaml_subset(const std::string& text) {
    std::istringstream in(text);
    Builder b;
    try {
        YAML::Parser parser(in);
        if (!parser.HandleNextDocument(b)) return nullptr;
        Builder extra;
        if (parser.HandleNextDocument(extra)) fail_parse("config", "multiple YAML documents are not supported");
    } catch (const YAML::Exception& e) {
        fail_parse("config", e.what());
    }
    return b.result;
}

}  // namespace obench
