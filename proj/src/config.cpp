#include "tailwalk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tailwalk {

namespace {

struct Value {
    enum class Kind { String, Integer, Float, Boolean, Array } kind = Kind::String;
    std::string text;
    long long integer = 0;
    double real = 0.0;
    bool flag = false;
    std::vector<Value> items;
    int line = 0;
};

std::string kind_name(Value::Kind k) {
    switch (k) {
        case Value::Kind::String: return "string";
        case Value::Kind::Integer: return "integer";
        case Value::Kind::Float: return "float";
        case Value::Kind::Boolean: return "boolean";
        case Value::Kind::Array: return "array";
    }
    return "value";
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool bare_key(const std::string& k) {
    if (k.empty()) return false;
    return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

class LineParser {
public:
    LineParser(const std::string& s, int line) : s_(s), line_(line) {}

    Value value() {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return string();
        if (c == '[') return array();
        return scalar();
    }

    void finish() {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected text after value: '" + s_.substr(pos_) + "'");
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(what, line_); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }

    Value string() {
        Value v;
        v.kind = Value::Kind::String;
        v.line = line_;
        ++pos_;
        for (;;) {
            if (pos_ >= s_.size()) fail("unterminated string");
            const char c = s_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= s_.size()) fail("unterminated escape");
                const char e = s_[pos_++];
                switch (e) {
                    case '"': v.text += '"'; break;
                    case '\\': v.text += '\\'; break;
                    case 'n': v.text += '\n'; break;
                    case 't': v.text += '\t'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
                v.text += c;
            }
        }
        return v;
    }

    Value array() {
        Value v;
        v.kind = Value::Kind::Array;
        v.line = line_;
        ++pos_;
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated array (arrays must fit on one line)");
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            if (s_[pos_] == '[') fail("nested arrays are not supported");
            v.items.push_back(value());
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
            } else if (pos_ < s_.size() && s_[pos_] != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        if (!v.items.empty()) {
            const bool numeric = v.items[0].kind == Value::Kind::Integer || v.items[0].kind == Value::Kind::Float;
            for (const auto& it : v.items) {
                const bool n = it.kind == Value::Kind::Integer || it.kind == Value::Kind::Float;
                if (n != numeric || (!numeric && it.kind != v.items[0].kind)) fail("mixed types in array");
            }
        }
        return v;
    }

    Value scalar() {
        auto end = pos_;
        while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != '#' && s_[end] != ' ' &&
               s_[end] != '\t' && s_[end] != '\r') {
            ++end;
        }
        std::string tok = s_.substr(pos_, end - pos_);
        pos_ = end;
        Value v;
        v.line = line_;
        if (tok == "true" || tok == "false") {
            v.kind = Value::Kind::Boolean;
            v.flag = tok == "true";
            return v;
        }
        std::string num;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            if (tok[i] == '_') {
                const bool ok = i > 0 && i + 1 < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i - 1])) &&
                                std::isdigit(static_cast<unsigned char>(tok[i + 1]));
                if (!ok) fail("misplaced '_' in number '" + tok + "'");
                continue;
            }
            num += tok[i];
        }
        if (!num.empty() && num[0] == '+') num.erase(0, 1);
        const bool is_float = num.find_first_of(".eE") != std::string::npos || num.find("inf") != std::string::npos ||
                              num.find("nan") != std::string::npos;
        const char* b = num.data();
        const char* e = num.data() + num.size();
        if (is_float) {
            v.kind = Value::Kind::Float;
            const auto r = std::from_chars(b, e, v.real);
            if (r.ec != std::errc() || r.ptr != e || num.empty()) fail("invalid value '" + tok + "'");
        } else {
            v.kind = Value::Kind::Integer;
            const auto r = std::from_chars(b, e, v.integer);
            if (r.ec == std::errc::result_out_of_range) fail("integer out of range '" + tok + "'");
            if (r.ec != std::errc() || r.ptr != e || num.empty()) fail("invalid value '" + tok + "'");
            v.real = double(v.integer);
        }
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
};

using Table = std::map<std::string, Value>;

struct Document {
    std::map<std::string, Table> sections;
    std::map<std::string, int> section_lines;
};

Document parse_document(const std::string& text) {
    Document doc;
    doc.sections[""];
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s[0] == '[') {
            const auto close = s.find(']');
            if (close == std::string::npos) throw ConfigError("unterminated section header", line);
            const std::string rest = trim(s.substr(close + 1));
            if (!rest.empty() && rest[0] != '#') throw ConfigError("unexpected text after section header", line);
            section = trim(s.substr(1, close - 1));
            if (!bare_key(section)) throw ConfigError("invalid section name '" + section + "'", line);
            if (doc.section_lines.count(section)) throw ConfigError("duplicate section [" + section + "]", line);
            doc.section_lines[section] = line;
            doc.sections[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(s.substr(0, eq));
        if (!bare_key(key)) throw ConfigError("invalid key '" + key + "'", line);
        const std::string rhs = s.substr(eq + 1);
        LineParser p(rhs, line);
        Value v = p.value();
        p.finish();
        auto& table = doc.sections[section];
        if (table.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
        table.emplace(key, std::move(v));
    }
    return doc;
}

class Reader {
public:
    Reader(const Document& doc, std::string section) : section_(std::move(section)) {
        const auto it = doc.sections.find(section_);
        if (it != doc.sections.end()) table_ = &it->second;
    }

    void allow(std::set<std::string> keys) const {
        if (!table_) return;
        for (const auto& [k, v] : *table_) {
            if (!keys.count(k)) throw ConfigError("unknown key '" + where(k) + "'", v.line);
        }
    }

    const Value* find(const std::string& key) const {
        if (!table_) return nullptr;
        const auto it = table_->find(key);
        return it == table_->end() ? nullptr : &it->second;
    }

    void get(const std::string& key, double& out) const {
        if (const auto* v = find(key)) out = number(key, *v);
    }

    void get(const std::string& key, long& out) const {
        if (const auto* v = find(key)) out = integer(key, *v);
    }

    void get(const std::string& key, int& out) const {
        if (const auto* v = find(key)) {
            const long long i = integer(key, *v);
            if (i < -(1LL << 31) || i >= (1LL << 31)) throw ConfigError("'" + where(key) + "' is out of range", v->line);
            out = int(i);
        }
    }

    void get(const std::string& key, std::string& out) const {
        if (const auto* v = find(key)) {
            expect(key, *v, Value::Kind::String);
            out = v->text;
        }
    }

    void get(const std::string& key, std::vector<double>& out) const {
        if (const auto* v = find(key)) {
            expect(key, *v, Value::Kind::Array);
            out.clear();
            for (const auto& it : v->items) out.push_back(number(key, it));
        }
    }

    void get(const std::string& key, std::vector<long>& out) const {
        if (const auto* v = find(key)) {
            expect(key, *v, Value::Kind::Array);
            out.clear();
            for (const auto& it : v->items) out.push_back(long(integer(key, it)));
        }
    }

    int line_of(const std::string& key) const {
        const auto* v = find(key);
        return v ? v->line : 0;
    }

    std::string where(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

private:
    void expect(const std::string& key, const Value& v, Value::Kind k) const {
        if (v.kind != k) {
            throw ConfigError("'" + where(key) + "' must be a " + kind_name(k) + ", got " + kind_name(v.kind), v.line);
        }
    }

    double number(const std::string& key, const Value& v) const {
        if (v.kind != Value::Kind::Integer && v.kind != Value::Kind::Float) {
            throw ConfigError("'" + where(key) + "' must be a number, got " + kind_name(v.kind), v.line);
        }
        return v.real;
    }

    long long integer(const std::string& key, const Value& v) const {
        expect(key, v, Value::Kind::Integer);
        return v.integer;
    }

    std::string section_;
    const Table* table_ = nullptr;
};

std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

template <class T, class F>
std::string list(const std::vector<T>& v, F f) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
    return s + "]";
}

std::string doubles(const std::vector<double>& v) { return list(v, format_double); }

}  // namespace

std::uint64_t ExperimentConfig::require_seed(const std::string& purpose) const {
    if (!seed) throw ConfigError("missing top-level 'seed' (required by " + purpose + ")", 0);
    return *seed;
}

ExperimentConfig parse_config(const std::string& text) {
    const Document doc = parse_document(text);
    for (const auto& [name, line] : doc.section_lines) {
        if (name != "kernel" && name != "solver" && name != "sweep" && name != "branching") {
            throw ConfigError("unknown section [" + name + "]", line);
        }
    }
    ExperimentConfig c;

    const Reader top(doc, "");
    top.allow({"seed", "output"});
    if (const auto* v = top.find("seed")) {
        if (v->kind != Value::Kind::Integer || v->integer < 0) {
            throw ConfigError("'seed' must be a nonnegative integer", v->line);
        }
        c.seed = static_cast<std::uint64_t>(v->integer);
    }
    top.get("output", c.output);

    const Reader k(doc, "kernel");
    k.allow({"family", "dimension", "alpha", "table_sites", "table_weights"});
    std::string family = to_string(c.kernel.family);
    k.get("family", family);
    bool known = false;
    for (Family f : {Family::Cauchy2_1D, Family::GenCauchy, Family::LatticeZipf, Family::LatticeTable, Family::Gaussian}) {
        if (lower(to_string(f)) == lower(family)) {
            c.kernel.family = f;
            known = true;
        }
    }
    if (!known) throw ConfigError("unknown kernel family '" + family + "'", k.line_of("family"));
    k.get("dimension", c.kernel.dimension);
    if (c.kernel.dimension < 1) throw ConfigError("'kernel.dimension' must be >= 1", k.line_of("dimension"));
    k.get("alpha", c.kernel.alpha);
    std::vector<long> sites;
    std::vector<double> weights;
    k.get("table_sites", sites);
    k.get("table_weights", weights);
    if (sites.size() != weights.size() * std::size_t(c.kernel.dimension)) {
        throw ConfigError("'kernel.table_sites' needs dimension entries per weight",
                          std::max(k.line_of("table_sites"), k.line_of("table_weights")));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto d = std::size_t(c.kernel.dimension);
        c.kernel.table.push_back({std::vector<long>(sites.begin() + long(i * d), sites.begin() + long((i + 1) * d)), weights[i]});
    }
    if (c.kernel.family == Family::LatticeTable && c.kernel.table.empty()) {
        throw ConfigError("LatticeTable needs 'table_sites' and 'table_weights'", doc.section_lines.count("kernel") ? doc.section_lines.at("kernel") : 0);
    }

    const Reader s(doc, "solver");
    s.allow({"method", "tolerance", "max_spacing", "radius", "paths"});
    s.get("method", c.solver.method);
    s.get("tolerance", c.solver.tolerance);
    s.get("max_spacing", c.solver.max_spacing);
    s.get("radius", c.solver.radius);
    s.get("paths", c.solver.paths);
    if (c.solver.method != "auto" && c.solver.method != "series_lattice" && c.solver.method != "fourier_continuum" &&
        c.solver.method != "ctrw") {
        throw ConfigError("unknown solver method '" + c.solver.method + "'", s.line_of("method"));
    }
    if (!(c.solver.tolerance > 0.0)) throw ConfigError("'solver.tolerance' must be positive", s.line_of("tolerance"));
    if (!(c.solver.max_spacing > 0.0)) throw ConfigError("'solver.max_spacing' must be positive", s.line_of("max_spacing"));
    if (!(c.solver.radius >= 0.0)) throw ConfigError("'solver.radius' must be >= 0", s.line_of("radius"));
    if (c.solver.paths < 1) throw ConfigError("'solver.paths' must be >= 1", s.line_of("paths"));

    const Reader w(doc, "sweep");
    w.allow({"times", "x", "lambdas", "directions", "delta", "green_tolerance"});
    w.get("times", c.sweep.times);
    w.get("x", c.sweep.x);
    w.get("lambdas", c.sweep.lambdas);
    w.get("directions", c.sweep.directions);
    w.get("delta", c.sweep.delta);
    w.get("green_tolerance", c.sweep.green_tolerance);
    if (c.sweep.directions.size() % std::size_t(c.kernel.dimension) != 0) {
        throw ConfigError("'sweep.directions' needs dimension entries per direction", w.line_of("directions"));
    }
    for (double t : c.sweep.times) {
        if (!(t >= 0.0)) throw ConfigError("'sweep.times' must be >= 0", w.line_of("times"));
    }
    for (double l : c.sweep.lambdas) {
        if (!(l > 0.0)) throw ConfigError("'sweep.lambdas' must be positive", w.line_of("lambdas"));
    }

    const Reader b(doc, "branching");
    b.allow({"beta", "mu", "runs", "cap", "times", "cell_width", "half_cells"});
    b.get("beta", c.branching.beta);
    b.get("mu", c.branching.mu);
    b.get("runs", c.branching.runs);
    b.get("cap", c.branching.cap);
    b.get("times", c.branching.times);
    b.get("cell_width", c.branching.cell_width);
    b.get("half_cells", c.branching.half_cells);
    if (!(c.branching.beta >= 0.0) || !std::isfinite(c.branching.beta)) throw ConfigError("'branching.beta' must be >= 0", b.line_of("beta"));
    if (!(c.branching.mu >= 0.0) || !std::isfinite(c.branching.mu)) throw ConfigError("'branching.mu' must be >= 0", b.line_of("mu"));
    if (c.branching.runs < 1) throw ConfigError("'branching.runs' must be >= 1", b.line_of("runs"));
    if (c.branching.cap < 1000) throw ConfigError("'branching.cap' must be >= 1000", b.line_of("cap"));
    if (!(c.branching.cell_width > 0.0)) throw ConfigError("'branching.cell_width' must be positive", b.line_of("cell_width"));
    if (c.branching.half_cells < 0) throw ConfigError("'branching.half_cells' must be >= 0", b.line_of("half_cells"));
    if (!std::is_sorted(c.branching.times.begin(), c.branching.times.end())) {
        throw ConfigError("'branching.times' must be sorted", b.line_of("times"));
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    if (c.seed) o << "seed = " << *c.seed << "\n";
    o << "output = " << quote(c.output) << "\n\n";

    std::vector<long> sites;
    std::vector<double> weights;
    for (const auto& j : c.kernel.table) {
        sites.insert(sites.end(), j.site.begin(), j.site.end());
        weights.push_back(j.weight);
    }
    o << "[kernel]\n"
      << "family = " << quote(to_string(c.kernel.family)) << "\n"
      << "dimension = " << c.kernel.dimension << "\n"
      << "alpha = " << format_double(c.kernel.alpha) << "\n";
    if (!weights.empty()) {
        o << "table_sites = " << list(sites, [](long v) { return std::to_string(v); }) << "\n"
          << "table_weights = " << doubles(weights) << "\n";
    }

    o << "\n[solver]\n"
      << "method = " << quote(c.solver.method) << "\n"
      << "tolerance = " << format_double(c.solver.tolerance) << "\n"
      << "max_spacing = " << format_double(c.solver.max_spacing) << "\n"
      << "radius = " << format_double(c.solver.radius) << "\n"
      << "paths = " << c.solver.paths << "\n";

    o << "\n[sweep]\n"
      << "times = " << doubles(c.sweep.times) << "\n"
      << "x = " << doubles(c.sweep.x) << "\n"
      << "lambdas = " << doubles(c.sweep.lambdas) << "\n"
      << "directions = " << doubles(c.sweep.directions) << "\n"
      << "delta = " << format_double(c.sweep.delta) << "\n"
      << "green_tolerance = " << format_double(c.sweep.green_tolerance) << "\n";

    o << "\n[branching]\n"
      << "beta = " << format_double(c.branching.beta) << "\n"
      << "mu = " << format_double(c.branching.mu) << "\n"
      << "runs = " << c.branching.runs << "\n"
      << "cap = " << c.branching.cap << "\n"
      << "times = " << doubles(c.branching.times) << "\n"
      << "cell_width = " << format_double(c.branching.cell_width) << "\n"
      << "half_cells = " << c.branching.half_cells << "\n";
    return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tailwalk
