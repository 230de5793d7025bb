#include "dso/firmware.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "dso/types.hpp"

namespace dso {

namespace {

struct SymbolInfo {
    std::string_view name;
    int arity;
    bool departure;
    bool stochastic;
};

constexpr std::array<SymbolInfo, kSymbolCount> kInfo{{
    {"+", 2, false, false},
    {"-", 2, false, false},
    {"*", 2, false, false},
    {"pdiv", 2, false, false},
    {"avg2", 2, false, false},
    {"abs", 1, false, false},
    {"neg", 1, false, false},
    {"CBCd", 0, true, false},
    {"PermCBC", 0, true, true},
    {"PBestCBC", 0, true, true},
    {"MVNS", 0, true, true},
    {"OppCBC", 0, true, false},
    {"GBC", 0, true, false},
    {"Shift", 0, false, false},
    {"Step", 0, false, true},
    {"matInterval", 0, false, false},
    {"C1", 0, false, false},
    {"C2", 0, false, false},
    {"C3", 0, false, false},
    {"U01", 0, false, true},
    {"U051", 0, false, true},
    {"G01", 0, false, true},
    {"absG0501", 0, false, true},
    {"absG0001", 0, false, true},
}};

const SymbolInfo& info(Symbol s) { return kInfo[static_cast<std::size_t>(s)]; }

constexpr std::array kFunctions{Symbol::Plus, Symbol::Sub, Symbol::Times, Symbol::PDiv,
                                Symbol::Avg2, Symbol::Abs, Symbol::Neg};

constexpr std::array kTerminals{Symbol::CBCd,     Symbol::PermCBC, Symbol::PBestCBC,
                                Symbol::MVNS,     Symbol::OppCBC,  Symbol::GBC,
                                Symbol::Shift,    Symbol::Step,    Symbol::MatInterval,
                                Symbol::C1,       Symbol::C2,      Symbol::C3,
                                Symbol::U01,      Symbol::U051,    Symbol::G01,
                                Symbol::AbsG0501, Symbol::AbsG0001};

// Departures drawn by mutation. GBC is also accepted in the departure slot
// when parsing, but only the offset grower produces it.
constexpr std::array kDepartures{Symbol::CBCd, Symbol::PermCBC, Symbol::PBestCBC, Symbol::MVNS, Symbol::OppCBC};

constexpr std::array kOffsetTerminals{Symbol::GBC, Symbol::CBCd, Symbol::Shift,    Symbol::Step,    Symbol::MatInterval,
                                      Symbol::C1,  Symbol::C2,   Symbol::C3,       Symbol::U01,     Symbol::U051,
                                      Symbol::G01, Symbol::AbsG0501, Symbol::AbsG0001};

void check_pattern(std::span<const Symbol> nodes)
{
    if (nodes.size() < 3) {
        throw Error("firmware needs at least 3 nodes, got " + std::to_string(nodes.size()));
    }
    if (nodes[0] != Symbol::Plus) {
        throw Error("firmware root must be '+', got '" + std::string(symbol_name(nodes[0])) + "'");
    }
    if (!is_departure(nodes[1])) {
        throw Error("'" + std::string(symbol_name(nodes[1])) + "' is not a departure terminal");
    }
    if (subtree_end(nodes, 2) != nodes.size()) {
        throw Error("trailing nodes after offset subtree");
    }
}

// Recursive-descent reader over the s-expression text.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    void expression(std::vector<Symbol>& out)
    {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        if (text_[pos_] == ')') {
            throw ParseError("unexpected ')'", pos_);
        }
        if (text_[pos_] != '(') {
            const auto start = pos_;
            const auto s = lookup(atom(), start);
            if (!is_terminal(s)) {
                throw ParseError("function '" + std::string(symbol_name(s)) + "' used as terminal", start);
            }
            out.push_back(s);
            return;
        }
        ++pos_;
        skip_space();
        const auto start = pos_;
        const auto head = atom();
        if (head.empty()) {
            throw ParseError("expected function symbol", start);
        }
        const auto s = lookup(head, start);
        if (!is_function(s)) {
            throw ParseError("terminal '" + std::string(head) + "' in function position", start);
        }
        out.push_back(s);
        for (int i = 0; i < arity(s); ++i) {
            expression(out);
        }
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != ')') {
            throw ParseError("expected ')' closing '" + std::string(head) + "'", pos_);
        }
        ++pos_;
    }

    void finish()
    {
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("trailing characters", pos_);
        }
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string_view atom()
    {
        const auto start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    static Symbol lookup(std::string_view name, std::size_t pos)
    {
        auto s = symbol_from_name(name);
        if (!s) {
            throw ParseError("unknown symbol '" + std::string(name) + "'", pos);
        }
        return *s;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::size_t write_sexpr(std::span<const Symbol> nodes, std::size_t pos, std::string& out)
{
    const auto s = nodes[pos];
    if (is_terminal(s)) {
        out += symbol_name(s);
        return pos + 1;
    }
    out += '(';
    out += symbol_name(s);
    auto next = pos + 1;
    for (int i = 0; i < arity(s); ++i) {
        out += ' ';
        next = write_sexpr(nodes, next, out);
    }
    out += ')';
    return next;
}

bool deterministic(std::span<const Symbol> subtree)
{
    return std::none_of(subtree.begin(), subtree.end(), is_stochastic);
}

} // namespace

int arity(Symbol s) { return info(s).arity; }
bool is_function(Symbol s) { return info(s).arity > 0; }
bool is_terminal(Symbol s) { return info(s).arity == 0; }
bool is_departure(Symbol s) { return info(s).departure; }
bool is_stochastic(Symbol s) { return info(s).stochastic; }
std::string_view symbol_name(Symbol s) { return info(s).name; }

std::optional<Symbol> symbol_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kInfo.size(); ++i) {
        if (kInfo[i].name == name) {
            return static_cast<Symbol>(i);
        }
    }
    return std::nullopt;
}

std::span<const Symbol> function_symbols() { return kFunctions; }
std::span<const Symbol> terminal_symbols() { return kTerminals; }
std::span<const Symbol> departure_symbols() { return kDepartures; }
std::span<const Symbol> offset_terminal_symbols() { return kOffsetTerminals; }

std::size_t subtree_end(std::span<const Symbol> nodes, std::size_t pos)
{
    std::size_t open = 1;
    while (open > 0) {
        if (pos >= nodes.size()) {
            throw Error("incomplete expression");
        }
        open += static_cast<std::size_t>(arity(nodes[pos]));
        --open;
        ++pos;
    }
    return pos;
}

Firmware::Firmware(std::vector<Symbol> nodes, std::string label, bool reference, bool fixed)
    : nodes_(std::move(nodes)), label_(std::move(label)), reference_(reference), fixed_(fixed)
{
    check_pattern(nodes_);
}

Firmware::Firmware(Symbol departure, std::span<const Symbol> offset, std::string label)
    : label_(std::move(label))
{
    nodes_.reserve(offset.size() + 2);
    nodes_.push_back(Symbol::Plus);
    nodes_.push_back(departure);
    nodes_.insert(nodes_.end(), offset.begin(), offset.end());
    check_pattern(nodes_);
}

Firmware& Firmware::set_label(std::string label)
{
    label_ = std::move(label);
    return *this;
}

Firmware& Firmware::set_reference(bool on)
{
    reference_ = on;
    return *this;
}

Firmware& Firmware::set_fixed(bool on)
{
    fixed_ = on;
    return *this;
}

Firmware parse_firmware(std::string_view text)
{
    Reader reader(text);
    std::vector<Symbol> nodes;
    reader.expression(nodes);
    reader.finish();
    return Firmware(std::move(nodes));
}

std::string serialize(std::span<const Symbol> nodes)
{
    std::string out;
    write_sexpr(nodes, 0, out);
    return out;
}

std::string serialize(const Firmware& f) { return serialize(f.nodes()); }

Firmware rand1_firmware()
{
    return parse_firmware("(+ PermCBC (* C1 (- PermCBC PermCBC)))").set_label("rand/1").set_reference(true);
}

Firmware mvns_step_firmware()
{
    return parse_firmware("(+ MVNS Step)").set_label("MVNS+Step").set_reference(true);
}

std::vector<RuleViolation> validate(const Firmware& f, SizeBounds bounds)
{
    std::vector<RuleViolation> out;
    const auto nodes = f.nodes();
    try {
        check_pattern(nodes);
    } catch (const Error& e) {
        out.push_back({Rule::Pattern, e.what()});
        return out;
    }

    if (!f.reference() && !(f.size() > bounds.min && f.size() < bounds.max)) {
        out.push_back({Rule::Size, "size " + std::to_string(f.size()) + " outside (" +
                                       std::to_string(bounds.min) + ", " + std::to_string(bounds.max) + ")"});
    }

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (arity(nodes[i]) != 2) {
            continue;
        }
        const auto lhs_end = subtree_end(nodes, i + 1);
        const auto rhs_end = subtree_end(nodes, lhs_end);
        const auto lhs = nodes.subspan(i + 1, lhs_end - i - 1);
        const auto rhs = nodes.subspan(lhs_end, rhs_end - lhs_end);
        if (std::ranges::equal(lhs, rhs) && deterministic(lhs)) {
            out.push_back({Rule::SameArguments, "identical arguments in " + serialize(nodes.subspan(i, rhs_end - i))});
        }
    }
    return out;
}

std::vector<RuleViolation> validate_variant(const Firmware& variant, const Firmware& base, SizeBounds bounds)
{
    auto out = validate(variant, bounds);
    if (variant.same_tree(base)) {
        out.push_back({Rule::Distinct, "variant is syntactically identical to its base"});
    }
    return out;
}

namespace {

void grow_into(Random& rng, const GrowOptions& opts, int depth, std::vector<Symbol>& out)
{
    const bool leaf = depth >= opts.max_depth || rng.uniform() < opts.terminal_probability;
    if (leaf) {
        out.push_back(kOffsetTerminals[rng.index(kOffsetTerminals.size())]);
        return;
    }
    const auto f = kFunctions[rng.index(kFunctions.size())];
    out.push_back(f);
    for (int i = 0; i < arity(f); ++i) {
        grow_into(rng, opts, depth + 1, out);
    }
}

bool acceptable(const Firmware& candidate, const Firmware& base, SizeBounds bounds)
{
    return validate_variant(candidate, base, bounds).empty();
}

} // namespace

std::vector<Symbol> grow_subtree(Random& rng, GrowOptions opts)
{
    std::vector<Symbol> out;
    grow_into(rng, opts, 0, out);
    return out;
}

Firmware mutate_variant(const Firmware& base, Random& rng, const MutationOptions& opts)
{
    const auto nodes = base.nodes();
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        // The root sum is pinned; pick among departure and offset nodes.
        const auto point = 1 + rng.index(nodes.size() - 1);
        std::vector<Symbol> next(nodes.begin(), nodes.end());
        if (point == 1) {
            next[1] = kDepartures[rng.index(kDepartures.size())];
        } else {
            const auto end = subtree_end(nodes, point);
            const auto grown = grow_subtree(rng, opts.grow);
            next.erase(next.begin() + static_cast<std::ptrdiff_t>(point),
                       next.begin() + static_cast<std::ptrdiff_t>(end));
            next.insert(next.begin() + static_cast<std::ptrdiff_t>(point), grown.begin(), grown.end());
        }
        Firmware candidate(std::move(next), "variant");
        if (acceptable(candidate, base, opts.bounds)) {
            return candidate;
        }
    }

    // Fallback: keep the departure, grow a fresh offset until every rule holds.
    constexpr int kFallbackLimit = 100000;
    for (int attempt = 0; attempt < kFallbackLimit; ++attempt) {
        const auto offset = grow_subtree(rng, opts.grow);
        Firmware candidate(base.departure(), offset, "variant");
        if (acceptable(candidate, base, opts.bounds)) {
            return candidate;
        }
    }
    throw Error("no valid variant within size bounds (" + std::to_string(opts.bounds.min) + ", " +
                std::to_string(opts.bounds.max) + ")");
}

} // namespace dso
