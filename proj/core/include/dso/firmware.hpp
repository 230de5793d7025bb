#ifndef DSO_FIRMWARE_HPP
#define DSO_FIRMWARE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dso/random.hpp"
#include "dso/types.hpp"

namespace dso {

// Alphabet of the perturbation language. Functions first, then terminals.
enum class Symbol : std::uint8_t {
    // functions
    Plus,
    Sub,
    Times,
    PDiv,
    Avg2,
    Abs,
    Neg,
    // coordinate terminals (usable as departure)
    CBCd,     // current best row of this drone
    PermCBC,  // a uniformly drawn current best row
    PBestCBC, // a uniformly drawn row of the p-best set
    MVNS,     // multivariate normal sample around the p-best set
    OppCBC,   // opposite point of CBCd within the box
    GBC,      // global best
    // offset-only terminals
    Shift,       // previous trial minus CBCd
    Step,        // scaled gaussian step
    MatInterval, // UB - LB
    C1,
    C2,
    C3,
    U01,      // U(0,1)
    U051,     // U(0.5,1)
    G01,      // G(0,1)
    AbsG0501, // |G(0.5,0.1)|
    AbsG0001, // |G(0,0.01)|
};

inline constexpr std::size_t kSymbolCount = static_cast<std::size_t>(Symbol::AbsG0001) + 1;

int arity(Symbol s);
bool is_function(Symbol s);
bool is_terminal(Symbol s);
bool is_departure(Symbol s);
// Terminals that draw fresh random values on every evaluation.
bool is_stochastic(Symbol s);
std::string_view symbol_name(Symbol s);
std::optional<Symbol> symbol_from_name(std::string_view name);

std::span<const Symbol> function_symbols();
// Every terminal the parser accepts.
std::span<const Symbol> terminal_symbols();
// Departures drawn when mutation hits the departure slot.
std::span<const Symbol> departure_symbols();
// Terminals used when growing offset subtrees.
std::span<const Symbol> offset_terminal_symbols();

// Index one past the last node of the subtree rooted at `pos` of a prefix-order
// node sequence. Throws if the sequence ends before the subtree is complete.
std::size_t subtree_end(std::span<const Symbol> nodes, std::size_t pos);

// A team's perturbation scheme: the tree (+ Departure Offset) stored in prefix
// order. nodes()[0] is the root sum, nodes()[1] the departure, the rest is the
// offset subtree.
class Firmware {
public:
    // Throws dso::Error if `nodes` is not a well-formed (+ Departure Offset) tree.
    explicit Firmware(std::vector<Symbol> nodes, std::string label = {}, bool reference = false,
                      bool fixed = false);
    Firmware(Symbol departure, std::span<const Symbol> offset, std::string label = {});

    std::span<const Symbol> nodes() const { return nodes_; }
    Symbol departure() const { return nodes_[1]; }
    std::span<const Symbol> offset() const { return std::span(nodes_).subspan(2); }
    std::size_t size() const { return nodes_.size(); }

    const std::string& label() const { return label_; }
    // Reference firmware is exempt from the size bounds.
    bool reference() const { return reference_; }
    // Fixed firmware is never replaced by the command center.
    bool fixed() const { return fixed_; }

    Firmware& set_label(std::string label);
    Firmware& set_reference(bool on);
    Firmware& set_fixed(bool on);

    // Structural (node-identical) comparison; flags and labels are ignored.
    bool same_tree(const Firmware& other) const { return nodes_ == other.nodes_; }

private:
    std::vector<Symbol> nodes_;
    std::string label_;
    bool reference_ = false;
    bool fixed_ = false;
};

// S-expression text format, e.g. "(+ PermCBC (* C1 (- PermCBC PermCBC)))".
Firmware parse_firmware(std::string_view text);
std::string serialize(const Firmware& f);
std::string serialize(std::span<const Symbol> nodes);
inline std::size_t tree_size(const Firmware& f) { return f.size(); }

// The two reference perturbations used to seed the teams.
Firmware rand1_firmware();     // (+ PermCBC (* C1 (- PermCBC PermCBC)))
Firmware mvns_step_firmware(); // (+ MVNS Step)

struct SizeBounds {
    std::size_t min = 5; // exclusive
    std::size_t max = 20; // exclusive
};

enum class Rule : std::uint8_t {
    Size = 1,         // s_min < S < s_max
    Distinct = 2,     // differs syntactically from its base
    SameArguments = 3, // no binary node with two identical deterministic arguments
    Pattern = 5,      // root is (+ Departure Offset)
};

struct RuleViolation {
    Rule rule;
    std::string detail;
};

// Rules 1, 3 and 5. The size rule is skipped for reference firmware.
std::vector<RuleViolation> validate(const Firmware& f, SizeBounds bounds = {});
// validate() plus rule 2 against the firmware the variant was derived from.
std::vector<RuleViolation> validate_variant(const Firmware& variant, const Firmware& base,
                                            SizeBounds bounds = {});

struct GrowOptions {
    int max_depth = 4;
    double terminal_probability = 0.5;
};

// Grow-style random expression in prefix order. Nodes at max_depth are terminals.
std::vector<Symbol> grow_subtree(Random& rng, GrowOptions opts = {});

struct MutationOptions {
    SizeBounds bounds;
    GrowOptions grow;
    int max_attempts = 50;
};

// Random sub-tree replacement. The result satisfies rules 1, 2, 3 and 5;
// rule 4 (never touch fixed firmware) is the caller's responsibility.
Firmware mutate_variant(const Firmware& base, Random& rng, const MutationOptions& opts = {});

} // namespace dso

#endif
