#pragma once

#include "stochinv/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stochinv {

enum class LocKind { Det, Prob, Nondet };

/// Update element of a transition.
struct Update {
    enum class Kind { Identity, Affine, Sample, Choose };
    Kind kind = Kind::Identity;
    AffineExpr expr;     // Affine: full rhs; Sample: additive shift
    std::string distId;  // Sample
    SetSpec set;         // Choose
};

struct Transition {
    int source = -1;
    int target = -1;
    int var = 0;  // target variable index
    Update update;
    std::optional<Plp> guard;  // transitions out of Det locations
    std::optional<Rat> prob;   // transitions out of Prob locations
};

struct Location {
    std::string name;
    LocKind kind = LocKind::Det;
    bool terminal = false;
};

struct Pcfg {
    std::vector<Location> locations;
    VarTable vars;
    int initLoc = 0;
    std::vector<Rat> initVal;
    std::vector<Transition> transitions;
    DistRegistry dists;

    int numLocations() const { return static_cast<int>(locations.size()); }
    int locByName(const std::string& n) const {
        for (size_t i = 0; i < locations.size(); ++i)
            if (locations[i].name == n) return static_cast<int>(i);
        return -1;
    }
    std::vector<int> outgoing(int loc) const {
        std::vector<int> out;
        for (size_t i = 0; i < transitions.size(); ++i)
            if (transitions[i].source == loc) out.push_back(static_cast<int>(i));
        return out;
    }
    bool isTerminal(int loc) const { return locations[static_cast<size_t>(loc)].terminal; }
    Plp terminalSet(int loc) const {  // target-set predicate of "at a terminal location"
        return isTerminal(loc) ? Plp::top() : Plp::bottom();
    }
};

struct Configuration {
    int loc = 0;
    std::vector<Rat> val;
};

/// Builds the pCFG of a validated AST with the standard inductive rules:
/// assignments and skip become two-location fragments, sequencing identifies
/// out/in locations, while-loops add a fresh guarded head, branches add a
/// Det/Prob/Nondet location by guard kind. Remaining Det guards are set to
/// true, a self-loop is added on the terminal location, and only Det
/// locations carry variable updates.
Pcfg buildPcfg(const Ast& ast);

/// Reads the `.pcfg` text format (see README). Hand-written pCFGs may carry
/// updates on Prob/Nondet transitions (the collapsed form used for drawing).
Pcfg parsePcfgFile(const std::string& text);

struct Diagnostic {
    int loc = -1;
    std::string invariantName;
    std::string message;
};

/// Well-formedness diagnostics: empty iff all pCFG invariants hold.
std::vector<Diagnostic> validatePcfg(const Pcfg& p);

std::string printPcfg(const Pcfg& p);

} // namespace stochinv
