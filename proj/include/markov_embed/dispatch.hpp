#pragma once

#include <optional>

#include "markov_embed/circulant.hpp"
#include "markov_embed/diagnostics.hpp"
#include "markov_embed/equalinput.hpp"
#include "markov_embed/logsearch.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

struct ClassTags {
    std::optional<EqualInputParams> equal_input;
    std::optional<CirculantCoeffs> circulant;
    bool symmetric = false;
    bool doubly_stochastic = false;
};

ClassTags detect_classes(const StochasticMatrix& m);

struct EmbedOptions {
    BranchWindow window;
    double tol = kDefaultTol;
};

struct EmbedReport {
    ClassTags classes;
    NecessityReport necessity;
    EmbedVerdict verdict;
};

/// Runs the necessary conditions, then the most specific applicable solver:
/// d = 2, equal-input, d = 3 symmetric or doubly stochastic, circulant, and
/// finally the branch search. Generators that fail the 1e-8 round trip are dropped.
EmbedReport embed(const StochasticMatrix& m, const EmbedOptions& opt = {});

}  // namespace markov
