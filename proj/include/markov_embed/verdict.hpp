#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "markov_embed/matrix.hpp"

namespace markov {

enum class Verdict { Embeddable, NotEmbeddable, Undecided };

/// Which solver produced a generator.
enum class Provenance { Kendall, EqualInput, Circulant, Symmetric, DoublyStochastic, BranchSearch };

std::string_view to_string(Verdict v);
std::string_view to_string(Provenance p);

struct Generator {
    Matrix q;
    Provenance provenance;
    /// ||e^Q - M||_inf.
    double residual = 0.0;
    /// Class parameters (alpha, beta, ...) in a fixed order.
    std::vector<std::pair<std::string, double>> params;
};

struct EmbedVerdict {
    Verdict verdict = Verdict::Undecided;
    std::vector<Generator> generators;
    /// Why the matrix is not embeddable, or why no decision was reached.
    std::vector<std::string> reasons;
    std::vector<std::string> notes;

    bool embeddable() const noexcept { return verdict == Verdict::Embeddable; }

    static EmbedVerdict not_embeddable(std::string reason);
    static EmbedVerdict undecided(std::string reason);
};

/// Builds a generator record, computing the round-trip residual against m.
Generator make_generator(const Matrix& m, Matrix q, Provenance p,
                         std::vector<std::pair<std::string, double>> params = {});

/// Embeddable verdict holding one generator.
EmbedVerdict embeddable_with(Generator g);

}  // namespace markov
