#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "aggsim/corpus.hpp"
#include "aggsim/meanfield.hpp"

namespace aggsim::stats {

// Binomial point estimate with a 95% Wilson score interval.
struct Estimate {
    double point = 0.0;
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

Estimate make_estimate(std::uint64_t numerator, std::uint64_t denominator);

// Share of records carrying each classifier feature; overall_aggression is
// the union of the two aggression flags.
struct MarginalReport {
    std::uint64_t total = 0;
    std::array<std::uint64_t, 3> stance_counts{};  // against, for, unclear
    std::uint64_t logic = 0;
    std::uint64_t experience = 0;
    std::uint64_t hate = 0;
    std::uint64_t aggr_opponent = 0;
    std::uint64_t aggr_other = 0;
    std::uint64_t overall_aggression = 0;

    double share(std::uint64_t count) const {
        return static_cast<double>(count) / static_cast<double>(total);
    }
};

MarginalReport marginal_distribution(const corpus::Corpus& c);

// Fraction of comments that reply to another comment.
Estimate estimate_alpha(const corpus::Corpus& c);

// Conditional relative frequencies of the channel flag by parent class.
// Replies-to-comment whose parent flag is unknown (no join, no explicit
// columns) are excluded and counted.
struct ChannelEstimates {
    corpus::Channel channel = corpus::Channel::Opponent;
    meanfield::ModelParams params;
    Estimate alpha;
    Estimate p_reply_post;
    Estimate p_reply_aggr;
    Estimate p_reply_nonaggr;
    std::uint64_t excluded_unknown_parent = 0;
};

ChannelEstimates estimate_channel(const corpus::Corpus& c,
                                  corpus::Channel channel);

// The 12 analyzable features: the six classifier items and their parent
// copies, in corpus CSV column order.
enum class Feature {
    Stance,
    Logic,
    Experience,
    Hate,
    AggrOpponent,
    AggrOther,
    StanceP,
    LogicP,
    ExperienceP,
    HateP,
    AggrOpponentP,
    AggrOtherP,
};

inline constexpr std::array<Feature, 12> kAllFeatures = {
    Feature::Stance,      Feature::Logic,      Feature::Experience,
    Feature::Hate,        Feature::AggrOpponent, Feature::AggrOther,
    Feature::StanceP,     Feature::LogicP,     Feature::ExperienceP,
    Feature::HateP,       Feature::AggrOpponentP, Feature::AggrOtherP,
};

std::string_view feature_name(Feature f);
int feature_levels(Feature f);  // 3 for stance, 2 for flags

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::uint64_t>> counts;  // row-major
    std::uint64_t n = 0;         // sum of all cells
    std::uint64_t excluded = 0;  // records lacking either feature
};

// Joint distribution of two features; records lacking a parent-side feature
// are excluded. Throws when fewer than 2 usable records remain.
ContingencyTable contingency(const corpus::Corpus& c, Feature a, Feature b);

struct CramersV {
    double value = 0.0;
    bool degenerate = false;  // a variable was constant after dropping zeros
};

// V = sqrt(chi^2 / (n * min(r-1, k-1))) with empty rows/columns dropped.
CramersV cramers_v(const ContingencyTable& t);

struct AssociationMatrix {
    std::array<Feature, 12> features = kAllFeatures;
    std::array<std::array<double, 12>, 12> values{};
    std::array<std::array<bool, 12>, 12> degenerate{};
    std::array<std::array<std::uint64_t, 12>, 12> excluded{};
};

// Pairwise Cramer's V over all 12 features. Pairs with fewer than 2 usable
// records are flagged degenerate instead of throwing.
AssociationMatrix association_matrix(const corpus::Corpus& c);

}  // namespace aggsim::stats
