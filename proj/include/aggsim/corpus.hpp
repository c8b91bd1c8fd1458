#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aggsim/meanfield.hpp"

namespace aggsim::corpus {

enum class Stance : int { Against = 0, For = 1, Unclear = 2 };
enum class ParentKind { Post, Comment };

// Which aggression target carries the dynamics.
enum class Channel { Opponent, Other };

std::string_view channel_name(Channel c);
Channel parse_channel(std::string_view name);

// The six classifier features of one comment.
struct Features {
    Stance stance = Stance::Unclear;
    bool logic = false;
    bool experience = false;
    bool hate = false;
    bool aggr_opponent = false;
    bool aggr_other = false;

    bool operator==(const Features&) const = default;
    bool aggr(Channel c) const {
        return c == Channel::Opponent ? aggr_opponent : aggr_other;
    }
};

// One annotated comment. parent_features carries the parent's classifier
// values (the "_p" columns) for parents that are not records of the same
// corpus; when the parent row is present, a join supplies them instead and
// any explicit copy must agree field-by-field.
struct CommentRecord {
    std::string id;
    ParentKind parent_kind = ParentKind::Post;
    std::optional<std::string> parent_id;
    Features features;
    std::optional<Features> parent_features;

    bool operator==(const CommentRecord&) const = default;
};

// Immutable ordered collection of records with a unique-id index.
// step_of maps id -> generation step for synthetic corpora; it is in-memory
// metadata only and is not part of the CSV schema.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<CommentRecord> records,
                    std::unordered_map<std::string, int> step_of = {});

    const std::vector<CommentRecord>& records() const { return records_; }
    const std::unordered_map<std::string, int>& step_of() const { return step_of_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // nullptr when the id is unknown (duplicate ids resolve to the first).
    const CommentRecord* find(std::string_view id) const;

    // Parent features via join on parent_id when the parent row exists,
    // else the record's explicit copy; nullopt when neither is available.
    std::optional<Features> parent_features_of(const CommentRecord& rec) const;

private:
    std::vector<CommentRecord> records_;
    std::unordered_map<std::string, int> step_of_;
    std::unordered_map<std::string, std::size_t> index_;
};

// --- CSV schema ------------------------------------------------------------
// Header (required, in this order):
//   id,parent_kind,parent_id,stance,logic,experience,hate,aggr_opponent,
//   aggr_other,stance_p,logic_p,experience_p,hate_p,aggr_opponent_p,
//   aggr_other_p
// parent_kind is "post" or "comment"; an empty cell is an absent optional;
// flags serialize as 0/1. Ids must not contain commas, quotes or newlines.
// The six *_p cells must be all present or all empty.

// Throws std::runtime_error naming the line and field on malformed input,
// duplicate ids, comment rows without a parent_id, or explicit parent
// features that contradict a parent row present in the same file.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_file(const std::string& path);

std::string serialize_corpus(const Corpus& c);
void write_corpus_file(const Corpus& c, const std::string& path);

struct ValidationReport {
    std::uint64_t records = 0;
    std::uint64_t replies_to_post = 0;
    std::uint64_t replies_to_comment = 0;
    std::uint64_t resolvable_parents = 0;
    std::vector<std::string> violations;

    bool valid() const { return violations.empty(); }
};

// Never throws; every invariant violation becomes a report entry.
ValidationReport validate_corpus(const Corpus& c);

// Marginals for the features that do not carry the dynamics; used by
// synthesize_corpus. Independent draws give a known null for association
// tests.
struct SynthesisMarginals {
    double stance_against = 0.24;
    double stance_for = 0.11;  // remainder is unclear
    double logic = 0.04;
    double experience = 0.07;
    double hate = 0.17;
    double other_aggr = 0.20;  // the aggression channel not simulated
};

// Generates horizon * n_per_step records of the reply process: each comment
// replies to the post with probability 1 - alpha (aggressive with
// p_reply_post) or to a uniformly chosen previous-step comment (aggressive
// with p_reply_aggr / p_reply_nonaggr by the parent's flag). Step-1 parents
// are virtual externals at aggressive fraction x0 and appear only through
// the child's explicit parent features. Deterministic given the seed.
Corpus synthesize_corpus(const meanfield::ModelParams& params, int horizon,
                         std::int64_t n_per_step, double x0, std::uint64_t seed,
                         Channel channel,
                         const SynthesisMarginals& marginals = {});

}  // namespace aggsim::corpus
