#include "aggsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace aggsim::stats {

namespace {

constexpr double kZ95 = 1.959963984540054;  // 97.5% normal quantile

using corpus::CommentRecord;
using corpus::Corpus;
using corpus::Features;
using corpus::ParentKind;

// Feature value as a level index, nullopt when undefined for this record.
std::optional<int> feature_value(const Corpus& c, const CommentRecord& rec,
                                 Feature f) {
    auto own = [&](Feature base) -> int {
        const Features& v = rec.features;
        switch (base) {
            case Feature::Stance: return static_cast<int>(v.stance);
            case Feature::Logic: return v.logic;
            case Feature::Experience: return v.experience;
            case Feature::Hate: return v.hate;
            case Feature::AggrOpponent: return v.aggr_opponent;
            default: return v.aggr_other;
        }
    };
    switch (f) {
        case Feature::Stance:
        case Feature::Logic:
        case Feature::Experience:
        case Feature::Hate:
        case Feature::AggrOpponent:
        case Feature::AggrOther:
            return own(f);
        default: break;
    }
    const std::optional<Features> pf = c.parent_features_of(rec);
    if (!pf) return std::nullopt;
    switch (f) {
        case Feature::StanceP: return static_cast<int>(pf->stance);
        case Feature::LogicP: return pf->logic;
        case Feature::ExperienceP: return pf->experience;
        case Feature::HateP: return pf->hate;
        case Feature::AggrOpponentP: return pf->aggr_opponent;
        default: return pf->aggr_other;
    }
}

}  // namespace

Estimate make_estimate(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0)
        throw std::invalid_argument("estimate denominator must be positive");
    if (numerator > denominator)
        throw std::invalid_argument("estimate numerator exceeds denominator");
    const double n = static_cast<double>(denominator);
    const double p = static_cast<double>(numerator) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {p, numerator, denominator, std::max(0.0, center - half),
            std::min(1.0, center + half)};
}

MarginalReport marginal_distribution(const Corpus& c) {
    if (c.empty())
        throw std::invalid_argument("marginal_distribution: corpus is empty");
    MarginalReport r;
    r.total = c.size();
    for (const CommentRecord& rec : c.records()) {
        const Features& f = rec.features;
        ++r.stance_counts[static_cast<std::size_t>(f.stance)];
        r.logic += f.logic;
        r.experience += f.experience;
        r.hate += f.hate;
        r.aggr_opponent += f.aggr_opponent;
        r.aggr_other += f.aggr_other;
        r.overall_aggression += (f.aggr_opponent || f.aggr_other);
    }
    return r;
}

Estimate estimate_alpha(const Corpus& c) {
    if (c.empty()) throw std::invalid_argument("estimate_alpha: corpus is empty");
    std::uint64_t replies_to_comment = 0;
    for (const CommentRecord& rec : c.records())
        replies_to_comment += (rec.parent_kind == ParentKind::Comment);
    return make_estimate(replies_to_comment, c.size());
}

ChannelEstimates estimate_channel(const Corpus& c, corpus::Channel channel) {
    if (c.empty())
        throw std::invalid_argument("estimate_channel: corpus is empty");

    std::uint64_t post_n = 0, post_aggr = 0;
    std::uint64_t aggr_n = 0, aggr_aggr = 0;
    std::uint64_t non_n = 0, non_aggr = 0;
    std::uint64_t excluded = 0;

    for (const CommentRecord& rec : c.records()) {
        const bool flag = rec.features.aggr(channel);
        if (rec.parent_kind == ParentKind::Post) {
            ++post_n;
            post_aggr += flag;
            continue;
        }
        const std::optional<Features> pf = c.parent_features_of(rec);
        if (!pf) {
            ++excluded;
            continue;
        }
        if (pf->aggr(channel)) {
            ++aggr_n;
            aggr_aggr += flag;
        } else {
            ++non_n;
            non_aggr += flag;
        }
    }

    if (post_n == 0)
        throw std::runtime_error(
            "estimate_channel: conditioning class \"reply-to-post\" is empty");
    if (aggr_n == 0)
        throw std::runtime_error(
            "estimate_channel: conditioning class "
            "\"reply-to-aggressive-comment\" is empty");
    if (non_n == 0)
        throw std::runtime_error(
            "estimate_channel: conditioning class "
            "\"reply-to-non-aggressive-comment\" is empty");

    ChannelEstimates out;
    out.channel = channel;
    out.alpha = estimate_alpha(c);
    out.p_reply_post = make_estimate(post_aggr, post_n);
    out.p_reply_aggr = make_estimate(aggr_aggr, aggr_n);
    out.p_reply_nonaggr = make_estimate(non_aggr, non_n);
    out.excluded_unknown_parent = excluded;
    out.params = {out.alpha.point, out.p_reply_post.point,
                  out.p_reply_aggr.point, out.p_reply_nonaggr.point};
    return out;
}

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::Stance: return "stance";
        case Feature::Logic: return "logic";
        case Feature::Experience: return "experience";
        case Feature::Hate: return "hate";
        case Feature::AggrOpponent: return "aggr_opponent";
        case Feature::AggrOther: return "aggr_other";
        case Feature::StanceP: return "stance_p";
        case Feature::LogicP: return "logic_p";
        case Feature::ExperienceP: return "experience_p";
        case Feature::HateP: return "hate_p";
        case Feature::AggrOpponentP: return "aggr_opponent_p";
        case Feature::AggrOtherP: return "aggr_other_p";
    }
    return "unknown";
}

int feature_levels(Feature f) {
    return (f == Feature::Stance || f == Feature::StanceP) ? 3 : 2;
}

namespace {

ContingencyTable build_table(const Corpus& c, Feature a, Feature b) {
    const int rows = feature_levels(a);
    const int cols = feature_levels(b);
    ContingencyTable t;
    t.counts.assign(rows, std::vector<std::uint64_t>(cols, 0));
    for (int i = 0; i < rows; ++i) t.row_labels.push_back(std::to_string(i));
    for (int j = 0; j < cols; ++j) t.col_labels.push_back(std::to_string(j));

    for (const CommentRecord& rec : c.records()) {
        const std::optional<int> va = feature_value(c, rec, a);
        const std::optional<int> vb = feature_value(c, rec, b);
        if (!va || !vb) {
            ++t.excluded;
            continue;
        }
        ++t.counts[static_cast<std::size_t>(*va)][static_cast<std::size_t>(*vb)];
        ++t.n;
    }
    return t;
}

}  // namespace

ContingencyTable contingency(const Corpus& c, Feature a, Feature b) {
    ContingencyTable t = build_table(c, a, b);
    if (t.n < 2)
        throw std::runtime_error("contingency: fewer than 2 usable records for " +
                                 std::string(feature_name(a)) + " x " +
                                 std::string(feature_name(b)));
    return t;
}

CramersV cramers_v(const ContingencyTable& t) {
    if (t.n == 0) throw std::invalid_argument("cramers_v: empty table");
    const std::size_t rows = t.counts.size();
    const std::size_t cols = rows ? t.counts[0].size() : 0;

    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            row_sum[i] += static_cast<double>(t.counts[i][j]);
            col_sum[j] += static_cast<double>(t.counts[i][j]);
        }

    std::size_t live_rows = 0, live_cols = 0;
    for (double v : row_sum) live_rows += (v > 0.0);
    for (double v : col_sum) live_cols += (v > 0.0);
    if (live_rows < 2 || live_cols < 2) return {0.0, true};

    const double n = static_cast<double>(t.n);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (row_sum[i] == 0.0) continue;
        for (std::size_t j = 0; j < cols; ++j) {
            if (col_sum[j] == 0.0) continue;
            const double expected = row_sum[i] * col_sum[j] / n;
            const double diff = static_cast<double>(t.counts[i][j]) - expected;
            chi2 += diff * diff / expected;
        }
    }
    const double dof = static_cast<double>(std::min(live_rows, live_cols) - 1);
    const double v = std::sqrt(chi2 / (n * dof));
    return {std::min(v, 1.0), false};
}

AssociationMatrix association_matrix(const Corpus& c) {
    if (c.empty())
        throw std::invalid_argument("association_matrix: corpus is empty");
    AssociationMatrix m;
    for (std::size_t i = 0; i < kAllFeatures.size(); ++i) {
        for (std::size_t j = i; j < kAllFeatures.size(); ++j) {
            const ContingencyTable t =
                build_table(c, kAllFeatures[i], kAllFeatures[j]);
            double value = 0.0;
            bool degenerate = true;  // fewer than 2 usable records
            if (t.n >= 2) {
                const CramersV v = cramers_v(t);
                value = v.value;
                degenerate = v.degenerate;
            }
            m.values[i][j] = m.values[j][i] = value;
            m.degenerate[i][j] = m.degenerate[j][i] = degenerate;
            m.excluded[i][j] = m.excluded[j][i] = t.excluded;
        }
    }
    return m;
}

}  // namespace aggsim::stats
