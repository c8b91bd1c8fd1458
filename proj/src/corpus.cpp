#include "aggsim/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aggsim/rng.hpp"

namespace aggsim::corpus {

namespace {

constexpr std::string_view kHeader =
    "id,parent_kind,parent_id,stance,logic,experience,hate,aggr_opponent,"
    "aggr_other,stance_p,logic_p,experience_p,hate_p,aggr_opponent_p,"
    "aggr_other_p";
constexpr std::size_t kColumns = 15;

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw std::runtime_error(msg.str());
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_flag(const std::string& cell, std::size_t line, const char* field) {
    if (cell == "0") return false;
    if (cell == "1") return true;
    fail_line(line, std::string(field) + " must be 0 or 1, got '" + cell + "'");
}

Stance parse_stance(const std::string& cell, std::size_t line,
                    const char* field) {
    if (cell == "0") return Stance::Against;
    if (cell == "1") return Stance::For;
    if (cell == "2") return Stance::Unclear;
    fail_line(line, std::string(field) + " out of range {0,1,2}, got '" + cell +
                        "'");
}

const char* first_mismatch(const Features& a, const Features& b) {
    if (a.stance != b.stance) return "stance";
    if (a.logic != b.logic) return "logic";
    if (a.experience != b.experience) return "experience";
    if (a.hate != b.hate) return "hate";
    if (a.aggr_opponent != b.aggr_opponent) return "aggr_opponent";
    if (a.aggr_other != b.aggr_other) return "aggr_other";
    return nullptr;
}

char flag_char(bool v) { return v ? '1' : '0'; }

}  // namespace

std::string_view channel_name(Channel c) {
    return c == Channel::Opponent ? "opponent" : "other";
}

Channel parse_channel(std::string_view name) {
    if (name == "opponent") return Channel::Opponent;
    if (name == "other") return Channel::Other;
    throw std::invalid_argument("channel must be 'opponent' or 'other', got '" +
                                std::string(name) + "'");
}

Corpus::Corpus(std::vector<CommentRecord> records,
               std::unordered_map<std::string, int> step_of)
    : records_(std::move(records)), step_of_(std::move(step_of)) {
    index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i)
        index_.emplace(records_[i].id, i);  // keeps the first on duplicates
}

const CommentRecord* Corpus::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::optional<Features> Corpus::parent_features_of(
    const CommentRecord& rec) const {
    if (rec.parent_kind == ParentKind::Comment && rec.parent_id) {
        if (const CommentRecord* parent = find(*rec.parent_id))
            return parent->features;
    }
    return rec.parent_features;
}

Corpus parse_corpus(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty input: missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0)
        line.erase(0, 3);  // UTF-8 BOM
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw std::runtime_error("line 1: header does not match the corpus schema");

    std::vector<CommentRecord> records;
    std::unordered_map<std::string, std::size_t> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != kColumns) {
            std::ostringstream what;
            what << "expected " << kColumns << " fields, got " << cells.size();
            fail_line(line_no, what.str());
        }

        CommentRecord rec;
        rec.id = cells[0];
        if (rec.id.empty()) fail_line(line_no, "id must not be empty");
        if (rec.id.find_first_of("\",\n") != std::string::npos)
            fail_line(line_no, "id must not contain commas, quotes or newlines");
        if (!seen.emplace(rec.id, line_no).second)
            fail_line(line_no, "duplicate id '" + rec.id + "'");

        if (cells[1] == "post")
            rec.parent_kind = ParentKind::Post;
        else if (cells[1] == "comment")
            rec.parent_kind = ParentKind::Comment;
        else
            fail_line(line_no,
                      "parent_kind must be 'post' or 'comment', got '" +
                          cells[1] + "'");

        if (!cells[2].empty()) rec.parent_id = cells[2];

        rec.features.stance = parse_stance(cells[3], line_no, "stance");
        rec.features.logic = parse_flag(cells[4], line_no, "logic");
        rec.features.experience = parse_flag(cells[5], line_no, "experience");
        rec.features.hate = parse_flag(cells[6], line_no, "hate");
        rec.features.aggr_opponent =
            parse_flag(cells[7], line_no, "aggr_opponent");
        rec.features.aggr_other = parse_flag(cells[8], line_no, "aggr_other");

        int present = 0;
        for (std::size_t i = 9; i < kColumns; ++i)
            if (!cells[i].empty()) ++present;
        if (present != 0 && present != 6)
            fail_line(line_no,
                      "parent feature columns must be all present or all empty");
        if (present == 6) {
            Features pf;
            pf.stance = parse_stance(cells[9], line_no, "stance_p");
            pf.logic = parse_flag(cells[10], line_no, "logic_p");
            pf.experience = parse_flag(cells[11], line_no, "experience_p");
            pf.hate = parse_flag(cells[12], line_no, "hate_p");
            pf.aggr_opponent = parse_flag(cells[13], line_no, "aggr_opponent_p");
            pf.aggr_other = parse_flag(cells[14], line_no, "aggr_other_p");
            rec.parent_features = pf;
        }

        if (rec.parent_kind == ParentKind::Comment && !rec.parent_id) {
            if (!rec.parent_features)
                fail_line(line_no, "comment row '" + rec.id +
                                       "' lacks both parent_id and parent "
                                       "feature columns");
            fail_line(line_no,
                      "comment row '" + rec.id + "' is missing parent_id");
        }

        records.push_back(std::move(rec));
    }

    Corpus corpus(std::move(records));

    // Explicit parent features must agree with the parent row when it exists;
    // silent precedence would hide annotation bugs.
    for (const CommentRecord& rec : corpus.records()) {
        if (!rec.parent_features || rec.parent_kind != ParentKind::Comment ||
            !rec.parent_id)
            continue;
        const CommentRecord* parent = corpus.find(*rec.parent_id);
        if (!parent) continue;
        if (const char* field =
                first_mismatch(*rec.parent_features, parent->features)) {
            throw std::runtime_error("record '" + rec.id +
                                     "': explicit parent features disagree "
                                     "with parent '" +
                                     *rec.parent_id + "' (field " + field + ")");
        }
    }
    return corpus;
}

Corpus parse_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return parse_corpus(in);
}

std::string serialize_corpus(const Corpus& c) {
    auto check_id = [](const std::string& owner, const std::string& id) {
        if (id.empty() || id.find_first_of("\",\n\r") != std::string::npos)
            throw std::runtime_error("record '" + owner +
                                     "': ids must be non-empty and free of "
                                     "commas, quotes and newlines");
    };
    std::ostringstream out;
    out << kHeader << '\n';
    for (const CommentRecord& rec : c.records()) {
        check_id(rec.id, rec.id);
        if (rec.parent_id) check_id(rec.id, *rec.parent_id);
        out << rec.id << ','
            << (rec.parent_kind == ParentKind::Post ? "post" : "comment") << ','
            << (rec.parent_id ? *rec.parent_id : "") << ','
            << static_cast<int>(rec.features.stance) << ','
            << flag_char(rec.features.logic) << ','
            << flag_char(rec.features.experience) << ','
            << flag_char(rec.features.hate) << ','
            << flag_char(rec.features.aggr_opponent) << ','
            << flag_char(rec.features.aggr_other) << ',';
        if (rec.parent_features) {
            const Features& pf = *rec.parent_features;
            out << static_cast<int>(pf.stance) << ',' << flag_char(pf.logic)
                << ',' << flag_char(pf.experience) << ',' << flag_char(pf.hate)
                << ',' << flag_char(pf.aggr_opponent) << ','
                << flag_char(pf.aggr_other);
        } else {
            out << ",,,,,";
        }
        out << '\n';
    }
    return out.str();
}

void write_corpus_file(const Corpus& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    out << serialize_corpus(c);
}

ValidationReport validate_corpus(const Corpus& c) {
    ValidationReport report;
    report.records = c.size();

    std::unordered_map<std::string, int> id_count;
    for (const CommentRecord& rec : c.records()) ++id_count[rec.id];
    for (const auto& [id, count] : id_count)
        if (count > 1)
            report.violations.push_back("duplicate id '" + id + "' (" +
                                        std::to_string(count) + " records)");

    for (const CommentRecord& rec : c.records()) {
        if (rec.parent_kind == ParentKind::Post) {
            ++report.replies_to_post;
            continue;
        }
        ++report.replies_to_comment;
        if (!rec.parent_id) {
            report.violations.push_back(
                "record '" + rec.id +
                "': parent_kind is comment but parent_id is missing");
            continue;
        }
        const CommentRecord* parent = c.find(*rec.parent_id);
        if (parent) {
            ++report.resolvable_parents;
            if (rec.parent_features) {
                if (const char* field =
                        first_mismatch(*rec.parent_features, parent->features))
                    report.violations.push_back(
                        "record '" + rec.id +
                        "': explicit parent features disagree with parent '" +
                        *rec.parent_id + "' (field " + field + ")");
            }
        } else if (!rec.parent_features) {
            report.violations.push_back(
                "record '" + rec.id + "': parent_id '" + *rec.parent_id +
                "' does not resolve and no parent features are given");
        }
    }
    return report;
}

Corpus synthesize_corpus(const meanfield::ModelParams& params, int horizon,
                         std::int64_t n_per_step, double x0, std::uint64_t seed,
                         Channel channel, const SynthesisMarginals& marginals) {
    meanfield::validate(params);
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    if (n_per_step <= 0)
        throw std::invalid_argument("n_per_step must be positive");
    if (!(x0 >= 0.0 && x0 <= 1.0))
        throw std::invalid_argument("x0 must be in [0,1]");
    for (double v : {marginals.stance_against, marginals.stance_for,
                     marginals.logic, marginals.experience, marginals.hate,
                     marginals.other_aggr})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("synthesis marginals must be in [0,1]");
    if (marginals.stance_against + marginals.stance_for > 1.0)
        throw std::invalid_argument("stance marginals must sum to at most 1");

    Rng rng(seed);
    auto draw_stance = [&] {
        const double u = rng.uniform01();
        if (u < marginals.stance_against) return Stance::Against;
        if (u < marginals.stance_against + marginals.stance_for)
            return Stance::For;
        return Stance::Unclear;
    };
    // Everything except the dynamic channel flag is an independent draw.
    auto fill_static = [&](Features& f, bool channel_flag) {
        f.stance = draw_stance();
        f.logic = rng.bernoulli(marginals.logic);
        f.experience = rng.bernoulli(marginals.experience);
        f.hate = rng.bernoulli(marginals.hate);
        const bool other_flag = rng.bernoulli(marginals.other_aggr);
        if (channel == Channel::Opponent) {
            f.aggr_opponent = channel_flag;
            f.aggr_other = other_flag;
        } else {
            f.aggr_other = channel_flag;
            f.aggr_opponent = other_flag;
        }
    };

    std::vector<CommentRecord> records;
    records.reserve(static_cast<std::size_t>(horizon) *
                    static_cast<std::size_t>(n_per_step));
    std::unordered_map<std::string, int> step_of;

    std::size_t prev_begin = 0, prev_end = 0;
    for (int t = 1; t <= horizon; ++t) {
        const std::size_t step_begin = records.size();
        for (std::int64_t k = 0; k < n_per_step; ++k) {
            CommentRecord rec;
            rec.id = "s" + std::to_string(t) + "_c" + std::to_string(k);

            bool channel_flag;
            if (rng.bernoulli(params.alpha)) {
                rec.parent_kind = ParentKind::Comment;
                if (t == 1) {
                    // Virtual external parent; only the child's explicit
                    // columns record its features.
                    Features pf;
                    const bool parent_aggr = rng.bernoulli(x0);
                    fill_static(pf, parent_aggr);
                    rec.parent_id = "x0_" + std::to_string(k);
                    rec.parent_features = pf;
                    channel_flag = rng.bernoulli(parent_aggr
                                                     ? params.p_reply_aggr
                                                     : params.p_reply_nonaggr);
                } else {
                    const std::size_t pick = prev_begin + static_cast<std::size_t>(
                        rng.below(static_cast<std::uint64_t>(prev_end - prev_begin)));
                    const CommentRecord& parent = records[pick];
                    rec.parent_id = parent.id;
                    channel_flag = rng.bernoulli(parent.features.aggr(channel)
                                                     ? params.p_reply_aggr
                                                     : params.p_reply_nonaggr);
                }
            } else {
                rec.parent_kind = ParentKind::Post;
                channel_flag = rng.bernoulli(params.p_reply_post);
            }
            fill_static(rec.features, channel_flag);
            step_of.emplace(rec.id, t);
            records.push_back(std::move(rec));
        }
        prev_begin = step_begin;
        prev_end = records.size();
    }

    return Corpus(std::move(records), std::move(step_of));
}

}  // namespace aggsim::corpus
