#include "exmine/classifier.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "exmine/error.hpp"

namespace exmine {

std::string_view to_string(ExceptionType t) {
    switch (t) {
        case ExceptionType::EarlyExit: return "EARLY_EXIT";
        case ExceptionType::LateExit: return "LATE_EXIT";
        case ExceptionType::EarlyEntry: return "EARLY_ENTRY";
        case ExceptionType::LateEntry: return "LATE_ENTRY";
        case ExceptionType::Repeat: return "REPEAT";
        case ExceptionType::StepBack: return "STEP_BACK";
        case ExceptionType::Add: return "ADD";
        case ExceptionType::Skip: return "SKIP";
    }
    return "?";
}

std::optional<ExceptionType> parse_exception_type(std::string_view name) {
    for (auto t : kAllExceptionTypes) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

bool adds_work(ExceptionType t) {
    switch (t) {
        case ExceptionType::Add:
        case ExceptionType::Repeat:
        case ExceptionType::StepBack:
        case ExceptionType::LateEntry:
        case ExceptionType::LateExit: return true;
        default: return false;
    }
}

bool removes_work(ExceptionType t) { return !adds_work(t); }

std::size_t TypeSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<ExceptionType> TypeSet::members() const {
    std::vector<ExceptionType> out;
    for (auto t : kAllExceptionTypes) {
        if (contains(t)) out.push_back(t);
    }
    std::sort(out.begin(), out.end(),
              [](ExceptionType a, ExceptionType b) { return to_string(a) < to_string(b); });
    return out;
}

std::string TypeSet::join(std::string_view sep) const {
    std::string out;
    for (auto t : members()) {
        if (!out.empty()) out += sep;
        out += to_string(t);
    }
    return out;
}

TypeSet parse_type_set(std::string_view text) {
    TypeSet set;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const auto token = text.substr(0, semi);
        if (!token.empty()) {
            const auto t = parse_exception_type(token);
            if (!t) throw InputError("unknown exception type '" + std::string(token) + "'");
            set.insert(*t);
        }
        if (semi == std::string_view::npos) break;
        text.remove_prefix(semi + 1);
    }
    return set;
}

namespace {

using Symbols = std::vector<int>;

/// Maps labels to dense integers so the inner loops compare ints.
struct Interner {
    std::unordered_map<std::string, int> ids;

    Symbols encode(const Path& path) {
        Symbols out;
        out.reserve(path.size());
        for (const auto& label : path) {
            out.push_back(ids.try_emplace(label, static_cast<int>(ids.size())).first->second);
        }
        return out;
    }
};

Reduction reduce_symbols(const Path& path, Symbols& sym) {
    Reduction r;
    r.reduced = path;
    r.origin.resize(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) r.origin[i] = i;

    bool changed = true;
    while (changed) {
        changed = false;
        const std::size_t n = sym.size();
        for (std::size_t start = 0; start < n && !changed; ++start) {
            for (std::size_t len = 1; start + 2 * len <= n; ++len) {
                if (!std::equal(sym.begin() + start, sym.begin() + start + len,
                                sym.begin() + start + len)) {
                    continue;
                }
                const auto first = static_cast<std::ptrdiff_t>(start);
                const auto L = static_cast<std::ptrdiff_t>(len);
                r.records.push_back(EditRecord{
                    len == 1 ? ExceptionType::Repeat : ExceptionType::StepBack,
                    Path(r.reduced.begin() + first, r.reduced.begin() + first + L),
                    r.origin[start + len]});
                sym.erase(sym.begin() + first + L, sym.begin() + first + 2 * L);
                r.reduced.erase(r.reduced.begin() + first + L, r.reduced.begin() + first + 2 * L);
                r.origin.erase(r.origin.begin() + first + L, r.origin.begin() + first + 2 * L);
                changed = true;
                break;
            }
        }
    }
    return r;
}

std::vector<EditOp> align_symbols(const Symbols& obs, const Symbols& norm) {
    const std::size_t n = obs.size();
    const std::size_t m = norm.size();
    // suffix LCS lengths, row-major (n+1) x (m+1)
    std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return lcs[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            at(i, j) = obs[i] == norm[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
        }
    }
    std::vector<EditOp> ops;
    ops.reserve(n + m);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && obs[i] == norm[j]) {
            ops.push_back({EditOp::Kind::Match, i++, j++});
        } else if (i < n && (j == m || at(i + 1, j) == at(i, j))) {
            ops.push_back({EditOp::Kind::Insert, i++, j});
        } else {
            ops.push_back({EditOp::Kind::Delete, i, j++});
        }
    }
    return ops;
}

}  // namespace

Reduction reduce_repetitions(const Path& path) {
    Interner in;
    Symbols sym = in.encode(path);
    return reduce_symbols(path, sym);
}

std::vector<EditOp> align_lcs(const Path& observed, const Path& normal) {
    Interner in;
    const Symbols a = in.encode(observed);
    const Symbols b = in.encode(normal);
    return align_symbols(a, b);
}

ExceptionProfile classify_path(const Path& path, const Path& normal) {
    ExceptionProfile profile;
    if (path == normal) {
        profile.matches = path.size();
        return profile;
    }
    Interner in;
    Symbols sym = in.encode(path);
    const Symbols norm = in.encode(normal);
    Reduction red = reduce_symbols(path, sym);
    const auto ops = align_symbols(sym, norm);

    const auto matches = static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [](const EditOp& op) { return op.kind == EditOp::Kind::Match; }));
    if (matches == 0) {
        profile.alignable = false;
        return profile;
    }
    profile.matches = matches;
    profile.records = std::move(red.records);

    const std::size_t last_observed = path.size() - 1;
    auto observed_position = [&](std::size_t reduced_index) {
        return reduced_index < red.origin.size() ? red.origin[reduced_index] : last_observed;
    };

    bool seen_match = false;
    std::size_t k = 0;
    while (k < ops.size()) {
        if (ops[k].kind == EditOp::Kind::Match) {
            seen_match = true;
            ++k;
            continue;
        }
        // one gap between matches: collect its insertions and deletions separately
        std::size_t end = k;
        while (end < ops.size() && ops[end].kind != EditOp::Kind::Match) ++end;
        const bool trailing = end == ops.size();
        const bool leading = !seen_match;

        Path inserted;
        Path deleted;
        std::size_t insert_pos = 0;
        for (std::size_t q = k; q < end; ++q) {
            if (ops[q].kind == EditOp::Kind::Insert) {
                if (inserted.empty()) insert_pos = observed_position(ops[q].observed);
                inserted.push_back(red.reduced[ops[q].observed]);
            } else {
                deleted.push_back(normal[ops[q].normal]);
            }
        }
        const std::size_t gap_pos = trailing ? last_observed : observed_position(ops[end].observed);
        if (!inserted.empty()) {
            const auto kind = leading ? ExceptionType::LateEntry
                              : trailing ? ExceptionType::LateExit
                                         : ExceptionType::Add;
            profile.records.push_back({kind, std::move(inserted), insert_pos});
        }
        if (!deleted.empty()) {
            const auto kind = leading ? ExceptionType::EarlyEntry
                              : trailing ? ExceptionType::EarlyExit
                                         : ExceptionType::Skip;
            profile.records.push_back({kind, std::move(deleted), gap_pos});
        }
        k = end;
    }
    for (const auto& rec : profile.records) profile.types.insert(rec.kind);
    return profile;
}

}  // namespace exmine
