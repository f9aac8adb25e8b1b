#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exmine/log.hpp"

namespace exmine {

enum class ExceptionType : std::uint8_t {
    EarlyExit,
    LateExit,
    EarlyEntry,
    LateEntry,
    Repeat,
    StepBack,
    Add,
    Skip,
};

inline constexpr std::array<ExceptionType, 8> kAllExceptionTypes = {
    ExceptionType::EarlyExit, ExceptionType::LateExit, ExceptionType::EarlyEntry,
    ExceptionType::LateEntry, ExceptionType::Repeat,   ExceptionType::StepBack,
    ExceptionType::Add,       ExceptionType::Skip,
};

/// `EARLY_EXIT`, `STEP_BACK`, ...
std::string_view to_string(ExceptionType t);
std::optional<ExceptionType> parse_exception_type(std::string_view name);

/// Types that lengthen the path (add-family) versus shorten it (skip-family).
bool adds_work(ExceptionType t);
bool removes_work(ExceptionType t);

/// Small value-type set of exception types. Iterates in alphabetical name order.
class TypeSet {
public:
    constexpr TypeSet() = default;
    TypeSet(std::initializer_list<ExceptionType> types) {
        for (auto t : types) insert(t);
    }

    void insert(ExceptionType t) { bits_ |= bit(t); }
    [[nodiscard]] bool contains(ExceptionType t) const { return (bits_ & bit(t)) != 0; }
    [[nodiscard]] bool empty() const { return bits_ == 0; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::uint8_t bits() const { return bits_; }

    /// Members sorted by name.
    [[nodiscard]] std::vector<ExceptionType> members() const;
    /// Names sorted and joined, e.g. "ADD;SKIP". Empty set gives "".
    [[nodiscard]] std::string join(std::string_view sep) const;

    friend bool operator==(TypeSet, TypeSet) = default;
    friend bool operator<(TypeSet a, TypeSet b) { return a.join(",") < b.join(","); }

private:
    static constexpr std::uint8_t bit(ExceptionType t) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t));
    }
    std::uint8_t bits_ = 0;
};

/// Parses a ';'-joined list of type names. Throws InputError on unknown names.
TypeSet parse_type_set(std::string_view text);

struct EditRecord {
    ExceptionType kind;
    Path activities;
    /// Index in the observed path: start of the removed copy for repetitions,
    /// first inserted activity for insertions, and for deletions the observed
    /// activity that follows the gap (clamped to the last index).
    std::size_t position = 0;

    friend bool operator==(const EditRecord&, const EditRecord&) = default;
};

struct ExceptionProfile {
    TypeSet types;
    std::vector<EditRecord> records;
    bool alignable = true;
    std::size_t matches = 0;  // aligned activities

    [[nodiscard]] bool is_normal() const { return alignable && types.empty(); }
};

struct Reduction {
    Path reduced;
    std::vector<EditRecord> records;
    std::vector<std::size_t> origin;  // observed index of each reduced activity
};

/// Removes immediate block repetitions, leftmost first and shortest block first,
/// until none remain. Single-activity blocks are REPEAT, longer ones STEP_BACK.
Reduction reduce_repetitions(const Path& path);

struct EditOp {
    enum class Kind : std::uint8_t { Match, Insert, Delete };
    Kind kind;
    std::size_t observed = 0;  // valid for Match and Insert
    std::size_t normal = 0;    // valid for Match and Delete

    friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// Longest-common-subsequence edit script. Among optimal scripts the one that
/// prefers match, then insertion (observed side), then deletion (normal side) at
/// every step is returned.
std::vector<EditOp> align_lcs(const Path& observed, const Path& normal);

/// Full pipeline: repetitions, alignment, then positional classification of the
/// remaining insertions and deletions.
ExceptionProfile classify_path(const Path& path, const Path& normal);

}  // namespace exmine
