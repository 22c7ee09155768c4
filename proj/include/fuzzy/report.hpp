#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy/points.hpp"
#include "fuzzy/rational.hpp"
#include "fuzzy/scale.hpp"

namespace fuzzy {

enum class Verdict {
    pass,
    fail,
    info,         // derived quantity, nothing asserted
    sampled_only, // not checkable from finitely many samples
};

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::info:
        return "info";
    case Verdict::sampled_only:
        return "sampled-only";
    }
    return "?";
}

/// One predicate verdict. `witness` holds the extremal (or first violating)
/// points and `values` the exact rationals that decide the inequality.
struct Record {
    std::string predicate;
    Verdict verdict = Verdict::info;
    std::optional<ScaleParams> params;
    std::string window;
    std::vector<Point> witness;
    std::vector<std::pair<std::string, Rational>> values;
    std::string note;

    Record& value(std::string name, Rational v) {
        values.emplace_back(std::move(name), v);
        return *this;
    }

    [[nodiscard]] std::optional<Rational> find_value(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name)
                return v;
        return std::nullopt;
    }
};

/// Ordered list of records. A report passes when no record failed.
class CertReport {
public:
    CertReport() = default;
    explicit CertReport(std::string subject) : subject_(std::move(subject)) {}

    Record& add(Record r) {
        records_.push_back(std::move(r));
        return records_.back();
    }

    Record& add(std::string predicate, Verdict v, std::string note = {}) {
        Record r;
        r.predicate = std::move(predicate);
        r.verdict = v;
        r.note = std::move(note);
        return add(std::move(r));
    }

    void append(const CertReport& other) {
        records_.insert(records_.end(), other.records_.begin(), other.records_.end());
    }

    [[nodiscard]] bool passed() const {
        return std::none_of(records_.begin(), records_.end(),
                            [](const Record& r) { return r.verdict == Verdict::fail; });
    }

    [[nodiscard]] const Record* find(const std::string& predicate) const {
        for (const auto& r : records_)
            if (r.predicate == predicate)
                return &r;
        return nullptr;
    }

    [[nodiscard]] const Record* first_failure() const {
        for (const auto& r : records_)
            if (r.verdict == Verdict::fail)
                return &r;
        return nullptr;
    }

    [[nodiscard]] const std::string& subject() const noexcept { return subject_; }
    [[nodiscard]] const std::vector<Record>& records() const noexcept { return records_; }

private:
    std::string subject_;
    std::vector<Record> records_;
};

inline Record info_record(std::string predicate) {
    Record r;
    r.predicate = std::move(predicate);
    return r;
}

inline Record pass_fail(std::string predicate, bool ok) {
    Record r;
    r.predicate = std::move(predicate);
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    return r;
}

} // namespace fuzzy
