#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dts {

// Root of every error the library throws. `kind()` is a stable short name
// used by the CLI when reporting.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define DTS_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

DTS_DEFINE_ERROR(SchemaError)
DTS_DEFINE_ERROR(EmptyCorpus)
DTS_DEFINE_ERROR(EmptyInput)
DTS_DEFINE_ERROR(TooShort)
DTS_DEFINE_ERROR(EmptyVocabulary)
DTS_DEFINE_ERROR(SingleClass)
DTS_DEFINE_ERROR(InvalidAlpha)
DTS_DEFINE_ERROR(InvalidConfig)
DTS_DEFINE_ERROR(LengthMismatch)
DTS_DEFINE_ERROR(DegenerateInput)
DTS_DEFINE_ERROR(TooSmall)
DTS_DEFINE_ERROR(IoError)

#undef DTS_DEFINE_ERROR

// Invariant violation found while building a Conversation. Carries the
// offending turn index (0 when the rule is conversation-wide) and the rule.
class ValidationError : public Error {
public:
    ValidationError(std::string rule, std::size_t turn_index, const std::string& what)
        : Error("ValidationError", what), rule_(std::move(rule)), turn_index_(turn_index) {}

    const std::string& rule() const noexcept { return rule_; }
    std::size_t turn_index() const noexcept { return turn_index_; }

private:
    std::string rule_;
    std::size_t turn_index_;
};

}  // namespace dts
