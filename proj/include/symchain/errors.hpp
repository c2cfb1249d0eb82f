#pragma once

#include <stdexcept>
#include <string>

namespace symchain {

// Every error raised by the engine derives from Error so the CLI can map it to
// a structured error document with a stable `kind` string.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SYMCHAIN_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    };

SYMCHAIN_DEFINE_ERROR(NameError)
SYMCHAIN_DEFINE_ERROR(SubstitutionCycleError)
SYMCHAIN_DEFINE_ERROR(SubstitutionError)
SYMCHAIN_DEFINE_ERROR(DivisionByZeroError)
SYMCHAIN_DEFINE_ERROR(DegenerateError)
SYMCHAIN_DEFINE_ERROR(ChainError)
SYMCHAIN_DEFINE_ERROR(RankError)
SYMCHAIN_DEFINE_ERROR(InconsistentSystemError)
SYMCHAIN_DEFINE_ERROR(NonzeroRemainderError)
SYMCHAIN_DEFINE_ERROR(ISVanishesError)
SYMCHAIN_DEFINE_ERROR(InclusionViolationError)
SYMCHAIN_DEFINE_ERROR(BindingError)
SYMCHAIN_DEFINE_ERROR(SolvedFormError)
SYMCHAIN_DEFINE_ERROR(UnimplementedBranchError)
SYMCHAIN_DEFINE_ERROR(UsageError)
SYMCHAIN_DEFINE_ERROR(InternalError)

#undef SYMCHAIN_DEFINE_ERROR

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, int line, int column, std::string expected)
        : Error("SyntaxError", what), line_(line), column_(column),
          expected_(std::move(expected)) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    int line_;
    int column_;
    std::string expected_;
};

} // namespace symchain
