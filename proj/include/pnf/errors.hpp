#pragma once

#include <stdexcept>
#include <string>

namespace pnf {

// Error taxonomy shared by the library and the CLI. The `exit_code` mapping
// is part of the CLI contract: 0 success, 2 parse, 3 constructor-check,
// 4 hypothesis, 5 stage failure.
enum class ErrorKind {
    parse,
    structural,       // mismatched variable counts, bad arity, ...
    domain,           // e.g. exp of a jet with nonzero constant term
    truncation_loss,  // an operation would silently drop exact content
    constructor_check,
    hypothesis,
    stage,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg, std::string stage = {})
        : std::runtime_error(stage.empty() ? msg : stage + ": " + msg),
          kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::parse: return 2;
            case ErrorKind::constructor_check: return 3;
            case ErrorKind::hypothesis: return 4;
            default: return 5;
        }
    }

  private:
    ErrorKind kind_;
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg,
                              const std::string& stage = {}) {
    throw Error(kind, msg, stage);
}

}  // namespace pnf
