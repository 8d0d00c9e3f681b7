#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pecker {

struct SourcePos {
    std::string file;
    int line = 1;   // 1-based
    int col = 1;    // 1-based
    std::size_t offset = 0;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(col);
    }
};

enum class ErrorKind {
    Lex,
    Parse,
    UnsupportedConstruct,
    MixedDriver,
    MultiDriver,
    CombinationalLoop,
    NonConvergence,
    NoFailure,
    Format,
    Bounds,
    EmptyCorpus,
    Io,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Lex: return "LexError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::MixedDriver: return "MixedDriver";
    case ErrorKind::MultiDriver: return "MultiDriver";
    case ErrorKind::CombinationalLoop: return "CombinationalLoop";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NoFailure: return "NoFailure";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::Bounds: return "BoundsError";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

// All tool failures funnel through this type; the CLI prints what() verbatim,
// so the message already carries the file:line:col prefix when a position is known.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind), has_pos_(false) {}

    Error(ErrorKind kind, const SourcePos& pos, const std::string& message)
        : std::runtime_error(pos.str() + ": " + message), kind_(kind), pos_(pos), has_pos_(true) {}

    ErrorKind kind() const { return kind_; }
    bool has_pos() const { return has_pos_; }
    const SourcePos& pos() const { return pos_; }

private:
    ErrorKind kind_;
    SourcePos pos_;
    bool has_pos_;
};

} // namespace pecker
