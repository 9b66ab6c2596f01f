#pragma once

// Shared primitives: search bounds, three-valued verdicts, error codes.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace blue {

using json = nlohmann::json;

// Bounds threaded through every semi-decision. All semi-decidable questions
// answer Proved/Refuted/Unknown relative to these caps.
struct SearchBounds {
    std::uint32_t max_degree = 12;
    std::uint32_t max_sum_length = 8;
    std::uint64_t max_steps = 100000;
    std::uint32_t max_localization_exponent = 6;

    SearchBounds scaled(double f) const {
        SearchBounds b = *this;
        b.max_steps = static_cast<std::uint64_t>(static_cast<double>(b.max_steps) * f) + 1;
        return b;
    }
};

enum class ErrorCode {
    UndeclaredAtom,
    NameClash,
    BoundExhausted,
    ZeroInverted,
    BaseMismatch,
    NotDirected,
    NotACover,
    NotLocallyFinite,
    CanonicalCoverUnavailable,
    InvalidPresentation,
    NotAlgebraicallyPresented,
    GammaFixpointNotReached,
    RefinementNotFound,
    SyntaxError,
    UnresolvedName,
    DuplicateName,
    Unsupported,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::UndeclaredAtom: return "UndeclaredAtom";
        case ErrorCode::NameClash: return "NameClash";
        case ErrorCode::BoundExhausted: return "BoundExhausted";
        case ErrorCode::ZeroInverted: return "ZeroInverted";
        case ErrorCode::BaseMismatch: return "BaseMismatch";
        case ErrorCode::NotDirected: return "NotDirected";
        case ErrorCode::NotACover: return "NotACover";
        case ErrorCode::NotLocallyFinite: return "NotLocallyFinite";
        case ErrorCode::CanonicalCoverUnavailable: return "CanonicalCoverUnavailable";
        case ErrorCode::InvalidPresentation: return "InvalidPresentation";
        case ErrorCode::NotAlgebraicallyPresented: return "NotAlgebraicallyPresented";
        case ErrorCode::GammaFixpointNotReached: return "GammaFixpointNotReached";
        case ErrorCode::RefinementNotFound: return "RefinementNotFound";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnresolvedName: return "UnresolvedName";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Three-valued answer for semi-decidable questions. Proved/Refuted carry
// replayable evidence; Unknown carries the bound that was hit.
struct Verdict {
    enum class Status { Proved, Refuted, Unknown };

    Status status = Status::Unknown;
    json evidence = json::object();

    bool proved() const { return status == Status::Proved; }
    bool refuted() const { return status == Status::Refuted; }
    bool unknown() const { return status == Status::Unknown; }

    static Verdict make_proved(json ev) { return Verdict{Status::Proved, std::move(ev)}; }
    static Verdict make_refuted(json ev) { return Verdict{Status::Refuted, std::move(ev)}; }
    static Verdict make_unknown(std::string bound_hit, json detail = json::object()) {
        json ev = std::move(detail);
        ev["bound_hit"] = std::move(bound_hit);
        return Verdict{Status::Unknown, std::move(ev)};
    }

    const char* status_name() const {
        switch (status) {
            case Status::Proved: return "proved";
            case Status::Refuted: return "refuted";
            case Status::Unknown: return "unknown";
        }
        return "unknown";
    }
};

inline json bounds_to_json(const SearchBounds& b) {
    return json{{"max_degree", b.max_degree},
                {"max_sum_length", b.max_sum_length},
                {"max_steps", b.max_steps},
                {"max_localization_exponent", b.max_localization_exponent}};
}

inline SearchBounds bounds_from_json(const json& j) {
    SearchBounds b;
    if (j.contains("max_degree")) b.max_degree = j["max_degree"].get<std::uint32_t>();
    if (j.contains("max_sum_length")) b.max_sum_length = j["max_sum_length"].get<std::uint32_t>();
    if (j.contains("max_steps")) b.max_steps = j["max_steps"].get<std::uint64_t>();
    if (j.contains("max_localization_exponent"))
        b.max_localization_exponent = j["max_localization_exponent"].get<std::uint32_t>();
    return b;
}

}  // namespace blue
