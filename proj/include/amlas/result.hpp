#pragma once

#include <cassert>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace amlas {

enum class ErrorCode {
    DuplicateId,
    KindStageMismatch,
    DigestMismatch,
    InvalidPayload,
    UnknownArtefact,
    UnboundParameter,
    KindMismatch,
    ChoiceUnsatisfied,
    DanglingContinuation,
    SchemaVersionMismatch,
    StructuralError,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

struct Error {
    ErrorCode code;
    std::string message;
    std::vector<std::string> subjects;

    static Error make(ErrorCode code, std::string message, std::vector<std::string> subjects = {})
    {
        return Error{code, std::move(message), std::move(subjects)};
    }

    /// "ChoiceUnsatisfied(S5.1): ..." style rendering used by the CLI.
    [[nodiscard]] std::string describe() const;
};

/// Value-or-error carrier. Stand-in for std::expected until the toolchain moves to C++23.
template <typename T>
class [[nodiscard]] Expected {
public:
    Expected(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Expected(Error error) : storage_(std::in_place_index<1>, std::move(error)) {}

    [[nodiscard]] bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    T& value() &
    {
        assert(has_value());
        return std::get<0>(storage_);
    }
    const T& value() const&
    {
        assert(has_value());
        return std::get<0>(storage_);
    }
    T&& value() &&
    {
        assert(has_value());
        return std::get<0>(std::move(storage_));
    }
    const Error& error() const
    {
        assert(!has_value());
        return std::get<1>(storage_);
    }

    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }
    T& operator*() & { return value(); }
    const T& operator*() const& { return value(); }

private:
    std::variant<T, Error> storage_;
};

struct Unit {};

using Status = Expected<Unit>;

inline Status ok() { return Unit{}; }

}  // namespace amlas
