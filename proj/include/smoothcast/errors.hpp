#pragma once

#include <stdexcept>
#include <string>

namespace smoothcast
{
    // Caller passed arguments outside an operation's domain (CLI exit code 2).
    class UsageError : public std::invalid_argument
    {
    public:
        explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
    };

    // Input data violates a structural requirement, e.g. a disconnected edge list.
    class ValidationError : public std::runtime_error
    {
    public:
        explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
    };

    // A finite schedule was queried past its last defined round.
    class HorizonError : public std::out_of_range
    {
    public:
        explicit HorizonError(const std::string& what) : std::out_of_range(what) {}
    };
}
