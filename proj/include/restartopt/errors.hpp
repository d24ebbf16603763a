#pragma once

#include <stdexcept>
#include <string>

namespace restartopt {

// Exit-code contract for the CLI: InputError -> 1, NumericalError -> 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace restartopt
