#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sidonlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrimalityError : public Error { public: using Error::Error; };
class ModulusError : public Error { public: using Error::Error; };
class ZeroDivisionError : public Error { public: using Error::Error; };
class FieldMismatchError : public Error { public: using Error::Error; };
class LogOfZeroError : public Error { public: using Error::Error; };
class NotGeneratorError : public Error { public: using Error::Error; };
class GroupMismatchError : public Error { public: using Error::Error; };
class CapacityError : public Error { public: using Error::Error; };
class DegreeError : public Error { public: using Error::Error; };
class DegenerateFamilyError : public Error { public: using Error::Error; };
class LambdaZeroError : public Error { public: using Error::Error; };
class EmptySetError : public Error { public: using Error::Error; };
class SlopeError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class ZeroElementError : public Error { public: using Error::Error; };
class EvenCharacteristicError : public Error { public: using Error::Error; };

// Brute-force operations refuse to run past this many elementary steps
// unless the caller raises the limit explicitly.
inline constexpr std::uint64_t kDefaultCeiling = std::uint64_t{1} << 26;

inline void check_capacity(std::uint64_t work, std::uint64_t ceiling,
                           const std::string& what) {
    if (work > ceiling) {
        throw CapacityError(what + ": required work " + std::to_string(work) +
                            " exceeds ceiling " + std::to_string(ceiling));
    }
}

} // namespace sidonlab
