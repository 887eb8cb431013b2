#ifndef CORRIDORLAB_ERRORS_HPP_
#define CORRIDORLAB_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corridorlab {

  // Base of every domain error raised by the library. The CLI maps
  // BudgetExceeded to exit code 2 and everything else to exit code 1.
  class Error : public std::runtime_error {
   public:
    Error(std::string kind, std::string const& what)
        : std::runtime_error(what), _kind(std::move(kind)) {}

    std::string const& kind() const noexcept { return _kind; }

   private:
    std::string _kind;
  };

  class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::size_t column, std::string const& msg)
        : Error("ParseError",
                "line " + std::to_string(line) + ", column "
                    + std::to_string(column) + ": " + msg),
          _line(line),
          _column(column) {}

    std::size_t line() const noexcept { return _line; }
    std::size_t column() const noexcept { return _column; }

   private:
    std::size_t _line;
    std::size_t _column;
  };

  class InverseMismatch : public Error {
   public:
    explicit InverseMismatch(std::string generator)
        : Error("InverseMismatch",
                "inverse substitution does not invert generator "
                    + generator),
          _generator(std::move(generator)) {}

    std::string const& generator() const noexcept { return _generator; }

   private:
    std::string _generator;
  };

  class BudgetExceeded : public Error {
   public:
    explicit BudgetExceeded(std::string const& what)
        : Error("BudgetExceeded", what) {}
  };

  class NotPositive : public Error {
   public:
    NotPositive() : Error("NotPositive", "automorphism is not positive") {}
  };

  class NoWitness : public Error {
   public:
    explicit NoWitness(std::string const& what) : Error("NoWitness", what) {}
  };

  class NotIdentity : public Error {
   public:
    NotIdentity()
        : Error("NotIdentity", "word does not represent the identity") {}
  };

}  // namespace corridorlab

#endif  // CORRIDORLAB_ERRORS_HPP_
