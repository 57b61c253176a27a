#ifndef UPOBLAB_ERRORS_H
#define UPOBLAB_ERRORS_H

#include <stdexcept>
#include <string>

namespace upoblab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Matrix kernel.
class SizeError : public Error { public: using Error::Error; };
class ShapeError : public Error { public: using Error::Error; };
class EmptyInputError : public Error { public: using Error::Error; };
class SingularError : public Error { public: using Error::Error; };
class ValueError : public Error { public: using Error::Error; };

// Configuration and indexing.
class ConfigError : public Error { public: using Error::Error; };
class IndexError : public Error { public: using Error::Error; };

// Certification and catalog.
class NoWitnessError : public Error { public: using Error::Error; };
class InvalidBaseError : public Error { public: using Error::Error; };
class InvalidWitnessError : public Error { public: using Error::Error; };

// Protocol simulation.
class EmbeddingError : public Error { public: using Error::Error; };
class InvalidEffectError : public Error { public: using Error::Error; };

// Serialization.
class ParseError : public Error { public: using Error::Error; };

}  // namespace upoblab

#endif
