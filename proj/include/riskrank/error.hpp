#pragma once

#include <stdexcept>
#include <string>

namespace riskrank {

// Base for every contract violation raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Concept not present in the dimension's ontology.
struct UnknownConceptError : Error {
    using Error::Error;
};

// Situation shape does not match the configured dimensions.
struct DimensionMismatchError : Error {
    using Error::Error;
};

// Malformed or inconsistent input file (ontology, corpus, scenario, case base).
struct ValidationError : Error {
    using Error::Error;
};

// Document/term bookkeeping inconsistent with the corpus.
struct CorpusError : Error {
    using Error::Error;
};

// Clicked document that was never shown in the ranked list under feedback.
struct ClickedNotShownError : Error {
    using Error::Error;
};

// Numeric argument outside its documented domain.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace riskrank
