// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flampred {

// Base of every error the library raises. `code()` is a stable, machine
// readable tag used by the CLI exit-code mapping and the HTTP error bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Argument outside the domain of a physical or chemical quantity.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain_error", message) {}
};

// Malformed or inconsistent input file. `row` is 1-based over data rows, 0 if
// the failure is not tied to a row.
class LoadError : public Error {
 public:
  LoadError(const std::string& message, std::size_t row = 0)
      : Error("load_error", row ? message + " (row " + std::to_string(row) + ")" : message),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// SMILES or PDB syntax/semantics failure. For SMILES `position` is the
// 0-based character offset; for PDB it is the 1-based line number.
class ParseError : public Error {
 public:
  enum class Unit { kOffset, kLine };

  ParseError(const std::string& message, std::size_t position, Unit unit = Unit::kOffset)
      : Error("parse_error", message + (unit == Unit::kOffset ? " at offset " : " at line ") +
                                 std::to_string(position)),
        position_(position),
        unit_(unit) {}

  std::size_t position() const noexcept { return position_; }
  Unit unit() const noexcept { return unit_; }

 private:
  std::size_t position_;
  Unit unit_;
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& message) : Error("fit_error", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config_error", message) {}
};

// R² requested on targets with zero variance.
class UndefinedScoreError : public Error {
 public:
  explicit UndefinedScoreError(const std::string& message)
      : Error("undefined_score", message) {}
};

class BundleError : public Error {
 public:
  explicit BundleError(const std::string& message) : Error("bundle_error", message) {}
};

}  // namespace flampred
