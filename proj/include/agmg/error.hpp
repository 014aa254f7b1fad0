#pragma once

#include <stdexcept>
#include <string>

namespace agmg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A failure tied to one line of a line-oriented file.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message), path_(std::move(path)), line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace agmg
