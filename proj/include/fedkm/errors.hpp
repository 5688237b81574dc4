#ifndef FEDKM_ERRORS_HPP
#define FEDKM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fedkm {

// Raised when a client/server message violates the round protocol,
// e.g. every cluster was filtered out before aggregation.
class protocol_error : public std::runtime_error {
public:
    protocol_error(std::string msg, int round)
        : std::runtime_error(std::move(msg)), round_(round) {}

    int round() const { return round_; }

private:
    int round_;
};

// Raised by the point-file reader; carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& path, int line, const std::string& msg)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Raised when a metric is undefined on its input (e.g. silhouette with a
// single cluster).
class metric_undefined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by experiment-config validation; `path` is the offending field,
// e.g. "dataset.sigma".
class config_error : public std::runtime_error {
public:
    config_error(const std::string& path, const std::string& msg)
        : std::runtime_error(path + ": " + msg), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace fedkm

#endif
