#pragma once

#include <stdexcept>
#include <string>

namespace dermfuzz {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Raised when no lesion survives segmentation; carries the image identifier.
class SegmentationError : public Error {
public:
    SegmentationError(std::string image_id, const std::string& what)
        : Error(image_id.empty() ? what : image_id + ": " + what), image_id_(std::move(image_id)) {}

    const std::string& image_id() const noexcept { return image_id_; }

private:
    std::string image_id_;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class TrainingDivergedError : public Error {
public:
    using Error::Error;
};

/// A metric whose denominator is zero (e.g. sensitivity without positives).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace dermfuzz
