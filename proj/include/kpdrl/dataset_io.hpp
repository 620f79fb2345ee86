#pragma once

#include <filesystem>
#include <iosfwd>

#include "kpdrl/instance.hpp"

namespace kpdrl {

// Dataset text format, one instance per line after a header:
//
//   #<family> <M> <N> <R> <seed>
//   <id> <n> <capacity> <scale> <v1> <w1> <v2> <w2> ...
//
// All fields are decimal integers separated by single spaces; every line
// ends with '\n'. Blank lines and lines starting with "##" are ignored on
// read.

void write_dataset(const Dataset &ds, std::ostream &out);
void write_dataset(const Dataset &ds, const std::filesystem::path &path);

/// Throws ParseError naming the offending line.
Dataset read_dataset(std::istream &in);
Dataset read_dataset(const std::filesystem::path &path);

} // namespace kpdrl
