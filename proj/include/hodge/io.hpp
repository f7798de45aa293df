#pragma once
// .scx complex files and chain files (JSON).

#include <string>

#include "hodge/complex.hpp"

namespace hodge::io {

RawComplex parse_scx(const std::string& text);
std::string dump_scx(const RawComplex& raw);

RawComplex read_scx(const std::string& path);
void write_scx(const std::string& path, const RawComplex& raw);

Chain parse_chain(const std::string& text);
std::string dump_chain(const Chain& c);
Chain read_chain(const std::string& path);
void write_chain(const std::string& path, const Chain& c);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace hodge::io
