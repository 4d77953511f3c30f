#pragma once

#include <iosfwd>
#include <string>

#include "toepexp/generator.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

// {"n": int, "col": [[re, im], ...], "row": [[re, im], ...]}
std::string toeplitz_to_json(const ToeplitzMatrix& t);
ToeplitzMatrix toeplitz_from_json(const std::string& text);

// header "index,col_re,col_im,row_re,row_im", one line per index
void write_toeplitz_csv(std::ostream& os, const ToeplitzMatrix& t);
ToeplitzMatrix read_toeplitz_csv(std::istream& is);

// Dispatches on the extension: ".csv" is CSV, anything else JSON.
ToeplitzMatrix read_toeplitz_file(const std::string& path);
void write_toeplitz_file(const std::string& path, const ToeplitzMatrix& t);

// {"n": int, "r": int, "G": [column, ...], "B": [...]}, each column a list
// of [re, im] pairs.
std::string generator_to_json(const Generator& gen);
Generator generator_from_json(const std::string& text);

// 16-byte header: magic "TOEPGEN\0", uint32 n, uint32 r (little endian),
// then G and B as column-major complex doubles.
void write_generator_binary(std::ostream& os, const Generator& gen);
Generator read_generator_binary(std::istream& is);

Generator read_generator_file(const std::string& path); // ".bin" or JSON
void write_generator_file(const std::string& path, const Generator& gen);

// Dense matrix as CSV; complex entries as "re+imi" unless all imaginary
// parts vanish.
void write_dense_csv(std::ostream& os, const Mat& a);

std::string read_text_file(const std::string& path);

} // namespace toepexp
