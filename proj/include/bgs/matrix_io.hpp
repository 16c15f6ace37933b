/*
 * Copyright (C) 2026 The lowsync-bgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bgs/dense.hpp"

#include <iosfwd>
#include <string>

/** @file Matrix interchange files.

    BGSM binary, little-endian:
      bytes 0..3   magic "BGSM"
      bytes 4..11  u64 rows
      bytes 12..19 u64 cols
      then rows*cols IEEE binary64 values, column-major.

    MatrixMarket "array real general" text, also column-major, written with
    17 significant digits so that values round-trip exactly.
 */

namespace bgs {

void write_bgsm(std::ostream &out, const DenseMatrix &a);
DenseMatrix read_bgsm(std::istream &in);
void write_bgsm(const std::string &path, const DenseMatrix &a);
DenseMatrix read_bgsm(const std::string &path);

void write_matrix_market(std::ostream &out, const DenseMatrix &a);
DenseMatrix read_matrix_market(std::istream &in);
void write_matrix_market(const std::string &path, const DenseMatrix &a);
DenseMatrix read_matrix_market(const std::string &path);

} // namespace bgs
