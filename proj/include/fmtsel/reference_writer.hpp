// Copyright 2026 The fmtsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Structural reference writers. They lay out every header field, record
// prefix, sync marker, page and footer entry byte by byte into a Sink; the
// payload itself is filler since only the byte accounting matters. Files are
// not readable by real tooling.
//
// Two entry points: EmitReferenceFile streams through any sink (e.g. to dump a
// file for inspection), WriteReferenceFile is the fast counting path used by
// the validation sweeps. The two must agree exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fmtsel/error.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/random.hpp"

namespace fmtsel {

struct SyntheticTable {
  uint64_t row_count = 0;
  std::vector<uint32_t> widths;  // mean value bytes per column
  std::vector<bool> varlen;      // empty means all fixed
  std::optional<uint32_t> sort_key;
  uint64_t seed = 0;

  uint32_t Cols() const { return static_cast<uint32_t>(widths.size()); }
  bool IsVarlen(uint32_t col) const { return !varlen.empty() && varlen[col]; }

  bool HasVarlen() const {
    return std::find(varlen.begin(), varlen.end(), true) != varlen.end();
  }

  void Validate() const {
    if (widths.empty()) throw Error(ErrorCode::kPrecondition, "table needs >= 1 column");
    if (!varlen.empty() && varlen.size() != widths.size()) {
      throw Error(ErrorCode::kPrecondition, "varlen flags must match column count");
    }
    for (uint32_t w : widths) {
      if (w == 0) throw Error(ErrorCode::kPrecondition, "column widths must be > 0");
    }
    if (sort_key && *sort_key >= Cols()) {
      throw Error(ErrorCode::kPrecondition, "sort key out of range");
    }
  }

  // Payload bytes of one value, length prefix excluded. Variable-length values
  // are uniform on [1, 2w-1], so their mean is the nominal width.
  uint64_t ValueLength(uint64_t row, uint32_t col) const {
    const uint32_t w = widths[col];
    if (!IsVarlen(col) || w == 1) return w;
    return 1 + HashTriple(seed, row, col) % (2ULL * w - 1);
  }

  uint64_t CellBytes(uint64_t row, uint32_t col) const {
    return ValueLength(row, col) + (IsVarlen(col) ? 4 : 0);
  }

  // Bytes of all fixed-width cells of a row, prefixes of varlen cells included.
  uint64_t FixedRowBytes() const {
    uint64_t bytes = 0;
    for (uint32_t c = 0; c < Cols(); ++c) bytes += IsVarlen(c) ? 4 : widths[c];
    return bytes;
  }

  uint64_t VarlenRowPayload(uint64_t row) const {
    uint64_t bytes = 0;
    for (uint32_t c = 0; c < Cols(); ++c) {
      if (IsVarlen(c)) bytes += ValueLength(row, c);
    }
    return bytes;
  }

  uint64_t ColumnBytes(uint32_t col, uint64_t row_begin, uint64_t row_end) const {
    if (!IsVarlen(col)) return widths[col] * (row_end - row_begin);
    uint64_t bytes = 4 * (row_end - row_begin);
    for (uint64_t r = row_begin; r < row_end; ++r) bytes += ValueLength(r, col);
    return bytes;
  }

  // Expected statistics: payload averages exclude the length prefixes, which
  // DataStats adds back from varlen_col_count.
  DataStats ToStats() const {
    Validate();
    DataStats stats;
    stats.row_count = row_count;
    stats.col_count = Cols();
    double row = 0.0;
    for (uint32_t c = 0; c < Cols(); ++c) {
      row += widths[c];
      if (IsVarlen(c)) ++stats.varlen_col_count;
    }
    stats.avg_row_size = row;
    stats.avg_col_size = row / Cols();
    return stats;
  }
};

struct Extent {
  uint64_t offset = 0;
  uint64_t length = 0;

  uint64_t end() const { return offset + length; }
  bool operator==(const Extent&) const = default;
};

struct ColumnChunk {
  Extent extent;
  uint64_t pages = 0;
  bool operator==(const ColumnChunk&) const = default;
};

struct RowGroupInfo {
  uint64_t first_row = 0;
  uint64_t row_count = 0;
  Extent extent;  // column chunks plus the group trailer
  std::vector<ColumnChunk> columns;
  bool operator==(const RowGroupInfo&) const = default;
};

struct WriteResult {
  std::string format;
  uint64_t header = 0;
  uint64_t body = 0;
  uint64_t footer = 0;
  uint64_t stream_length = 0;
  uint64_t sync_markers = 0;  // seqfile
  uint64_t blocks = 0;        // avro
  uint64_t pages = 0;         // parquet, all groups and columns
  std::vector<RowGroupInfo> row_groups;  // parquet
  std::vector<Extent> columns;           // vertical

  uint64_t total() const { return header + body + footer; }
  SizeBreakdown Sections() const {
    return SizeBreakdown::Of(static_cast<double>(header), static_cast<double>(body),
                             static_cast<double>(footer));
  }
  bool operator==(const WriteResult&) const = default;
};

class CountingSink {
 public:
  static constexpr bool kCountOnly = true;
  void Pad(uint64_t n, uint8_t) { position_ += n; }
  void Put(std::string_view bytes) { position_ += bytes.size(); }
  uint64_t Position() const { return position_; }

 private:
  uint64_t position_ = 0;
};

class StreamSink {
 public:
  static constexpr bool kCountOnly = false;
  explicit StreamSink(std::ostream& out) : out_(out) {}

  void Pad(uint64_t n, uint8_t byte) {
    char buf[4096];
    std::fill(std::begin(buf), std::end(buf), static_cast<char>(byte));
    position_ += n;
    while (n > 0) {
      const uint64_t step = std::min<uint64_t>(n, sizeof(buf));
      out_.write(buf, static_cast<std::streamsize>(step));
      n -= step;
    }
    if (!out_) throw Error(ErrorCode::kIoError, "write failed");
  }
  void Put(std::string_view bytes) {
    out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    position_ += bytes.size();
    if (!out_) throw Error(ErrorCode::kIoError, "write failed");
  }
  uint64_t Position() const { return position_; }

 private:
  std::ostream& out_;
  uint64_t position_ = 0;
};

namespace detail {

inline uint64_t ConstBytes(const FormatDescriptor& fd, std::string_view key) {
  return static_cast<uint64_t>(std::llround(fd.Get(key)));
}

inline uint64_t CeilDiv(uint64_t a, uint64_t b) { return a / b + (a % b != 0); }

// Writes a header of `size` bytes that starts with `magic` (truncated if the
// configured size is smaller).
template <class Sink>
void EmitTagged(Sink& sink, std::string_view magic, uint64_t size, uint8_t fill) {
  const uint64_t tag = std::min<uint64_t>(magic.size(), size);
  sink.Put(magic.substr(0, tag));
  sink.Pad(size - tag, fill);
}

// Emits one row of a horizontal format: fixed per-record fields, then values
// with their length prefixes and separators. Returns the bytes written.
template <class Sink>
uint64_t EmitRow(Sink& sink, const SyntheticTable& t, uint64_t row, uint64_t lead,
                 uint64_t separator, uint32_t first_separated) {
  uint64_t bytes = lead;
  sink.Pad(lead, 0x01);
  for (uint32_t c = 0; c < t.Cols(); ++c) {
    if (c >= first_separated && separator > 0) {
      sink.Pad(separator, '\t');
      bytes += separator;
    }
    if (t.IsVarlen(c)) {
      sink.Pad(4, 0x02);
      bytes += 4;
    }
    const uint64_t len = t.ValueLength(row, c);
    sink.Pad(len, static_cast<uint8_t>('a' + c % 26));
    bytes += len;
  }
  return bytes;
}

// Shared row/marker loop of SeqFile and Avro: a marker of `marker` bytes
// follows every `interval` bytes of records, plus one closing marker for a
// trailing partial interval.
template <class Sink>
uint64_t EmitMarkedRows(Sink& sink, const SyntheticTable& t, uint64_t lead, uint64_t separator,
                        uint32_t first_separated, uint64_t interval, uint64_t marker) {
  uint64_t markers = 0;
  if constexpr (Sink::kCountOnly) {
    const uint64_t separators = t.Cols() > first_separated ? t.Cols() - first_separated : 0;
    uint64_t records = (lead + separator * separators + t.FixedRowBytes()) * t.row_count;
    for (uint32_t c = 0; c < t.Cols(); ++c) {
      if (t.IsVarlen(c)) records += t.ColumnBytes(c, 0, t.row_count) - 4 * t.row_count;
    }
    markers = CeilDiv(records, interval);
    sink.Pad(records, 0);
    sink.Pad(markers * marker, 0xff);
  } else {
    uint64_t pending = 0;
    for (uint64_t r = 0; r < t.row_count; ++r) {
      pending += EmitRow(sink, t, r, lead, separator, first_separated);
      while (pending >= interval) {
        sink.Pad(marker, 0xff);
        pending -= interval;
        ++markers;
      }
    }
    if (pending > 0) {
      sink.Pad(marker, 0xff);
      ++markers;
    }
  }
  return markers;
}

template <class Sink>
WriteResult EmitSeqFile(const SyntheticTable& t, const FormatDescriptor& fd, Sink& sink) {
  WriteResult out;
  out.format = fd.name();
  const uint64_t start = sink.Position();
  EmitTagged(sink, "SEQ\x06", ConstBytes(fd, "header"), 0);
  out.header = sink.Position() - start;
  // The first column is the key; separators sit between value columns.
  const uint64_t lead = ConstBytes(fd, "record_length") + ConstBytes(fd, "key_length");
  out.sync_markers = EmitMarkedRows(sink, t, lead, ConstBytes(fd, "col_separator"), 2,
                                    ConstBytes(fd, "sync_block"), ConstBytes(fd, "sync_marker"));
  out.body = sink.Position() - start - out.header;
  sink.Pad(ConstBytes(fd, "footer"), 0);
  out.footer = ConstBytes(fd, "footer");
  out.stream_length = sink.Position() - start;
  return out;
}

template <class Sink>
WriteResult EmitAvro(const SyntheticTable& t, const FormatDescriptor& fd, Sink& sink) {
  WriteResult out;
  out.format = fd.name();
  const uint64_t start = sink.Position();
  EmitTagged(sink, "Obj\x01", ConstBytes(fd, "version"), 0);
  for (uint32_t c = 0; c < t.Cols(); ++c) {
    EmitTagged(sink, "{\"name\":\"c" + std::to_string(c) + "\"}", ConstBytes(fd, "col_schema"),
               ' ');
  }
  sink.Pad(ConstBytes(fd, "codec"), 0);
  sink.Pad(ConstBytes(fd, "sync_marker"), 0xff);
  out.header = sink.Position() - start;
  out.blocks = EmitMarkedRows(sink, t, ConstBytes(fd, "row_meta"), 0, t.Cols(),
                              ConstBytes(fd, "block"),
                              ConstBytes(fd, "block_meta") + ConstBytes(fd, "sync_marker"));
  out.body = sink.Position() - start - out.header;
  sink.Pad(ConstBytes(fd, "footer"), 0);
  out.footer = ConstBytes(fd, "footer");
  out.stream_length = sink.Position() - start;
  return out;
}

template <class Sink>
WriteResult EmitParquet(const SyntheticTable& t, const FormatDescriptor& fd, Sink& sink) {
  WriteResult out;
  out.format = fd.name();
  const uint64_t start = sink.Position();
  const uint32_t cols = t.Cols();
  const uint64_t page = ConstBytes(fd, "page");
  const uint64_t page_header = ConstBytes(fd, "definition_level") + ConstBytes(fd, "repetition_level");
  const uint64_t sync = ConstBytes(fd, "sync_marker");
  const uint64_t group_trailer = ConstBytes(fd, "row_counter") + sync;
  const uint64_t row_group = ConstBytes(fd, "row_group");
  if (page == 0) throw Error(ErrorCode::kInvalidProfile, "parquet page must be > 0");

  EmitTagged(sink, "PAR1", ConstBytes(fd, "header"), 0);
  out.header = sink.Position() - start;

  // Per-column bytes of the open group. Fixed-width columns are settled when
  // the group closes; only varlen columns are walked row by row.
  std::vector<uint64_t> varlen_bytes(cols, 0);
  const uint64_t fixed_row = t.FixedRowBytes();
  auto close_group = [&](uint64_t first_row, uint64_t rows) {
    RowGroupInfo g;
    g.first_row = first_row;
    g.row_count = rows;
    g.extent.offset = sink.Position() - start;
    for (uint32_t c = 0; c < cols; ++c) {
      const uint64_t data =
          t.IsVarlen(c) ? 4 * rows + varlen_bytes[c] : uint64_t{t.widths[c]} * rows;
      ColumnChunk chunk;
      chunk.extent.offset = sink.Position() - start;
      chunk.pages = std::max<uint64_t>(CeilDiv(data, page), 1);
      uint64_t left = data;
      for (uint64_t p = 0; p < chunk.pages; ++p) {
        const uint64_t step = std::min(left, page);
        sink.Pad(page_header, 0x03);
        sink.Pad(step, static_cast<uint8_t>('a' + c % 26));
        left -= step;
      }
      sink.Pad(sync, 0xff);
      chunk.extent.length = sink.Position() - start - chunk.extent.offset;
      out.pages += chunk.pages;
      g.columns.push_back(chunk);
      varlen_bytes[c] = 0;
    }
    sink.Pad(group_trailer, 0xfe);
    g.extent.length = sink.Position() - start - g.extent.offset;
    out.row_groups.push_back(std::move(g));
  };

  // A group closes once its data plus the per-column markers reach the
  // configured row-group size.
  const uint64_t markers = sync * cols;
  if (!t.HasVarlen()) {
    const uint64_t per_group =
        markers >= row_group ? 1 : std::max<uint64_t>(CeilDiv(row_group - markers, fixed_row), 1);
    for (uint64_t first = 0; first < t.row_count; first += per_group) {
      close_group(first, std::min(per_group, t.row_count - first));
    }
  } else {
    uint64_t first = 0;
    uint64_t rows = 0;
    uint64_t data = 0;
    for (uint64_t r = 0; r < t.row_count; ++r) {
      uint64_t row_bytes = fixed_row;
      for (uint32_t c = 0; c < cols; ++c) {
        if (!t.IsVarlen(c)) continue;
        const uint64_t len = t.ValueLength(r, c);
        varlen_bytes[c] += len;
        row_bytes += len;
      }
      data += row_bytes;
      ++rows;
      if (data + markers >= row_group) {
        close_group(first, rows);
        first = r + 1;
        rows = 0;
        data = 0;
      }
    }
    if (rows > 0) close_group(first, rows);
  }
  out.body = sink.Position() - start - out.header;

  const uint64_t footer_start = sink.Position();
  const uint64_t stats_meta = ConstBytes(fd, "col_stats_meta");
  sink.Pad(ConstBytes(fd, "version"), 0);
  for (uint32_t c = 0; c < cols; ++c) sink.Pad(ConstBytes(fd, "col_schema"), ' ');
  sink.Pad(stats_meta * (out.row_groups.size() + out.pages), 0x04);
  EmitTagged(sink, "PAR1", ConstBytes(fd, "magic"), 0);
  sink.Pad(ConstBytes(fd, "footer_length"), 0);
  out.footer = sink.Position() - footer_start;
  out.stream_length = sink.Position() - start;
  return out;
}

template <class Sink>
WriteResult EmitVertical(const SyntheticTable& t, const FormatDescriptor& fd, Sink& sink) {
  WriteResult out;
  out.format = fd.name();
  const uint64_t start = sink.Position();
  EmitTagged(sink, "VCOL", ConstBytes(fd, "header"), 0);
  out.header = sink.Position() - start;
  const uint64_t separator = ConstBytes(fd, "col_separator");
  for (uint32_t c = 0; c < t.Cols(); ++c) {
    Extent e;
    e.offset = sink.Position() - start;
    const uint8_t fill = static_cast<uint8_t>('a' + c % 26);
    if constexpr (Sink::kCountOnly) {
      sink.Pad(t.ColumnBytes(c, 0, t.row_count), fill);
    } else {
      for (uint64_t r = 0; r < t.row_count; ++r) {
        if (t.IsVarlen(c)) sink.Pad(4, 0x02);
        sink.Pad(t.ValueLength(r, c), fill);
      }
    }
    sink.Pad(separator, 0xff);
    e.length = sink.Position() - start - e.offset;
    out.columns.push_back(e);
  }
  out.body = sink.Position() - start - out.header;
  sink.Pad(ConstBytes(fd, "footer"), 0);
  out.footer = ConstBytes(fd, "footer");
  out.stream_length = sink.Position() - start;
  return out;
}

}  // namespace detail

template <class Sink>
WriteResult EmitReferenceFile(const SyntheticTable& table, const FormatDescriptor& fd,
                              Sink& sink) {
  table.Validate();
  if (fd.name() == "seqfile") return detail::EmitSeqFile(table, fd, sink);
  if (fd.name() == "avro") return detail::EmitAvro(table, fd, sink);
  if (fd.name() == "parquet") return detail::EmitParquet(table, fd, sink);
  if (fd.name() == "vertical") return detail::EmitVertical(table, fd, sink);
  throw Error(ErrorCode::kUnsupportedFormat, "no reference writer for '" + fd.name() + "'");
}

inline WriteResult WriteReferenceFile(const SyntheticTable& table, const FormatDescriptor& fd) {
  CountingSink sink;
  return EmitReferenceFile(table, fd, sink);
}

inline WriteResult DumpReferenceFile(const SyntheticTable& table, const FormatDescriptor& fd,
                                     std::ostream& out) {
  StreamSink sink(out);
  return EmitReferenceFile(table, fd, sink);
}

}  // namespace fmtsel
