#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sclrom/model.hpp"
#include "sclrom/ohf.hpp"

namespace sclrom {

/// Binary snapshot layout (all integers and floats little-endian):
///
///   bytes 0..7    magic "SCLROM01"
///   bytes 8..15   n      (u64)
///   bytes 16..23  m      (u64)
///   bytes 24..31  flags  (u64; bit 0 set = purely real payload)
///   payload       column-major entries, each re then im as binary64
///                 (re only when bit 0 is set)
///
/// CSV layout: first line "n,m", then n lines of m comma-separated entries.
/// An entry is `a`, `a+bi` or `a-bi` with a, b printed as shortest
/// round-trip decimals.
enum class SnapshotFormat { binary, csv };

inline constexpr std::string_view kSnapshotMagic = "SCLROM01";
inline constexpr int kModelFormatVersion = 1;

void write_snapshots(const SnapshotHistory& h, const std::filesystem::path& path,
                     SnapshotFormat format);
/// Detects the format from the magic bytes. Throws IoFailure, BadMagic,
/// ParseError or DimensionMismatch.
SnapshotHistory read_snapshots(const std::filesystem::path& path);

void write_snapshots_binary(const SnapshotHistory& h, std::ostream& out);
SnapshotHistory read_snapshots_binary(std::istream& in);
void write_snapshots_csv(const SnapshotHistory& h, std::ostream& out);
SnapshotHistory read_snapshots_csv(std::istream& in);

/// Shortest round-trip rendering of a complex entry (`a`, `a+bi`, `a-bi`).
std::string format_complex(Complex z);
/// Strict inverse of format_complex; throws ParseError at (line, column).
Complex parse_complex(std::string_view text, std::size_t line, std::size_t column);

/// Model file: a UTF-8 manifest of `key: value` lines in a fixed order,
///
///   format: sclrom-model
///   version: 1
///   n, m, T
///   kappa: <re> <im>
///   rho: <re> <im>
///   epsilon_achieved, epsilon_target
///   payloads: V Vhat coeffs
///
/// followed by the V (n x m), Vhat (n x m) and coeffs (m x T) arrays, each in
/// the binary snapshot encoding. K, T and U_csf are recomputed on load.
void write_model(const SclRomModel& model, const std::filesystem::path& path);
/// Throws VersionUnsupported, or InvariantViolation when the loaded factors
/// fail validation.
SclRomModel read_model(const std::filesystem::path& path);

void write_model(const SclRomModel& model, std::ostream& out);
SclRomModel read_model(std::istream& in);

}  // namespace sclrom
