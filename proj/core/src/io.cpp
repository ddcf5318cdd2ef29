#include "sclrom/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "sclrom/cyclic.hpp"

namespace sclrom {

namespace {

constexpr std::size_t kHeaderBytes = 32;
constexpr std::uint64_t kRealFlag = 1;
// Guards allocations driven by corrupt headers (2^40 bytes).
constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 40;

void put_u64(std::ostream& out, std::uint64_t value) {
  std::array<char, 8> bytes{};
  for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(const unsigned char* bytes) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < 8; ++i) value |= std::uint64_t{bytes[i]} << (8 * i);
  return value;
}

void put_f64(std::ostream& out, double value) { put_u64(out, std::bit_cast<std::uint64_t>(value)); }

std::uint64_t payload_bytes(std::uint64_t n, std::uint64_t m, bool real) {
  const std::uint64_t per = real ? 8 : 16;
  if (n != 0 && m > kMaxPayloadBytes / per / n)
    throw Error(ErrorCode::DimensionMismatch,
                "declared size " + std::to_string(n) + "x" + std::to_string(m) + " is implausible");
  return n * m * per;
}

std::string shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

std::uint64_t parse_count(std::string_view text, std::size_t line, std::size_t column) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, column, "expected an unsigned integer, got '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_complex(Complex z) {
  std::string out = shortest(z.real());
  if (std::bit_cast<std::uint64_t>(z.imag()) == 0) return out;
  out += std::signbit(z.imag()) ? '-' : '+';
  out += shortest(std::abs(z.imag()));
  out += 'i';
  return out;
}

Complex parse_complex(std::string_view text, std::size_t line, std::size_t column) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double re = 0.0;
  auto res = std::from_chars(begin, end, re);
  if (res.ec != std::errc() || text.empty())
    throw ParseError(line, column, "bad real part in '" + std::string(text) + "'");
  const char* p = res.ptr;
  if (p == end) return {re, 0.0};

  const char sign = *p++;
  if ((sign != '+' && sign != '-') || p == end || *p == '+' || *p == '-')
    throw ParseError(line, column, "expected '+' or '-' then an imaginary part in '" +
                                       std::string(text) + "'");
  double im = 0.0;
  res = std::from_chars(p, end, im);
  if (res.ec != std::errc() || res.ptr + 1 != end || *res.ptr != 'i')
    throw ParseError(line, column, "imaginary part must end in 'i' in '" + std::string(text) + "'");
  return {re, sign == '-' ? -im : im};
}

void write_snapshots_binary(const SnapshotHistory& h, std::ostream& out) {
  const bool real = h.is_real();
  out.write(kSnapshotMagic.data(), static_cast<std::streamsize>(kSnapshotMagic.size()));
  put_u64(out, static_cast<std::uint64_t>(h.n()));
  put_u64(out, static_cast<std::uint64_t>(h.m()));
  put_u64(out, real ? kRealFlag : 0);
  const Matrix& data = h.data();
  for (Index j = 0; j < h.m(); ++j) {
    for (Index i = 0; i < h.n(); ++i) {
      put_f64(out, data(i, j).real());
      if (!real) put_f64(out, data(i, j).imag());
    }
  }
}

SnapshotHistory read_snapshots_binary(std::istream& in) {
  std::array<unsigned char, kHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), kHeaderBytes);
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got < kSnapshotMagic.size() ||
      std::memcmp(header.data(), kSnapshotMagic.data(), kSnapshotMagic.size()) != 0)
    throw Error(ErrorCode::BadMagic, "snapshot payload does not start with SCLROM01");
  if (got < kHeaderBytes)
    throw Error(ErrorCode::DimensionMismatch, "header truncated: expected " +
                                                  std::to_string(kHeaderBytes) + " bytes, found " +
                                                  std::to_string(got));

  const std::uint64_t n = get_u64(header.data() + 8);
  const std::uint64_t m = get_u64(header.data() + 16);
  const std::uint64_t flags = get_u64(header.data() + 24);
  const bool real = (flags & kRealFlag) != 0;
  const std::uint64_t expected = payload_bytes(n, m, real);
  if (n == 0 || m == 0)
    throw Error(ErrorCode::DimensionMismatch, "snapshot payload declares an empty matrix");

  std::vector<unsigned char> payload(expected);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(expected));
  const auto found = static_cast<std::uint64_t>(in.gcount());
  if (found != expected)
    throw Error(ErrorCode::DimensionMismatch, "payload truncated: expected " +
                                                  std::to_string(expected) + " bytes, found " +
                                                  std::to_string(found));

  Matrix data(static_cast<Index>(n), static_cast<Index>(m));
  const unsigned char* p = payload.data();
  for (Index j = 0; j < data.cols(); ++j) {
    for (Index i = 0; i < data.rows(); ++i) {
      const double re = std::bit_cast<double>(get_u64(p));
      p += 8;
      double im = 0.0;
      if (!real) {
        im = std::bit_cast<double>(get_u64(p));
        p += 8;
      }
      data(i, j) = Complex(re, im);
    }
  }
  return SnapshotHistory(std::move(data));
}

void write_snapshots_csv(const SnapshotHistory& h, std::ostream& out) {
  out << h.n() << ',' << h.m() << '\n';
  for (Index i = 0; i < h.n(); ++i) {
    for (Index j = 0; j < h.m(); ++j) {
      if (j > 0) out << ',';
      out << format_complex(h.data()(i, j));
    }
    out << '\n';
  }
}

SnapshotHistory read_snapshots_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, 1, "empty file");
  strip_cr(line);
  const auto dims = split_commas(line);
  if (dims.size() != 2) throw ParseError(1, 1, "header must be 'n,m'");
  const std::uint64_t n = parse_count(dims[0], 1, 1);
  const std::uint64_t m = parse_count(dims[1], 1, 2);
  if (n == 0 || m == 0) throw Error(ErrorCode::DimensionMismatch, "CSV declares an empty matrix");
  payload_bytes(n, m, false);

  Matrix data(static_cast<Index>(n), static_cast<Index>(m));
  std::uint64_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (row >= n)
      throw Error(ErrorCode::DimensionMismatch,
                  "declared " + std::to_string(n) + " rows, found more (line " +
                      std::to_string(line_no) + ")");
    const auto fields = split_commas(line);
    if (fields.size() != m)
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": declared " + std::to_string(m) +
                      " columns, found " + std::to_string(fields.size()));
    for (std::size_t j = 0; j < fields.size(); ++j)
      data(static_cast<Index>(row), static_cast<Index>(j)) = parse_complex(fields[j], line_no, j + 1);
    ++row;
  }
  if (row != n)
    throw Error(ErrorCode::DimensionMismatch,
                "declared " + std::to_string(n) + " rows, found " + std::to_string(row));
  return SnapshotHistory(std::move(data));
}

void write_snapshots(const SnapshotHistory& h, const std::filesystem::path& path,
                     SnapshotFormat format) {
  std::ofstream out = open_output(path);
  if (format == SnapshotFormat::binary) {
    write_snapshots_binary(h, out);
  } else {
    write_snapshots_csv(h, out);
  }
  finish_output(out, path);
}

SnapshotHistory read_snapshots(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const std::string_view prefix(head.data(), static_cast<std::size_t>(in.gcount()));
  in.clear();
  in.seekg(0);

  if (prefix == kSnapshotMagic) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (!ec && size >= kHeaderBytes) {
      // Check the declared payload against the file size before allocating.
      std::array<unsigned char, kHeaderBytes> header{};
      in.read(reinterpret_cast<char*>(header.data()), kHeaderBytes);
      in.seekg(0);
      const bool real = (get_u64(header.data() + 24) & kRealFlag) != 0;
      const std::uint64_t expected =
          payload_bytes(get_u64(header.data() + 8), get_u64(header.data() + 16), real);
      if (size - kHeaderBytes != expected)
        throw Error(ErrorCode::DimensionMismatch,
                    "payload size mismatch: expected " + std::to_string(expected) +
                        " bytes, found " + std::to_string(size - kHeaderBytes));
    }
    return read_snapshots_binary(in);
  }
  if (prefix.substr(0, 6) == kSnapshotMagic.substr(0, 6))
    throw Error(ErrorCode::BadMagic, "unsupported snapshot format '" + std::string(prefix) + "'");
  return read_snapshots_csv(in);
}

// ---------------------------------------------------------------------------
// Model files

namespace {

constexpr std::array<std::string_view, 10> kManifestKeys = {
    "format", "version", "n", "m", "T", "kappa", "rho",
    "epsilon_achieved", "epsilon_target", "payloads"};
constexpr std::string_view kModelFormat = "sclrom-model";
constexpr std::string_view kPayloadList = "V Vhat coeffs";

double parse_real(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, 1, "expected a real number, got '" + std::string(text) + "'");
  return value;
}

Complex parse_pair(std::string_view text, std::size_t line) {
  const std::size_t space = text.find(' ');
  if (space == std::string_view::npos) throw ParseError(line, 1, "expected '<re> <im>'");
  return {parse_real(text.substr(0, space), line), parse_real(text.substr(space + 1), line)};
}

void invariant(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvariantViolation, what);
}

// Rebuilds the OHF from stored factors and checks every invariant the
// builder guarantees.
OhfFactorization validated_ohf(Matrix V, Matrix Vhat, Complex kappa, Complex rho) {
  const Index n = V.rows();
  const Index m = V.cols();
  const double tol = 1e-9;
  invariant(V.allFinite() && Vhat.allFinite(), "non-finite factor entries");
  invariant(kappa.real() > 0.0 && std::abs(kappa.imag()) <= 1e-10 * kappa.real(),
            "kappa must be real and positive");
  invariant(rho.real() > 0.0 && std::abs(rho.imag()) <= 1e-10 * rho.real(),
            "rho must be real and positive");
  invariant(n >= 2 * m, "stored factors need n >= 2m");
  const Matrix eye = Matrix::Identity(m, m);
  invariant((V.adjoint() * V - eye).norm() <= tol * static_cast<double>(m),
            "V columns are not orthonormal");
  invariant((Vhat.adjoint() * Vhat - eye).norm() <= tol * static_cast<double>(m),
            "Vhat columns are not orthonormal");

  // V* Vhat = diag(s / s_1) W with W unitary, so row norms give s / s_1.
  const RealVector ratio = (V.adjoint() * Vhat).rowwise().norm();
  invariant(std::abs(ratio(0) - 1.0) <= tol, "leading singular ratio is not 1");
  for (Index j = 1; j < m; ++j)
    invariant(ratio(j) > 0.0 && ratio(j) <= ratio(j - 1) + tol, "singular values not ordered");
  RealVector singular = kappa.real() * ratio;
  singular(0) = kappa.real();

  OhfFactorization ohf;
  try {
    ohf = assemble_ohf(std::move(V), std::move(Vhat), kappa, rho, std::move(singular));
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("cannot rebuild shift factor: ") + e.what());
  }

  const Vector v1 = ohf.anchor();
  const double rho_expected = v1.squaredNorm() / kappa.real();
  invariant(std::abs(rho.real() - rho_expected) <= 1e-10 * rho.real(),
            "rho disagrees with v_1* v_1 / kappa");
  const SnapshotHistory recovered(ohf.kappa * (ohf.K * ohf.Vhat));
  const OhfReport report =
      verify_ohf(ohf, recovered, tol * std::max(1.0, recovered.max_column_norm()));
  invariant(report.pass, "OHF cyclic constraints fail on reload");
  return ohf;
}

}  // namespace

void write_model(const SclRomModel& model, std::ostream& out) {
  out << "format: " << kModelFormat << '\n';
  out << "version: " << kModelFormatVersion << '\n';
  out << "n: " << model.n() << '\n';
  out << "m: " << model.m() << '\n';
  out << "T: " << model.period << '\n';
  out << "kappa: " << shortest(model.ohf.kappa.real()) << ' ' << shortest(model.ohf.kappa.imag()) << '\n';
  out << "rho: " << shortest(model.ohf.rho.real()) << ' ' << shortest(model.ohf.rho.imag()) << '\n';
  out << "epsilon_achieved: " << shortest(model.epsilon_achieved) << '\n';
  out << "epsilon_target: " << shortest(model.epsilon_target) << '\n';
  out << "payloads: " << kPayloadList << '\n';
  write_snapshots_binary(SnapshotHistory(model.ohf.V), out);
  write_snapshots_binary(SnapshotHistory(model.ohf.Vhat), out);
  write_snapshots_binary(SnapshotHistory(model.coeffs), out);
}

SclRomModel read_model(std::istream& in) {
  std::array<std::string, 10> values;
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(k + 1, 1, "manifest ends early");
    strip_cr(line);
    const std::size_t colon = line.find(": ");
    const std::string_view key = colon == std::string::npos ? std::string_view(line)
                                                            : std::string_view(line).substr(0, colon);
    if (key != kManifestKeys[k]) {
      if (k == 0) throw Error(ErrorCode::BadMagic, "not a model file (missing 'format:' line)");
      throw ParseError(k + 1, 1, "expected key '" + std::string(kManifestKeys[k]) + "', got '" +
                                     std::string(key) + "'");
    }
    values[k] = line.substr(colon + 2);
    if (k == 0 && values[0] != kModelFormat)
      throw Error(ErrorCode::BadMagic, "unknown model format '" + values[0] + "'");
    if (k == 1 && values[1] != std::to_string(kModelFormatVersion))
      throw Error(ErrorCode::VersionUnsupported, "model format version " + values[1]);
  }

  const auto n = static_cast<Index>(parse_count(values[2], 3, 1));
  const auto m = static_cast<Index>(parse_count(values[3], 4, 1));
  const auto period = static_cast<Index>(parse_count(values[4], 5, 1));
  const Complex kappa = parse_pair(values[5], 6);
  const Complex rho = parse_pair(values[6], 7);
  const double eps_achieved = parse_real(values[7], 8);
  const double eps_target = parse_real(values[8], 9);
  if (values[9] != kPayloadList) throw ParseError(10, 1, "unexpected payload list");

  SnapshotHistory V = read_snapshots_binary(in);
  SnapshotHistory Vhat = read_snapshots_binary(in);
  SnapshotHistory coeffs = read_snapshots_binary(in);
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::DimensionMismatch, "trailing bytes after model payloads");

  invariant(n >= 1 && m >= 1 && period >= 1, "manifest dimensions must be positive");
  invariant(V.n() == n && V.m() == m, "V payload is not n x m");
  invariant(Vhat.n() == n && Vhat.m() == m, "Vhat payload is not n x m");
  invariant(coeffs.n() == m && coeffs.m() == period, "coeffs payload is not m x T");
  invariant(coeffs.data().allFinite(), "non-finite coefficients");
  invariant(std::isfinite(eps_achieved) && eps_achieved >= 0.0, "epsilon_achieved invalid");

  SclRomModel model;
  model.ohf = validated_ohf(V.data(), Vhat.data(), kappa, rho);
  model.coeffs = coeffs.data();
  model.period = period;
  model.epsilon_achieved = eps_achieved;
  model.epsilon_target = eps_target;

  // Steps t < m have targets kappa K vhat_{t+1} recoverable from the OHF.
  const Index checked = std::min(m, period);
  double recomputed = 0.0;
  double scale = 1.0;
  for (Index t = 0; t < checked; ++t) {
    const Vector target = model.ohf.kappa * (model.ohf.K * model.ohf.Vhat.col(t));
    scale = std::max(scale, target.norm());
    recomputed = std::max(recomputed, (predict(model, static_cast<std::uint64_t>(t)) - target).norm());
  }
  const double slack = 1e-12 * scale;
  if (period <= m) {
    invariant(std::abs(recomputed - eps_achieved) <= slack,
              "epsilon_achieved does not match the recomputed training residual");
  } else {
    invariant(recomputed <= eps_achieved + slack,
              "epsilon_achieved is below the recomputed training residual");
  }
  return model;
}

void write_model(const SclRomModel& model, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_model(model, out);
  finish_output(out, path);
}

SclRomModel read_model(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_model(in);
}

}  // namespace sclrom
